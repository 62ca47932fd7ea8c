//! Seeded random instances for stress tests and corpora.
//!
//! Everything here is deterministic in the seed (ChaCha8 throughout), so test
//! failures reproduce exactly and repeated runs over the same seed range form
//! a fixed corpus. The samplers make no attempt at rationalizability — they
//! draw arbitrary choice behavior, which is the point: downstream tests feed
//! them to the deciders and check outcomes against the models' laws.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::choice::{Alternative, ChoiceProblem, Observation};
use crate::levelk::TargetOrder;

/// Draws a random choice problem: a universe of up to `max_alternatives`
/// single-letter alternatives and up to `max_menus` distinct menus, each with
/// an arbitrary chosen member.
///
/// Menus may have any size from one up; duplicate draws are discarded, so the
/// problem can end up with fewer menus than the cap when the universe is
/// small.
///
/// # Panics
///
/// Panics if `max_alternatives` is zero or exceeds 26.
pub fn random_problem(seed: u64, max_alternatives: usize, max_menus: usize) -> ChoiceProblem {
    assert!(
        (1..=26).contains(&max_alternatives),
        "universe is drawn from single letters"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_alts = rng.gen_range(1..=max_alternatives);
    let universe: Vec<Alternative> = (0..n_alts)
        .map(|i| {
            Alternative::new(char::from(b'a' + i as u8).to_string()).expect("letters are valid")
        })
        .collect();

    let target_menus = rng.gen_range(0..=max_menus);
    let mut menus: BTreeSet<BTreeSet<Alternative>> = BTreeSet::new();
    // Small universes cannot host many distinct menus; give up quietly once
    // the draw stops finding new ones.
    let mut misses = 0;
    while menus.len() < target_menus && misses < 64 {
        let size = rng.gen_range(1..=n_alts);
        let mut menu = BTreeSet::new();
        while menu.len() < size {
            menu.insert(universe[rng.gen_range(0..n_alts)].clone());
        }
        if !menus.insert(menu) {
            misses += 1;
        }
    }

    let observations: Vec<Observation> = menus
        .into_iter()
        .map(|menu| {
            let members: Vec<&Alternative> = menu.iter().collect();
            let choice = members[rng.gen_range(0..members.len())].clone();
            Observation::new(menu.iter().cloned(), choice).expect("choice is on its menu")
        })
        .collect();
    ChoiceProblem::new(universe, observations).expect("menus are distinct and covered")
}

/// Draws a uniformly random target order over the problem's universe.
pub fn random_target_order(seed: u64, problem: &ChoiceProblem) -> TargetOrder {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ranking: Vec<Alternative> = problem.alternatives().iter().cloned().collect();
    ranking.shuffle(&mut rng);
    TargetOrder::new(ranking, problem).expect("a permutation of the universe always covers it")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problems_are_deterministic_in_the_seed() {
        for seed in 0..50 {
            let a = random_problem(seed, 6, 10);
            let b = random_problem(seed, 6, 10);
            assert_eq!(a, b, "seed {seed}");
            assert!(a.alternative_count() <= 6);
            assert!(a.observation_count() <= 10);
            assert!(a.alternative_count() >= 1);
        }
    }

    #[test]
    fn different_seeds_vary_the_shape() {
        let shapes: BTreeSet<(usize, usize)> = (0..40)
            .map(|seed| {
                let p = random_problem(seed, 6, 10);
                (p.alternative_count(), p.observation_count())
            })
            .collect();
        assert!(shapes.len() > 5, "sampler should explore shapes: {shapes:?}");
    }

    #[test]
    fn target_orders_are_deterministic_permutations() {
        let p = random_problem(7, 6, 10);
        let a = random_target_order(11, &p);
        let b = random_target_order(11, &p);
        assert_eq!(a.ranking(), b.ranking());
        let ranked: BTreeSet<&Alternative> = a.ranking().iter().collect();
        let universe: BTreeSet<&Alternative> = p.alternatives().iter().collect();
        assert_eq!(ranked, universe);
    }

    #[test]
    fn target_orders_vary_with_the_seed() {
        let p = random_problem(3, 6, 10);
        if p.alternative_count() < 3 {
            // Not enough room for distinct permutations to be likely; the
            // determinism test above already covers this problem.
            return;
        }
        let distinct: BTreeSet<Vec<String>> = (0..20)
            .map(|seed| {
                random_target_order(seed, &p)
                    .ranking()
                    .iter()
                    .map(|a| a.id().to_string())
                    .collect()
            })
            .collect();
        assert!(distinct.len() > 1, "shuffle should move things");
    }
}
