//! Structural laws of the four models, exercised over seeded random corpora.
//!
//! Each test sweeps a deterministic family of instances from the public
//! samplers and checks the invariants the deciders are supposed to uphold:
//! universal rationalizability for the monotone and level-k models, the
//! cardinality discipline of their constraint graphs, the equivalence of the
//! level-1 graph with the monotone one, and the necessary-condition
//! relationships of the additive tester. The heavyweight end-to-end sweeps
//! live in the CLI crate's acceptance suite; these corpora are sized to run
//! in a few seconds.

use std::collections::BTreeSet;

use revpriv::additive::{
    additive_rationalizable, build_inequality_system, build_ry, ry_acyclic_all, AdditiveOutcome,
    RyOutcome,
};
use revpriv::levelk::{
    build_levelk_graph, rationalize_levelk, verify_levelk_witness, LevelCap, LevelKEdgeKind,
    LevelKVertex,
};
use revpriv::monotone::{
    build_monotone_graph, rationalize_monotone, verify_monotone_witness, EdgeKind, PrivacyVertex,
};
use revpriv::sampling::{random_problem, random_target_order};
use revpriv::{classic_rationalizable, revealed_relation, Alternative, ClassicOutcome};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[test]
fn every_problem_is_monotone_rationalizable_with_a_verifiable_witness() {
    for seed in 0..300 {
        let p = random_problem(seed, 6, 10);
        let witness = rationalize_monotone(&p)
            .unwrap_or_else(|e| panic!("seed {seed}: monotone engine failed: {e}"));
        assert!(
            verify_monotone_witness(&p, &witness),
            "seed {seed}: witness rejected by its own verifier"
        );
    }
}

#[test]
fn monotone_graphs_respect_the_cardinality_discipline() {
    for seed in 0..300 {
        let p = random_problem(seed, 6, 10);
        let g = build_monotone_graph(&p);
        for (from, to, kind) in g.edges_with_tags() {
            match kind {
                EdgeKind::Monotone => {
                    assert_eq!(from.alt(), to.alt(), "seed {seed}");
                    assert!(
                        from.revealed().len() < to.revealed().len(),
                        "seed {seed}: monotone edge must shrink strictly"
                    );
                }
                EdgeKind::Rationalizing => {
                    assert_ne!(from, to, "seed {seed}");
                    assert_eq!(
                        from.revealed().len(),
                        to.revealed().len(),
                        "seed {seed}: rationalizing edge joins same-menu objects"
                    );
                }
            }
        }
    }
}

#[test]
fn rationalizing_edges_never_chain() {
    // A vertex with an incoming rationalizing edge was rejected on its menu;
    // one with an outgoing rationalizing edge was chosen there. Both at once
    // would contradict single-valued choice.
    for seed in 0..300 {
        let p = random_problem(seed, 6, 10);
        let g = build_monotone_graph(&p);
        let rationalizing_heads: BTreeSet<&PrivacyVertex> = g
            .edges_with_tags()
            .filter(|(_, _, kind)| *kind == EdgeKind::Rationalizing)
            .map(|(_, to, _)| to)
            .collect();
        for (from, _, kind) in g.edges_with_tags() {
            if kind == EdgeKind::Rationalizing {
                assert!(
                    !rationalizing_heads.contains(from),
                    "seed {seed}: rationalizing edges chained through {from}"
                );
            }
        }
    }
}

#[test]
fn level_one_graphs_mirror_the_monotone_construction() {
    // A depth-1 object (x, T0(A,x)) carries exactly the revealed pairs of the
    // monotone model's (x, A_x); the graphs agree edge for edge once the
    // purely separable tournament (equal revelations, distinct alternatives)
    // is set aside.
    let cap = LevelCap::default();
    for seed in 0..150 {
        let p = random_problem(seed, 6, 10);
        let target = random_target_order(seed.wrapping_add(991), &p);
        let monotone = build_monotone_graph(&p);
        let levelk = build_levelk_graph(&p, 1, &target, cap).expect("k = 1 is within any cap");

        assert_eq!(monotone.vertex_count(), levelk.vertex_count(), "seed {seed}");

        let project = |v: &LevelKVertex| -> (Alternative, BTreeSet<(Alternative, Alternative)>) {
            let pairs = v
                .revealed()
                .iter()
                .map(|(a, b)| (a.alt().clone(), b.alt().clone()))
                .collect();
            (v.alt().clone(), pairs)
        };

        let mut shared = 0usize;
        for (from, to, kind) in levelk.edges_with_tags() {
            if kind == LevelKEdgeKind::Separable {
                assert_ne!(from.alt(), to.alt(), "seed {seed}");
                assert_eq!(from.revealed(), to.revealed(), "seed {seed}");
                assert!(
                    target.prefers(from.alt(), to.alt()),
                    "seed {seed}: separable edge against the target"
                );
                continue;
            }
            let (from_alt, from_pairs) = project(from);
            let (to_alt, to_pairs) = project(to);
            let mirrored = monotone
                .edges_with_tags()
                .find(|(mf, mt, _)| {
                    *mf.alt() == from_alt
                        && *mt.alt() == to_alt
                        && mf.revealed().pairs().cloned().collect::<BTreeSet<_>>() == from_pairs
                        && mt.revealed().pairs().cloned().collect::<BTreeSet<_>>() == to_pairs
                })
                .map(|(_, _, mk)| mk);
            let expected = match kind {
                LevelKEdgeKind::Monotone => EdgeKind::Monotone,
                LevelKEdgeKind::Rationalizing => EdgeKind::Rationalizing,
                LevelKEdgeKind::Separable => unreachable!("handled above"),
            };
            assert_eq!(mirrored, Some(expected), "seed {seed}: unmatched {kind:?} edge");
            shared += 1;
        }
        assert_eq!(shared, monotone.edge_count(), "seed {seed}: edge sets must coincide");
    }
}

#[test]
fn levelk_graphs_respect_the_cardinality_discipline() {
    let cap = LevelCap::default();
    for seed in 0..100 {
        let p = random_problem(seed, 5, 8);
        let target = random_target_order(seed.wrapping_add(17), &p);
        for k in [1u32, 2] {
            let g = build_levelk_graph(&p, k, &target, cap).expect("within cap");
            for (from, to, kind) in g.edges_with_tags() {
                match kind {
                    LevelKEdgeKind::Monotone => {
                        assert_eq!(from.alt(), to.alt(), "seed {seed} k {k}");
                        assert!(from.revealed().len() < to.revealed().len(), "seed {seed} k {k}");
                    }
                    LevelKEdgeKind::Separable => {
                        assert_eq!(from.revealed(), to.revealed(), "seed {seed} k {k}");
                    }
                    LevelKEdgeKind::Rationalizing => {
                        assert_eq!(
                            from.revealed().len(),
                            to.revealed().len(),
                            "seed {seed} k {k}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn levelk_witnesses_verify_and_respect_their_targets() {
    let cap = LevelCap::default();
    for seed in 0..200 {
        let p = random_problem(seed, 6, 10);
        let target = random_target_order(seed.wrapping_add(5000), &p);
        let k = 1 + (seed % 2) as u32;
        let witness = rationalize_levelk(&p, k, &target, cap)
            .unwrap_or_else(|e| panic!("seed {seed}: level-{k} engine failed: {e}"));
        assert!(
            verify_levelk_witness(&p, k, &target, &witness),
            "seed {seed}: level-{k} witness rejected"
        );
        // Equal-revelation pairs must agree with the target, ranked as the
        // witness ranks them.
        let ranked = witness.order().ranking();
        for (i, a) in ranked.iter().enumerate() {
            for b in &ranked[i + 1..] {
                if a.revealed() == b.revealed() && a.alt() != b.alt() {
                    assert!(
                        target.prefers(a.alt(), b.alt()),
                        "seed {seed}: witness ranks {a} over {b} against the target"
                    );
                }
            }
        }
    }
}

#[test]
fn classic_outcomes_are_internally_consistent() {
    let mut rationalizable = 0usize;
    let mut refuted = 0usize;
    for seed in 0..300 {
        let p = random_problem(seed, 6, 10);
        let relation = revealed_relation(&p);
        match classic_rationalizable(&p) {
            ClassicOutcome::Rationalizable { witness } => {
                rationalizable += 1;
                for (a, b) in relation.pairs() {
                    assert!(
                        witness.prefers(a, b),
                        "seed {seed}: witness contradicts revealed pair ({a},{b})"
                    );
                }
                for obs in p.observations() {
                    let best = obs
                        .menu()
                        .iter()
                        .min_by_key(|x| witness.rank_of(x).expect("universe is ranked"))
                        .expect("menus are nonempty");
                    assert_eq!(best, obs.choice(), "seed {seed}: witness fails to replay");
                }
            }
            ClassicOutcome::Refuted { cycle } => {
                refuted += 1;
                assert!(cycle.len() >= 2, "seed {seed}");
                assert_eq!(cycle.first(), cycle.last(), "seed {seed}: cycle must close");
                for pair in cycle.windows(2) {
                    assert!(
                        relation.contains(&pair[0], &pair[1]),
                        "seed {seed}: cycle step ({},{}) is not revealed",
                        pair[0],
                        pair[1]
                    );
                }
            }
        }
    }
    // The sampler draws arbitrary choices, so both verdicts must occur.
    assert!(rationalizable > 0, "corpus never rationalizable — sampler too adversarial");
    assert!(refuted > 0, "corpus never refuted — sampler too tame");
}

/// Every menu of size two or more over four alternatives, with choices drawn
/// at random. Sparse data almost never traps the additive model — the
/// refutation pattern needs a menu and its one-element extension observed
/// together — so the corpus for the infeasible branch must be dense.
fn dense_problem(seed: u64) -> revpriv::ChoiceProblem {
    use rand::{Rng, SeedableRng};
    let universe: Vec<Alternative> = ["w", "x", "y", "z"]
        .iter()
        .map(|s| Alternative::new(*s).expect("valid"))
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let observations: Vec<revpriv::Observation> = (1u8..16)
        .filter(|mask| mask.count_ones() >= 2)
        .map(|mask| {
            let menu: Vec<Alternative> = universe
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| a.clone())
                .collect();
            let choice = menu[rng.gen_range(0..menu.len())].clone();
            revpriv::Observation::new(menu, choice).expect("choice is on its menu")
        })
        .collect();
    revpriv::ChoiceProblem::new(universe, observations).expect("menus are distinct")
}

#[test]
fn additive_verdicts_come_with_checkable_evidence() {
    let mut feasible = 0usize;
    let mut infeasible = 0usize;
    let corpus: Vec<revpriv::ChoiceProblem> = (0..100)
        .map(|seed| random_problem(seed, 5, 8))
        .chain((0..60).map(dense_problem))
        .collect();
    for (seed, p) in corpus.iter().enumerate() {
        let system = build_inequality_system(p);
        match additive_rationalizable(p) {
            AdditiveOutcome::Rationalizable { model } => {
                feasible += 1;
                // The witness satisfies every strict inequality...
                for value in system.evaluate(&model) {
                    assert!(value.is_positive(), "seed {seed}: slack row in a witness");
                }
                // ...which forces the necessary condition to hold.
                assert_eq!(
                    ry_acyclic_all(p),
                    RyOutcome::Acyclic,
                    "seed {seed}: witnessed data must pass the swing test"
                );
                for y in p.alternatives() {
                    for (x, z) in build_ry(p, y).pairs() {
                        assert!(
                            model.penalty(z, y) > model.penalty(x, y),
                            "seed {seed}: swing law broken at ({x},{z}) over {y}"
                        );
                    }
                }
            }
            AdditiveOutcome::Infeasible { certificate } => {
                infeasible += 1;
                let m = &certificate.farkas_multipliers;
                assert_eq!(m.len(), system.row_count(), "seed {seed}");
                assert!(m.iter().all(|v| !v.is_negative()), "seed {seed}");
                assert!(
                    m.iter().fold(BigRational::zero(), |acc, v| acc + v).is_positive(),
                    "seed {seed}: certificate must weight some row"
                );
                for j in 0..system.column_count() {
                    let priced = system
                        .rows()
                        .iter()
                        .zip(m)
                        .filter(|(row, _)| row.coefficients[j] != 0)
                        .fold(BigRational::zero(), |acc, (row, v)| {
                            if row.coefficients[j] > 0 {
                                acc + v
                            } else {
                                acc - v
                            }
                        });
                    assert!(
                        !priced.is_positive(),
                        "seed {seed}: certificate prices a column positively"
                    );
                }
            }
        }
    }
    assert!(feasible > 0, "corpus never feasible — sampler too adversarial");
    assert!(infeasible > 0, "corpus never infeasible — sampler too tame");
}

#[test]
fn classically_rationalizable_data_is_additively_rationalizable() {
    // A classical witness is the special case of zero penalties and steep
    // utilities, so the additive tester can never refuse such data.
    for seed in 0..150 {
        let p = random_problem(seed, 5, 8);
        if let ClassicOutcome::Rationalizable { .. } = classic_rationalizable(&p) {
            assert!(
                matches!(additive_rationalizable(&p), AdditiveOutcome::Rationalizable { .. }),
                "seed {seed}: additive tester refused classically consistent data"
            );
        }
    }
}
