//! Rationalizability at a fixed depth of privacy sophistication.
//!
//! The level-k model iterates the construction in [`crate::monotone`]: the
//! consumer assumes the observer is itself privacy-aware and reasons about
//! what a choice reveals *about preferences over revelations*, to a fixed
//! depth.
//!
//! * Level-0 objects are plain alternatives.
//! * A level-`k` object pairs an alternative with a set of ordered pairs of
//!   level-`(k-1)` objects — the comparisons a choice would reveal at depth
//!   `k-1`.
//!
//! Choosing `x` from menu `A` reveals, at depth `k`, the pair set
//! [`t_level`]`(k, A, x)`: the chosen level-`k` object beats the level-`k`
//! object of each rejected alternative, where those objects recursively carry
//! the depth-`(k-1)` revelation of the same menu. The constraint graph built
//! by [`build_levelk_graph`] ranks the *referenced* level-`k` objects with
//! three edge families:
//!
//! * **rationalizing** — chosen object over rejected object, per observation;
//! * **monotone** — same alternative, strictly smaller revelation wins;
//! * **separable** — equal revelation, ranked by a conjectured *target order*
//!   over the alternatives, supplied as an input.
//!
//! As with the depth-1 construction, the graph is acyclic for every valid
//! data set and every target order, so a witness always exists; `k = 1` is
//! exactly the separable model. Since every referenced object and revelation
//! is a finite nested term, the engine enforces a depth cap
//! ([`LevelCap`], default 3) to keep term sizes bounded.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::choice::{Alternative, ChoiceProblem, LoadError};
use crate::order::{LinearOrder, Relation};

/// Default depth cap for [`t_level`] and the graph builders.
pub const DEFAULT_LEVEL_CAP: u32 = 3;

/// Maximum reasoning depth the engine will expand.
///
/// Term sizes grow geometrically with depth; the cap keeps them bounded. The
/// CLI exposes it through the `REVPRIV_LEVEL_CAP` environment variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelCap(pub u32);

impl Default for LevelCap {
    fn default() -> Self {
        LevelCap(DEFAULT_LEVEL_CAP)
    }
}

/// A nested privacy object: an alternative at level 0, otherwise an
/// alternative paired with a set of ordered pairs of level-`(k-1)` objects.
///
/// Structural equality and the derived `Ord` are canonical — two objects are
/// the same term exactly when they compare equal — and [`fmt::Display`]
/// renders the canonical sorted term string used in witness serialization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LevelKVertex {
    level: u32,
    alt: Alternative,
    revealed: BTreeSet<(LevelKVertex, LevelKVertex)>,
}

impl LevelKVertex {
    /// The level-0 object of an alternative.
    pub fn base(alt: Alternative) -> Self {
        LevelKVertex { level: 0, alt, revealed: BTreeSet::new() }
    }

    /// A level-`level` object (`level >= 1`) with an explicit revelation.
    ///
    /// # Panics
    ///
    /// Panics if `level` is 0 (use [`LevelKVertex::base`]) or if a revelation
    /// member is not at level `level - 1`.
    pub fn nested(
        level: u32,
        alt: Alternative,
        revealed: BTreeSet<(LevelKVertex, LevelKVertex)>,
    ) -> Self {
        assert!(level >= 1, "nested objects start at level 1");
        for (a, b) in &revealed {
            assert!(
                a.level == level - 1 && b.level == level - 1,
                "revelation members must sit one level down"
            );
        }
        LevelKVertex { level, alt, revealed }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn alt(&self) -> &Alternative {
        &self.alt
    }

    pub fn revealed(&self) -> &BTreeSet<(LevelKVertex, LevelKVertex)> {
        &self.revealed
    }

    /// The canonical term string; same as the `Display` rendering.
    pub fn term_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LevelKVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            return write!(f, "{}", self.alt);
        }
        write!(f, "({},{{", self.alt)?;
        for (i, (a, b)) in self.revealed.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({a},{b})")?;
        }
        f.write_str("})")
    }
}

/// A conjectured strict order over the full universe of alternatives, used to
/// rank equal-revelation objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetOrder {
    order: LinearOrder<Alternative>,
}

impl TargetOrder {
    /// Wraps a ranking (best first), which must cover the universe of
    /// `problem` exactly.
    pub fn new(ranking: Vec<Alternative>, problem: &ChoiceProblem) -> Result<Self, LoadError> {
        let ranked: BTreeSet<&Alternative> = ranking.iter().collect();
        if ranked.len() != ranking.len() {
            return Err(LoadError::Validation {
                location: None,
                message: "target order repeats an alternative".to_string(),
            });
        }
        if let Some(missing) = problem.alternatives().iter().find(|a| !ranked.contains(a)) {
            return Err(LoadError::Validation {
                location: None,
                message: format!("target order does not rank '{missing}'"),
            });
        }
        if let Some(stray) = ranking.iter().find(|a| !problem.alternatives().contains(a)) {
            return Err(LoadError::Validation {
                location: None,
                message: format!("target order ranks unknown alternative '{stray}'"),
            });
        }
        Ok(TargetOrder { order: LinearOrder::from_ranking(ranking) })
    }

    /// Parses the CLI syntax `a>b>c` (best first) against a problem's
    /// universe.
    pub fn parse(text: &str, problem: &ChoiceProblem) -> Result<Self, LoadError> {
        let ranking = text
            .split('>')
            .map(Alternative::new)
            .collect::<Result<Vec<_>, _>>()?;
        TargetOrder::new(ranking, problem)
    }

    /// The canonical default: alternatives in ascending id order.
    pub fn lexicographic(problem: &ChoiceProblem) -> Self {
        TargetOrder {
            order: LinearOrder::from_ranking(problem.alternatives().iter().cloned().collect()),
        }
    }

    /// The same order upside down.
    pub fn reversed(&self) -> Self {
        let mut ranking: Vec<Alternative> = self.order.ranking().to_vec();
        ranking.reverse();
        TargetOrder { order: LinearOrder::from_ranking(ranking) }
    }

    /// The ranked alternatives, best first.
    pub fn ranking(&self) -> &[Alternative] {
        self.order.ranking()
    }

    /// True when `a` strictly outranks `b` in the conjecture.
    pub fn prefers(&self, a: &Alternative, b: &Alternative) -> bool {
        self.order.prefers(a, b)
    }
}

impl fmt::Display for TargetOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<&str> = self.order.ranking().iter().map(Alternative::id).collect();
        f.write_str(&ids.join(">"))
    }
}

/// Error surface of the level-k engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelKError {
    /// The requested depth exceeds the configured cap.
    LevelCapExceeded { requested: u32, cap: u32 },
    /// The constraint graph cycled — an implementation bug, never valid-input
    /// behaviour.
    InternalInvariantViolation { detail: String },
}

impl fmt::Display for LevelKError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelKError::LevelCapExceeded { requested, cap } => {
                write!(f, "level {requested} exceeds the configured cap {cap}")
            }
            LevelKError::InternalInvariantViolation { detail } => {
                write!(f, "internal invariant violation: {detail}")
            }
        }
    }
}

impl std::error::Error for LevelKError {}

fn check_cap(requested: u32, cap: LevelCap) -> Result<(), LevelKError> {
    if requested > cap.0 {
        return Err(LevelKError::LevelCapExceeded { requested, cap: cap.0 });
    }
    Ok(())
}

/// The revelation of choosing `x` from `menu` at depth `k`: a set of ordered
/// pairs of level-`k` objects, one pair per rejected alternative. At `k = 0`
/// the pairs are over plain alternatives.
///
/// # Panics
///
/// Panics if `x` is not a member of `menu`.
pub fn t_level(
    k: u32,
    menu: &BTreeSet<Alternative>,
    x: &Alternative,
    cap: LevelCap,
) -> Result<BTreeSet<(LevelKVertex, LevelKVertex)>, LevelKError> {
    check_cap(k, cap)?;
    assert!(menu.contains(x), "alternative '{x}' is not on the menu");
    Ok(t_level_raw(k, menu, x))
}

fn t_level_raw(
    k: u32,
    menu: &BTreeSet<Alternative>,
    x: &Alternative,
) -> BTreeSet<(LevelKVertex, LevelKVertex)> {
    if k == 0 {
        return menu
            .iter()
            .filter(|y| *y != x)
            .map(|y| (LevelKVertex::base(x.clone()), LevelKVertex::base(y.clone())))
            .collect();
    }
    menu.iter()
        .filter(|y| *y != x)
        .map(|y| (level_vertex_raw(k, menu, x), level_vertex_raw(k, menu, y)))
        .collect()
}

/// The level-`k` object an observer associates with alternative `x` on
/// `menu`: for `k = 0` the bare alternative, otherwise `x` paired with its
/// depth-`(k-1)` revelation of the same menu.
///
/// # Panics
///
/// Panics if `x` is not a member of `menu`.
pub fn level_vertex(
    k: u32,
    menu: &BTreeSet<Alternative>,
    x: &Alternative,
    cap: LevelCap,
) -> Result<LevelKVertex, LevelKError> {
    check_cap(k, cap)?;
    assert!(menu.contains(x), "alternative '{x}' is not on the menu");
    Ok(level_vertex_raw(k, menu, x))
}

fn level_vertex_raw(k: u32, menu: &BTreeSet<Alternative>, x: &Alternative) -> LevelKVertex {
    if k == 0 {
        return LevelKVertex::base(x.clone());
    }
    LevelKVertex {
        level: k,
        alt: x.clone(),
        revealed: t_level_raw(k - 1, menu, x),
    }
}

/// Why an edge is in the level-k constraint graph. The three families are
/// pairwise disjoint: they are distinguished by whether the endpoints share
/// the alternative, the revelation, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LevelKEdgeKind {
    /// Same alternative, source reveals strictly less.
    Monotone,
    /// Equal revelation, source's alternative outranks target's in the
    /// target order.
    Separable,
    /// Source's alternative was chosen over target's in some observation.
    Rationalizing,
}

/// The level-k constraint graph over referenced objects, edges tagged by
/// family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelKGraph {
    k: u32,
    graph: Relation<LevelKVertex>,
    tags: BTreeMap<(LevelKVertex, LevelKVertex), LevelKEdgeKind>,
}

impl LevelKGraph {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn graph(&self) -> &Relation<LevelKVertex> {
        &self.graph
    }

    pub fn tag(&self, from: &LevelKVertex, to: &LevelKVertex) -> Option<LevelKEdgeKind> {
        self.tags.get(&(from.clone(), to.clone())).copied()
    }

    pub fn edges_with_tags(
        &self,
    ) -> impl Iterator<Item = (&LevelKVertex, &LevelKVertex, LevelKEdgeKind)> {
        self.tags.iter().map(|((a, b), kind)| (a, b, *kind))
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }
}

/// The level-`k` objects the data set references: one per observed menu and
/// member alternative.
pub fn referenced_vertices(
    problem: &ChoiceProblem,
    k: u32,
    cap: LevelCap,
) -> Result<BTreeSet<LevelKVertex>, LevelKError> {
    check_cap(k, cap)?;
    let mut vertices = BTreeSet::new();
    for obs in problem.observations() {
        for x in obs.menu() {
            vertices.insert(level_vertex_raw(k, obs.menu(), x));
        }
    }
    Ok(vertices)
}

/// Builds the depth-`k` constraint graph (`k >= 1`) under a target order.
///
/// # Panics
///
/// Panics if `k` is 0; depth 0 is the classical test in [`crate::choice`].
pub fn build_levelk_graph(
    problem: &ChoiceProblem,
    k: u32,
    target: &TargetOrder,
    cap: LevelCap,
) -> Result<LevelKGraph, LevelKError> {
    assert!(k >= 1, "the level-k graph starts at k = 1");
    check_cap(k, cap)?;
    let vertices = referenced_vertices(problem, k, cap)?;
    let mut graph = Relation::with_vertices(vertices.iter().cloned());
    let mut tags = BTreeMap::new();

    // Rationalizing edges, one per (observation, rejected alternative).
    for obs in problem.observations() {
        let chosen = level_vertex_raw(k, obs.menu(), obs.choice());
        for y in obs.rejected() {
            let rejected = level_vertex_raw(k, obs.menu(), y);
            graph.add_edge(chosen.clone(), rejected.clone());
            tags.insert((chosen.clone(), rejected), LevelKEdgeKind::Rationalizing);
        }
    }

    // Monotone edges: same alternative, strictly smaller revelation first.
    let mut by_alt: BTreeMap<&Alternative, Vec<&LevelKVertex>> = BTreeMap::new();
    for v in &vertices {
        by_alt.entry(v.alt()).or_default().push(v);
    }
    for group in by_alt.values() {
        for small in group {
            for large in group {
                if small.revealed().len() < large.revealed().len()
                    && small.revealed().is_subset(large.revealed())
                {
                    graph.add_edge((*small).clone(), (*large).clone());
                    tags.insert(((*small).clone(), (*large).clone()), LevelKEdgeKind::Monotone);
                }
            }
        }
    }

    // Separable edges: equal revelation, full tournament following the
    // target order.
    let mut by_revelation: BTreeMap<&BTreeSet<(LevelKVertex, LevelKVertex)>, Vec<&LevelKVertex>> =
        BTreeMap::new();
    for v in &vertices {
        by_revelation.entry(v.revealed()).or_default().push(v);
    }
    for group in by_revelation.values() {
        for higher in group {
            for lower in group {
                if target.prefers(higher.alt(), lower.alt()) {
                    graph.add_edge((*higher).clone(), (*lower).clone());
                    tags.insert(
                        ((*higher).clone(), (*lower).clone()),
                        LevelKEdgeKind::Separable,
                    );
                }
            }
        }
    }

    Ok(LevelKGraph { k, graph, tags })
}

/// A witness for level-k rationalizability: a strict linear order over the
/// referenced level-`k` objects satisfying all three edge families.
///
/// As in the monotone module, the order covers the referenced objects only;
/// it extends to the full object space by linear extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelKWitness {
    k: u32,
    order: LinearOrder<LevelKVertex>,
}

impl LevelKWitness {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> &LinearOrder<LevelKVertex> {
        &self.order
    }

    /// Serialized form: canonical term strings with their ranks.
    pub fn to_entries(&self) -> Vec<(String, usize)> {
        self.order
            .ranking()
            .iter()
            .enumerate()
            .map(|(rank, v)| (v.term_string(), rank))
            .collect()
    }

    /// Reconstructs a witness from serialized entries by recomputing the
    /// referenced objects of `problem` at depth `k` and matching term
    /// strings; no term parsing is involved. Fails on unknown terms or on
    /// ranks that are not a permutation of `0..len`.
    pub fn from_entries(
        entries: Vec<(String, usize)>,
        problem: &ChoiceProblem,
        k: u32,
        cap: LevelCap,
    ) -> Result<Self, LoadError> {
        let vertices = referenced_vertices(problem, k, cap)
            .map_err(|e| LoadError::Validation { location: None, message: e.to_string() })?;
        let by_term: BTreeMap<String, &LevelKVertex> =
            vertices.iter().map(|v| (v.term_string(), v)).collect();
        let mut entries = entries;
        entries.sort_by_key(|(_, rank)| *rank);
        if entries.iter().enumerate().any(|(i, (_, rank))| *rank != i) {
            return Err(LoadError::Validation {
                location: None,
                message: "witness ranks are not a permutation of 0..len".to_string(),
            });
        }
        let mut ranking = Vec::with_capacity(entries.len());
        for (term, _) in entries {
            let vertex = by_term.get(&term).ok_or_else(|| LoadError::Validation {
                location: None,
                message: format!("witness term '{term}' is not referenced by the data set"),
            })?;
            ranking.push((*vertex).clone());
        }
        if ranking.iter().collect::<BTreeSet<_>>().len() != ranking.len() {
            return Err(LoadError::Validation {
                location: None,
                message: "witness ranks a term twice".to_string(),
            });
        }
        Ok(LevelKWitness { k, order: LinearOrder::from_ranking(ranking) })
    }
}

/// Produces a level-`k` witness under the given target order.
///
/// Succeeds on every valid input with `1 <= k <= cap`; the constraint graph
/// is acyclic for the same structural reasons as the monotone graph, with
/// equal-revelation classes ordered by the (acyclic) target order.
pub fn rationalize_levelk(
    problem: &ChoiceProblem,
    k: u32,
    target: &TargetOrder,
    cap: LevelCap,
) -> Result<LevelKWitness, LevelKError> {
    let construction = build_levelk_graph(problem, k, target, cap)?;
    if let Some(cycle) = construction.graph().find_cycle() {
        let rendered: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
        return Err(LevelKError::InternalInvariantViolation {
            detail: format!("level-{k} constraint graph contains a cycle: {}", rendered.join(" -> ")),
        });
    }
    let order = construction.graph().linear_extension().map_err(|e| {
        LevelKError::InternalInvariantViolation { detail: e.to_string() }
    })?;
    Ok(LevelKWitness { k, order })
}

/// Checks a claimed depth-`k` witness: every referenced object is ranked,
/// chosen objects outrank rejected ones per observation, smaller revelations
/// outrank strictly larger ones for a fixed alternative, and equal-revelation
/// pairs agree with the target order (the projection property).
pub fn verify_levelk_witness(
    problem: &ChoiceProblem,
    k: u32,
    target: &TargetOrder,
    witness: &LevelKWitness,
) -> bool {
    if witness.k() != k {
        return false;
    }
    let cap = LevelCap(k); // the witness fixes the depth; no separate cap applies
    let vertices = match referenced_vertices(problem, k, cap) {
        Ok(vertices) => vertices,
        Err(_) => return false,
    };
    let order = witness.order();
    if !vertices.iter().all(|v| order.contains(v)) {
        return false;
    }
    // Rationalizing constraints.
    for obs in problem.observations() {
        let chosen = level_vertex_raw(k, obs.menu(), obs.choice());
        for y in obs.rejected() {
            let rejected = level_vertex_raw(k, obs.menu(), y);
            if !order.prefers(&chosen, &rejected) {
                return false;
            }
        }
    }
    // Monotone and separable constraints over referenced pairs.
    for a in &vertices {
        for b in &vertices {
            if a.alt() == b.alt()
                && a.revealed().len() < b.revealed().len()
                && a.revealed().is_subset(b.revealed())
                && !order.prefers(a, b)
            {
                return false;
            }
            if a != b
                && a.revealed() == b.revealed()
                && target.prefers(a.alt(), b.alt()) != order.prefers(a, b)
            {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::Observation;

    fn alt(id: &str) -> Alternative {
        Alternative::new(id).expect("valid id")
    }

    fn menu(ids: &[&str]) -> BTreeSet<Alternative> {
        ids.iter().map(|a| alt(a)).collect()
    }

    fn problem(universe: &[&str], observations: &[(&[&str], &str)]) -> ChoiceProblem {
        ChoiceProblem::new(
            universe.iter().map(|a| alt(a)),
            observations.iter().map(|(m, choice)| {
                Observation::new(m.iter().map(|a| alt(a)), alt(choice)).expect("valid obs")
            }),
        )
        .expect("valid problem")
    }

    fn cap() -> LevelCap {
        LevelCap::default()
    }

    #[test]
    fn depth_zero_revelation_lists_beaten_alternatives() {
        let pairs = t_level(0, &menu(&["x", "y", "z"]), &alt("x"), cap()).expect("within cap");
        let rendered: Vec<String> =
            pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
        assert_eq!(rendered, ["(x,y)", "(x,z)"]);
    }

    #[test]
    fn revelation_size_is_menu_size_minus_one_at_every_depth() {
        let m = menu(&["x", "y", "z"]);
        for k in 0..=3 {
            for x in &m {
                let pairs = t_level(k, &m, x, cap()).expect("within cap");
                assert_eq!(pairs.len(), m.len() - 1, "depth {k}, alternative {x}");
            }
        }
    }

    #[test]
    fn depth_two_revelation_of_binary_menu_renders_canonically() {
        let m = menu(&["x", "y"]);
        let pairs = t_level(1, &m, &alt("x"), cap()).expect("within cap");
        assert_eq!(pairs.len(), 1);
        let (chosen, rejected) = pairs.iter().next().expect("one pair");
        assert_eq!(chosen.term_string(), "(x,{(x,y)})");
        assert_eq!(rejected.term_string(), "(y,{(y,x)})");
        assert_eq!(chosen.level(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let m = menu(&["x", "y"]);
        let err = t_level(4, &m, &alt("x"), cap()).expect_err("default cap is 3");
        assert_eq!(err, LevelKError::LevelCapExceeded { requested: 4, cap: 3 });
        assert!(t_level(4, &m, &alt("x"), LevelCap(4)).is_ok());
    }

    #[test]
    fn revelations_identify_menu_and_alternative_beyond_singletons() {
        // For menus with at least two members, distinct (menu, alternative)
        // pairs never share a revelation.
        let menus = [
            menu(&["x", "y"]),
            menu(&["x", "z"]),
            menu(&["y", "z"]),
            menu(&["x", "y", "z"]),
        ];
        for k in 0..=2 {
            let mut seen: BTreeMap<_, (usize, Alternative)> = BTreeMap::new();
            for (i, m) in menus.iter().enumerate() {
                for x in m {
                    let pairs = t_level(k, m, x, cap()).expect("within cap");
                    if let Some((j, other)) = seen.insert(pairs, (i, x.clone())) {
                        panic!(
                            "depth-{k} revelation of menu {i}/{x} collides with menu {j}/{other}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn singleton_menus_share_the_empty_revelation() {
        // The one degenerate case: every singleton menu reveals nothing, at
        // every depth, so the revelation alone cannot identify the menu.
        for k in 0..=2 {
            let x = t_level(k, &menu(&["x"]), &alt("x"), cap()).expect("within cap");
            let y = t_level(k, &menu(&["y"]), &alt("y"), cap()).expect("within cap");
            assert!(x.is_empty());
            assert_eq!(x, y);
        }
    }

    #[test]
    fn binary_observation_yields_single_rationalizing_edge() {
        let p = problem(&["x", "y"], &[(&["x", "y"], "x")]);
        let target = TargetOrder::parse("y>x", &p).expect("valid target");
        let g = build_levelk_graph(&p, 1, &target, cap()).expect("within cap");
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        let chosen = level_vertex(1, &menu(&["x", "y"]), &alt("x"), cap()).unwrap();
        let rejected = level_vertex(1, &menu(&["x", "y"]), &alt("y"), cap()).unwrap();
        assert_eq!(g.tag(&chosen, &rejected), Some(LevelKEdgeKind::Rationalizing));
        // The two revelations differ, so the target order induces no edge;
        // the witness may rank x's object first even though the target says
        // y beats x.
        let witness = rationalize_levelk(&p, 1, &target, cap()).expect("rationalizable");
        assert!(verify_levelk_witness(&p, 1, &target, &witness));
        assert!(witness.order().prefers(&chosen, &rejected));
    }

    #[test]
    fn singleton_menus_induce_separable_edges() {
        let p = problem(&["x", "y"], &[(&["x"], "x"), (&["y"], "y")]);
        let target = TargetOrder::parse("y>x", &p).expect("valid target");
        let g = build_levelk_graph(&p, 1, &target, cap()).expect("within cap");
        // Both objects carry the empty revelation, so the target order must
        // rank them: y over x.
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        let vx = level_vertex(1, &menu(&["x"]), &alt("x"), cap()).unwrap();
        let vy = level_vertex(1, &menu(&["y"]), &alt("y"), cap()).unwrap();
        assert_eq!(g.tag(&vy, &vx), Some(LevelKEdgeKind::Separable));
        let witness = rationalize_levelk(&p, 1, &target, cap()).expect("rationalizable");
        assert!(witness.order().prefers(&vy, &vx));
    }

    #[test]
    fn nested_menus_are_monotone_at_depth_one_but_incomparable_deeper() {
        let p = problem(&["x", "y", "z"], &[(&["x", "y"], "x"), (&["x", "y", "z"], "z")]);
        let target = TargetOrder::lexicographic(&p);
        // Depth 1: the small menu's revelation embeds in the large one's.
        let g1 = build_levelk_graph(&p, 1, &target, cap()).expect("within cap");
        let small1 = level_vertex(1, &menu(&["x", "y"]), &alt("x"), cap()).unwrap();
        let large1 = level_vertex(1, &menu(&["x", "y", "z"]), &alt("x"), cap()).unwrap();
        assert_eq!(g1.tag(&small1, &large1), Some(LevelKEdgeKind::Monotone));
        // Depth 2: each embedded description now names its whole menu, so
        // the two revelations share no element and no monotone edge forms.
        let g2 = build_levelk_graph(&p, 2, &target, cap()).expect("within cap");
        let small2 = level_vertex(2, &menu(&["x", "y"]), &alt("x"), cap()).unwrap();
        let large2 = level_vertex(2, &menu(&["x", "y", "z"]), &alt("x"), cap()).unwrap();
        assert_eq!(g2.tag(&small2, &large2), None);
        assert!(!small2.revealed().is_subset(large2.revealed()));
        assert!(small2.revealed().intersection(large2.revealed()).next().is_none());
        // Rationalization still goes through at both depths.
        for k in [1, 2] {
            let witness = rationalize_levelk(&p, k, &target, cap()).expect("rationalizable");
            assert!(verify_levelk_witness(&p, k, &target, &witness));
        }
    }

    #[test]
    fn empty_revelations_stay_monotone_below_everything_at_depth_two() {
        // A singleton menu reveals nothing at any depth, and the empty set
        // embeds in every revelation, so its objects keep their monotone
        // edges even where nested menus lose theirs.
        let p = problem(&["x", "y"], &[(&["x"], "x"), (&["x", "y"], "x")]);
        let target = TargetOrder::lexicographic(&p);
        let g = build_levelk_graph(&p, 2, &target, cap()).expect("within cap");
        let bare = level_vertex(2, &menu(&["x"]), &alt("x"), cap()).unwrap();
        let full = level_vertex(2, &menu(&["x", "y"]), &alt("x"), cap()).unwrap();
        assert_eq!(g.tag(&bare, &full), Some(LevelKEdgeKind::Monotone));
        let witness = rationalize_levelk(&p, 2, &target, cap()).expect("rationalizable");
        assert!(verify_levelk_witness(&p, 2, &target, &witness));
    }

    #[test]
    fn projection_follows_target_and_its_reverse() {
        let p = problem(
            &["x", "y", "z"],
            &[(&["x", "y"], "x"), (&["y", "z"], "y"), (&["x", "z"], "z")],
        );
        let target = TargetOrder::parse("x>y>z", &p).expect("valid target");
        for t in [target.clone(), target.reversed()] {
            let witness = rationalize_levelk(&p, 1, &t, cap()).expect("rationalizable");
            assert!(verify_levelk_witness(&p, 1, &t, &witness));
        }
    }

    #[test]
    fn witness_entries_round_trip() {
        let p = problem(&["x", "y", "z"], &[(&["x", "y"], "x"), (&["x", "y", "z"], "z")]);
        let target = TargetOrder::lexicographic(&p);
        let witness = rationalize_levelk(&p, 2, &target, cap()).expect("rationalizable");
        let entries = witness.to_entries();
        let reloaded =
            LevelKWitness::from_entries(entries, &p, 2, cap()).expect("terms all resolve");
        assert_eq!(witness, reloaded);
        assert!(verify_levelk_witness(&p, 2, &target, &reloaded));
    }

    #[test]
    fn foreign_terms_are_rejected_on_reload() {
        let p = problem(&["x", "y"], &[(&["x", "y"], "x")]);
        let err = LevelKWitness::from_entries(
            vec![("(q,{(q,r)})".to_string(), 0)],
            &p,
            1,
            cap(),
        )
        .expect_err("unknown term");
        assert!(err.to_string().contains("not referenced"), "{err}");
    }

    #[test]
    fn tampered_witness_fails_verification() {
        let p = problem(&["x", "y"], &[(&["x", "y"], "x")]);
        let target = TargetOrder::lexicographic(&p);
        let witness = rationalize_levelk(&p, 1, &target, cap()).expect("rationalizable");
        let entries: Vec<(String, usize)> = witness
            .to_entries()
            .into_iter()
            .map(|(term, rank)| (term, 1 - rank))
            .collect();
        let tampered = LevelKWitness::from_entries(entries, &p, 1, cap()).expect("valid order");
        assert!(!verify_levelk_witness(&p, 1, &target, &tampered));
    }

    #[test]
    fn target_order_must_cover_the_universe() {
        let p = problem(&["x", "y", "z"], &[(&["x", "y"], "x")]);
        assert!(TargetOrder::parse("x>y", &p).is_err());
        assert!(TargetOrder::parse("x>y>z>q", &p).is_err());
        assert!(TargetOrder::parse("x>y>y>z", &p).is_err());
        assert!(TargetOrder::parse("z>x>y", &p).is_ok());
    }
}
