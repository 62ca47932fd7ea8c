//! Rationalizability under monotone privacy preferences.
//!
//! Here the consumer ranks *(alternative, revealed information)* pairs, where
//! the revealed information is a set of revealed-preference comparisons, and
//! the preference is monotone: revealing strictly less is strictly better
//! when the alternative is held fixed.
//!
//! Choosing `x` from menu `A` publishes the comparisons
//! `{(x, y) : y in A, y != x}` — that `x` was taken over everything else on
//! offer. So the only vertices the data can speak about are the pairs
//! `(x, A_x)` for an observed menu `A` and `x` in `A`; these are the
//! *referenced vertices*, and [`build_monotone_graph`] wires them with two
//! kinds of constraint edges:
//!
//! * **rationalizing**: for each observation, the chosen pair must outrank
//!   the pair of every rejected alternative on that menu;
//! * **monotone**: for a fixed alternative, a strictly smaller revelation
//!   must outrank a strictly larger one.
//!
//! This graph is acyclic for *every* valid data set — along any edge the
//! revelation can only grow or stay the same size, and it stays the same
//! size only on rationalizing edges, which can never chain twice in a row
//! (the middle vertex would have to be both chosen and rejected from the
//! same menu). Any linear extension is therefore a witness, which is why
//! every data set is monotone-rationalizable; the interest is in the witness
//! itself. A cycle indicates a bug, never bad input, and is reported as
//! [`MonotoneError::InternalInvariantViolation`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::choice::{Alternative, ChoiceProblem, LoadError, Observation, RevealedRelation};
use crate::order::{LinearOrder, Relation};

/// A vertex of the monotone constraint graph: an alternative paired with the
/// comparisons its choice would reveal.
///
/// The derived `Ord` (alternative first, then revelation) is the canonical
/// order used for deterministic iteration and tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrivacyVertex {
    alt: Alternative,
    revealed: RevealedRelation,
}

impl PrivacyVertex {
    pub fn new(alt: Alternative, revealed: RevealedRelation) -> Self {
        PrivacyVertex { alt, revealed }
    }

    /// The vertex published by choosing `alt` from `menu`: `alt` paired with
    /// `{(alt, y) : y in menu, y != alt}`.
    ///
    /// # Panics
    ///
    /// Panics if `alt` is not a member of `menu`.
    pub fn from_menu(alt: &Alternative, menu: &BTreeSet<Alternative>) -> Self {
        assert!(menu.contains(alt), "alternative '{alt}' is not on the menu");
        let pairs = menu
            .iter()
            .filter(|y| *y != alt)
            .map(|y| (alt.clone(), y.clone()));
        PrivacyVertex {
            alt: alt.clone(),
            revealed: RevealedRelation::from_pairs(pairs)
                .expect("menu-derived revelations are irreflexive"),
        }
    }

    pub fn alt(&self) -> &Alternative {
        &self.alt
    }

    pub fn revealed(&self) -> &RevealedRelation {
        &self.revealed
    }
}

impl fmt::Display for PrivacyVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{{", self.alt)?;
        for (i, (a, b)) in self.revealed.pairs().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({a},{b})")?;
        }
        f.write_str("}})")
    }
}

/// Why an edge is in the constraint graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeKind {
    /// Same alternative, source reveals strictly less than target.
    Monotone,
    /// Source was chosen over the target's alternative in some observation.
    Rationalizing,
}

/// The constraint graph over referenced privacy vertices, with each edge
/// tagged by the constraint family that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalizationGraph {
    graph: Relation<PrivacyVertex>,
    tags: BTreeMap<(PrivacyVertex, PrivacyVertex), EdgeKind>,
}

impl RationalizationGraph {
    pub fn graph(&self) -> &Relation<PrivacyVertex> {
        &self.graph
    }

    /// The tag of an edge, if the edge exists. The two families are disjoint:
    /// monotone edges keep the alternative fixed, rationalizing edges change
    /// it.
    pub fn tag(&self, from: &PrivacyVertex, to: &PrivacyVertex) -> Option<EdgeKind> {
        self.tags.get(&(from.clone(), to.clone())).copied()
    }

    /// Edges with their tags, in canonical order.
    pub fn edges_with_tags(
        &self,
    ) -> impl Iterator<Item = (&PrivacyVertex, &PrivacyVertex, EdgeKind)> {
        self.tags.iter().map(|((a, b), kind)| (a, b, *kind))
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }
}

/// The vertices the data set can constrain: `(x, A_x)` for every observed
/// menu `A` and every `x` on it.
pub fn referenced_vertices(problem: &ChoiceProblem) -> BTreeSet<PrivacyVertex> {
    let mut vertices = BTreeSet::new();
    for obs in problem.observations() {
        for x in obs.menu() {
            vertices.insert(PrivacyVertex::from_menu(x, obs.menu()));
        }
    }
    vertices
}

/// Builds the monotone constraint graph for the data set.
pub fn build_monotone_graph(problem: &ChoiceProblem) -> RationalizationGraph {
    let vertices = referenced_vertices(problem);
    let mut graph = Relation::with_vertices(vertices.iter().cloned());
    let mut tags = BTreeMap::new();

    // Rationalizing edges: chosen pair over every rejected pair, per menu.
    for obs in problem.observations() {
        let chosen = PrivacyVertex::from_menu(obs.choice(), obs.menu());
        for y in obs.rejected() {
            let rejected = PrivacyVertex::from_menu(y, obs.menu());
            graph.add_edge(chosen.clone(), rejected.clone());
            tags.insert((chosen.clone(), rejected), EdgeKind::Rationalizing);
        }
    }

    // Monotone edges: same alternative, strictly smaller revelation wins.
    // Group the referenced vertices by alternative first.
    let mut by_alt: BTreeMap<&Alternative, Vec<&PrivacyVertex>> = BTreeMap::new();
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
                    tags.insert(((*small).clone(), (*large).clone()), EdgeKind::Monotone);
                }
            }
        }
    }

    RationalizationGraph { graph, tags }
}

/// A witness for monotone rationalizability: a strict linear order over the
/// referenced vertices satisfying every constraint edge.
///
/// The order covers the vertices the data references; it extends to the full
/// space of (alternative, revelation) pairs by linear extension, but that
/// extension is not materialized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<WitnessEntry>", into = "Vec<WitnessEntry>")]
pub struct MonotoneWitness {
    order: LinearOrder<PrivacyVertex>,
}

impl MonotoneWitness {
    pub fn order(&self) -> &LinearOrder<PrivacyVertex> {
        &self.order
    }
}

/// Serialized form of one ranked vertex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub alt: String,
    pub revealed_pairs: Vec<(String, String)>,
    pub rank: usize,
}

impl From<MonotoneWitness> for Vec<WitnessEntry> {
    fn from(witness: MonotoneWitness) -> Self {
        witness
            .order
            .ranking()
            .iter()
            .enumerate()
            .map(|(rank, v)| WitnessEntry {
                alt: v.alt().id().to_string(),
                revealed_pairs: v
                    .revealed()
                    .pairs()
                    .map(|(a, b)| (a.id().to_string(), b.id().to_string()))
                    .collect(),
                rank,
            })
            .collect()
    }
}

impl TryFrom<Vec<WitnessEntry>> for MonotoneWitness {
    type Error = LoadError;

    fn try_from(mut entries: Vec<WitnessEntry>) -> Result<Self, Self::Error> {
        entries.sort_by_key(|e| e.rank);
        if entries.iter().enumerate().any(|(i, e)| e.rank != i) {
            return Err(LoadError::Validation {
                location: None,
                message: "witness ranks are not a permutation of 0..len".to_string(),
            });
        }
        let mut ranking = Vec::with_capacity(entries.len());
        for entry in entries {
            let alt = Alternative::new(entry.alt)?;
            let pairs = entry
                .revealed_pairs
                .into_iter()
                .map(|(a, b)| Ok((Alternative::new(a)?, Alternative::new(b)?)))
                .collect::<Result<Vec<_>, LoadError>>()?;
            ranking.push(PrivacyVertex::new(alt, RevealedRelation::from_pairs(pairs)?));
        }
        if ranking.iter().collect::<BTreeSet<_>>().len() != ranking.len() {
            return Err(LoadError::Validation {
                location: None,
                message: "witness ranks a vertex twice".to_string(),
            });
        }
        Ok(MonotoneWitness { order: LinearOrder::from_ranking(ranking) })
    }
}

/// Error surface of [`rationalize_monotone`]. The constraint graph is acyclic
/// for every valid data set, so the only failure mode is an implementation
/// bug — never bad input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonotoneError {
    InternalInvariantViolation { detail: String },
}

impl fmt::Display for MonotoneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonotoneError::InternalInvariantViolation { detail } => {
                write!(f, "internal invariant violation: {detail}")
            }
        }
    }
}

impl std::error::Error for MonotoneError {}

/// Produces a monotone witness for the data set.
///
/// Succeeds on every valid input; see the module docs for why the constraint
/// graph cannot cycle.
pub fn rationalize_monotone(problem: &ChoiceProblem) -> Result<MonotoneWitness, MonotoneError> {
    let construction = build_monotone_graph(problem);
    if let Some(cycle) = construction.graph().find_cycle() {
        let rendered: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
        return Err(MonotoneError::InternalInvariantViolation {
            detail: format!("monotone constraint graph contains a cycle: {}", rendered.join(" -> ")),
        });
    }
    let order = construction.graph().linear_extension().map_err(|e| {
        MonotoneError::InternalInvariantViolation { detail: e.to_string() }
    })?;
    Ok(MonotoneWitness { order })
}

/// Checks a claimed witness against the data set: every referenced vertex is
/// ranked, every observation's chosen pair outranks its rejected pairs, and
/// for a fixed alternative smaller revelations outrank strictly larger ones.
pub fn verify_monotone_witness(problem: &ChoiceProblem, witness: &MonotoneWitness) -> bool {
    let order = witness.order();
    let vertices = referenced_vertices(problem);
    if !vertices.iter().all(|v| order.contains(v)) {
        return false;
    }
    let rationalizing_ok = problem.observations().iter().all(|obs: &Observation| {
        let chosen = PrivacyVertex::from_menu(obs.choice(), obs.menu());
        obs.rejected().all(|y| {
            let rejected = PrivacyVertex::from_menu(y, obs.menu());
            order.prefers(&chosen, &rejected)
        })
    });
    if !rationalizing_ok {
        return false;
    }
    vertices.iter().all(|small| {
        vertices.iter().all(|large| {
            let comparable = small.alt() == large.alt()
                && small.revealed().len() < large.revealed().len()
                && small.revealed().is_subset(large.revealed());
            !comparable || order.prefers(small, large)
        })
    })
}
