//! Rationalizability tests for privacy-aware consumer choice data.
//!
//! Given a finite data set of observed choices — menus of alternatives and the
//! single alternative picked from each — this crate decides whether the data
//! is consistent with each member of a family of preference models in which
//! the consumer cares not only about what they pick but also about what the
//! choice reveals about them:
//!
//! * **classic** ([`choice::classic_rationalizable`]) — a single strict
//!   preference order over alternatives, no privacy component;
//! * **monotone** ([`monotone::rationalize_monotone`]) — preferences over
//!   (alternative, revealed information) pairs in which revealing less is
//!   always better, all else equal;
//! * **level-k** ([`levelk::rationalize_levelk`]) — the consumer models an
//!   observer who is itself privacy-aware, to a fixed depth `k`, with a
//!   conjectured target order over alternatives (`k = 1` is the separable
//!   model);
//! * **additive** ([`additive::additive_rationalizable`]) — a utility for the
//!   chosen alternative minus a per-pair penalty for each unchosen
//!   alternative the choice is compared against.
//!
//! Every test is constructive in both directions: success returns an explicit
//! witness (an order or a model) that replays the data, and failure returns a
//! machine-checkable certificate (a preference cycle or an infeasibility
//! certificate for the defining inequality system).
//!
//! All iteration, serialization, and witness construction is deterministic:
//! the same input always produces byte-identical output.

pub mod additive;
pub mod choice;
pub mod levelk;
pub mod monotone;
pub mod order;
pub mod sampling;

mod simplex;

pub use choice::{
    classic_rationalizable, load_problem, revealed_relation, serialize_problem, Alternative,
    ChoiceProblem, ClassicOutcome, DatasetFormat, LoadError, Observation, RevealedRelation,
};
pub use order::{CyclicInput, LinearOrder, Relation};
