//! Rationalizability under the additive privacy model, plus the forward
//! simulator used as its test oracle.
//!
//! An [`AdditiveModel`] scores alternative `x` on menu `A` as
//!
//! ```text
//! score(x, A) = u(x) - sum over z in A, z != x, of v(x, z)
//! ```
//!
//! with `u` and `v` nonnegative: choosing `x` earns its intrinsic utility but
//! pays a privacy penalty for every comparison the choice publishes. A data
//! set is additively rationalizable when some model makes every observed
//! choice the strict maximum of its menu.
//!
//! Unlike the monotone and level-k models, this one has bite. Each
//! observation pins down finitely many strict linear inequalities over the
//! `n^2` unknowns `u(x_1)..u(x_n), v(x_i, x_j)`; [`build_inequality_system`]
//! lays them out in a canonical matrix with entries in `{-1, 0, +1}`, and
//! [`additive_rationalizable`] decides feasibility exactly. The strict system
//! is homogeneous, so it is feasible exactly when the scaled system
//! `rows >= 1` is, which is what the kernel in [`crate::simplex`] solves;
//! infeasibility comes back with nonnegative row multipliers certifying that
//! no nonnegative solution exists.
//!
//! There is also a cheap necessary condition. Write `x R^y z` when the data
//! contains menus `A` and `A + {y}` with `z` chosen from the first and `x`
//! (an element of `A`) from the second — adding `y` swung the comparison
//! from `z` to `x` even though both were already available. Any
//! rationalizing model must then have `v(z, y) > v(x, y)`, so each relation
//! `R^y` must be acyclic ([`ry_acyclic_all`]); a cycle is a human-readable
//! refutation and is attached to the infeasibility certificate when present.
//! The condition is necessary but not known to be sufficient, hence the
//! inequality system remains the decision procedure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::choice::{Alternative, ChoiceProblem, LoadError, Observation};
use crate::order::Relation;
use crate::simplex::{solve_geq_one, Feasibility};

/// Renders a rational as the exact fraction string `p/q` (always reduced,
/// denominator positive).
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p` into an exact rational.
pub fn rational_from_str(text: &str) -> Result<BigRational, LoadError> {
    let invalid = |msg: &str| LoadError::Validation {
        location: None,
        message: format!("invalid rational '{text}': {msg}"),
    };
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let numer = BigInt::from_str(numer.trim()).map_err(|_| invalid("bad numerator"))?;
    let denom = BigInt::from_str(denom.trim()).map_err(|_| invalid("bad denominator"))?;
    if denom.is_zero() {
        return Err(invalid("zero denominator"));
    }
    Ok(BigRational::new(numer, denom))
}

/// A nonnegative utility/penalty model, complete over its universe: `u` has
/// an entry for every alternative and `v` for every ordered pair of distinct
/// alternatives.
///
/// Serializes as `{"u": {"x": "p/q", ...}, "v": {"x>y": "p/q", ...}}` with
/// exact fraction strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct AdditiveModel {
    u: BTreeMap<Alternative, BigRational>,
    v: BTreeMap<(Alternative, Alternative), BigRational>,
}

impl AdditiveModel {
    /// Builds a model over `universe`, filling unspecified entries with zero.
    ///
    /// Rejects negative values, keys outside the universe, and reflexive
    /// penalty pairs.
    pub fn new(
        universe: &BTreeSet<Alternative>,
        u: BTreeMap<Alternative, BigRational>,
        v: BTreeMap<(Alternative, Alternative), BigRational>,
    ) -> Result<Self, ModelError> {
        for (x, value) in &u {
            if !universe.contains(x) {
                return Err(ModelError::UnknownAlternative { id: x.id().to_string() });
            }
            if value.is_negative() {
                return Err(ModelError::NegativeValue { entry: format!("u({x})") });
            }
        }
        for ((x, z), value) in &v {
            if !universe.contains(x) {
                return Err(ModelError::UnknownAlternative { id: x.id().to_string() });
            }
            if !universe.contains(z) {
                return Err(ModelError::UnknownAlternative { id: z.id().to_string() });
            }
            if x == z {
                return Err(ModelError::ReflexivePair { id: x.id().to_string() });
            }
            if value.is_negative() {
                return Err(ModelError::NegativeValue { entry: format!("v({x},{z})") });
            }
        }
        let mut full_u = u;
        for x in universe {
            full_u.entry(x.clone()).or_insert_with(BigRational::zero);
        }
        let mut full_v = v;
        for x in universe {
            for z in universe {
                if x != z {
                    full_v
                        .entry((x.clone(), z.clone()))
                        .or_insert_with(BigRational::zero);
                }
            }
        }
        Ok(AdditiveModel { u: full_u, v: full_v })
    }

    /// The universe the model is defined over.
    pub fn universe(&self) -> BTreeSet<Alternative> {
        self.u.keys().cloned().collect()
    }

    /// Intrinsic utility of `x`.
    ///
    /// # Panics
    ///
    /// Panics if `x` is outside the universe.
    pub fn utility(&self, x: &Alternative) -> &BigRational {
        self.u.get(x).expect("alternative outside the model's universe")
    }

    /// Penalty for publishing the comparison "`x` over `z`".
    ///
    /// # Panics
    ///
    /// Panics if either alternative is outside the universe or `x == z`.
    pub fn penalty(&self, x: &Alternative, z: &Alternative) -> &BigRational {
        assert!(x != z, "penalty pairs are irreflexive");
        self.v
            .get(&(x.clone(), z.clone()))
            .expect("pair outside the model's universe")
    }

    /// `u(x)` minus the penalties for everything `x` would be chosen over on
    /// `menu`.
    pub fn score(&self, x: &Alternative, menu: &BTreeSet<Alternative>) -> BigRational {
        let mut score = self.utility(x).clone();
        for z in menu {
            if z != x {
                score -= self.penalty(x, z);
            }
        }
        score
    }

    pub fn utilities(&self) -> impl Iterator<Item = (&Alternative, &BigRational)> {
        self.u.iter()
    }

    pub fn penalties(
        &self,
    ) -> impl Iterator<Item = (&(Alternative, Alternative), &BigRational)> {
        self.v.iter()
    }
}

#[derive(Serialize, Deserialize)]
struct RawModel {
    u: BTreeMap<String, String>,
    v: BTreeMap<String, String>,
}

impl TryFrom<RawModel> for AdditiveModel {
    type Error = LoadError;

    fn try_from(raw: RawModel) -> Result<Self, Self::Error> {
        let mut u = BTreeMap::new();
        for (key, value) in raw.u {
            u.insert(Alternative::new(key)?, rational_from_str(&value)?);
        }
        let mut v = BTreeMap::new();
        for (key, value) in raw.v {
            let (x, z) = key.split_once('>').ok_or_else(|| LoadError::Validation {
                location: None,
                message: format!("penalty key '{key}' is not of the form 'x>z'"),
            })?;
            v.insert(
                (Alternative::new(x)?, Alternative::new(z)?),
                rational_from_str(&value)?,
            );
        }
        let universe: BTreeSet<Alternative> = u.keys().cloned().collect();
        AdditiveModel::new(&universe, u, v).map_err(|e| LoadError::Validation {
            location: None,
            message: e.to_string(),
        })
    }
}

impl From<AdditiveModel> for RawModel {
    fn from(model: AdditiveModel) -> Self {
        RawModel {
            u: model
                .u
                .iter()
                .map(|(x, value)| (x.id().to_string(), rational_to_string(value)))
                .collect(),
            v: model
                .v
                .iter()
                .map(|((x, z), value)| {
                    (format!("{}>{}", x.id(), z.id()), rational_to_string(value))
                })
                .collect(),
        }
    }
}

/// Rejected input to [`AdditiveModel::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    NegativeValue { entry: String },
    UnknownAlternative { id: String },
    ReflexivePair { id: String },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::NegativeValue { entry } => write!(f, "{entry} is negative"),
            ModelError::UnknownAlternative { id } => {
                write!(f, "'{id}' is not in the model's universe")
            }
            ModelError::ReflexivePair { id } => {
                write!(f, "penalty pair ({id},{id}) is reflexive")
            }
        }
    }
}

impl std::error::Error for ModelError {}

// ---------------------------------------------------------------------------
// The R^y necessary condition
// ---------------------------------------------------------------------------

/// The comparison-swing relation for a fixed absent alternative `y`:
/// `(x, z)` is in the relation when some observed menu `A` (with `y` not in
/// `A`) has choice `z` while `A + {y}` is also observed with choice `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RyRelation {
    y: Alternative,
    pairs: BTreeSet<(Alternative, Alternative)>,
}

impl RyRelation {
    pub fn y(&self) -> &Alternative {
        &self.y
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(Alternative, Alternative)> {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The pairs as a directed graph over the problem's universe.
    pub fn to_relation(&self, universe: &BTreeSet<Alternative>) -> Relation<Alternative> {
        let mut relation = Relation::with_vertices(universe.iter().cloned());
        for (a, b) in &self.pairs {
            relation.add_edge(a.clone(), b.clone());
        }
        relation
    }
}

/// Builds `R^y` for one alternative.
///
/// Two degenerate swings are excluded. When the choices agree the pair would
/// be a self-loop and carries no information. When the extended menu's
/// choice is `y` itself, the winner was not available on the base menu, so
/// the pair of inequalities behind the penalty law does not arise — and no
/// such pair could close a cycle anyway, since nothing observed ever chooses
/// `y` from a menu omitting `y`.
///
/// # Panics
///
/// Panics if `y` is not in the problem's universe.
pub fn build_ry(problem: &ChoiceProblem, y: &Alternative) -> RyRelation {
    assert!(
        problem.alternatives().contains(y),
        "'{y}' is not in the problem's universe"
    );
    let mut pairs = BTreeSet::new();
    for obs in problem.observations() {
        if obs.menu().contains(y) {
            continue;
        }
        let mut extended = obs.menu().clone();
        extended.insert(y.clone());
        if let Some(extended_choice) = problem.choice_for_menu(&extended) {
            if extended_choice != obs.choice() && extended_choice != y {
                pairs.insert((extended_choice.clone(), obs.choice().clone()));
            }
        }
    }
    RyRelation { y: y.clone(), pairs }
}

/// A cycle in some `R^y`, refuting additive rationalizability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RyRefutation {
    /// The absent alternative whose relation cycles.
    pub y: Alternative,
    /// The cycle, as a closed walk.
    pub cycle: Vec<Alternative>,
}

/// Outcome of checking the necessary condition for every `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RyOutcome {
    /// Every `R^y` is acyclic.
    Acyclic,
    /// The first cycle found, scanning `y` in canonical order.
    Refuted(RyRefutation),
}

/// Checks `R^y` for every alternative `y`, in canonical order, and reports
/// the first cycle found.
pub fn ry_acyclic_all(problem: &ChoiceProblem) -> RyOutcome {
    for y in problem.alternatives() {
        let ry = build_ry(problem, y);
        if ry.is_empty() {
            continue;
        }
        if let Some(cycle) = ry.to_relation(problem.alternatives()).find_cycle() {
            return RyOutcome::Refuted(RyRefutation { y: y.clone(), cycle });
        }
    }
    RyOutcome::Acyclic
}

// ---------------------------------------------------------------------------
// The inequality system
// ---------------------------------------------------------------------------

/// A column of the inequality system: one unknown of the model.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Column {
    Utility(Alternative),
    Penalty(Alternative, Alternative),
}

impl Column {
    /// Human-readable label used in the CSV dump: `u(x)` or `v(x>z)`.
    pub fn label(&self) -> String {
        match self {
            Column::Utility(x) => format!("u({x})"),
            Column::Penalty(x, z) => format!("v({x}>{z})"),
        }
    }
}

/// One strict inequality: "the chosen alternative strictly out-scores this
/// unchosen one on this menu". Coefficients are dense over the system's
/// columns, each in `{-1, 0, +1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityRow {
    pub menu: BTreeSet<Alternative>,
    pub chosen: Alternative,
    pub unchosen: Alternative,
    pub coefficients: Vec<i8>,
}

/// The complete system for a data set: `n^2` columns (all `u`'s in canonical
/// order, then all ordered penalty pairs in canonical order) and one row per
/// (observation, unchosen alternative).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalitySystem {
    columns: Vec<Column>,
    index: BTreeMap<Column, usize>,
    rows: Vec<InequalityRow>,
}

impl InequalitySystem {
    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[InequalityRow] {
        &self.rows
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, column: &Column) -> Option<usize> {
        self.index.get(column).copied()
    }

    /// The model's unknowns flattened into a vector aligned with the columns.
    pub fn model_vector(&self, model: &AdditiveModel) -> Vec<BigRational> {
        self.columns
            .iter()
            .map(|column| match column {
                Column::Utility(x) => model.utility(x).clone(),
                Column::Penalty(x, z) => model.penalty(x, z).clone(),
            })
            .collect()
    }

    /// Reassembles a model from a column-aligned vector.
    ///
    /// # Panics
    ///
    /// Panics if the vector length differs from the column count or a value
    /// is negative.
    pub fn vector_to_model(
        &self,
        values: &[BigRational],
        universe: &BTreeSet<Alternative>,
    ) -> AdditiveModel {
        assert_eq!(values.len(), self.columns.len(), "misaligned solution vector");
        let mut u = BTreeMap::new();
        let mut v = BTreeMap::new();
        for (column, value) in self.columns.iter().zip(values) {
            match column {
                Column::Utility(x) => {
                    u.insert(x.clone(), value.clone());
                }
                Column::Penalty(x, z) => {
                    v.insert((x.clone(), z.clone()), value.clone());
                }
            }
        }
        AdditiveModel::new(universe, u, v).expect("solver output is nonnegative and aligned")
    }

    /// Evaluates every row at the model: entry `i` is
    /// `score(chosen_i, menu_i) - score(unchosen_i, menu_i)`.
    pub fn evaluate(&self, model: &AdditiveModel) -> Vec<BigRational> {
        let vector = self.model_vector(model);
        self.rows
            .iter()
            .map(|row| {
                row.coefficients
                    .iter()
                    .zip(&vector)
                    .filter(|(c, _)| **c != 0)
                    .fold(BigRational::zero(), |acc, (c, value)| {
                        acc + BigRational::from_integer(BigInt::from(*c)) * value
                    })
            })
            .collect()
    }

    /// CSV dump with labeled columns: provenance fields first, then one
    /// column per unknown in canonical order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("menu,chosen,unchosen");
        for column in &self.columns {
            out.push(',');
            out.push_str(&column.label());
        }
        out.push('\n');
        for row in &self.rows {
            let menu_ids: Vec<&str> = row.menu.iter().map(Alternative::id).collect();
            out.push_str(&menu_ids.join("|"));
            out.push(',');
            out.push_str(row.chosen.id());
            out.push(',');
            out.push_str(row.unchosen.id());
            for c in &row.coefficients {
                out.push(',');
                out.push_str(&c.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Lays out the canonical inequality system for the data set: row values must
/// all be strictly positive for the observed choices to be strict optima.
pub fn build_inequality_system(problem: &ChoiceProblem) -> InequalitySystem {
    let universe = problem.alternatives();
    let mut columns: Vec<Column> =
        universe.iter().map(|x| Column::Utility(x.clone())).collect();
    for x in universe {
        for z in universe {
            if x != z {
                columns.push(Column::Penalty(x.clone(), z.clone()));
            }
        }
    }
    let index: BTreeMap<Column, usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();

    let mut rows = Vec::new();
    for obs in problem.observations() {
        let chosen = obs.choice();
        for unchosen in obs.rejected() {
            let mut coefficients = vec![0i8; columns.len()];
            coefficients[index[&Column::Utility(chosen.clone())]] = 1;
            coefficients[index[&Column::Utility(unchosen.clone())]] = -1;
            for z in obs.menu() {
                if z != unchosen {
                    coefficients[index[&Column::Penalty(unchosen.clone(), z.clone())]] = 1;
                }
                if z != chosen {
                    coefficients[index[&Column::Penalty(chosen.clone(), z.clone())]] = -1;
                }
            }
            rows.push(InequalityRow {
                menu: obs.menu().clone(),
                chosen: chosen.clone(),
                unchosen: unchosen.clone(),
                coefficients,
            });
        }
    }
    InequalitySystem { columns, index, rows }
}

// ---------------------------------------------------------------------------
// The decision procedure
// ---------------------------------------------------------------------------

/// Certificate that the inequality system has no nonnegative solution.
#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibilityCertificate {
    /// One nonnegative multiplier per system row; the weighted row sum has no
    /// positive coefficient, yet every row must be strictly positive.
    pub farkas_multipliers: Vec<BigRational>,
    /// A cycle in some `R^y`, when the necessary condition also fails.
    pub ry_refutation: Option<RyRefutation>,
}

/// Outcome of the additive rationalizability test.
#[derive(Debug, Clone, PartialEq)]
pub enum AdditiveOutcome {
    /// A rationalizing model; replaying it reproduces every observed choice.
    Rationalizable { model: AdditiveModel },
    /// No model exists; carries a machine-checkable certificate.
    Infeasible { certificate: InfeasibilityCertificate },
}

/// Decides additive rationalizability exactly.
///
/// The strict system "every row positive" is homogeneous in the unknowns, so
/// it is feasible exactly when "every row at least one" is; the returned
/// model satisfies the latter, hence every observed choice wins its menu by
/// a margin of at least one.
pub fn additive_rationalizable(problem: &ChoiceProblem) -> AdditiveOutcome {
    let system = build_inequality_system(problem);
    let rows: Vec<Vec<BigRational>> = system
        .rows()
        .iter()
        .map(|row| {
            row.coefficients
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect()
        })
        .collect();
    match solve_geq_one(system.column_count(), &rows) {
        Feasibility::Feasible(values) => {
            let model = system.vector_to_model(&values, problem.alternatives());
            debug_assert!(
                system
                    .evaluate(&model)
                    .iter()
                    .all(|value| value >= &BigRational::from_integer(BigInt::from(1))),
                "solver returned a vector that misses a row"
            );
            let menus: Vec<BTreeSet<Alternative>> =
                problem.observations().iter().map(|o| o.menu().clone()).collect();
            let replayed = replay_choices(&model, &menus)
                .expect("strict margins rule out ties");
            debug_assert!(
                replayed
                    .iter()
                    .zip(problem.observations())
                    .all(|(c, obs)| c == obs.choice()),
                "rationalizing model must replay the observed choices"
            );
            AdditiveOutcome::Rationalizable { model }
        }
        Feasibility::Infeasible { multipliers } => {
            let ry_refutation = match ry_acyclic_all(problem) {
                RyOutcome::Refuted(refutation) => Some(refutation),
                RyOutcome::Acyclic => None,
            };
            AdditiveOutcome::Infeasible {
                certificate: InfeasibilityCertificate {
                    farkas_multipliers: multipliers,
                    ry_refutation,
                },
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Forward simulation and the generator oracle
// ---------------------------------------------------------------------------

/// Two alternatives scored identically at the top of a menu, so the model
/// does not determine a choice there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieError {
    pub menu: BTreeSet<Alternative>,
    pub tied: Vec<Alternative>,
}

impl fmt::Display for TieError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let menu: Vec<&str> = self.menu.iter().map(Alternative::id).collect();
        let tied: Vec<&str> = self.tied.iter().map(Alternative::id).collect();
        write!(
            f,
            "model ties {} at the top of menu {{{}}}",
            tied.join(", "),
            menu.join(",")
        )
    }
}

impl std::error::Error for TieError {}

/// Plays the model forward on each menu, returning the strict score maximum
/// of each.
///
/// # Panics
///
/// Panics if a menu is empty or mentions an alternative outside the model's
/// universe.
pub fn replay_choices(
    model: &AdditiveModel,
    menus: &[BTreeSet<Alternative>],
) -> Result<Vec<Alternative>, TieError> {
    menus
        .iter()
        .map(|menu| {
            assert!(!menu.is_empty(), "cannot choose from an empty menu");
            let scores: Vec<(&Alternative, BigRational)> =
                menu.iter().map(|x| (x, model.score(x, menu))).collect();
            let best = scores
                .iter()
                .map(|(_, s)| s)
                .max()
                .expect("menu is nonempty")
                .clone();
            let tied: Vec<&Alternative> = scores
                .iter()
                .filter(|(_, s)| *s == best)
                .map(|(x, _)| *x)
                .collect();
            match tied.as_slice() {
                [winner] => Ok((*winner).clone()),
                _ => Err(TieError {
                    menu: menu.clone(),
                    tied: tied.into_iter().cloned().collect(),
                }),
            }
        })
        .collect()
}

/// Sampling ranges for [`generate_additive`]: numerators are drawn uniformly
/// from `0..=max` over a fixed positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueRanges {
    pub u_numerator_max: u64,
    pub v_numerator_max: u64,
    pub denominator: u64,
}

impl Default for ValueRanges {
    fn default() -> Self {
        // Penalties meaningfully compete with utilities (a full menu of
        // maximal penalties outweighs any utility) without drowning them.
        ValueRanges { u_numerator_max: 160, v_numerator_max: 40, denominator: 7 }
    }
}

/// The generator could not produce a data set with the requested shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationFailed {
    pub reason: String,
}

impl fmt::Display for GenerationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "generation failed: {}", self.reason)
    }
}

impl std::error::Error for GenerationFailed {}

/// Samples a random additive model and plays it forward on random distinct
/// menus, yielding a data set that is additively rationalizable by
/// construction, together with the ground-truth model.
///
/// Fully deterministic in `seed`. Menus have at least two members (smaller
/// menus constrain nothing); if the model ties on some menu it is resampled
/// a bounded number of times while the menus are kept.
///
/// # Panics
///
/// Panics if `n_alts < 2` or `denominator == 0`.
pub fn generate_additive(
    n_alts: usize,
    n_menus: usize,
    seed: u64,
    ranges: &ValueRanges,
) -> Result<(ChoiceProblem, AdditiveModel), GenerationFailed> {
    assert!(n_alts >= 2, "need at least two alternatives");
    assert!(ranges.denominator > 0, "denominator must be positive");
    let universe: BTreeSet<Alternative> = (0..n_alts).map(alternative_name).collect();
    let pool: Vec<&Alternative> = universe.iter().collect();

    // 2^n - n - 1 menus of size >= 2 exist; fail fast when asked for more.
    let available = if n_alts < 63 {
        (1u64 << n_alts) - n_alts as u64 - 1
    } else {
        u64::MAX
    };
    if n_menus as u64 > available {
        return Err(GenerationFailed {
            reason: format!(
                "only {available} distinct menus of size >= 2 exist over {n_alts} alternatives, \
                 {n_menus} requested"
            ),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut menus: BTreeSet<BTreeSet<Alternative>> = BTreeSet::new();
    let budget = 200 * n_menus + 1000;
    let mut attempts = 0;
    while menus.len() < n_menus {
        attempts += 1;
        if attempts > budget {
            return Err(GenerationFailed {
                reason: format!(
                    "could not sample {n_menus} distinct menus in {budget} attempts"
                ),
            });
        }
        let size = rng.gen_range(2..=n_alts);
        let mut menu = BTreeSet::new();
        while menu.len() < size {
            menu.insert(pool[rng.gen_range(0..pool.len())].clone());
        }
        menus.insert(menu);
    }
    let menus: Vec<BTreeSet<Alternative>> = menus.into_iter().collect();

    const MODEL_RETRIES: u32 = 64;
    for _ in 0..MODEL_RETRIES {
        let model = sample_model(&universe, ranges, &mut rng);
        match replay_choices(&model, &menus) {
            Ok(choices) => {
                let observations = menus
                    .iter()
                    .zip(choices)
                    .map(|(menu, choice)| {
                        Observation::new(menu.iter().cloned(), choice)
                            .expect("replayed choice is on its menu")
                    })
                    .collect::<Vec<_>>();
                let problem = ChoiceProblem::new(universe.iter().cloned(), observations)
                    .expect("menus are distinct and within the universe");
                return Ok((problem, model));
            }
            Err(_tie) => continue,
        }
    }
    Err(GenerationFailed {
        reason: format!("model tied on some menu in {MODEL_RETRIES} consecutive resamples"),
    })
}

fn sample_model(
    universe: &BTreeSet<Alternative>,
    ranges: &ValueRanges,
    rng: &mut ChaCha8Rng,
) -> AdditiveModel {
    let denom = BigInt::from(ranges.denominator);
    let mut sample = |max: u64| {
        BigRational::new(BigInt::from(rng.gen_range(0..=max)), denom.clone())
    };
    let mut u = BTreeMap::new();
    for x in universe {
        u.insert(x.clone(), sample(ranges.u_numerator_max));
    }
    let mut v = BTreeMap::new();
    for x in universe {
        for z in universe {
            if x != z {
                v.insert((x.clone(), z.clone()), sample(ranges.v_numerator_max));
            }
        }
    }
    AdditiveModel::new(universe, u, v).expect("sampled values are nonnegative")
}

/// Deterministic alternative names: `a..z`, then `a26`, `a27`, ...
fn alternative_name(i: usize) -> Alternative {
    let id = if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("a{i}")
    };
    Alternative::new(id).expect("generated ids are valid")
}
