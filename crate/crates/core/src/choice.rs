//! The observed-choice data model: alternatives, menus, observations, and the
//! classical (privacy-oblivious) rationalizability test.
//!
//! A [`ChoiceProblem`] is a finite universe of alternatives together with a
//! choice function on a family of menus: each [`Observation`] records one menu
//! and the single alternative chosen from it. Construction validates every
//! structural invariant (choices belong to their menus, menus to the universe,
//! no menu is observed with two different choices), so any value of these
//! types that exists is well-formed.
//!
//! The classical test asks for a strict linear order on the universe whose
//! maximum on every observed menu is the observed choice. It succeeds exactly
//! when the revealed-preference relation — "chosen over available" — is
//! acyclic; [`classic_rationalizable`] returns either a witnessing order or a
//! cycle of revealed preferences as a refutation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::order::{LinearOrder, Relation};

/// Characters that may not appear in an alternative id, because the CLI and
/// the serialization formats use them as separators.
const RESERVED_ID_CHARS: [char; 2] = ['>', ','];

/// An alternative, identified by a short string id.
///
/// Ids are non-empty and contain no whitespace, `>`, or `,`. The `Ord`
/// instance (plain string order) is the canonical order used for every
/// deterministic iteration and serialization in this crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Alternative(String);

impl Alternative {
    pub fn new(id: impl Into<String>) -> Result<Self, LoadError> {
        let id = id.into();
        if id.is_empty() {
            return Err(LoadError::invalid_id(&id, "id is empty"));
        }
        if id.chars().any(char::is_whitespace) {
            return Err(LoadError::invalid_id(&id, "id contains whitespace"));
        }
        if let Some(c) = id.chars().find(|c| RESERVED_ID_CHARS.contains(c)) {
            return Err(LoadError::invalid_id(&id, format!("id contains reserved character '{c}'")));
        }
        Ok(Alternative(id))
    }

    pub fn id(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Alternative {
    type Error = LoadError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Alternative::new(value)
    }
}

impl From<Alternative> for String {
    fn from(value: Alternative) -> Self {
        value.0
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One observed choice: a menu and the alternative picked from it.
///
/// The choice is always a member of the menu; [`Observation::new`] rejects
/// anything else, and deserialization goes through the same check.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawObservation", into = "RawObservation")]
pub struct Observation {
    menu: BTreeSet<Alternative>,
    choice: Alternative,
}

impl Observation {
    pub fn new(
        menu: impl IntoIterator<Item = Alternative>,
        choice: Alternative,
    ) -> Result<Self, LoadError> {
        let menu: BTreeSet<Alternative> = menu.into_iter().collect();
        if menu.is_empty() {
            return Err(LoadError::validation("menu is empty"));
        }
        if !menu.contains(&choice) {
            return Err(LoadError::validation(format!(
                "choice '{choice}' is not a member of menu {}",
                render_menu(&menu)
            )));
        }
        Ok(Observation { menu, choice })
    }

    pub fn menu(&self) -> &BTreeSet<Alternative> {
        &self.menu
    }

    pub fn choice(&self) -> &Alternative {
        &self.choice
    }

    /// The alternatives that were available but passed over.
    pub fn rejected(&self) -> impl Iterator<Item = &Alternative> {
        self.menu.iter().filter(move |y| **y != self.choice)
    }
}

#[derive(Serialize, Deserialize)]
struct RawObservation {
    menu: Vec<String>,
    choice: String,
}

impl TryFrom<RawObservation> for Observation {
    type Error = LoadError;

    fn try_from(raw: RawObservation) -> Result<Self, Self::Error> {
        let menu = raw
            .menu
            .into_iter()
            .map(Alternative::new)
            .collect::<Result<Vec<_>, _>>()?;
        Observation::new(menu, Alternative::new(raw.choice)?)
    }
}

impl From<Observation> for RawObservation {
    fn from(obs: Observation) -> Self {
        RawObservation {
            menu: obs.menu.iter().map(|a| a.id().to_string()).collect(),
            choice: obs.choice.id().to_string(),
        }
    }
}

/// A validated choice data set: a universe of alternatives and one observed
/// choice per distinct menu.
///
/// Observations are stored sorted by menu and deduplicated, so two problems
/// with the same content compare equal and serialize identically. The universe
/// may strictly contain the alternatives that menus mention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawProblem", into = "RawProblem")]
pub struct ChoiceProblem {
    alternatives: BTreeSet<Alternative>,
    observations: Vec<Observation>,
}

impl ChoiceProblem {
    /// Validates and canonicalizes a data set.
    ///
    /// Exact duplicates of an observation collapse to one; two observations of
    /// the same menu with different choices are a [`LoadError::Validation`],
    /// as is a menu that mentions an alternative missing from the universe.
    pub fn new(
        alternatives: impl IntoIterator<Item = Alternative>,
        observations: impl IntoIterator<Item = Observation>,
    ) -> Result<Self, LoadError> {
        let alternatives: BTreeSet<Alternative> = alternatives.into_iter().collect();
        let mut by_menu: BTreeMap<BTreeSet<Alternative>, Observation> = BTreeMap::new();
        for (index, obs) in observations.into_iter().enumerate() {
            let location = format!("observation {index}");
            if let Some(stray) = obs.menu.iter().find(|a| !alternatives.contains(a)) {
                return Err(LoadError::validation_at(
                    location,
                    format!("menu mentions '{stray}', which is not a declared alternative"),
                ));
            }
            match by_menu.get(&obs.menu) {
                None => {
                    by_menu.insert(obs.menu.clone(), obs);
                }
                Some(existing) if existing.choice == obs.choice => {}
                Some(existing) => {
                    return Err(LoadError::validation_at(
                        location,
                        format!(
                            "menu {} already observed with choice '{}', conflicting choice '{}'",
                            render_menu(&obs.menu),
                            existing.choice,
                            obs.choice
                        ),
                    ));
                }
            }
        }
        Ok(ChoiceProblem {
            alternatives,
            observations: by_menu.into_values().collect(),
        })
    }

    /// The universe, in canonical order.
    pub fn alternatives(&self) -> &BTreeSet<Alternative> {
        &self.alternatives
    }

    /// Observations, sorted by menu.
    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    /// The recorded choice for `menu`, if that exact menu was observed.
    pub fn choice_for_menu(&self, menu: &BTreeSet<Alternative>) -> Option<&Alternative> {
        self.observations
            .binary_search_by(|obs| obs.menu.cmp(menu))
            .ok()
            .map(|i| self.observations[i].choice())
    }

    pub fn alternative_count(&self) -> usize {
        self.alternatives.len()
    }

    pub fn observation_count(&self) -> usize {
        self.observations.len()
    }
}

#[derive(Serialize, Deserialize)]
struct RawProblem {
    alternatives: Vec<String>,
    observations: Vec<RawObservation>,
}

impl TryFrom<RawProblem> for ChoiceProblem {
    type Error = LoadError;

    fn try_from(raw: RawProblem) -> Result<Self, Self::Error> {
        let alternatives = raw
            .alternatives
            .into_iter()
            .map(Alternative::new)
            .collect::<Result<Vec<_>, _>>()?;
        let observations = raw
            .observations
            .into_iter()
            .enumerate()
            .map(|(index, raw_obs)| {
                Observation::try_from(raw_obs)
                    .map_err(|e| e.locate(format!("observation {index}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ChoiceProblem::new(alternatives, observations)
    }
}

impl From<ChoiceProblem> for RawProblem {
    fn from(problem: ChoiceProblem) -> Self {
        RawProblem {
            alternatives: problem.alternatives.iter().map(|a| a.id().to_string()).collect(),
            observations: problem.observations.into_iter().map(RawObservation::from).collect(),
        }
    }
}

/// Input format accepted by [`load_problem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    /// `{"alternatives": [...], "observations": [{"menu": [...], "choice": "..."}]}`
    Json,
    /// Header `menu,choice`; the menu cell joins ids with `|`. The universe is
    /// the union of all menus.
    Csv,
}

/// Reads and validates a data set from `reader`.
pub fn load_problem(reader: impl Read, format: DatasetFormat) -> Result<ChoiceProblem, LoadError> {
    match format {
        DatasetFormat::Json => {
            // Two stages so that broken syntax and well-formed-but-invalid
            // content are reported as different errors.
            let value: serde_json::Value =
                serde_json::from_reader(reader).map_err(|e| LoadError::parse(e.to_string()))?;
            serde_json::from_value(value).map_err(|e| LoadError::validation(e.to_string()))
        }
        DatasetFormat::Csv => load_csv(reader),
    }
}

fn load_csv(reader: impl Read) -> Result<ChoiceProblem, LoadError> {
    let mut csv_reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = csv_reader.headers().map_err(|e| LoadError::parse(e.to_string()))?;
    let expected = ["menu", "choice"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(LoadError::parse(format!(
            "expected header 'menu,choice', found '{}'",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut observations = Vec::new();
    let mut universe = BTreeSet::new();
    for (index, record) in csv_reader.records().enumerate() {
        let location = format!("row {}", index + 2); // 1-based, after the header
        let record = record.map_err(|e| LoadError::parse(e.to_string()))?;
        if record.len() != 2 {
            return Err(LoadError::validation_at(location, "expected exactly two fields"));
        }
        let menu = record[0]
            .split('|')
            .map(Alternative::new)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.locate(&location))?;
        let choice = Alternative::new(&record[1]).map_err(|e| e.locate(&location))?;
        universe.extend(menu.iter().cloned());
        observations.push(Observation::new(menu, choice).map_err(|e| e.locate(&location))?);
    }
    ChoiceProblem::new(universe, observations)
}

/// Canonical JSON rendering of a problem. Loading the result yields a problem
/// equal to the input.
pub fn serialize_problem(problem: &ChoiceProblem) -> String {
    let mut text = serde_json::to_string_pretty(problem)
        .expect("choice problems always serialize");
    text.push('\n');
    text
}

/// The revealed-preference relation of a data set: `(x, y)` is revealed
/// exactly when some observation chooses `x` from a menu containing `y`.
/// Irreflexive by construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct RevealedRelation {
    pairs: BTreeSet<(Alternative, Alternative)>,
}

impl RevealedRelation {
    /// Builds a relation from explicit pairs, rejecting reflexive ones.
    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (Alternative, Alternative)>,
    ) -> Result<Self, LoadError> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if let Some((a, _)) = pairs.iter().find(|(a, b)| a == b) {
            return Err(LoadError::validation(format!(
                "revealed relation contains reflexive pair ({a}, {a})"
            )));
        }
        Ok(RevealedRelation { pairs })
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(Alternative, Alternative)> {
        self.pairs.iter()
    }

    pub fn contains(&self, x: &Alternative, y: &Alternative) -> bool {
        self.pairs.contains(&(x.clone(), y.clone()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// True when every pair of `self` also belongs to `other`.
    pub fn is_subset(&self, other: &RevealedRelation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// The pairs as a directed graph over `universe`.
    pub fn to_relation(&self, universe: &BTreeSet<Alternative>) -> Relation<Alternative> {
        let mut relation = Relation::with_vertices(universe.iter().cloned());
        for (a, b) in &self.pairs {
            relation.add_edge(a.clone(), b.clone());
        }
        relation
    }
}

/// Collects every revealed-preference pair of the data set.
pub fn revealed_relation(problem: &ChoiceProblem) -> RevealedRelation {
    let mut pairs = BTreeSet::new();
    for obs in problem.observations() {
        for rejected in obs.rejected() {
            pairs.insert((obs.choice().clone(), rejected.clone()));
        }
    }
    RevealedRelation { pairs }
}

/// Outcome of the classical rationalizability test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassicOutcome {
    /// A strict linear order on the universe whose maximum on each observed
    /// menu is the observed choice.
    Rationalizable { witness: LinearOrder<Alternative> },
    /// A cycle of revealed preferences, as a closed walk.
    Refuted { cycle: Vec<Alternative> },
}

/// Decides whether the data set is rationalizable by a single preference
/// order with no privacy component: succeeds exactly when the revealed
/// relation is acyclic.
pub fn classic_rationalizable(problem: &ChoiceProblem) -> ClassicOutcome {
    let relation = revealed_relation(problem).to_relation(problem.alternatives());
    match relation.linear_extension() {
        Ok(witness) => {
            debug_assert!(
                replays_choices(&witness, problem),
                "a linear extension of the revealed relation must rationalize the data"
            );
            ClassicOutcome::Rationalizable { witness }
        }
        Err(err) => ClassicOutcome::Refuted { cycle: err.cycle },
    }
}

/// True when `order` picks the observed choice as the unique maximum of every
/// observed menu.
pub fn replays_choices(order: &LinearOrder<Alternative>, problem: &ChoiceProblem) -> bool {
    problem.observations().iter().all(|obs| {
        let best = obs
            .menu()
            .iter()
            .min_by_key(|a| order.rank_of(a).unwrap_or(usize::MAX));
        match best {
            Some(best) => best == obs.choice() && order.contains(best),
            None => false,
        }
    })
}

fn render_menu(menu: &BTreeSet<Alternative>) -> String {
    let ids: Vec<&str> = menu.iter().map(Alternative::id).collect();
    format!("{{{}}}", ids.join(","))
}

/// Failure to load or validate a data set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadError {
    /// The input could not be decoded at all (malformed JSON or CSV).
    Parse { message: String },
    /// The input decoded but violates a structural invariant.
    Validation { location: Option<String>, message: String },
}

impl LoadError {
    fn parse(message: impl Into<String>) -> Self {
        LoadError::Parse { message: message.into() }
    }

    fn validation(message: impl Into<String>) -> Self {
        LoadError::Validation { location: None, message: message.into() }
    }

    fn validation_at(location: impl Into<String>, message: impl Into<String>) -> Self {
        LoadError::Validation { location: Some(location.into()), message: message.into() }
    }

    fn invalid_id(id: &str, reason: impl Into<String>) -> Self {
        LoadError::Validation {
            location: None,
            message: format!("invalid alternative id '{}': {}", id, reason.into()),
        }
    }

    /// Attaches a location to a validation error that lacks one.
    fn locate(self, location: impl Into<String>) -> Self {
        match self {
            LoadError::Validation { location: None, message } => {
                LoadError::Validation { location: Some(location.into()), message }
            }
            other => other,
        }
    }
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Parse { message } => write!(f, "parse error: {message}"),
            LoadError::Validation { location: Some(location), message } => {
                write!(f, "{location}: {message}")
            }
            LoadError::Validation { location: None, message } => f.write_str(message),
        }
    }
}

impl std::error::Error for LoadError {}
