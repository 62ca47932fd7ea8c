//! Machine-first check reports.
//!
//! A [`Report`] is the canonical artifact of `revpriv check`: a JSON document
//! whose bytes are a pure function of the dataset and the requested model.
//! The human summary on stderr and the process exit code are both derived
//! from it. Anything nondeterministic (timing, paths) stays out of the
//! report and off stdout.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use revpriv::additive::{
    additive_rationalizable, build_inequality_system, rational_to_string, AdditiveOutcome,
};
use revpriv::levelk::{
    build_levelk_graph, rationalize_levelk, verify_levelk_witness, LevelCap, LevelKError,
    TargetOrder,
};
use revpriv::monotone::{build_monotone_graph, rationalize_monotone, verify_monotone_witness};
use revpriv::{classic_rationalizable, revealed_relation, ChoiceProblem, ClassicOutcome};

/// Which rationalizability test to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModelKind {
    /// Classical revealed preference (privacy-oblivious).
    Classic,
    /// Monotone privacy preferences.
    Monotone,
    /// Separable privacy preferences (level-k with k = 1).
    Separable,
    /// Level-k privacy preferences; requires `--k`.
    Levelk,
    /// Additive utility/penalty model.
    Additive,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Classic => "classic",
            ModelKind::Monotone => "monotone",
            ModelKind::Separable => "separable",
            ModelKind::Levelk => "levelk",
            ModelKind::Additive => "additive",
        }
    }
}

/// Where the target order driving a separable/level-k check came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetSource {
    Flag,
    DefaultLexicographic,
}

impl TargetSource {
    fn label(self) -> &'static str {
        match self {
            TargetSource::Flag => "flag",
            TargetSource::DefaultLexicographic => "default-lexicographic",
        }
    }
}

/// A fully resolved check request: model, depth, and target order.
pub struct CheckRequest {
    pub model: ModelKind,
    /// Depth for level-k style models; `None` elsewhere.
    pub k: Option<u32>,
    /// Target order and provenance for separable/level-k models.
    pub target: Option<(TargetOrder, TargetSource)>,
    pub level_cap: LevelCap,
}

/// Count fields of the report; which ones appear depends on the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub alternatives: usize,
    pub observations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system_rows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system_columns: Option<usize>,
}

/// The result of one check, serialized verbatim to stdout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub model: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_source: Option<&'static str>,
    pub rationalizable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub diagnostics: Diagnostics,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        if self.rationalizable {
            0
        } else {
            1
        }
    }

    /// Pretty JSON plus trailing newline — the exact stdout bytes.
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        text.push('\n');
        text
    }

    /// One-paragraph account for stderr.
    pub fn human_summary(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "model {}", self.model);
        if let Some(k) = self.k {
            let _ = write!(out, " (k = {k})");
        }
        if let Some(target) = &self.target {
            let _ = write!(out, ", target {target}");
        }
        let _ = write!(
            out,
            ": {} alternatives, {} observations",
            self.diagnostics.alternatives, self.diagnostics.observations
        );
        if let (Some(v), Some(e)) = (self.diagnostics.graph_vertices, self.diagnostics.graph_edges)
        {
            let _ = write!(out, "; graph {v} vertices / {e} edges");
        }
        if let (Some(r), Some(c)) = (self.diagnostics.system_rows, self.diagnostics.system_columns)
        {
            let _ = write!(out, "; system {r} rows x {c} columns");
        }
        let verdict = if self.rationalizable {
            "RATIONALIZABLE"
        } else {
            "NOT RATIONALIZABLE"
        };
        let _ = write!(out, "\nverdict: {verdict} (exit {})", self.exit_code());
        for note in &self.notes {
            let _ = write!(out, "\nnote: {note}");
        }
        out
    }
}

/// Errors from a check that reflect bad usage or input rather than a
/// verdict; they exit with code 2.
#[derive(Debug)]
pub struct CheckError {
    pub message: String,
}

impl std::fmt::Display for CheckError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CheckError {}

impl From<LevelKError> for CheckError {
    fn from(e: LevelKError) -> Self {
        let message = match e {
            LevelKError::LevelCapExceeded { requested, cap } => format!(
                "level {requested} exceeds the cap of {cap}; set REVPRIV_LEVEL_CAP to raise it"
            ),
            LevelKError::InternalInvariantViolation { detail } => {
                format!("internal invariant violated: {detail}")
            }
        };
        CheckError { message }
    }
}

/// Runs the requested test and assembles the report.
pub fn run_check(problem: &ChoiceProblem, request: &CheckRequest) -> Result<Report, CheckError> {
    let mut report = Report {
        model: request.model.name(),
        k: None,
        target: None,
        target_source: None,
        rationalizable: false,
        witness: None,
        certificate: None,
        notes: Vec::new(),
        diagnostics: Diagnostics {
            alternatives: problem.alternative_count(),
            observations: problem.observation_count(),
            graph_vertices: None,
            graph_edges: None,
            system_rows: None,
            system_columns: None,
        },
    };

    match request.model {
        ModelKind::Classic => {
            let relation = revealed_relation(problem).to_relation(problem.alternatives());
            report.diagnostics.graph_vertices = Some(relation.vertex_count());
            report.diagnostics.graph_edges = Some(relation.edge_count());
            match classic_rationalizable(problem) {
                ClassicOutcome::Rationalizable { witness } => {
                    report.rationalizable = true;
                    report.witness = Some(json!({ "ranking": witness.ranking() }));
                }
                ClassicOutcome::Refuted { cycle } => {
                    report.certificate = Some(json!({ "revealed_cycle": cycle }));
                }
            }
        }
        ModelKind::Monotone => {
            let graph = build_monotone_graph(problem);
            report.diagnostics.graph_vertices = Some(graph.vertex_count());
            report.diagnostics.graph_edges = Some(graph.edge_count());
            let witness = rationalize_monotone(problem).map_err(|e| CheckError {
                message: format!("internal invariant violated: {e}"),
            })?;
            debug_assert!(verify_monotone_witness(problem, &witness));
            report.rationalizable = true;
            report.witness =
                Some(serde_json::to_value(&witness).expect("witness serialization cannot fail"));
        }
        ModelKind::Separable | ModelKind::Levelk => {
            let k = request.k.expect("main resolves k before dispatch");
            let (target, source) = request
                .target
                .as_ref()
                .expect("main resolves the target before dispatch");
            report.k = Some(k);
            report.target = Some(target.to_string());
            report.target_source = Some(source.label());
            if request.model == ModelKind::Separable {
                report
                    .notes
                    .push("separable preferences are checked as level-k with k = 1".to_string());
            }
            let graph = build_levelk_graph(problem, k, target, request.level_cap)?;
            report.diagnostics.graph_vertices = Some(graph.vertex_count());
            report.diagnostics.graph_edges = Some(graph.edge_count());
            let witness = rationalize_levelk(problem, k, target, request.level_cap)?;
            debug_assert!(verify_levelk_witness(problem, k, target, &witness));
            report.rationalizable = true;
            let entries: Vec<Value> = witness
                .to_entries()
                .into_iter()
                .map(|(term, rank)| json!({ "term": term, "rank": rank }))
                .collect();
            report.witness = Some(json!({ "k": k, "entries": entries }));
        }
        ModelKind::Additive => {
            let system = build_inequality_system(problem);
            report.diagnostics.system_rows = Some(system.row_count());
            report.diagnostics.system_columns = Some(system.column_count());
            match additive_rationalizable(problem) {
                AdditiveOutcome::Rationalizable { model } => {
                    report.rationalizable = true;
                    report.witness = Some(
                        serde_json::to_value(&model).expect("model serialization cannot fail"),
                    );
                }
                AdditiveOutcome::Infeasible { certificate } => {
                    let multipliers: Vec<String> = certificate
                        .farkas_multipliers
                        .iter()
                        .map(rational_to_string)
                        .collect();
                    let ry_cycle = certificate.ry_refutation.as_ref().map(|refutation| {
                        json!({
                            "y": refutation.y.id(),
                            "cycle": refutation.cycle.clone(),
                        })
                    });
                    report.certificate = Some(json!({
                        "farkas_multipliers": multipliers,
                        "ry_cycle": ry_cycle,
                    }));
                }
            }
        }
    }

    Ok(report)
}
