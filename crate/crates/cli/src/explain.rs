//! The `explain` subcommand: one document that walks a dataset through every
//! model — the revealed relation, the nonempty swing relations with any
//! cycles flagged, the full inequality system, and per-model verdicts with
//! their witnesses or certificates.

use serde_json::{json, Value};

use revpriv::additive::{build_inequality_system, build_ry};
use revpriv::levelk::{LevelCap, TargetOrder};
use revpriv::{revealed_relation, Alternative, ChoiceProblem};

use crate::report::{run_check, CheckError, CheckRequest, ModelKind, TargetSource};

/// Assembles the explanation document. The per-model sections reuse the
/// `check` machinery so the verdicts here and the ones `check` prints can
/// never drift apart.
pub fn build_explanation(
    problem: &ChoiceProblem,
    target: (TargetOrder, TargetSource),
    k: u32,
    level_cap: LevelCap,
) -> Result<Value, CheckError> {
    let observations: Vec<Value> = problem
        .observations()
        .iter()
        .map(|obs| {
            json!({
                "menu": obs.menu().iter().map(Alternative::id).collect::<Vec<_>>(),
                "choice": obs.choice().id(),
            })
        })
        .collect();

    let relation = revealed_relation(problem);
    let revealed: Vec<[&str; 2]> = relation.pairs().map(|(a, b)| [a.id(), b.id()]).collect();

    let swing_relations: Vec<Value> = problem
        .alternatives()
        .iter()
        .filter_map(|y| {
            let ry = build_ry(problem, y);
            if ry.is_empty() {
                return None;
            }
            let cycle = ry
                .to_relation(problem.alternatives())
                .find_cycle()
                .map(|walk| walk.iter().map(|a| a.id().to_string()).collect::<Vec<_>>());
            Some(json!({
                "y": y.id(),
                "pairs": ry.pairs().map(|(a, b)| [a.id(), b.id()]).collect::<Vec<_>>(),
                "cycle": cycle,
            }))
        })
        .collect();

    let system = build_inequality_system(problem);

    let mut verdicts = serde_json::Map::new();
    for request in [
        CheckRequest {
            model: ModelKind::Classic,
            k: None,
            target: None,
            level_cap,
        },
        CheckRequest {
            model: ModelKind::Monotone,
            k: None,
            target: None,
            level_cap,
        },
        CheckRequest {
            model: ModelKind::Levelk,
            k: Some(k),
            target: Some(target.clone()),
            level_cap,
        },
        CheckRequest {
            model: ModelKind::Additive,
            k: None,
            target: None,
            level_cap,
        },
    ] {
        let name = request.model.name();
        let report = run_check(problem, &request)?;
        verdicts.insert(
            name.to_string(),
            serde_json::to_value(&report).expect("report serialization cannot fail"),
        );
    }

    Ok(json!({
        "dataset": {
            "alternatives": problem.alternatives().iter().map(Alternative::id).collect::<Vec<_>>(),
            "observations": observations,
        },
        "revealed_relation": revealed,
        "swing_relations": swing_relations,
        "inequality_system": {
            "columns": system.column_count(),
            "rows": system.row_count(),
            "csv": system.to_csv(),
        },
        "verdicts": verdicts,
    }))
}

/// Stderr companion: the highlights a reader wants before opening the JSON.
pub fn human_summary(document: &Value) -> String {
    let mut lines = Vec::new();
    let alternatives = document["dataset"]["alternatives"]
        .as_array()
        .map_or(0, Vec::len);
    let observations = document["dataset"]["observations"]
        .as_array()
        .map_or(0, Vec::len);
    lines.push(format!("dataset: {alternatives} alternatives, {observations} observations"));
    let revealed = document["revealed_relation"].as_array().map_or(0, Vec::len);
    lines.push(format!("revealed relation: {revealed} pairs"));
    if let Some(swings) = document["swing_relations"].as_array() {
        for swing in swings {
            let y = swing["y"].as_str().unwrap_or("?");
            let pairs = swing["pairs"].as_array().map_or(0, Vec::len);
            match swing["cycle"].as_array() {
                Some(cycle) => {
                    let walk: Vec<&str> =
                        cycle.iter().filter_map(|v| v.as_str()).collect();
                    lines.push(format!(
                        "swing relation over {y}: {pairs} pairs, CYCLE {}",
                        walk.join(" -> ")
                    ));
                }
                None => lines.push(format!("swing relation over {y}: {pairs} pairs, acyclic")),
            }
        }
    }
    if let Some(system) = document["inequality_system"].as_object() {
        lines.push(format!(
            "inequality system: {} rows x {} columns",
            system["rows"], system["columns"]
        ));
    }
    if let Some(verdicts) = document["verdicts"].as_object() {
        for (model, verdict) in verdicts {
            let ok = verdict["rationalizable"].as_bool().unwrap_or(false);
            lines.push(format!(
                "{model}: {}",
                if ok { "rationalizable" } else { "NOT rationalizable" }
            ));
        }
    }
    lines.join("\n")
}
