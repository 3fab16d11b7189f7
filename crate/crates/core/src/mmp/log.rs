//! Versioned JSON-lines run logs. Keys are sorted, so logs are stable
//! across runs.

use serde_json::{json, Value};

use super::{CanonicalModel, MMPOutcome, MMPResult, MMPStep};

pub const LOG_FORMAT: &str = "folmmp-mmp-log";
pub const LOG_VERSION: u32 = 1;

fn step_record(kind: &str, index: usize, s: &MMPStep) -> Value {
    json!({
        "record": kind,
        "index": index,
        "curve": s.name,
        "ray": s.ray.name(),
        "self_intersection": s.self_intersection.to_string(),
        "foliation_degree": s.foliation_degree.to_string(),
        "variety_degree": s.variety_degree.to_string(),
        "degree_before": s.degree_before.to_string(),
        "degree_after": s.degree_after.to_string(),
        "coefficient": s.coefficient.to_string(),
        "perturbation": s.perturbation.as_ref().map(|t| t.to_string()),
        "rank_after": s.rank_after,
        "created": {
            "curves": s.singular_point.curves.len(),
            "kind": format!("{}", s.singular_point.kind),
            "a_fol": s.singular_point.a_fol.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "a_var": s.singular_point.a_var.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        },
        "annotations_pass": s.preserved(),
    })
}

fn header(kind: &str, r: &MMPResult) -> Value {
    json!({
        "format": LOG_FORMAT,
        "version": LOG_VERSION,
        "run": kind,
        "base": r.model.base.name(),
        "epsilon": r.epsilon.to_string(),
        "delta": r.delta.to_string(),
        "initial_rank": r.initial_rank,
        "relative_to": "catalogue",
    })
}

fn lines(values: Vec<Value>) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

pub fn run_log(r: &MMPResult) -> String {
    let mut v = vec![header("mmp", r)];
    v.extend(
        r.steps
            .iter()
            .enumerate()
            .map(|(i, s)| step_record("step", i + 1, s)),
    );
    let mut outcome = json!({
        "record": "outcome",
        "outcome": r.outcome.name(),
        "steps": r.steps.len(),
        "final_rank": r.model.rank(),
    });
    match &r.outcome {
        MMPOutcome::MoriFiberSpace { fibration } => {
            outcome["fibration"] = json!(fibration.as_ref().map(|f| r.model.lattice.format_class(f)));
        }
        MMPOutcome::NotPseudoeffective { curve, point } => {
            outcome["curve"] = json!(r.model.curves[*curve].name);
            outcome["point"] = json!(point);
        }
        MMPOutcome::NefModel => {}
    }
    v.push(outcome);
    lines(v)
}

pub fn canonical_log(r: &MMPResult, c: &CanonicalModel) -> String {
    let mut v = vec![header("canonical-model", r)];
    v.extend(
        c.steps
            .iter()
            .enumerate()
            .map(|(i, s)| step_record("contraction", i + 1, s)),
    );
    v.push(json!({
        "record": "outcome",
        "outcome": "CanonicalModel",
        "contractions": c.steps.len(),
        "final_rank": c.model.rank(),
        "positive_on_catalogue": c.positive_on_catalogue,
    }));
    lines(v)
}
