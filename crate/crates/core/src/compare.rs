//! Running several agents on one shared environment.

use std::time::Instant;

use serde_json::{json, Value};

use crate::engine::{train, TrainOutcome};
use crate::mdp::{Mdp, MdpError};
use crate::model::{environment_fingerprint, ComparatorModel, EnvironmentFingerprint};
use crate::validate::{has_errors, validate_model, Diagnostic};
use crate::Model;

#[derive(Debug, Clone)]
pub struct CompareEntry {
    /// `ALGO#k`, k being the agent's position in the model.
    pub label: String,
    pub seed: u64,
    pub outcome: TrainOutcome,
    pub wall_time_ms: u128,
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub entries: Vec<CompareEntry>,
    pub env_fingerprint: EnvironmentFingerprint,
}

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error("model has {} validation error(s)", .0.iter().filter(|d| d.is_error()).count())]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Mdp(#[from] MdpError),
}

/// Train every agent; agent `k` uses seed `base_seed + k`. Agents run on
/// separate threads, the report is assembled in model order.
pub fn run_compare(model: &ComparatorModel, base_seed: u64) -> Result<CompareReport, CompareError> {
    run_compare_with(model, base_seed, true)
}

pub fn run_compare_with(
    model: &ComparatorModel,
    base_seed: u64,
    parallel: bool,
) -> Result<CompareReport, CompareError> {
    let diagnostics = validate_model(&Model::Comparator(model.clone()));
    if has_errors(&diagnostics) {
        return Err(CompareError::Invalid(diagnostics));
    }
    let mdp = Mdp::compile(&model.environment)?;

    let run_one = |k: usize| {
        let agent = &model.agents[k];
        let seed = base_seed.wrapping_add(k as u64);
        let started = Instant::now();
        let outcome = train(agent.algorithm, &mdp, &agent.hyperparameters, seed);
        CompareEntry {
            label: format!("{}#{k}", agent.algorithm),
            seed,
            outcome,
            wall_time_ms: started.elapsed().as_millis(),
        }
    };

    let entries = if parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..model.agents.len())
                .map(|k| scope.spawn(move || run_one(k)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("training thread panicked"))
                .collect()
        })
    } else {
        (0..model.agents.len()).map(run_one).collect()
    };

    Ok(CompareReport {
        entries,
        env_fingerprint: environment_fingerprint(&model.environment),
    })
}

/// One block per agent: `=== label ===`, the result text, `wall_time_ms: n`.
pub fn render_compare(report: &CompareReport) -> String {
    report
        .entries
        .iter()
        .map(|e| {
            format!(
                "=== {} ===\n{}wall_time_ms: {}\n",
                e.label, e.outcome.result_text, e.wall_time_ms
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Policy as a `{state: successor}` object plus the rendered matrix.
pub fn outcome_json(outcome: &TrainOutcome, mdp: &Mdp) -> Value {
    let policy: serde_json::Map<String, Value> = (0..mdp.n_states())
        .filter_map(|s| {
            outcome
                .policy
                .next(s)
                .map(|n| (mdp.name(s).to_string(), Value::from(mdp.name(n))))
        })
        .collect();
    json!({
        "algorithm": outcome.algorithm,
        "states": mdp.names(),
        "table": outcome.tables.matrix(),
        "policy": policy,
        "steps_total": outcome.steps_total,
        "episode_returns": outcome.episode_returns,
    })
}

pub fn render_compare_structured(report: &CompareReport, mdp: &Mdp) -> Value {
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            let mut v = outcome_json(&e.outcome, mdp);
            v["label"] = Value::from(e.label.clone());
            v["seed"] = Value::from(e.seed);
            v["wall_time_ms"] = Value::from(e.wall_time_ms as u64);
            v
        })
        .collect();
    json!({
        "env_fingerprint": report.env_fingerprint.to_hex(),
        "entries": entries,
    })
}
