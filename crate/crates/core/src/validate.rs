//! Constraint checking for environments and hyperparameters.
//!
//! Every check returns diagnostics instead of failing, in document order:
//! states, actions, rewards, terminal states, dead states, then agents.

use std::collections::HashSet;
use std::fmt;

use crate::model::{EnvironmentSpec, Hyperparameters, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticCode {
    StatesFormat,
    DuplicateState,
    ActionsShape,
    ActionIndexRange,
    RewardsShape,
    TerminalNotSubset,
    /// Warning: no terminal states, episodes end only at the step cap.
    NoTerminalStates,
    EmptyActionNonTerminal,
    HyperparamRange,
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub severity: Severity,
    pub message: String,
    /// Path of the offending element, e.g. `actions[2]`.
    pub location: String,
}

impl Diagnostic {
    fn error(
        code: DiagnosticCode,
        location: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            code,
            severity: Severity::Error,
            message: message.into(),
            location: location.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// `ERROR <code> at <location>: <message>` (or `WARNING ...`).
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        };
        write!(
            f,
            "{level} {} at {}: {}",
            self.code, self.location, self.message
        )
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

fn valid_state_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn validate_states(states: &[String]) -> Vec<Diagnostic> {
    use DiagnosticCode::*;
    let mut out = Vec::new();
    if states.is_empty() {
        out.push(Diagnostic::error(
            StatesFormat,
            "states",
            "at least one state is required",
        ));
    }
    let mut seen = HashSet::new();
    for (i, name) in states.iter().enumerate() {
        let location = format!("states[{i}]");
        if !valid_state_name(name) {
            out.push(Diagnostic::error(
                StatesFormat,
                location,
                format!("state name {name:?} must match [A-Za-z0-9_]+"),
            ));
        } else if !seen.insert(name.as_str()) {
            out.push(Diagnostic::error(
                DuplicateState,
                location,
                format!("state `{name}` is declared more than once"),
            ));
        }
    }
    out
}

pub fn validate_actions(states: &[String], actions: &[Vec<i64>]) -> Vec<Diagnostic> {
    use DiagnosticCode::*;
    let n = states.len();
    let mut out = Vec::new();
    if actions.len() != n {
        out.push(Diagnostic::error(
            ActionsShape,
            "actions",
            format!(
                "expected {n} action rows (one per state), found {}",
                actions.len()
            ),
        ));
    }
    for (row, successors) in actions.iter().enumerate() {
        let location = format!("actions[{row}]");
        if let Some(bad) = successors.iter().find(|&&i| i < 0 || i as usize >= n) {
            out.push(Diagnostic::error(
                ActionIndexRange,
                location,
                format!("state index {bad} is outside 0..{n}"),
            ));
            continue;
        }
        let mut seen = HashSet::new();
        if let Some(dup) = successors.iter().find(|i| !seen.insert(**i)) {
            out.push(Diagnostic::error(
                ActionIndexRange,
                location,
                format!("state index {dup} appears more than once"),
            ));
        }
    }
    out
}

pub fn validate_rewards(states: &[String], rewards: &[Vec<f64>]) -> Vec<Diagnostic> {
    use DiagnosticCode::*;
    let n = states.len();
    let mut out = Vec::new();
    if rewards.len() != n {
        out.push(Diagnostic::error(
            RewardsShape,
            "rewards",
            format!(
                "expected {n} reward rows (one per state), found {}",
                rewards.len()
            ),
        ));
    }
    for (row, values) in rewards.iter().enumerate() {
        if values.len() != n {
            out.push(Diagnostic::error(
                RewardsShape,
                format!("rewards[{row}]"),
                format!("expected {n} reward values, found {}", values.len()),
            ));
        } else if let Some(col) = values.iter().position(|v| !v.is_finite()) {
            out.push(Diagnostic::error(
                RewardsShape,
                format!("rewards[{row}][{col}]"),
                "reward must be a finite number",
            ));
        }
    }
    out
}

pub fn validate_terminals(states: &[String], terminals: &[String]) -> Vec<Diagnostic> {
    use DiagnosticCode::*;
    let mut out = Vec::new();
    if terminals.is_empty() {
        out.push(Diagnostic {
            code: NoTerminalStates,
            severity: Severity::Warning,
            message: "no terminal states; episodes end only at the step cap".into(),
            location: "terminal_states".into(),
        });
    }
    let mut seen = HashSet::new();
    for (i, name) in terminals.iter().enumerate() {
        let location = format!("terminal_states[{i}]");
        if !states.contains(name) {
            out.push(Diagnostic::error(
                TerminalNotSubset,
                location,
                format!("terminal state `{name}` is not one of the states"),
            ));
        } else if !seen.insert(name.as_str()) {
            out.push(Diagnostic::error(
                TerminalNotSubset,
                location,
                format!("terminal state `{name}` is listed more than once"),
            ));
        }
    }
    out
}

/// Range checks for one agent's settings. `prefix` is the agent's location,
/// e.g. `agent` or `agents[1]`.
pub fn validate_hyperparameters(hp: &Hyperparameters, prefix: &str) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut check = |name: &str, ok: bool, range: &str, value: String| {
        if !ok {
            out.push(Diagnostic::error(
                DiagnosticCode::HyperparamRange,
                format!("{prefix}.{name}"),
                format!("{name} = {value} is outside {range}"),
            ));
        }
    };
    check(
        "alpha",
        hp.alpha > 0.0 && hp.alpha <= 1.0,
        "(0, 1]",
        hp.alpha.to_string(),
    );
    check(
        "gamma",
        (0.0..=1.0).contains(&hp.gamma),
        "[0, 1]",
        hp.gamma.to_string(),
    );
    check(
        "epsilon",
        (0.0..=1.0).contains(&hp.epsilon),
        "[0, 1]",
        hp.epsilon.to_string(),
    );
    check(
        "total_episodes",
        hp.total_episodes >= 1,
        "[1, inf)",
        hp.total_episodes.to_string(),
    );
    if let Some(beta) = hp.beta {
        check(
            "beta",
            beta > 0.0 && beta <= 1.0,
            "(0, 1]",
            beta.to_string(),
        );
    }
    out
}

/// All environment checks, including the dead-state rule.
pub fn validate_environment(env: &EnvironmentSpec) -> Vec<Diagnostic> {
    let mut out = validate_states(&env.states);
    out.extend(validate_actions(&env.states, &env.actions));
    out.extend(validate_rewards(&env.states, &env.rewards));
    out.extend(validate_terminals(&env.states, &env.terminal_states));
    for (i, (name, row)) in env.states.iter().zip(&env.actions).enumerate() {
        if row.is_empty() && !env.terminal_states.contains(name) {
            out.push(Diagnostic::error(
                DiagnosticCode::EmptyActionNonTerminal,
                format!("actions[{i}]"),
                format!("non-terminal state `{name}` has no actions"),
            ));
        }
    }
    out
}

/// An empty error set means the model can be compiled and trained.
pub fn validate_model(model: &Model) -> Vec<Diagnostic> {
    let mut out = validate_environment(model.environment());
    match model {
        Model::Single(m) => out.extend(validate_hyperparameters(&m.agent.hyperparameters, "agent")),
        Model::Comparator(m) => {
            for (i, agent) in m.agents.iter().enumerate() {
                out.extend(validate_hyperparameters(
                    &agent.hyperparameters,
                    &format!("agents[{i}]"),
                ));
            }
        }
    }
    out
}
