//! Compiled deterministic tabular MDP and episode primitives.
//!
//! An action is a position in the current state's allowed-successor list;
//! taking it moves the agent to that successor and pays `reward[s][s']`.

use crate::model::EnvironmentSpec;
use crate::rng::Rng;
use crate::validate::{has_errors, validate_environment};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MdpError {
    #[error("environment is not valid: {0}")]
    Compile(String),
    #[error("every state is terminal; there is no start state")]
    NoStartState,
    #[error("invalid action {action} in state {state}")]
    InvalidAction { state: usize, action: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mdp {
    names: Vec<String>,
    allowed: Vec<Vec<usize>>,
    reward: Vec<Vec<f64>>,
    terminal: Vec<bool>,
    starts: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub next: usize,
    pub reward: f64,
    pub done: bool,
}

impl Mdp {
    /// Compile a validated environment. Fails if validation reports errors.
    pub fn compile(env: &EnvironmentSpec) -> Result<Mdp, MdpError> {
        let diagnostics = validate_environment(env);
        if has_errors(&diagnostics) {
            let first = diagnostics.iter().find(|d| d.is_error()).unwrap();
            return Err(MdpError::Compile(first.to_string()));
        }
        let terminal: Vec<bool> = env
            .states
            .iter()
            .map(|s| env.terminal_states.contains(s))
            .collect();
        let allowed = env
            .actions
            .iter()
            .map(|row| row.iter().map(|&i| i as usize).collect())
            .collect();
        let starts = (0..env.states.len()).filter(|&s| !terminal[s]).collect();
        Ok(Mdp {
            names: env.states.clone(),
            allowed,
            reward: env.rewards.clone(),
            terminal,
            starts,
        })
    }

    pub fn n_states(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn allowed(&self, s: usize) -> &[usize] {
        &self.allowed[s]
    }

    pub fn reward(&self, s: usize, next: usize) -> f64 {
        self.reward[s][next]
    }

    pub fn rewards(&self) -> &[Vec<f64>] {
        &self.reward
    }

    pub fn is_terminal(&self, s: usize) -> bool {
        self.terminal[s]
    }

    pub fn non_terminal_states(&self) -> &[usize] {
        &self.starts
    }

    /// Largest absolute reward over the whole matrix.
    pub fn max_abs_reward(&self) -> f64 {
        self.reward
            .iter()
            .flatten()
            .fold(0.0, |m: f64, r| m.max(r.abs()))
    }

    /// Per-episode step cap.
    pub fn step_cap(&self) -> usize {
        100 * self.n_states()
    }

    /// Uniform draw over non-terminal states.
    pub fn reset(&self, rng: &mut Rng) -> Result<usize, MdpError> {
        if self.starts.is_empty() {
            return Err(MdpError::NoStartState);
        }
        Ok(self.starts[rng.below(self.starts.len())])
    }

    pub fn step(&self, state: usize, action: usize) -> Result<Transition, MdpError> {
        let invalid = MdpError::InvalidAction { state, action };
        if state >= self.n_states() || self.terminal[state] {
            return Err(invalid);
        }
        let &next = self.allowed[state].get(action).ok_or(invalid)?;
        Ok(Transition {
            next,
            reward: self.reward[state][next],
            done: self.terminal[next],
        })
    }
}
