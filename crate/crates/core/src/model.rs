//! Domain types shared by every stage of the toolchain.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Environment data exactly as authored, before validation.
///
/// Action rows hold signed integers so that out-of-range indices survive
/// parsing and can be reported by the validator.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EnvironmentSpec {
    pub states: Vec<String>,
    pub actions: Vec<Vec<i64>>,
    pub rewards: Vec<Vec<f64>>,
    pub terminal_states: Vec<String>,
}

/// Where the environment of a model came from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum InputSource {
    #[default]
    Inline,
    File(String),
}

/// Supported learning algorithms.
///
/// New algorithms are added by extending this enum, the engine dispatch in
/// [`crate::engine::train`] and one template fragment per code generation
/// target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgorithmKind {
    QLearning,
    #[serde(rename = "SARSA")]
    Sarsa,
    ActorCritic,
    MonteCarlo,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 4] = [
        AlgorithmKind::QLearning,
        AlgorithmKind::Sarsa,
        AlgorithmKind::ActorCritic,
        AlgorithmKind::MonteCarlo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmKind::QLearning => "QLearning",
            AlgorithmKind::Sarsa => "SARSA",
            AlgorithmKind::ActorCritic => "ActorCritic",
            AlgorithmKind::MonteCarlo => "MonteCarlo",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown algorithm `{0}` (expected QLearning, SARSA, ActorCritic or MonteCarlo)")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for AlgorithmKind {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    /// Learning rate, in (0, 1].
    pub alpha: f64,
    /// Discount factor, in [0, 1].
    pub gamma: f64,
    /// Exploration rate, in [0, 1].
    pub epsilon: f64,
    pub total_episodes: u64,
    /// Critic learning rate for actor-critic; falls back to `alpha`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl Hyperparameters {
    pub fn critic_rate(&self) -> f64 {
        self.beta.unwrap_or(self.alpha)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentSpec {
    pub algorithm: AlgorithmKind,
    pub hyperparameters: Hyperparameters,
}

/// A single-agent model (`rlml` root).
#[derive(Debug, Clone, PartialEq)]
pub struct RlmlModel {
    pub name: String,
    pub environment: EnvironmentSpec,
    pub agent: AgentSpec,
    pub input_source: InputSource,
}

/// A multi-agent model (`rlml_comparator` root). Always holds at least two
/// agents sharing one environment.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparatorModel {
    pub name: String,
    pub environment: EnvironmentSpec,
    pub agents: Vec<AgentSpec>,
    pub input_source: InputSource,
}

/// Either root element.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Single(RlmlModel),
    Comparator(ComparatorModel),
}

impl Model {
    pub fn name(&self) -> &str {
        match self {
            Model::Single(m) => &m.name,
            Model::Comparator(m) => &m.name,
        }
    }

    pub fn environment(&self) -> &EnvironmentSpec {
        match self {
            Model::Single(m) => &m.environment,
            Model::Comparator(m) => &m.environment,
        }
    }

    pub fn environment_mut(&mut self) -> &mut EnvironmentSpec {
        match self {
            Model::Single(m) => &mut m.environment,
            Model::Comparator(m) => &mut m.environment,
        }
    }

    pub fn input_source(&self) -> &InputSource {
        match self {
            Model::Single(m) => &m.input_source,
            Model::Comparator(m) => &m.input_source,
        }
    }

    pub fn set_input_source(&mut self, source: InputSource) {
        match self {
            Model::Single(m) => m.input_source = source,
            Model::Comparator(m) => m.input_source = source,
        }
    }

    pub fn agents(&self) -> &[AgentSpec] {
        match self {
            Model::Single(m) => std::slice::from_ref(&m.agent),
            Model::Comparator(m) => &m.agents,
        }
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Digest binding a trained model to the environment and settings it was
/// trained with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EnvironmentFingerprint(pub [u8; 32]);

impl EnvironmentFingerprint {
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        if s.len() != 64 || !s.is_ascii() {
            return None;
        }
        let mut out = [0u8; 32];
        for (i, byte) in out.iter_mut().enumerate() {
            *byte = u8::from_str_radix(&s[2 * i..2 * i + 2], 16).ok()?;
        }
        Some(EnvironmentFingerprint(out))
    }
}

impl fmt::Display for EnvironmentFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

fn canonical_environment(env: &EnvironmentSpec) -> String {
    let actions: Vec<String> = env
        .actions
        .iter()
        .map(|r| {
            r.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    let rewards: Vec<String> = env
        .rewards
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| format!("{v:?}"))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    format!(
        "states={}\nactions={}\nrewards={}\nterminal_states={}\n",
        env.states.join(","),
        actions.join(";"),
        rewards.join(";"),
        env.terminal_states.join(","),
    )
}

/// Canonical text the fingerprint is computed over.
///
/// `total_episodes` is left out: reusing a saved model with more episodes is
/// the supported way to continue training.
pub fn canonical_form(env: &EnvironmentSpec, hp: &Hyperparameters) -> String {
    let beta = hp
        .beta
        .map(|b| format!("{b:?}"))
        .unwrap_or_else(|| "-".into());
    format!(
        "{}alpha={:?}\ngamma={:?}\nepsilon={:?}\nbeta={}\n",
        canonical_environment(env),
        hp.alpha,
        hp.gamma,
        hp.epsilon,
        beta,
    )
}

/// SHA-256 over [`canonical_form`].
pub fn fingerprint(env: &EnvironmentSpec, hp: &Hyperparameters) -> EnvironmentFingerprint {
    let digest = Sha256::digest(canonical_form(env, hp).as_bytes());
    EnvironmentFingerprint(digest.into())
}

/// Digest of the environment alone, used to label comparison reports.
pub fn environment_fingerprint(env: &EnvironmentSpec) -> EnvironmentFingerprint {
    let digest = Sha256::digest(canonical_environment(env).as_bytes());
    EnvironmentFingerprint(digest.into())
}
