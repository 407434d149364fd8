//! Standalone program generation.
//!
//! Every target is a set of embedded template fragments: a prelude holding
//! the generator, environment helpers and result rendering, one training
//! fragment per algorithm, and a root fragment with the `run` entry point.
//! Fragments carry `{{NAME}}` placeholders that are filled in a single pass,
//! so substituted text is never rescanned.

use std::fmt;
use std::str::FromStr;

use crate::model::{AgentSpec, AlgorithmKind, ComparatorModel, EnvironmentSpec, Model, RlmlModel};
use crate::validate::{has_errors, validate_model, Diagnostic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodegenTarget {
    PythonFlavor,
    JvmFlavor,
}

impl CodegenTarget {
    pub const ALL: [CodegenTarget; 2] = [CodegenTarget::PythonFlavor, CodegenTarget::JvmFlavor];

    pub fn as_str(self) -> &'static str {
        match self {
            CodegenTarget::PythonFlavor => "python_flavor",
            CodegenTarget::JvmFlavor => "jvm_flavor",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            CodegenTarget::PythonFlavor => "py",
            CodegenTarget::JvmFlavor => "java",
        }
    }
}

impl fmt::Display for CodegenTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown target `{0}` (expected python_flavor or jvm_flavor)")]
pub struct UnknownTarget(pub String);

impl FromStr for CodegenTarget {
    type Err = UnknownTarget;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CodegenTarget::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| UnknownTarget(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedProgram {
    /// `<ModelName>.<ext>`.
    pub filename: String,
    pub source_text: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CodegenError {
    #[error("model has {} validation error(s)", .0.iter().filter(|d| d.is_error()).count())]
    Invalid(Vec<Diagnostic>),
    #[error("no {target} template for algorithm {algorithm}")]
    UnsupportedAlgorithm {
        algorithm: AlgorithmKind,
        target: CodegenTarget,
    },
    #[error("model name `{name}` is a reserved word in {target}")]
    ReservedName { name: String, target: CodegenTarget },
}

mod python {
    pub const PRELUDE: &str = include_str!("templates/python/prelude.py");
    pub const SINGLE: &str = include_str!("templates/python/single.py");
    pub const COMPARATOR: &str = include_str!("templates/python/comparator.py");
    pub const Q_LEARNING: &str = include_str!("templates/python/q_learning.py");
    pub const SARSA: &str = include_str!("templates/python/sarsa.py");
    pub const ACTOR_CRITIC: &str = include_str!("templates/python/actor_critic.py");
    pub const MONTE_CARLO: &str = include_str!("templates/python/monte_carlo.py");

    pub const RESERVED: &[&str] = &[
        "False",
        "None",
        "True",
        "and",
        "as",
        "assert",
        "async",
        "await",
        "break",
        "class",
        "continue",
        "def",
        "del",
        "elif",
        "else",
        "except",
        "finally",
        "for",
        "from",
        "global",
        "if",
        "import",
        "in",
        "is",
        "lambda",
        "nonlocal",
        "not",
        "or",
        "pass",
        "raise",
        "return",
        "try",
        "while",
        "with",
        "yield",
        "Environment",
        "SplitMix64",
    ];
}

mod java {
    pub const PRELUDE: &str = include_str!("templates/java/prelude.java");
    pub const SINGLE: &str = include_str!("templates/java/single.java");
    pub const COMPARATOR: &str = include_str!("templates/java/comparator.java");
    pub const Q_LEARNING: &str = include_str!("templates/java/q_learning.java");
    pub const SARSA: &str = include_str!("templates/java/sarsa.java");
    pub const ACTOR_CRITIC: &str = include_str!("templates/java/actor_critic.java");
    pub const MONTE_CARLO: &str = include_str!("templates/java/monte_carlo.java");

    pub const RESERVED: &[&str] = &[
        "abstract",
        "assert",
        "boolean",
        "break",
        "byte",
        "case",
        "catch",
        "char",
        "class",
        "const",
        "continue",
        "default",
        "do",
        "double",
        "else",
        "enum",
        "extends",
        "final",
        "finally",
        "float",
        "for",
        "goto",
        "if",
        "implements",
        "import",
        "instanceof",
        "int",
        "interface",
        "long",
        "native",
        "new",
        "package",
        "private",
        "protected",
        "public",
        "return",
        "short",
        "static",
        "strictfp",
        "super",
        "switch",
        "synchronized",
        "this",
        "throw",
        "throws",
        "transient",
        "try",
        "void",
        "volatile",
        "while",
        "true",
        "false",
        "null",
        "var",
        "record",
        "yield",
        "_",
        "SplitMix64",
        "String",
        "Math",
        "List",
        "ArrayList",
        "BigDecimal",
        "RoundingMode",
        "System",
        "Object",
    ];
}

/// Training fragment and entry function name for `algorithm` on `target`.
fn fragment(
    algorithm: AlgorithmKind,
    target: CodegenTarget,
) -> Result<(&'static str, &'static str), CodegenError> {
    use AlgorithmKind::*;
    Ok(match (target, algorithm) {
        (CodegenTarget::PythonFlavor, QLearning) => (python::Q_LEARNING, "train_q_learning"),
        (CodegenTarget::PythonFlavor, Sarsa) => (python::SARSA, "train_sarsa"),
        (CodegenTarget::PythonFlavor, ActorCritic) => (python::ACTOR_CRITIC, "train_actor_critic"),
        (CodegenTarget::PythonFlavor, MonteCarlo) => (python::MONTE_CARLO, "train_monte_carlo"),
        (CodegenTarget::JvmFlavor, QLearning) => (java::Q_LEARNING, "trainQLearning"),
        (CodegenTarget::JvmFlavor, Sarsa) => (java::SARSA, "trainSarsa"),
        (CodegenTarget::JvmFlavor, ActorCritic) => (java::ACTOR_CRITIC, "trainActorCritic"),
        (CodegenTarget::JvmFlavor, MonteCarlo) => (java::MONTE_CARLO, "trainMonteCarlo"),
    })
}

/// Fill `{{KEY}}` placeholders in one left-to-right pass.
///
/// Panics on a placeholder without a value; templates are fixed at build
/// time, so that is a programming error.
fn fill(template: &str, values: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(start) = rest.find("{{") {
        let key_end = rest[start + 2..]
            .find("}}")
            .map(|e| start + 2 + e)
            .filter(|&e| {
                let key = &rest[start + 2..e];
                !key.is_empty() && key.bytes().all(|b| b.is_ascii_uppercase() || b == b'_')
            });
        match key_end {
            Some(end) => {
                let key = &rest[start + 2..end];
                let value = values
                    .iter()
                    .find(|(k, _)| *k == key)
                    .unwrap_or_else(|| panic!("template placeholder {{{{{key}}}}} has no value"))
                    .1;
                out.push_str(&rest[..start]);
                out.push_str(value);
                rest = &rest[end + 2..];
            }
            None => {
                out.push_str(&rest[..start + 2]);
                rest = &rest[start + 2..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn float_literal(v: f64) -> String {
    // Debug output is the shortest text that parses back to the same value
    // and always carries a `.` or an exponent.
    format!("{v:?}")
}

fn join<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> String) -> String {
    items.into_iter().map(f).collect::<Vec<_>>().join(", ")
}

struct EnvLiterals {
    states: String,
    actions: String,
    rewards: String,
    terminal: String,
}

fn env_literals(env: &EnvironmentSpec, target: CodegenTarget) -> EnvLiterals {
    let terminal_flags = env.states.iter().map(|s| env.terminal_states.contains(s));
    let (open, close) = match target {
        CodegenTarget::PythonFlavor => ("[", "]"),
        CodegenTarget::JvmFlavor => ("{", "}"),
    };
    let list = |body: String| format!("{open}{body}{close}");
    EnvLiterals {
        states: list(join(&env.states, |s| format!("\"{s}\""))),
        actions: list(join(&env.actions, |row| list(join(row, |i| i.to_string())))),
        rewards: list(join(&env.rewards, |row| {
            list(join(row, |&v| float_literal(v)))
        })),
        terminal: list(join(terminal_flags, |t| match (target, t) {
            (CodegenTarget::PythonFlavor, true) => "True".into(),
            (CodegenTarget::PythonFlavor, false) => "False".into(),
            (CodegenTarget::JvmFlavor, t) => t.to_string(),
        })),
    }
}

fn python_settings(agent: &AgentSpec) -> String {
    let hp = &agent.hyperparameters;
    let beta = hp.beta.map(float_literal).unwrap_or_else(|| "None".into());
    format!(
        "{{\"alpha\": {}, \"gamma\": {}, \"epsilon\": {}, \"total_episodes\": {}, \"beta\": {}}}",
        float_literal(hp.alpha),
        float_literal(hp.gamma),
        float_literal(hp.epsilon),
        hp.total_episodes,
        beta,
    )
}

fn java_settings(agent: &AgentSpec) -> String {
    let hp = &agent.hyperparameters;
    format!(
        "{{{}, {}, {}, {}}}",
        float_literal(hp.alpha),
        float_literal(hp.gamma),
        float_literal(hp.epsilon),
        float_literal(hp.critic_rate()),
    )
}

/// Distinct algorithms in order of first appearance.
fn distinct_algorithms(agents: &[AgentSpec]) -> Vec<AlgorithmKind> {
    let mut out = Vec::new();
    for a in agents {
        if !out.contains(&a.algorithm) {
            out.push(a.algorithm);
        }
    }
    out
}

fn check(model: &Model, target: CodegenTarget) -> Result<(), CodegenError> {
    let diagnostics = validate_model(model);
    if has_errors(&diagnostics) {
        return Err(CodegenError::Invalid(diagnostics));
    }
    let reserved = match target {
        CodegenTarget::PythonFlavor => python::RESERVED,
        CodegenTarget::JvmFlavor => java::RESERVED,
    };
    if reserved.contains(&model.name()) {
        return Err(CodegenError::ReservedName {
            name: model.name().to_string(),
            target,
        });
    }
    Ok(())
}

fn build(
    name: &str,
    env: &EnvironmentSpec,
    agents: &[AgentSpec],
    comparator: bool,
    target: CodegenTarget,
) -> Result<GeneratedProgram, CodegenError> {
    let lits = env_literals(env, target);
    let algorithms = distinct_algorithms(agents);
    let mut fragments = Vec::new();
    for &a in &algorithms {
        fragments.push(fragment(a, target)?);
    }

    let mut source = String::new();
    match target {
        CodegenTarget::PythonFlavor => {
            source.push_str(&fill(python::PRELUDE, &[("NAME", name)]));
            for (text, _) in &fragments {
                source.push_str(text);
            }
            let extra: Vec<(&str, String)> = if comparator {
                let trainers = algorithms
                    .iter()
                    .zip(&fragments)
                    .map(|(a, (_, f))| format!("    \"{a}\": {f},"))
                    .collect::<Vec<_>>()
                    .join("\n");
                let agents_lit = agents
                    .iter()
                    .map(|a| format!("        (\"{}\", {}),", a.algorithm, python_settings(a)))
                    .collect::<Vec<_>>()
                    .join("\n");
                vec![("TRAINERS", trainers), ("AGENTS", agents_lit)]
            } else {
                vec![
                    ("ALGORITHM", agents[0].algorithm.to_string()),
                    ("SETTINGS", python_settings(&agents[0])),
                    ("TRAINER", fragments[0].1.to_string()),
                ]
            };
            let mut values: Vec<(&str, &str)> = vec![
                ("NAME", name),
                ("STATES", &lits.states),
                ("ACTIONS", &lits.actions),
                ("REWARDS", &lits.rewards),
                ("TERMINAL", &lits.terminal),
            ];
            values.extend(extra.iter().map(|(k, v)| (*k, v.as_str())));
            let root = if comparator {
                python::COMPARATOR
            } else {
                python::SINGLE
            };
            source.push_str(&fill(root, &values));
        }
        CodegenTarget::JvmFlavor => {
            let algorithms_lit =
                format!("{{{}}}", join(agents, |a| format!("\"{}\"", a.algorithm)));
            let settings_lit = format!("{{{}}}", join(agents, java_settings));
            let episodes_lit = format!(
                "{{{}}}",
                join(agents, |a| format!("{}L", a.hyperparameters.total_episodes))
            );
            source.push_str(&fill(
                java::PRELUDE,
                &[
                    ("NAME", name),
                    ("STATES", &lits.states),
                    ("ACTIONS", &lits.actions),
                    ("REWARDS", &lits.rewards),
                    ("TERMINAL", &lits.terminal),
                    ("ALGORITHMS", &algorithms_lit),
                    ("SETTINGS", &settings_lit),
                    ("EPISODES", &episodes_lit),
                ],
            ));
            for (text, _) in &fragments {
                source.push_str(text);
            }
            if comparator {
                let dispatch = algorithms
                    .iter()
                    .zip(&fragments)
                    .map(|(a, (_, f))| {
                        format!(
                            "            case \"{a}\":\n                return {f}(SETTINGS[k], EPISODES[k], seed);"
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n");
                source.push_str(&fill(
                    java::COMPARATOR,
                    &[("NAME", name), ("DISPATCH", &dispatch)],
                ));
            } else {
                source.push_str(&fill(
                    java::SINGLE,
                    &[("NAME", name), ("TRAINER", fragments[0].1)],
                ));
            }
        }
    }

    Ok(GeneratedProgram {
        filename: format!("{name}.{}", target.extension()),
        source_text: source,
    })
}

/// Generate a program that trains the model's agent and prints its result.
pub fn generate(
    model: &RlmlModel,
    target: CodegenTarget,
) -> Result<GeneratedProgram, CodegenError> {
    check(&Model::Single(model.clone()), target)?;
    build(
        &model.name,
        &model.environment,
        std::slice::from_ref(&model.agent),
        false,
        target,
    )
}

/// Generate a program that trains every agent in order and prints one
/// block per agent.
pub fn generate_comparator(
    model: &ComparatorModel,
    target: CodegenTarget,
) -> Result<GeneratedProgram, CodegenError> {
    check(&Model::Comparator(model.clone()), target)?;
    build(&model.name, &model.environment, &model.agents, true, target)
}

pub fn generate_model(
    model: &Model,
    target: CodegenTarget,
) -> Result<GeneratedProgram, CodegenError> {
    match model {
        Model::Single(m) => generate(m, target),
        Model::Comparator(m) => generate_comparator(m, target),
    }
}
