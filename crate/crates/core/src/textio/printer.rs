use std::fmt::Write;

use crate::model::{AgentSpec, EnvironmentSpec, InputSource, Model};

/// Shortest decimal that parses back to the same value.
pub fn format_number(v: f64) -> String {
    format!("{v}")
}

fn state_token(name: &str) -> String {
    let plain = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '+' | '-'));
    if plain {
        name.to_string()
    } else {
        format!("\"{name}\"")
    }
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

/// The four environment entries at the given indentation, one per line
/// (reward rows one per line). This is also the environment import file
/// format.
pub fn print_environment_body(env: &EnvironmentSpec, indent: &str) -> String {
    let mut out = String::new();
    let states = join(&env.states, |s| state_token(s));
    let actions = join(&env.actions, |row| {
        format!("[{}]", join(row, |i| i.to_string()))
    });
    let _ = writeln!(out, "{indent}states: [{states}]");
    let _ = writeln!(out, "{indent}actions: [{actions}]");
    if env.rewards.is_empty() {
        let _ = writeln!(out, "{indent}rewards: []");
    } else {
        let _ = writeln!(out, "{indent}rewards: [");
        for (i, row) in env.rewards.iter().enumerate() {
            let sep = if i + 1 < env.rewards.len() { "," } else { "" };
            let _ = writeln!(out, "{indent}  [{}]{sep}", join(row, |v| format_number(*v)));
        }
        let _ = writeln!(out, "{indent}]");
    }
    let terminals = join(&env.terminal_states, |s| state_token(s));
    let _ = writeln!(out, "{indent}terminal_states: [{terminals}]");
    out
}

fn print_agent(out: &mut String, agent: &AgentSpec) {
    let hp = &agent.hyperparameters;
    let _ = writeln!(out, "  agent {} {{", agent.algorithm);
    let _ = writeln!(out, "    alpha: {}", format_number(hp.alpha));
    let _ = writeln!(out, "    gamma: {}", format_number(hp.gamma));
    let _ = writeln!(out, "    epsilon: {}", format_number(hp.epsilon));
    let _ = writeln!(out, "    total_episodes: {}", hp.total_episodes);
    if let Some(beta) = hp.beta {
        let _ = writeln!(out, "    beta: {}", format_number(beta));
    }
    out.push_str("  }\n");
}

/// Canonical text for a model. Parsing the result yields an equal model.
pub fn print_model(model: &Model) -> String {
    let root = match model {
        Model::Single(_) => "rlml",
        Model::Comparator(_) => "rlml_comparator",
    };
    let mut out = format!("{root} {} {{\n", model.name());
    match model.input_source() {
        InputSource::Inline => {
            out.push_str("  environment {\n");
            out.push_str(&print_environment_body(model.environment(), "    "));
            out.push_str("  }\n");
        }
        InputSource::File(path) => {
            let _ = writeln!(out, "  environment from \"{path}\"");
        }
    }
    for agent in model.agents() {
        print_agent(&mut out, agent);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AlgorithmKind, ComparatorModel, Hyperparameters};
    use crate::textio::parse_model;

    fn agent(algorithm: AlgorithmKind, alpha: f64) -> AgentSpec {
        AgentSpec {
            algorithm,
            hyperparameters: Hyperparameters {
                alpha,
                gamma: 0.9,
                epsilon: 0.1,
                total_episodes: 10,
                beta: None,
            },
        }
    }

    fn comparator() -> Model {
        Model::Comparator(ComparatorModel {
            name: "Three".into(),
            environment: EnvironmentSpec {
                states: vec!["A".into(), "B".into()],
                actions: vec![vec![1], vec![]],
                rewards: vec![vec![0.0, 1.5], vec![-0.25, 0.0]],
                terminal_states: vec!["B".into()],
            },
            agents: vec![
                agent(AlgorithmKind::Sarsa, 0.3),
                agent(AlgorithmKind::QLearning, 0.1),
                agent(AlgorithmKind::ActorCritic, 0.2),
            ],
            input_source: InputSource::Inline,
        })
    }

    #[test]
    fn comparator_agent_order_preserved() {
        let text = print_model(&comparator());
        let sarsa = text.find("agent SARSA").unwrap();
        let q = text.find("agent QLearning").unwrap();
        let ac = text.find("agent ActorCritic").unwrap();
        assert!(sarsa < q && q < ac);
        assert_eq!(parse_model(&text).unwrap(), comparator());
    }

    #[test]
    fn printing_is_deterministic() {
        assert_eq!(print_model(&comparator()), print_model(&comparator()));
    }

    #[test]
    fn canonical_layout() {
        let expected = "\
rlml_comparator Three {
  environment {
    states: [A, B]
    actions: [[1], []]
    rewards: [
      [0, 1.5],
      [-0.25, 0]
    ]
    terminal_states: [B]
  }
  agent SARSA {
    alpha: 0.3
    gamma: 0.9
    epsilon: 0.1
    total_episodes: 10
  }
";
        assert!(print_model(&comparator()).starts_with(expected));
    }

    #[test]
    fn odd_state_names_are_quoted() {
        let mut m = comparator();
        m.environment_mut().states[0] = "A B".into();
        let text = print_model(&m);
        assert!(text.contains("states: [\"A B\", B]"));
        assert_eq!(parse_model(&text).unwrap(), m);
    }
}
