//! Tabular training, greedy policies, rollouts and result rendering.

mod algorithms;
mod persist;

use std::fmt::Write;

use serde::{Deserialize, Serialize};

pub use algorithms::{
    monte_carlo_update, q_learning_update, sarsa_update, train, train_actor_critic, train_from,
    train_monte_carlo, train_q_learning, train_sarsa, LoggedStep, TrainError,
};
pub use persist::{load_model, save_model, PersistError, TrainedModelFile, FORMAT_VERSION};

use crate::mdp::Mdp;
use crate::model::AlgorithmKind;
use crate::rng::Rng;

/// Action values indexed `[state][successor]`. Only cells for allowed
/// successors are ever written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QTable {
    pub values: Vec<Vec<f64>>,
    /// Number of updates applied to each cell. Monte Carlo uses it as the
    /// first-visit count of its running mean.
    pub visits: Vec<Vec<u64>>,
}

impl QTable {
    pub fn zeros(n: usize) -> Self {
        QTable {
            values: vec![vec![0.0; n]; n],
            visits: vec![vec![0; n]; n],
        }
    }

    /// Largest value over the allowed successors of `s`; 0 when there are none.
    pub fn max_allowed(&self, mdp: &Mdp, s: usize) -> f64 {
        mdp.allowed(s)
            .iter()
            .map(|&n| self.values[s][n])
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))))
            .unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActorCriticTables {
    /// Critic state values.
    pub v: Vec<f64>,
    /// Actor preferences indexed `[state][successor]`.
    pub h: Vec<Vec<f64>>,
}

impl ActorCriticTables {
    pub fn zeros(n: usize) -> Self {
        ActorCriticTables {
            v: vec![0.0; n],
            h: vec![vec![0.0; n]; n],
        }
    }

    /// Softmax over the preferences of the allowed successors of `s`.
    pub fn policy_probs(&self, mdp: &Mdp, s: usize) -> Vec<f64> {
        let prefs: Vec<f64> = mdp.allowed(s).iter().map(|&n| self.h[s][n]).collect();
        softmax(&prefs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tables {
    QTable(QTable),
    ActorCritic(ActorCriticTables),
}

impl Tables {
    pub fn n_states(&self) -> usize {
        match self {
            Tables::QTable(q) => q.values.len(),
            Tables::ActorCritic(t) => t.v.len(),
        }
    }

    /// The matrix shown in results and used for the greedy policy.
    pub fn matrix(&self) -> &[Vec<f64>] {
        match self {
            Tables::QTable(q) => &q.values,
            Tables::ActorCritic(t) => &t.h,
        }
    }

    pub fn is_square(&self, n: usize) -> bool {
        let rows_ok = |m: &[Vec<f64>]| m.len() == n && m.iter().all(|r| r.len() == n);
        match self {
            Tables::QTable(q) => {
                rows_ok(&q.values) && q.visits.len() == n && q.visits.iter().all(|r| r.len() == n)
            }
            Tables::ActorCritic(t) => t.v.len() == n && rows_ok(&t.h),
        }
    }
}

/// Chosen successor for every non-terminal state; `None` for terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy(pub Vec<Option<usize>>);

impl Policy {
    pub fn next(&self, s: usize) -> Option<usize> {
        self.0.get(s).copied().flatten()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub algorithm: AlgorithmKind,
    pub tables: Tables,
    pub policy: Policy,
    /// Discounted return from the start state, one per episode.
    pub episode_returns: Vec<f64>,
    pub steps_total: u64,
    pub result_text: String,
}

/// Position of the largest value; ties go to the lowest position.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// With probability `epsilon` a uniform position, otherwise [`argmax`].
/// No random number is consumed when `epsilon` is 0.
pub fn epsilon_greedy(values: &[f64], epsilon: f64, rng: &mut Rng) -> usize {
    debug_assert!(!values.is_empty());
    if epsilon > 0.0 && rng.next_f64() < epsilon {
        rng.below(values.len())
    } else {
        argmax(values)
    }
}

pub fn softmax(prefs: &[f64]) -> Vec<f64> {
    let max = prefs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = prefs.iter().map(|p| (p - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Greedy policy over the Q values (or actor preferences).
pub fn derive_policy(tables: &Tables, mdp: &Mdp) -> Policy {
    let matrix = tables.matrix();
    Policy(
        (0..mdp.n_states())
            .map(|s| {
                if mdp.is_terminal(s) || mdp.allowed(s).is_empty() {
                    return None;
                }
                let row: Vec<f64> = mdp.allowed(s).iter().map(|&n| matrix[s][n]).collect();
                Some(mdp.allowed(s)[argmax(&row)])
            })
            .collect(),
    )
}

/// States visited when following `policy` from `start`, including both
/// ends. Stops at a terminal state or after `cap` moves.
pub fn rollout(mdp: &Mdp, policy: &Policy, start: usize, cap: usize) -> Vec<usize> {
    let mut path = vec![start];
    let mut s = start;
    for _ in 0..cap {
        if mdp.is_terminal(s) {
            break;
        }
        match policy.next(s) {
            Some(n) => {
                path.push(n);
                s = n;
            }
            None => break,
        }
    }
    path
}

/// The `Q-Table:` / `Policy:` result block.
pub fn render_result(tables: &Tables, policy: &Policy, mdp: &Mdp) -> String {
    let mut out = String::from("Q-Table:\n");
    for (s, row) in tables.matrix().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.2}")).collect();
        let _ = writeln!(out, "{}: [{}]", mdp.name(s), cells.join(", "));
    }
    out.push_str("\nPolicy:\n");
    for s in 0..mdp.n_states() {
        if let Some(n) = policy.next(s) {
            let _ = writeln!(out, "{} -> {}", mdp.name(s), mdp.name(n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EnvironmentSpec;

    pub(crate) fn path_finding() -> Mdp {
        let mut rewards = vec![vec![0.0; 6]; 6];
        rewards[1][2] = 100.0;
        rewards[5][2] = 100.0;
        Mdp::compile(&EnvironmentSpec {
            states: ["A", "B", "C", "D", "E", "F"].map(String::from).to_vec(),
            actions: vec![
                vec![1, 3],
                vec![0, 2, 4],
                vec![2],
                vec![0, 4],
                vec![1, 3, 5],
                vec![2, 4],
            ],
            rewards,
            terminal_states: vec!["C".into()],
        })
        .unwrap()
    }

    #[test]
    fn greedy_choice() {
        let mut rng = Rng::new(0);
        assert_eq!(epsilon_greedy(&[1.0, 3.0, 2.0], 0.0, &mut rng), 1);
        assert_eq!(epsilon_greedy(&[2.0, 2.0], 0.0, &mut rng), 0);
        // epsilon 0 leaves the stream untouched
        assert_eq!(rng, Rng::new(0));
    }

    #[test]
    fn full_exploration_is_uniform() {
        let mut rng = Rng::new(99);
        let mut counts = [0usize; 4];
        let values = [5.0, 1.0, 1.0, 1.0];
        for _ in 0..10_000 {
            counts[epsilon_greedy(&values, 1.0, &mut rng)] += 1;
        }
        for c in counts {
            let freq = c as f64 / 10_000.0;
            assert!((freq - 0.25).abs() <= 0.02, "{counts:?}");
        }
    }

    #[test]
    fn softmax_uniform_for_equal_preferences() {
        let p = softmax(&[0.3, 0.3, 0.3]);
        for x in &p {
            assert!((x - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let p = softmax(&[1000.0, -1000.0]);
        assert!((p[0] - 1.0).abs() < 1e-12 && p[1] >= 0.0);
    }

    #[test]
    fn policy_from_values() {
        let mdp = path_finding();
        let mut q = QTable::zeros(6);
        q.values[0][1] = 5.0;
        q.values[0][3] = 3.0;
        let policy = derive_policy(&Tables::QTable(q), &mdp);
        assert_eq!(policy.next(0), Some(1));

        let zero = derive_policy(&Tables::QTable(QTable::zeros(6)), &mdp);
        for s in 0..6 {
            if s == 2 {
                assert_eq!(zero.next(s), None);
            } else {
                assert_eq!(zero.next(s), Some(mdp.allowed(s)[0]));
            }
        }
    }

    #[test]
    fn rollout_respects_cap() {
        let mdp = path_finding();
        // all-zero policy: A -> B -> A -> ...
        let policy = derive_policy(&Tables::QTable(QTable::zeros(6)), &mdp);
        let path = rollout(&mdp, &policy, 0, 10);
        assert_eq!(path.len(), 11);
        // F -> C in one move
        assert_eq!(rollout(&mdp, &policy, 5, 10), [5, 2]);
    }

    #[test]
    fn render_format() {
        let mdp = path_finding();
        let mut q = QTable::zeros(6);
        q.values[1][2] = 10.0;
        q.values[0][1] = 1.005;
        let tables = Tables::QTable(q);
        let policy = derive_policy(&tables, &mdp);
        let text = render_result(&tables, &policy, &mdp);
        let expected = "\
Q-Table:
A: [0.00, 1.00, 0.00, 0.00, 0.00, 0.00]
B: [0.00, 0.00, 10.00, 0.00, 0.00, 0.00]
C: [0.00, 0.00, 0.00, 0.00, 0.00, 0.00]
D: [0.00, 0.00, 0.00, 0.00, 0.00, 0.00]
E: [0.00, 0.00, 0.00, 0.00, 0.00, 0.00]
F: [0.00, 0.00, 0.00, 0.00, 0.00, 0.00]

Policy:
A -> B
B -> C
D -> A
E -> B
F -> C
";
        assert_eq!(text, expected);
        assert_eq!(text, render_result(&tables, &policy, &mdp));
    }
}
