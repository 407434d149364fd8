use super::{
    derive_policy, render_result, ActorCriticTables, Policy, QTable, Tables, TrainOutcome,
};
use crate::mdp::{Mdp, Transition};
use crate::model::{AlgorithmKind, Hyperparameters};
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrainError {
    #[error("{algorithm} cannot resume from {found} tables")]
    TableKind {
        algorithm: AlgorithmKind,
        found: &'static str,
    },
    #[error("tables are shaped for {found} states but the environment has {expected}")]
    TableShape { expected: usize, found: usize },
}

/// One logged move for [`monte_carlo_update`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoggedStep {
    pub state: usize,
    pub next: usize,
    pub reward: f64,
}

/// One-step Q-learning update for the move `s -> t.next`.
pub fn q_learning_update(q: &mut QTable, mdp: &Mdp, s: usize, t: Transition, hp: &Hyperparameters) {
    let bootstrap = if t.done {
        0.0
    } else {
        q.max_allowed(mdp, t.next)
    };
    let target = t.reward + hp.gamma * bootstrap;
    let cell = &mut q.values[s][t.next];
    *cell += hp.alpha * (target - *cell);
    q.visits[s][t.next] += 1;
}

/// SARSA update for `s -> t.next`, bootstrapping on the already chosen
/// successor `next_choice` of `t.next` (ignored when `t.done`).
pub fn sarsa_update(
    q: &mut QTable,
    s: usize,
    t: Transition,
    next_choice: Option<usize>,
    hp: &Hyperparameters,
) {
    let bootstrap = match (t.done, next_choice) {
        (false, Some(n)) => q.values[t.next][n],
        _ => 0.0,
    };
    let target = t.reward + hp.gamma * bootstrap;
    let cell = &mut q.values[s][t.next];
    *cell += hp.alpha * (target - *cell);
    q.visits[s][t.next] += 1;
}

/// First-visit Monte Carlo: fold one finished episode into the running means.
pub fn monte_carlo_update(q: &mut QTable, episode: &[LoggedStep], gamma: f64) {
    let mut returns = vec![0.0; episode.len()];
    let mut g = 0.0;
    for (i, step) in episode.iter().enumerate().rev() {
        g = step.reward + gamma * g;
        returns[i] = g;
    }
    let n = q.values.len();
    let mut seen = vec![false; n * n];
    for (step, g) in episode.iter().zip(returns) {
        let key = step.state * n + step.next;
        if seen[key] {
            continue;
        }
        seen[key] = true;
        let count = &mut q.visits[step.state][step.next];
        *count += 1;
        let cell = &mut q.values[step.state][step.next];
        *cell += (g - *cell) / *count as f64;
    }
}

/// Epsilon-greedy over the allowed successors of `s`, without allocating.
fn choose(q: &QTable, mdp: &Mdp, s: usize, epsilon: f64, rng: &mut Rng) -> usize {
    let allowed = mdp.allowed(s);
    if epsilon > 0.0 && rng.next_f64() < epsilon {
        return rng.below(allowed.len());
    }
    let row = &q.values[s];
    let mut best = 0;
    for (i, &n) in allowed.iter().enumerate().skip(1) {
        if row[n] > row[allowed[best]] {
            best = i;
        }
    }
    best
}

fn sample(probs: &[f64], rng: &mut Rng) -> usize {
    let u = rng.next_f64();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

struct Stats {
    returns: Vec<f64>,
    steps: u64,
}

impl Stats {
    fn new(episodes: u64) -> Self {
        Stats {
            returns: Vec::with_capacity(episodes as usize),
            steps: 0,
        }
    }
}

fn q_learning_episode(
    q: &mut QTable,
    mdp: &Mdp,
    hp: &Hyperparameters,
    rng: &mut Rng,
) -> (f64, u64) {
    let Ok(mut s) = mdp.reset(rng) else {
        return (0.0, 0);
    };
    let (mut ret, mut discount, mut steps) = (0.0, 1.0, 0);
    for _ in 0..mdp.step_cap() {
        let a = choose(q, mdp, s, hp.epsilon, rng);
        let t = mdp.step(s, a).expect("chosen action is allowed");
        q_learning_update(q, mdp, s, t, hp);
        ret += discount * t.reward;
        discount *= hp.gamma;
        steps += 1;
        if t.done {
            break;
        }
        s = t.next;
    }
    (ret, steps)
}

fn sarsa_episode(q: &mut QTable, mdp: &Mdp, hp: &Hyperparameters, rng: &mut Rng) -> (f64, u64) {
    let Ok(mut s) = mdp.reset(rng) else {
        return (0.0, 0);
    };
    let mut a = choose(q, mdp, s, hp.epsilon, rng);
    let (mut ret, mut discount, mut steps) = (0.0, 1.0, 0);
    for _ in 0..mdp.step_cap() {
        let t = mdp.step(s, a).expect("chosen action is allowed");
        let next_a = (!t.done).then(|| choose(q, mdp, t.next, hp.epsilon, rng));
        sarsa_update(q, s, t, next_a.map(|p| mdp.allowed(t.next)[p]), hp);
        ret += discount * t.reward;
        discount *= hp.gamma;
        steps += 1;
        match next_a {
            Some(p) => {
                s = t.next;
                a = p;
            }
            None => break,
        }
    }
    (ret, steps)
}

fn actor_critic_episode(
    t: &mut ActorCriticTables,
    mdp: &Mdp,
    hp: &Hyperparameters,
    rng: &mut Rng,
) -> (f64, u64) {
    let Ok(mut s) = mdp.reset(rng) else {
        return (0.0, 0);
    };
    let (alpha, beta) = (hp.alpha, hp.critic_rate());
    let (mut ret, mut discount, mut steps) = (0.0, 1.0, 0);
    for _ in 0..mdp.step_cap() {
        let probs = t.policy_probs(mdp, s);
        let a = sample(&probs, rng);
        let tr = mdp.step(s, a).expect("sampled action is allowed");
        let next_value = if tr.done { 0.0 } else { t.v[tr.next] };
        let delta = tr.reward + hp.gamma * next_value - t.v[s];
        t.v[s] += beta * delta;
        for (b, &succ) in mdp.allowed(s).iter().enumerate() {
            let indicator = if b == a { 1.0 } else { 0.0 };
            t.h[s][succ] += alpha * delta * (indicator - probs[b]);
        }
        ret += discount * tr.reward;
        discount *= hp.gamma;
        steps += 1;
        if tr.done {
            break;
        }
        s = tr.next;
    }
    (ret, steps)
}

fn monte_carlo_episode(
    q: &mut QTable,
    mdp: &Mdp,
    hp: &Hyperparameters,
    rng: &mut Rng,
) -> (f64, u64) {
    let Ok(mut s) = mdp.reset(rng) else {
        return (0.0, 0);
    };
    let mut episode = Vec::new();
    for _ in 0..mdp.step_cap() {
        let a = choose(q, mdp, s, hp.epsilon, rng);
        let t = mdp.step(s, a).expect("chosen action is allowed");
        episode.push(LoggedStep {
            state: s,
            next: t.next,
            reward: t.reward,
        });
        if t.done {
            break;
        }
        s = t.next;
    }
    monte_carlo_update(q, &episode, hp.gamma);
    let (mut ret, mut discount) = (0.0, 1.0);
    for step in &episode {
        ret += discount * step.reward;
        discount *= hp.gamma;
    }
    (ret, episode.len() as u64)
}

fn check_bounded(tables: &Tables, mdp: &Mdp, gamma: f64) -> bool {
    let Tables::QTable(q) = tables else {
        return true;
    };
    if gamma >= 1.0 {
        return true;
    }
    let bound = mdp.max_abs_reward() / (1.0 - gamma) * (1.0 + 1e-9);
    q.values.iter().flatten().all(|v| v.abs() <= bound)
}

/// Train `algorithm` from zero-initialized tables.
pub fn train(algorithm: AlgorithmKind, mdp: &Mdp, hp: &Hyperparameters, seed: u64) -> TrainOutcome {
    let tables = match algorithm {
        AlgorithmKind::ActorCritic => Tables::ActorCritic(ActorCriticTables::zeros(mdp.n_states())),
        _ => Tables::QTable(QTable::zeros(mdp.n_states())),
    };
    run(algorithm, mdp, hp, seed, tables)
}

/// Continue training from existing tables for another `hp.total_episodes`.
pub fn train_from(
    algorithm: AlgorithmKind,
    mdp: &Mdp,
    hp: &Hyperparameters,
    seed: u64,
    tables: Tables,
) -> Result<TrainOutcome, TrainError> {
    let found = match &tables {
        Tables::QTable(_) => "Q-table",
        Tables::ActorCritic(_) => "actor-critic",
    };
    let kind_ok = matches!(
        (&tables, algorithm),
        (Tables::ActorCritic(_), AlgorithmKind::ActorCritic)
            | (Tables::QTable(_), AlgorithmKind::QLearning)
            | (Tables::QTable(_), AlgorithmKind::Sarsa)
            | (Tables::QTable(_), AlgorithmKind::MonteCarlo)
    );
    if !kind_ok {
        return Err(TrainError::TableKind { algorithm, found });
    }
    if !tables.is_square(mdp.n_states()) {
        return Err(TrainError::TableShape {
            expected: mdp.n_states(),
            found: tables.n_states(),
        });
    }
    Ok(run(algorithm, mdp, hp, seed, tables))
}

fn run(
    algorithm: AlgorithmKind,
    mdp: &Mdp,
    hp: &Hyperparameters,
    seed: u64,
    mut tables: Tables,
) -> TrainOutcome {
    let mut rng = Rng::new(seed);
    let mut stats = Stats::new(hp.total_episodes);
    for _ in 0..hp.total_episodes {
        let (ret, steps) = match (&mut tables, algorithm) {
            (Tables::QTable(q), AlgorithmKind::QLearning) => {
                q_learning_episode(q, mdp, hp, &mut rng)
            }
            (Tables::QTable(q), AlgorithmKind::Sarsa) => sarsa_episode(q, mdp, hp, &mut rng),
            (Tables::QTable(q), AlgorithmKind::MonteCarlo) => {
                monte_carlo_episode(q, mdp, hp, &mut rng)
            }
            (Tables::ActorCritic(t), AlgorithmKind::ActorCritic) => {
                actor_critic_episode(t, mdp, hp, &mut rng)
            }
            _ => unreachable!("table kind checked by caller"),
        };
        debug_assert!(check_bounded(&tables, mdp, hp.gamma));
        stats.returns.push(ret);
        stats.steps += steps;
    }
    let policy: Policy = derive_policy(&tables, mdp);
    let result_text = render_result(&tables, &policy, mdp);
    TrainOutcome {
        algorithm,
        tables,
        policy,
        episode_returns: stats.returns,
        steps_total: stats.steps,
        result_text,
    }
}

pub fn train_q_learning(mdp: &Mdp, hp: &Hyperparameters, seed: u64) -> TrainOutcome {
    train(AlgorithmKind::QLearning, mdp, hp, seed)
}

pub fn train_sarsa(mdp: &Mdp, hp: &Hyperparameters, seed: u64) -> TrainOutcome {
    train(AlgorithmKind::Sarsa, mdp, hp, seed)
}

pub fn train_actor_critic(mdp: &Mdp, hp: &Hyperparameters, seed: u64) -> TrainOutcome {
    train(AlgorithmKind::ActorCritic, mdp, hp, seed)
}

pub fn train_monte_carlo(mdp: &Mdp, hp: &Hyperparameters, seed: u64) -> TrainOutcome {
    train(AlgorithmKind::MonteCarlo, mdp, hp, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::rollout;
    use crate::engine::tests::path_finding;

    fn hp(alpha: f64, gamma: f64, epsilon: f64, episodes: u64) -> Hyperparameters {
        Hyperparameters {
            alpha,
            gamma,
            epsilon,
            total_episodes: episodes,
            beta: None,
        }
    }

    fn b_to_c(mdp: &Mdp) -> Transition {
        let pos = mdp.allowed(1).iter().position(|&s| s == 2).unwrap();
        mdp.step(1, pos).unwrap()
    }

    #[test]
    fn single_terminal_update_q_learning_and_sarsa() {
        let mdp = path_finding();
        let settings = hp(0.1, 0.9, 0.1, 1);
        let mut q = QTable::zeros(6);
        q_learning_update(&mut q, &mdp, 1, b_to_c(&mdp), &settings);
        assert_eq!(q.values[1][2], 10.0);
        let mut q2 = QTable::zeros(6);
        sarsa_update(&mut q2, 1, b_to_c(&mdp), None, &settings);
        assert_eq!(q2.values[1][2], 10.0);
    }

    #[test]
    fn monte_carlo_means() {
        let mut q = QTable::zeros(6);
        let step = LoggedStep {
            state: 1,
            next: 2,
            reward: 100.0,
        };
        monte_carlo_update(&mut q, &[step], 0.9);
        assert_eq!(q.values[1][2], 100.0);
        step_with_return(&mut q, 50.0);
        assert_eq!(q.values[1][2], 75.0);
        assert_eq!(q.visits[1][2], 2);
    }

    fn step_with_return(q: &mut QTable, g: f64) {
        monte_carlo_update(
            q,
            &[LoggedStep {
                state: 1,
                next: 2,
                reward: g,
            }],
            0.9,
        );
    }

    #[test]
    fn monte_carlo_first_visit_only() {
        // A -> B -> A -> B -> C: (A,B) first visited at t=0 with G = 0.81*10
        let mut q = QTable::zeros(3);
        let log = [
            LoggedStep {
                state: 0,
                next: 1,
                reward: 0.0,
            },
            LoggedStep {
                state: 1,
                next: 0,
                reward: 0.0,
            },
            LoggedStep {
                state: 0,
                next: 1,
                reward: 0.0,
            },
            LoggedStep {
                state: 1,
                next: 2,
                reward: 10.0,
            },
        ];
        monte_carlo_update(&mut q, &log, 0.9);
        assert_eq!(q.visits[0][1], 1);
        assert!((q.values[0][1] - 0.9f64.powi(3) * 10.0).abs() < 1e-12);
        assert!((q.values[1][0] - 0.9f64.powi(2) * 10.0).abs() < 1e-12);
        assert_eq!(q.values[1][2], 10.0);
    }

    #[test]
    fn q_learning_path_finding() {
        let mdp = path_finding();
        for seed in [0, 1, 42, 7777] {
            let out = train_q_learning(&mdp, &hp(0.1, 0.9, 0.1, 1000), seed);
            assert_eq!(out.policy.next(0), Some(1), "seed {seed}");
            assert_eq!(out.policy.next(1), Some(2), "seed {seed}");
            assert_eq!(out.episode_returns.len(), 1000);
            assert!(out.result_text.contains("B -> C"));
        }
    }

    #[test]
    fn myopic_q_learning_learns_rewards() {
        let mdp = path_finding();
        let out = train_q_learning(&mdp, &hp(0.5, 0.0, 0.3, 2000), 3);
        let Tables::QTable(q) = &out.tables else {
            panic!()
        };
        for s in 0..6 {
            for &n in mdp.allowed(s) {
                if q.visits[s][n] > 50 {
                    assert!((q.values[s][n] - mdp.reward(s, n)).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn sarsa_matches_q_learning_without_exploration() {
        let mdp = path_finding();
        let settings = hp(0.1, 0.9, 0.0, 300);
        let q = train_q_learning(&mdp, &settings, 5);
        let s = train_sarsa(&mdp, &settings, 5);
        assert_eq!(q.policy, s.policy);
        assert_eq!(q.tables, s.tables);
    }

    #[test]
    fn sarsa_reaches_goal() {
        let mdp = path_finding();
        let out = train_sarsa(&mdp, &hp(0.1, 0.9, 0.1, 1000), 42);
        for &s in mdp.non_terminal_states() {
            let path = rollout(&mdp, &out.policy, s, 5);
            assert_eq!(*path.last().unwrap(), 2, "from {s}: {path:?}");
        }
    }

    #[test]
    fn actor_critic_preference_updates_sum_to_zero() {
        let mdp = path_finding();
        let out = train_actor_critic(&mdp, &hp(0.1, 0.9, 0.0, 50), 9);
        let Tables::ActorCritic(t) = &out.tables else {
            panic!()
        };
        for s in 0..6 {
            let total: f64 = mdp.allowed(s).iter().map(|&n| t.h[s][n]).sum();
            assert!(total.abs() < 1e-9, "row {s} sums to {total}");
            let p: f64 = t.policy_probs(&mdp, s).iter().sum();
            assert!((p - 1.0).abs() < 1e-9);
        }
        assert!(t.h[2].iter().all(|&v| v == 0.0));
        assert_eq!(t.v[2], 0.0);
    }

    #[test]
    fn actor_critic_reaches_goal() {
        let mdp = path_finding();
        let out = train_actor_critic(&mdp, &hp(0.1, 0.9, 0.1, 3000), 42);
        for &s in mdp.non_terminal_states() {
            let path = rollout(&mdp, &out.policy, s, 5);
            assert_eq!(*path.last().unwrap(), 2, "from {s}: {path:?}");
        }
    }

    #[test]
    fn monte_carlo_reaches_goal() {
        let mdp = path_finding();
        let out = train_monte_carlo(&mdp, &hp(0.1, 0.9, 0.1, 5000), 42);
        for &s in mdp.non_terminal_states() {
            let path = rollout(&mdp, &out.policy, s, 5);
            assert_eq!(*path.last().unwrap(), 2, "from {s}: {path:?}");
        }
    }

    #[test]
    fn terminal_rows_stay_zero_and_deterministic() {
        let mdp = path_finding();
        for kind in AlgorithmKind::ALL {
            let a = train(kind, &mdp, &hp(0.2, 0.9, 0.2, 200), 17);
            let b = train(kind, &mdp, &hp(0.2, 0.9, 0.2, 200), 17);
            assert_eq!(a, b);
            assert!(a.tables.matrix()[2].iter().all(|&v| v == 0.0), "{kind}");
            for &s in mdp.non_terminal_states() {
                assert!(mdp.allowed(s).contains(&a.policy.next(s).unwrap()));
            }
        }
    }

    #[test]
    fn degenerate_environment_trains_to_nothing() {
        let mdp = Mdp::compile(&crate::model::EnvironmentSpec {
            states: vec!["A".into()],
            actions: vec![vec![0]],
            rewards: vec![vec![0.0]],
            terminal_states: vec!["A".into()],
        })
        .unwrap();
        let out = train_q_learning(&mdp, &hp(0.1, 0.9, 0.1, 10), 0);
        assert_eq!(out.steps_total, 0);
        assert_eq!(out.policy, Policy(vec![None]));
        assert_eq!(out.result_text, "Q-Table:\nA: [0.00]\n\nPolicy:\n");
    }

    #[test]
    fn resume_checks_tables() {
        let mdp = path_finding();
        let settings = hp(0.1, 0.9, 0.1, 10);
        let ac = Tables::ActorCritic(ActorCriticTables::zeros(6));
        assert!(matches!(
            train_from(AlgorithmKind::QLearning, &mdp, &settings, 0, ac),
            Err(TrainError::TableKind { .. })
        ));
        let small = Tables::QTable(QTable::zeros(3));
        assert!(matches!(
            train_from(AlgorithmKind::QLearning, &mdp, &settings, 0, small),
            Err(TrainError::TableShape { .. })
        ));
    }
}
