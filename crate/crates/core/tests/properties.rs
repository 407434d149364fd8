//! Property tests and independent oracles.

#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;

use rlml_core::engine::{derive_policy, softmax, train, Tables};
use rlml_core::model::{canonical_form, environment_fingerprint, fingerprint};
use rlml_core::textio::{parse_model, print_model};
use rlml_core::validate::validate_model;
use rlml_core::{
    AgentSpec, AlgorithmKind, ComparatorModel, EnvironmentSpec, Hyperparameters, InputSource, Mdp,
    Model, RlmlModel,
};

fn arb_reward() -> impl Strategy<Value = f64> {
    prop_oneof![
        3 => Just(0.0),
        2 => (-10i32..=100).prop_map(f64::from),
        1 => -1.0e6f64..1.0e6,
    ]
}

/// Valid environments: 2..=7 states, the last one terminal with no moves,
/// every other state with at least one successor.
fn arb_env() -> impl Strategy<Value = EnvironmentSpec> {
    (2usize..=7).prop_flat_map(|n| {
        let rows =
            proptest::collection::vec(proptest::collection::btree_set(0..n as i64, 1..=n), n - 1);
        let rewards = proptest::collection::vec(proptest::collection::vec(arb_reward(), n), n);
        (rows, rewards, any::<bool>()).prop_map(move |(rows, rewards, quoted)| {
            let states: Vec<String> = (0..n)
                .map(|i| {
                    if quoted {
                        format!("s_{i}")
                    } else {
                        format!("S{i}")
                    }
                })
                .collect();
            let mut actions: Vec<Vec<i64>> =
                rows.into_iter().map(|r| r.into_iter().collect()).collect();
            actions.push(Vec::new());
            EnvironmentSpec {
                terminal_states: vec![states[n - 1].clone()],
                states,
                actions,
                rewards,
            }
        })
    })
}

fn arb_hp() -> impl Strategy<Value = Hyperparameters> {
    (
        0.01f64..=1.0,
        0.0f64..=0.99,
        0.0f64..=1.0,
        1u64..=60,
        proptest::option::of(0.01f64..=1.0),
    )
        .prop_map(
            |(alpha, gamma, epsilon, total_episodes, beta)| Hyperparameters {
                alpha,
                gamma,
                epsilon,
                total_episodes,
                beta,
            },
        )
}

fn arb_kind() -> impl Strategy<Value = AlgorithmKind> {
    proptest::sample::select(AlgorithmKind::ALL.to_vec())
}

fn arb_agent() -> impl Strategy<Value = AgentSpec> {
    (arb_kind(), arb_hp()).prop_map(|(algorithm, hyperparameters)| AgentSpec {
        algorithm,
        hyperparameters,
    })
}

fn arb_model() -> impl Strategy<Value = Model> {
    let single = (arb_env(), arb_agent()).prop_map(|(environment, agent)| {
        Model::Single(RlmlModel {
            name: "Fuzz".into(),
            environment,
            agent,
            input_source: InputSource::Inline,
        })
    });
    let comparator = (arb_env(), proptest::collection::vec(arb_agent(), 2..=4)).prop_map(
        |(environment, agents)| {
            Model::Comparator(ComparatorModel {
                name: "FuzzCmp".into(),
                environment,
                agents,
                input_source: InputSource::Inline,
            })
        },
    );
    prop_oneof![single, comparator]
}

/// Optimal action values by value iteration, iterated until the largest
/// change drops below 1e-12.
fn value_iteration(mdp: &Mdp, gamma: f64) -> Vec<Vec<f64>> {
    let n = mdp.n_states();
    let mut v = vec![0.0; n];
    loop {
        let mut delta: f64 = 0.0;
        for s in 0..n {
            if mdp.is_terminal(s) || mdp.allowed(s).is_empty() {
                continue;
            }
            let best = mdp
                .allowed(s)
                .iter()
                .map(|&t| {
                    mdp.reward(s, t)
                        + if mdp.is_terminal(t) {
                            0.0
                        } else {
                            gamma * v[t]
                        }
                })
                .fold(f64::NEG_INFINITY, f64::max);
            delta = delta.max((best - v[s]).abs());
            v[s] = best;
        }
        if delta < 1e-12 {
            break;
        }
    }
    let mut q = vec![vec![0.0; n]; n];
    for s in 0..n {
        for &t in mdp.allowed(s) {
            q[s][t] = mdp.reward(s, t)
                + if mdp.is_terminal(t) {
                    0.0
                } else {
                    gamma * v[t]
                };
        }
    }
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn print_parse_roundtrip(m in arb_model()) {
        prop_assert_eq!(validate_model(&m), vec![]);
        let text = print_model(&m);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(print_model(&back), text);
    }

    #[test]
    fn fingerprint_is_a_function_of_canonical_form(env in arb_env(), hp in arb_hp(), more in 1u64..1000) {
        let fp = fingerprint(&env, &hp);
        prop_assert_eq!(fp, fingerprint(&env.clone(), &hp));
        let longer = Hyperparameters { total_episodes: hp.total_episodes + more, ..hp };
        prop_assert_eq!(fp, fingerprint(&env, &longer));
        prop_assert_eq!(canonical_form(&env, &hp), canonical_form(&env, &longer));
        let mut other = env.clone();
        other.rewards[0][0] += 1.0;
        prop_assert_ne!(fp, fingerprint(&other, &hp));
        prop_assert_ne!(environment_fingerprint(&env), environment_fingerprint(&other));
    }

    #[test]
    fn parse_error_spans_lie_inside_the_text(m in arb_model(), cut in 0usize..2000, junk in "[#:,{}\\[\\]a-z0-9\"]{1,3}") {
        let text = print_model(&m);
        let at = text.char_indices().map(|(i, _)| i).nth(cut % text.len()).unwrap_or(0);
        let broken = format!("{}{junk}{}", &text[..at], &text[at..]);
        if let Err(e) = parse_model(&broken) {
            let lines: Vec<&str> = broken.split('\n').collect();
            prop_assert!(e.span.line >= 1 && e.span.line <= lines.len(), "{e:?}");
            let width = lines[e.span.line - 1].chars().count();
            prop_assert!(e.span.column >= 1 && e.span.column <= width.max(1), "{e:?}");
        }
    }

    #[test]
    fn training_invariants(env in arb_env(), hp in arb_hp(), kind in arb_kind(), seed in any::<u64>()) {
        let mdp = Mdp::compile(&env).unwrap();
        let out = train(kind, &mdp, &hp, seed);
        let n = mdp.n_states();
        prop_assert_eq!(out.episode_returns.len() as u64, hp.total_episodes);
        prop_assert!(out.steps_total <= hp.total_episodes * mdp.step_cap() as u64);
        let matrix = out.tables.matrix();
        prop_assert!(out.tables.is_square(n));
        for s in 0..n {
            let allowed = mdp.allowed(s);
            for t in 0..n {
                prop_assert!(matrix[s][t].is_finite());
                if !allowed.contains(&t) {
                    prop_assert_eq!(matrix[s][t], 0.0);
                }
            }
            if mdp.is_terminal(s) {
                prop_assert!(matrix[s].iter().all(|&v| v == 0.0));
                prop_assert_eq!(out.policy.next(s), None);
            } else {
                prop_assert!(allowed.contains(&out.policy.next(s).unwrap()));
            }
        }
        if let Tables::QTable(_) = &out.tables {
            let bound = mdp.max_abs_reward() / (1.0 - hp.gamma) * (1.0 + 1e-9);
            prop_assert!(matrix.iter().flatten().all(|v| v.abs() <= bound));
        }
        prop_assert_eq!(&derive_policy(&out.tables, &mdp), &out.policy);
        prop_assert_eq!(train(kind, &mdp, &hp, seed), out);
    }

    #[test]
    fn softmax_is_a_distribution(prefs in proptest::collection::vec(-1.0e3f64..1.0e3, 1..10)) {
        let p = softmax(&prefs);
        prop_assert_eq!(p.len(), prefs.len());
        prop_assert!(p.iter().all(|&x| (0.0..=1.0).contains(&x)));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let top = prefs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (x, pref) in p.iter().zip(&prefs) {
            if *pref == top {
                prop_assert!(p.iter().all(|y| y <= x));
            }
        }
    }
}

fn path_finding() -> RlmlModel {
    let text = std::fs::read_to_string(format!(
        "{}/../../corpus/path_finding.rlml",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap();
    match parse_model(&text).unwrap() {
        Model::Single(m) => m,
        Model::Comparator(_) => unreachable!(),
    }
}

#[test]
fn frozen_fingerprints() {
    // SHA-256 digests computed with Python's hashlib over hand-written
    // canonical text for the bundled path-finding model.
    let m = path_finding();
    let hp = m.agent.hyperparameters;
    assert_eq!(
        environment_fingerprint(&m.environment).to_hex(),
        "434e56571e54fc22c5130feb58baa18ad665d8d6266494fb31c1c9c1e47c6001"
    );
    assert_eq!(
        fingerprint(&m.environment, &hp).to_hex(),
        "c70c50261bc2350d91ab9bd2f89d35241733579a5896231cf565d38060a1344c"
    );
    let with_beta = Hyperparameters {
        beta: Some(0.5),
        ..hp
    };
    assert_eq!(
        fingerprint(&m.environment, &with_beta).to_hex(),
        "09833c08ce9d5db07b918b091aabea4387c68c8601f7a7426e434dec35539239"
    );
}

#[test]
fn value_iteration_oracle_matches_hand_derivation() {
    let m = path_finding();
    let mdp = Mdp::compile(&m.environment).unwrap();
    let q = value_iteration(&mdp, 0.9);
    let at = |a: &str, b: &str| q[mdp.index_of(a).unwrap()][mdp.index_of(b).unwrap()];
    // entering C pays 100; each extra move discounts by 0.9
    assert_eq!(at("B", "C"), 100.0);
    assert_eq!(at("F", "C"), 100.0);
    assert!((at("A", "B") - 90.0).abs() < 1e-9);
    assert!((at("E", "F") - 90.0).abs() < 1e-9);
    assert!((at("D", "E") - 81.0).abs() < 1e-9);
    assert!((at("A", "D") - 72.9).abs() < 1e-9);
    assert!((at("B", "A") - 81.0).abs() < 1e-9);
}

#[test]
fn q_learning_converges_to_the_value_iteration_oracle() {
    let m = path_finding();
    let mdp = Mdp::compile(&m.environment).unwrap();
    let hp = Hyperparameters {
        alpha: 0.5,
        gamma: 0.9,
        epsilon: 0.5,
        total_episodes: 20_000,
        beta: None,
    };
    let oracle = value_iteration(&mdp, hp.gamma);
    for seed in [1, 2, 3] {
        let out = train(AlgorithmKind::QLearning, &mdp, &hp, seed);
        let Tables::QTable(q) = &out.tables else {
            panic!()
        };
        for s in 0..mdp.n_states() {
            for &t in mdp.allowed(s) {
                assert!(
                    (q.values[s][t] - oracle[s][t]).abs() < 1e-6,
                    "seed {seed}: Q({s},{t}) = {} vs {}",
                    q.values[s][t],
                    oracle[s][t]
                );
            }
        }
    }
}
