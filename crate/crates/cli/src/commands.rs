use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rlml_core::codegen::{generate_model, CodegenTarget};
use rlml_core::compare::{outcome_json, render_compare, render_compare_structured, run_compare};
use rlml_core::engine::{
    derive_policy, load_model, rollout as follow, save_model, train, train_from,
};
use rlml_core::model::fingerprint;
use rlml_core::textio::{parse_env_file, parse_model, EnvFileError};
use rlml_core::validate::{has_errors, validate_model};
use rlml_core::{InputSource, Mdp, Model};

use crate::report::{self, fail};
use crate::{CompareArgs, Exit, Format, GenArgs, ModelArgs, RolloutArgs, RunArgs, SeedArg};

type Status = Result<(), Exit>;

fn read(path: &Path) -> Result<String, Exit> {
    std::fs::read_to_string(path).map_err(|e| {
        fail(
            Exit::IoError,
            format_args!("cannot read {}: {e}", path.display()),
        )
    })
}

fn write(path: &Path, text: &str) -> Status {
    std::fs::write(path, text).map_err(|e| {
        fail(
            Exit::IoError,
            format_args!("cannot write {}: {e}", path.display()),
        )
    })
}

fn load_environment(model: &mut Model, path: &Path) -> Status {
    let text = read(path)?;
    let env = parse_env_file(&text).map_err(|e| match e {
        EnvFileError::Parse(e) => {
            report::parse_error(path, &text, &e);
            Exit::ParseFailed
        }
        other => fail(
            Exit::ParseFailed,
            format_args!("{}: {other}", path.display()),
        ),
    })?;
    *model.environment_mut() = env;
    model.set_input_source(InputSource::File(path.display().to_string()));
    Ok(())
}

/// Parse the model, resolve its environment and validate it. Diagnostics
/// go to stderr; warnings alone do not fail.
fn load(args: &ModelArgs) -> Result<Model, Exit> {
    let text = read(&args.model)?;
    let mut model = parse_model(&text).map_err(|e| {
        report::parse_error(&args.model, &text, &e);
        Exit::ParseFailed
    })?;
    if let Some(env) = &args.env {
        load_environment(&mut model, env)?;
    } else if let InputSource::File(rel) = model.input_source().clone() {
        let base = args.model.parent().unwrap_or(Path::new("."));
        load_environment(&mut model, &base.join(rel))?;
    }
    let diagnostics = validate_model(&model);
    report::diagnostics(&diagnostics);
    if has_errors(&diagnostics) {
        return Err(Exit::ValidationFailed);
    }
    Ok(model)
}

fn compile(model: &Model) -> Result<Mdp, Exit> {
    Mdp::compile(model.environment()).map_err(|e| fail(Exit::ValidationFailed, e))
}

fn resolve_seed(seed: SeedArg) -> u64 {
    match seed {
        SeedArg::Fixed(s) => s,
        SeedArg::Random => {
            let nanos = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_nanos() as u64)
                .unwrap_or(0);
            let seed = nanos ^ u64::from(std::process::id()).rotate_left(32);
            eprintln!("seed: {seed}");
            seed
        }
    }
}

pub fn validate(args: &ModelArgs) -> Status {
    let model = load(args)?;
    println!("{}: ok ({} agent(s))", model.name(), model.agents().len());
    Ok(())
}

pub fn run(args: &RunArgs) -> Status {
    let Model::Single(model) = load(&args.model)? else {
        return Err(fail(
            Exit::UsageError,
            "`run` takes an `rlml` model; use `rlml compare` for `rlml_comparator` models",
        ));
    };
    let mdp = compile(&Model::Single(model.clone()))?;
    let seed = resolve_seed(args.seed.seed);
    let hp = model.agent.hyperparameters;
    let kind = model.agent.algorithm;

    let (outcome, episodes_trained) = match &args.resume {
        Some(path) => {
            let saved =
                load_model(read(path)?.as_bytes(), &model.environment, &hp).map_err(|e| {
                    fail(
                        Exit::ValidationFailed,
                        format_args!("{}: {e}", path.display()),
                    )
                })?;
            let outcome = train_from(kind, &mdp, &hp, seed, saved.tables).map_err(|e| {
                fail(
                    Exit::ValidationFailed,
                    format_args!("{}: {e}", path.display()),
                )
            })?;
            (outcome, saved.episodes_trained + hp.total_episodes)
        }
        None => (train(kind, &mdp, &hp, seed), hp.total_episodes),
    };

    match args.format {
        Format::Text => print!("{}", outcome.result_text),
        Format::Structured => {
            let mut value = outcome_json(&outcome, &mdp);
            value["seed"] = seed.into();
            value["episodes_trained"] = episodes_trained.into();
            value["fingerprint"] = fingerprint(&model.environment, &hp).to_hex().into();
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("json value serializes")
            );
        }
    }
    if let Some(path) = &args.save {
        write(
            path,
            &save_model(&outcome, &model.environment, &hp, seed, episodes_trained),
        )?;
    }
    if let Some(path) = &args.returns_csv {
        let mut csv = String::from("episode,return\n");
        for (i, r) in outcome.episode_returns.iter().enumerate() {
            let _ = writeln!(csv, "{i},{r}");
        }
        write(path, &csv)?;
    }
    Ok(())
}

pub fn compare(args: &CompareArgs) -> Status {
    let Model::Comparator(model) = load(&args.model)? else {
        return Err(fail(
            Exit::UsageError,
            "`compare` takes an `rlml_comparator` model; use `rlml run` for `rlml` models",
        ));
    };
    let mdp = compile(&Model::Comparator(model.clone()))?;
    let seed = resolve_seed(args.seed.seed);
    let report = run_compare(&model, seed).map_err(|e| fail(Exit::ValidationFailed, e))?;
    match args.format {
        Format::Text => print!("{}", render_compare(&report)),
        Format::Structured => {
            let value = render_compare_structured(&report, &mdp);
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("json value serializes")
            );
        }
    }
    Ok(())
}

pub fn gen(args: &GenArgs) -> Status {
    let target: CodegenTarget = args.target.parse().map_err(|e| fail(Exit::UsageError, e))?;
    let model = load(&args.model)?;
    let program = generate_model(&model, target).map_err(|e| fail(Exit::ValidationFailed, e))?;
    std::fs::create_dir_all(&args.out_dir).map_err(|e| {
        fail(
            Exit::IoError,
            format_args!("cannot create {}: {e}", args.out_dir.display()),
        )
    })?;
    let path: PathBuf = args.out_dir.join(&program.filename);
    write(&path, &program.source_text)?;
    println!("{}", path.display());
    Ok(())
}

pub fn rollout(args: &RolloutArgs) -> Status {
    let Model::Single(model) = load(&args.model)? else {
        return Err(fail(Exit::UsageError, "`rollout` takes an `rlml` model"));
    };
    let mdp = compile(&Model::Single(model.clone()))?;
    let Some(start) = mdp.index_of(&args.start) else {
        return Err(fail(
            Exit::UsageError,
            format_args!("unknown state `{}`", args.start),
        ));
    };
    if mdp.is_terminal(start) {
        return Err(fail(
            Exit::UsageError,
            format_args!(
                "`{}` is terminal; choose a non-terminal start state",
                args.start
            ),
        ));
    }
    let saved = load_model(
        read(&args.saved)?.as_bytes(),
        &model.environment,
        &model.agent.hyperparameters,
    )
    .map_err(|e| {
        fail(
            Exit::ValidationFailed,
            format_args!("{}: {e}", args.saved.display()),
        )
    })?;
    let policy = derive_policy(&saved.tables, &mdp);
    let path = follow(&mdp, &policy, start, mdp.step_cap());
    let names: Vec<&str> = path.iter().map(|&s| mdp.name(s)).collect();
    println!("{}", names.join(" -> "));
    Ok(())
}
