use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use dkh::actions::{canonical_actions, closure_nested};
use dkh::harness::{find_countermodel, soundness_sweep, GenParams, Template};
use dkh::proof::{check_derivation, Derivation};
use dkh::semantics::{verify_strategy, StrategyDoc};
use dkh::{parse_formula, ActionLimits, EquivClass, Evaluate, Formula, Group, Model, ModelChecker, StateId, Strategy};

#[derive(Parser)]
#[command(
    name = "dkh",
    version,
    about = "Model checker, strategy synthesizer and proof checker for distributed know-how"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at one state or at every state.
    Check {
        #[arg(short, long)]
        model: PathBuf,
        #[arg(short, long)]
        formula: String,
        #[arg(short, long)]
        state: Option<String>,
    },
    /// List the actions available to a group.
    Closure {
        #[arg(short, long)]
        model: PathBuf,
        /// Comma-separated agent indices; empty for the empty group.
        #[arg(short, long, allow_hyphen_values = true)]
        group: String,
        /// Print tuple terms instead of canonical atom sets.
        #[arg(long)]
        nested: bool,
    },
    /// Synthesize a strategy for Kh_G goal at a state.
    Synth {
        #[arg(short, long)]
        model: PathBuf,
        #[arg(short, long)]
        state: String,
        #[arg(short, long)]
        group: String,
        #[arg(short, long)]
        formula: String,
        /// Write the strategy here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a strategy file from a state and report termination and leaves.
    Verify {
        #[arg(short, long)]
        model: PathBuf,
        #[arg(short, long)]
        group: String,
        #[arg(long)]
        strategy: PathBuf,
        #[arg(short, long)]
        state: String,
        #[arg(short, long)]
        formula: String,
    },
    /// Check a derivation file line by line.
    Prove { file: PathBuf },
    /// Run the soundness sweep on random models.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        models: usize,
        /// Random instantiations per schema and model.
        #[arg(long, default_value_t = 3)]
        instances: usize,
    },
    /// Search random models for a countermodel to a schema.
    Counter {
        /// `coop`, `khconj`, an axiom name, or template text.
        #[arg(long)]
        schema: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Check { model, formula, state } => {
            let m = load_model(&model)?;
            let f = formula_arg(&formula)?;
            let s = state.as_deref().map(|s| state_arg(&m, s)).transpose()?;
            let truth = ModelChecker::new(&m).eval(&f)?;
            match s {
                Some(s) => {
                    let holds = truth.contains(s);
                    println!("{holds}");
                    Ok(holds)
                }
                None => {
                    for s in m.states() {
                        println!("{}: {}", m.state_name(s), truth.contains(s));
                    }
                    Ok(truth.is_full())
                }
            }
        }
        Command::Closure { model, group, nested } => {
            let m = load_model(&model)?;
            let g = group_arg(&m, &group)?;
            if nested {
                for a in closure_nested(&m, &g, ActionLimits::default())? {
                    println!("{}", a.display(&m));
                }
            } else {
                for a in canonical_actions(&m, &g, ActionLimits::default())? {
                    println!("{}", a.display(&m));
                }
            }
            Ok(true)
        }
        Command::Synth {
            model,
            state,
            group,
            formula,
            output,
        } => {
            let m = load_model(&model)?;
            let s = state_arg(&m, &state)?;
            let g = group_arg(&m, &group)?;
            let f = formula_arg(&formula)?;
            let Some(strategy) = ModelChecker::new(&m).synthesize_strategy(s, &g, &f)? else {
                println!("no strategy");
                return Ok(false);
            };
            let json = strategy.to_json(&m);
            match output {
                Some(path) => fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
                None => println!("{json}"),
            }
            Ok(true)
        }
        Command::Verify {
            model,
            group,
            strategy,
            state,
            formula,
        } => {
            let m = load_model(&model)?;
            let g = group_arg(&m, &group)?;
            let s = state_arg(&m, &state)?;
            let f = formula_arg(&formula)?;
            let text = read(&strategy)?;
            let doc: StrategyDoc =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", strategy.display()))?;
            let sigma = Strategy::from_doc(&m, &doc)?;
            let goal = ModelChecker::new(&m).eval(&f)?;
            let v = verify_strategy(&m, &g, &sigma, s, &goal)?;
            let class = |c: &EquivClass| m.format_set(&c.states);
            let classes = |cs: &mut dyn Iterator<Item = &EquivClass>| {
                format!("[{}]", cs.map(class).collect::<Vec<_>>().join(", "))
            };
            println!("terminating: {}", v.terminating);
            println!("leaves: {}", classes(&mut v.leaves.iter()));
            println!("inners: {}", classes(&mut v.inners.iter()));
            println!("bad_leaf: {}", v.bad_leaf.as_ref().map_or("none".into(), class));
            println!(
                "cycle_witness: {}",
                v.cycle_witness
                    .as_ref()
                    .map_or("none".into(), |c| classes(&mut c.iter()))
            );
            println!("success: {}", v.success());
            Ok(v.success())
        }
        Command::Prove { file } => {
            let d = Derivation::parse(&read(&file)?)?;
            let verdicts = check_derivation(&d)?;
            for v in &verdicts {
                match &v.reason {
                    None => println!("{}: OK", v.index),
                    Some(r) => println!("{}: FAIL {r}", v.index),
                }
            }
            Ok(verdicts.iter().all(|v| v.ok))
        }
        Command::Fuzz {
            seed,
            models,
            instances,
        } => {
            let report = soundness_sweep(&GenParams::default().with_seed(seed), models, instances)?;
            println!("{}", report.to_json());
            Ok(report.passed())
        }
        Command::Counter { schema, seed, budget } => {
            let template = Template::from_name_or_text(&schema)?;
            let Some(c) = find_countermodel(&template, &GenParams::default().with_seed(seed), budget)? else {
                println!("no countermodel within {budget} samples");
                return Ok(false);
            };
            let out = serde_json::json!({
                "sample": c.sample,
                "seed": c.seed,
                "state": c.model.state_name(c.state),
                "bindings": c.bindings.to_string(),
                "instance": c.instance.to_string(),
                "model": c.model.to_doc(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(true)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_model(path: &Path) -> Result<Model> {
    Model::from_json(&read(path)?).with_context(|| format!("loading model {}", path.display()))
}

fn formula_arg(s: &str) -> Result<Formula> {
    parse_formula(s).map_err(|e| anyhow!("formula: {e}"))
}

fn state_arg(m: &Model, name: &str) -> Result<StateId> {
    m.state_id(name).ok_or_else(|| anyhow!("unknown state `{name}`"))
}

fn group_arg(m: &Model, s: &str) -> Result<Group> {
    let mut agents = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let a: usize = part.parse().map_err(|_| anyhow!("bad agent index `{part}` in group"))?;
        if agents.contains(&a) {
            bail!("agent {a} listed twice in group");
        }
        agents.push(a);
    }
    let g = Group::from_indices(agents);
    if !m.group_in_range(&g) {
        bail!("group {g} mentions agents outside 0..{}", m.agent_count());
    }
    Ok(g)
}
