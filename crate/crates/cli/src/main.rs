//! `onevar-tl`: translate, model-check, search and verify from the shell.
//!
//! Exit codes: 0 success, 1 a negative answer (designated state fails,
//! no model within the bound, a counterexample), 2 usage, parse or model
//! format errors, 3 a search or verification budget ran out.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use onevar_tl::cgs::{mc_atl, mc_atlstar_extremal, ConcurrentGameModel};
use onevar_tl::embedding::{embed_with, gadget_model_cgs, gadget_model_kripke, PrimeClauses};
use onevar_tl::kripke::KripkeModel;
use onevar_tl::satsearch::{bounded_sat_with, bounded_search_cgs, SatError, SatStatus, SearchOptions};
use onevar_tl::syntax::parse;
use onevar_tl::verify::{self, AnyModel, Outcome, Suite, VerifyConfig};
use onevar_tl::{AgentSet, Formula, LogicId};
use serde_json::json;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "onevar-tl",
    version,
    about = "Single-variable embeddings of branching-time and alternating-time logics"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// ctl, ctlstar, atl or atlstar
    #[arg(long, global = true, default_value = "ctl")]
    logic: LogicId,
    /// Number of agents (alternating logics)
    #[arg(long, global = true, default_value_t = 1)]
    agents: u32,
    #[arg(long, global = true, env = "ONEVAR_TL_SEED", default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for bounded search; 0 picks automatically
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Machine-readable output
    #[arg(long, global = true, conflicts_with = "dot")]
    json: bool,
    /// Graphviz output for models
    #[arg(long, global = true)]
    dot: bool,
    #[arg(long, global = true)]
    max_states: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a formula into one over a single variable
    Translate {
        #[command(flatten)]
        input: FormulaInput,
        /// Use the clauses exactly as first published
        #[arg(long)]
        literal: bool,
    },
    /// Print the states of a model file that satisfy a formula
    Modelcheck {
        model: PathBuf,
        #[command(flatten)]
        input: FormulaInput,
        /// Designated state (index or name); overrides the file's
        #[arg(long)]
        state: Option<String>,
    },
    /// Search all models up to a size bound for one satisfying the formula
    Sat {
        #[command(flatten)]
        input: FormulaInput,
        /// Actions per agent (alternating logics)
        #[arg(long, default_value_t = 2)]
        max_actions: usize,
        /// Give up after this many candidate models
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Emit the gadget model with the given index
    Gadget {
        index: usize,
        #[arg(long, value_enum, default_value_t = FlavorArg::Branching)]
        flavor: FlavorArg,
        /// Variable marking the gadget
        #[arg(long, default_value_t = 1)]
        var: u32,
    },
    /// Run property suites E1..E6 (or all)
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long)]
        models_per_case: Option<usize>,
        #[arg(long)]
        max_m: Option<usize>,
        #[arg(long)]
        sat_bound: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Args)]
struct FormulaInput {
    /// Formula text
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    formula: Option<String>,
    /// Read the formula from a file
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Branching,
    Alternating,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let c = &cli.common;
    let agents = AgentSet::new(c.agents).map_err(usage)?;
    match &cli.command {
        Command::Translate { input, literal } => {
            let f = read_formula(input, c.logic, agents)?;
            let clauses = if *literal {
                PrimeClauses::Literal
            } else {
                PrimeClauses::Corrected
            };
            let tr = embed_with(&f, c.logic, agents, clauses).map_err(usage)?;
            println!("{}", tr.to_json());
            Ok(0)
        }
        Command::Modelcheck { model, input, state } => modelcheck(c, agents, model, input, state.as_deref()),
        Command::Sat {
            input,
            max_actions,
            budget,
        } => sat(c, agents, input, *max_actions, *budget),
        Command::Gadget { index, flavor, var } => {
            let m = match flavor {
                FlavorArg::Branching => AnyModel::Kripke(gadget_model_kripke(*index, *var).map_err(usage)?),
                FlavorArg::Alternating => {
                    let pool = ["x".to_string()];
                    AnyModel::Cgs(gadget_model_cgs(*index, *var, agents, &pool).map_err(usage)?)
                }
            };
            if c.dot {
                print!("{}", m.to_dot(Some(0)));
            } else {
                println!("{}", m.to_json(Some(0)));
            }
            Ok(0)
        }
        Command::Verify {
            suite,
            cases,
            models_per_case,
            max_m,
            sat_bound,
            budget,
        } => {
            let defaults = VerifyConfig::default();
            let cfg = VerifyConfig {
                seed: c.seed,
                cases: cases.unwrap_or(defaults.cases),
                models_per_case: models_per_case.unwrap_or(defaults.models_per_case),
                max_m: max_m.unwrap_or(defaults.max_m),
                max_states: c.max_states.unwrap_or(defaults.max_states),
                sat_bound: sat_bound.unwrap_or(defaults.sat_bound),
                budget: budget.unwrap_or(defaults.budget),
                jobs: c.jobs,
            };
            let suites: Vec<Suite> = if suite.eq_ignore_ascii_case("all") {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse().map_err(usage)?]
            };
            verify_suites(&suites, &cfg, c.json)
        }
    }
}

fn read_formula(input: &FormulaInput, logic: LogicId, agents: AgentSet) -> Result<Formula, Failure> {
    let text = match (&input.formula, &input.file) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => {
            fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Err(usage("no formula given")),
    };
    parse(text.trim(), logic, agents).map_err(usage)
}

fn modelcheck(
    c: &Common,
    agents: AgentSet,
    path: &PathBuf,
    input: &FormulaInput,
    state: Option<&str>,
) -> CmdResult {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let (model, designated) = if c.logic.is_alternating() {
        let (m, d) = ConcurrentGameModel::from_json(&text).map_err(usage)?;
        (AnyModel::Cgs(m), d)
    } else {
        let (m, d) = KripkeModel::from_json(&text).map_err(usage)?;
        (AnyModel::Kripke(m), d)
    };
    // coalitions are bounded by the model's agents, not the flag
    let agents = match &model {
        AnyModel::Cgs(m) => m.agents(),
        AnyModel::Kripke(_) => agents,
    };
    let f = read_formula(input, c.logic, agents)?;
    let designated = match state {
        Some(s) => Some(resolve_state(&model, s)?),
        None => designated,
    };
    let set = verify::model_check(&model, &f, c.logic).map_err(usage)?;
    let names: Vec<String> = set.iter().map(|s| model.state_name(s)).collect();
    let holds = designated.map(|d| set.contains(d));
    if c.json {
        let out = json!({
            "formula": f.to_string(),
            "states": names,
            "designated": designated.map(|d| model.state_name(d)),
            "holds": holds,
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    } else {
        for n in &names {
            println!("{n}");
        }
    }
    Ok(if holds == Some(false) { EXIT_NEGATIVE } else { 0 })
}

fn resolve_state(model: &AnyModel, s: &str) -> Result<usize, Failure> {
    if let Some(i) = (0..model.len()).find(|&i| model.state_name(i) == s) {
        return Ok(i);
    }
    match s.parse::<usize>() {
        Ok(i) if i < model.len() => Ok(i),
        _ => Err(usage(format!("no state `{s}` in the model"))),
    }
}

fn sat(
    c: &Common,
    agents: AgentSet,
    input: &FormulaInput,
    max_actions: usize,
    budget: Option<u64>,
) -> CmdResult {
    let f = read_formula(input, c.logic, agents)?;
    let opts = SearchOptions {
        max_models: budget,
        jobs: c.jobs,
    };
    let max_states = c.max_states.unwrap_or(3);
    let result = if c.logic.is_alternating() {
        let vars: Vec<u32> = f.variables().into_iter().collect();
        let logic = c.logic;
        bounded_search_cgs(agents, &vars, max_states, max_actions, opts, |m| {
            let set = if logic == LogicId::Atl {
                mc_atl(m, &f)?
            } else {
                mc_atlstar_extremal(m, &f)?
            };
            Ok(set.contains(0))
        })
        .map(|v| {
            let w = v.witness.map(|w| (AnyModel::Cgs(w.model), w.state));
            (v.status, v.models_examined, v.elapsed, w)
        })
    } else {
        bounded_sat_with(&f, c.logic, max_states, opts).map(|v| {
            let w = v.witness.map(|w| (AnyModel::Kripke(w.model), w.state));
            (v.status, v.models_examined, v.elapsed, w)
        })
    };
    let (status, examined, elapsed, witness) = match result {
        Ok(r) => r,
        Err(SatError::Budget { limit }) => {
            if c.json {
                println!("{}", json!({ "status": "BUDGET", "limit": limit }));
            } else {
                println!("BUDGET after {limit} candidates");
            }
            return Ok(EXIT_BUDGET);
        }
        Err(e) => return Err(usage(e)),
    };
    if c.json {
        let out = json!({
            "status": status,
            "models_examined": examined,
            "max_states": max_states,
            "elapsed_ms": elapsed.as_millis() as u64,
            "witness": witness.as_ref().map(|(m, s)| json!({
                "state": s,
                "model": serde_json::from_str::<serde_json::Value>(&m.to_json(Some(*s))).expect("valid json"),
            })),
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    } else {
        println!(
            "{} ({examined} models examined, bound {max_states} states)",
            status_word(status)
        );
        if let Some((m, s)) = &witness {
            if c.dot {
                print!("{}", m.to_dot(Some(*s)));
            } else {
                println!("{}", m.to_json(Some(*s)));
            }
        }
    }
    Ok(if status == SatStatus::Sat {
        0
    } else {
        EXIT_NEGATIVE
    })
}

fn status_word(s: SatStatus) -> &'static str {
    match s {
        SatStatus::Sat => "SAT",
        SatStatus::Unknown => "UNKNOWN",
    }
}

fn verify_suites(suites: &[Suite], cfg: &VerifyConfig, as_json: bool) -> CmdResult {
    let reports: Vec<_> = suites.iter().map(|&s| verify::run(s, cfg)).collect();
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(&reports).expect("serializable")
        );
    } else {
        for r in &reports {
            let word = match r.outcome {
                Outcome::Pass => "PASS",
                Outcome::Fail => "FAIL",
                Outcome::Budget => "BUDGET",
            };
            print!(
                "{} {word} {}: {} checked, {} skipped, {} over budget, {} ms",
                r.suite, r.title, r.checked, r.skipped, r.budget_hits, r.elapsed_ms
            );
            match &r.note {
                Some(n) => println!(" ({n})"),
                None => println!(),
            }
            if let Some(cx) = &r.counterexample {
                println!("{cx}");
            }
        }
    }
    let code = if reports.iter().any(|r| r.outcome == Outcome::Fail) {
        EXIT_NEGATIVE
    } else if reports.iter().any(|r| r.outcome == Outcome::Budget) {
        EXIT_BUDGET
    } else {
        0
    };
    Ok(code)
}
