//! `dlkv`: command-line front end for the dlkv engine.
//!
//! Exit codes: 0 success, 1 input error, 2 resource limit, 3 assertion failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;

use dlkv::checker::Checker;
use dlkv::decide::{decide_sat, decide_valid, DecideError, DecideOptions, Decision, Verdict, DEFAULT_CLOSURE_CAP};
use dlkv::gen::{random_model, test_vocabulary, ModelShape};
use dlkv::lang::{Formula, Term, Vocabulary};
use dlkv::model::{build_numbers_game, EpistemicModel};
use dlkv::reducer::{reduce_formula, reduce_term, simplify_formula, simplify_term, ReductionStep};
use dlkv::scenario::{run_scenario, ReportFormat};
use dlkv::syntax::{
    parse_event, parse_event_open, parse_formula, parse_formula_open, parse_model, parse_scenario, parse_term,
    parse_term_open, print_model,
};

#[derive(Parser, Debug)]
#[command(name = "dlkv", version, about = "Model checking, reduction and decision for group knowledge of hypothetical values")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Kv => ReportFormat::Kv,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Formula,
    Term,
    Event,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse an expression (or a model file) and print its normal form.
    Parse {
        #[arg(long, value_enum, default_value_t = Kind::Formula)]
        kind: Kind,
        /// Resolve symbols against this model file instead of inferring them.
        #[arg(long)]
        model: Option<PathBuf>,
        /// The expression; omit it to print the model given by `--model`.
        expr: Option<String>,
    },
    /// Print the value of a term at each state.
    Eval {
        #[command(flatten)]
        at: At,
        term: String,
    },
    /// Print the truth value of a formula at each state.
    Check {
        #[command(flatten)]
        at: At,
        formula: String,
    },
    /// Apply an event and print the updated model file.
    Update {
        #[arg(long)]
        model: PathBuf,
        event: String,
    },
    /// Run a scenario script.
    Scenario {
        script: PathBuf,
        /// Include per-step timings in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Rewrite a dynamic formula or term into a static one.
    Reduce {
        #[arg(long, value_enum, default_value_t = Kind::Formula)]
        kind: Kind,
        #[arg(long)]
        simplify: bool,
        /// Print each rewrite step to stderr.
        #[arg(long)]
        trace: bool,
        expr: String,
    },
    /// Decide satisfiability.
    Sat(DecideArgs),
    /// Decide validity.
    Valid(DecideArgs),
    /// Generate a model file.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
}

#[derive(Args, Debug)]
struct At {
    #[arg(long)]
    model: PathBuf,
    /// Only this state; every state by default.
    #[arg(long)]
    state: Option<String>,
}

#[derive(Args, Debug)]
struct DecideArgs {
    #[arg(long, env = "DLKV_CLOSURE_CAP", default_value_t = DEFAULT_CLOSURE_CAP)]
    closure_cap: usize,
    /// Print the witness type or the elimination log.
    #[arg(long)]
    trace: bool,
    formula: String,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// The numbers game with numbers up to `max`.
    NumbersGame { max: u64 },
    /// A random model over two agents with one variable each.
    Random {
        #[arg(long, env = "DLKV_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        /// Defined values besides `U`.
        #[arg(long, default_value_t = 2)]
        values: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Resource(String),
    /// Already reported on stdout.
    #[error("{0} assertion(s) failed")]
    Assertion(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Resource(_) => 2,
            CliError::Assertion(_) => 3,
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

impl From<DecideError> for CliError {
    fn from(e: DecideError) -> Self {
        if e.is_resource_limit() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<EpistemicModel, CliError> {
    parse_model(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn formula_in(src: &str, voc: Option<&Vocabulary>) -> Result<Formula, CliError> {
    match voc {
        Some(v) => parse_formula(src, v).map_err(input),
        None => parse_formula_open(src, &Vocabulary::new()).map(|(f, _)| f).map_err(input),
    }
}

fn term_in(src: &str, voc: Option<&Vocabulary>) -> Result<Term, CliError> {
    match voc {
        Some(v) => parse_term(src, v).map_err(input),
        None => parse_term_open(src, &Vocabulary::new()).map(|(t, _)| t).map_err(input),
    }
}

fn states(m: &EpistemicModel, only: Option<&str>) -> Result<Vec<usize>, CliError> {
    match only {
        None => Ok((0..m.num_states()).collect()),
        Some(name) => m
            .state_named(name)
            .map(|s| vec![s])
            .ok_or_else(|| CliError::Input(format!("no state named `{name}`"))),
    }
}

fn per_state(m: &EpistemicModel, rows: Vec<(usize, String)>, format: Format) -> String {
    let mut out = String::new();
    for (s, v) in rows {
        let name = m.state_name(s);
        let _ = match format {
            Format::Text => writeln!(out, "{name}: {v}"),
            Format::Kv => writeln!(out, "state={name} value={v}"),
        };
    }
    out
}

fn decision_report(d: &Decision, valid: bool, trace: bool, format: Format) -> String {
    let verdict = match (valid, d.is_sat()) {
        (false, true) => "sat",
        (false, false) => "unsat",
        (true, false) => "valid",
        (true, true) => "not valid",
    };
    let s = &d.stats;
    let mut out = String::new();
    match format {
        Format::Text => {
            let _ = writeln!(out, "{verdict}");
            let _ = writeln!(
                out,
                "closure {} formulas, {} terms, {} variables; {} types, {} surviving after {} rounds",
                s.closure_size, s.terms, s.variables, s.types, s.survivors, s.rounds
            );
        }
        Format::Kv => {
            let _ = writeln!(
                out,
                "verdict={} closure={} terms={} variables={} clauses={} types={} survivors={} rounds={}",
                verdict.replace(' ', "_"),
                s.closure_size,
                s.terms,
                s.variables,
                s.clauses,
                s.types,
                s.survivors,
                s.rounds
            );
        }
    }
    if trace {
        match &d.verdict {
            Verdict::Sat { witness } => {
                let label = if valid { "countermodel type" } else { "witness type" };
                let _ = writeln!(out, "{label}:");
                for f in witness {
                    let _ = writeln!(out, "  {f}");
                }
            }
            Verdict::Unsat { log } => {
                for line in log {
                    let _ = writeln!(out, "{line}");
                }
            }
        }
    }
    out
}

fn print_steps(steps: &[ReductionStep]) {
    for s in steps {
        eprintln!("{s}");
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Parse { kind, model, expr } => {
            let m = model.as_deref().map(load_model).transpose()?;
            let voc = m.as_ref().map(|m| m.vocab().as_ref());
            match (expr, &m) {
                (None, Some(m)) => Ok(print_model(m)),
                (None, None) => Err(CliError::Input("nothing to parse: give an expression or --model".into())),
                (Some(src), _) => {
                    let text = match kind {
                        Kind::Formula => formula_in(&src, voc)?.to_string(),
                        Kind::Term => term_in(&src, voc)?.to_string(),
                        Kind::Event => match voc {
                            Some(v) => parse_event(&src, v).map_err(input)?.to_string(),
                            None => parse_event_open(&src, &Vocabulary::new()).map_err(input)?.0.to_string(),
                        },
                    };
                    Ok(format!("{text}\n"))
                }
            }
        }
        Command::Eval { at, term } => {
            let m = load_model(&at.model)?;
            let x = term_in(&term, Some(m.vocab()))?;
            let c = Checker::new();
            let mut rows = Vec::new();
            for s in states(&m, at.state.as_deref())? {
                let v = c.eval(&m, s, &x).map_err(input)?;
                let name = if v == m.fom().undef() { "undef" } else { m.fom().value_name(v) };
                rows.push((s, name.to_string()));
            }
            Ok(per_state(&m, rows, format))
        }
        Command::Check { at, formula } => {
            let m = load_model(&at.model)?;
            let phi = formula_in(&formula, Some(m.vocab()))?;
            let ext = Checker::new().extension(&m, &phi).map_err(input)?;
            let rows = states(&m, at.state.as_deref())?.into_iter().map(|s| (s, ext[s].to_string())).collect();
            Ok(per_state(&m, rows, format))
        }
        Command::Update { model, event } => {
            let m = load_model(&model)?;
            let e = parse_event(&event, m.vocab()).map_err(input)?;
            let (next, _) = Checker::new().update(&m, &e).map_err(input)?;
            Ok(print_model(&next))
        }
        Command::Scenario { script, timing } => {
            let src = read(&script)?;
            let base = script.parent().map(Path::to_path_buf);
            let (parsed, model) =
                parse_scenario(&src, base.as_deref()).map_err(|e| CliError::Input(format!("{}: {e}", script.display())))?;
            let report = run_scenario(&parsed, model, timing).map_err(input)?;
            print!("{}", report.render(format.into()));
            match report.failures() {
                0 => Ok(String::new()),
                n => Err(CliError::Assertion(n)),
            }
        }
        Command::Reduce { kind, simplify, trace, expr } => {
            let text = match kind {
                Kind::Formula => {
                    let r = reduce_formula(&formula_in(&expr, None)?);
                    if trace {
                        print_steps(&r.steps);
                    }
                    if simplify { simplify_formula(&r.value) } else { r.value }.to_string()
                }
                Kind::Term => {
                    let r = reduce_term(&term_in(&expr, None)?);
                    if trace {
                        print_steps(&r.steps);
                    }
                    if simplify { simplify_term(&r.value) } else { r.value }.to_string()
                }
                Kind::Event => return Err(CliError::Input("reduce takes a formula or a term".into())),
            };
            Ok(format!("{text}\n"))
        }
        Command::Sat(args) | Command::Valid(args) if args.closure_cap == 0 => {
            Err(CliError::Input("--closure-cap must be positive".into()))
        }
        Command::Sat(args) => {
            let phi = formula_in(&args.formula, None)?;
            let d = decide_sat(&phi, &DecideOptions { closure_cap: args.closure_cap })?;
            Ok(decision_report(&d, false, args.trace, format))
        }
        Command::Valid(args) => {
            let phi = formula_in(&args.formula, None)?;
            let d = decide_valid(&phi, &DecideOptions { closure_cap: args.closure_cap })?;
            Ok(decision_report(&d, true, args.trace, format))
        }
        Command::Gen { what } => match what {
            GenCommand::NumbersGame { max } => {
                let m = build_numbers_game(max).map_err(input)?;
                Ok(print_model(&m))
            }
            GenCommand::Random { seed, max_states, values } => {
                if max_states == 0 || values == 0 {
                    return Err(CliError::Input("--max-states and --values must be positive".into()));
                }
                let mut rng = StdRng::seed_from_u64(seed);
                let m = random_model(&test_vocabulary(), ModelShape { max_states, defined: values }, &mut rng);
                Ok(format!("# seed {seed}\n{}", print_model(&m)))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let timing = matches!(cli.command, Command::Scenario { timing: true, .. });
    let result = run(cli);
    if timing {
        eprintln!("total {:.3} ms", start.elapsed().as_secs_f64() * 1e3);
    }
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("dlkv: {e}");
            ExitCode::from(e.code())
        }
    }
}
