use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qglue::analysis::{analyze, Checks, DEFAULT_TOL};
use qglue::builders::StateSpec;
use qglue::json::{gate_from_json, outcome_to_json, report_to_json, state_from_json, state_to_json};
use qglue::recursion::{chain_direct, OutcomePolicy};
use qglue::{glue, glue_star, glue_star_star, GlueOutcome, PureState, QGlueError, TwoQuditGate};

const MAX_DENSE_LEN: u128 = 1 << 20;

#[derive(Parser)]
#[command(name = "qglue", version, about = "Glue multipartite qudit states and analyze the results")]
struct Cli {
    /// Allow states with more than 2^20 amplitudes.
    #[arg(long, global = true)]
    allow_large: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named state (ghz:4, w:3, bell:phi+, ring:5, m4, parity:4:even, aw3, maxent:3).
    Build(BuildArgs),
    /// Glue two state files across party x of A and party y of B.
    Glue(GlueArgs),
    /// Glue fresh Bell pairs onto φ⁺, one after another.
    Chain(ChainArgs),
    /// Report k-uniformity and average purity of a state file.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    state: String,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    None,
    Star,
    Starstar,
}

#[derive(Args)]
struct GlueArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    x: usize,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    y: usize,
    /// V1..V4, bell, or a gate JSON file.
    #[arg(long, default_value = "V1")]
    gate: String,
    #[arg(long, value_enum, default_value = "none")]
    variant: Variant,
    /// Forced outcome: "o" for star, "a,b" for starstar. Sampled when absent.
    #[arg(long)]
    outcome: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Zero,
    Sample,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long, default_value = "V1")]
    gate: String,
    #[arg(long)]
    steps: usize,
    /// Local dimension; only the generalized Bell gate supports d > 2.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, value_enum, default_value = "zero")]
    outcome_policy: Policy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long, default_value = "all")]
    checks: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(QGlueError),
}

impl From<QGlueError> for CliError {
    fn from(e: QGlueError) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(QGlueError::ZeroProbabilityBranch { .. }) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn guard(d: usize, n: usize, allow_large: bool) -> CliResult<()> {
    let len = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if len > MAX_DENSE_LEN && !allow_large {
        return Err(usage(format!(
            "state with d={d}, n={n} has {d}^{n} amplitudes (limit 2^20); pass --allow-large to proceed"
        )));
    }
    Ok(())
}

fn read_state(path: &Path) -> CliResult<PureState> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(state_from_json(&text)?)
}

fn emit(out: Option<&Path>, json: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, json).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn resolve_gate(name: &str, d: usize) -> CliResult<TwoQuditGate> {
    if name.ends_with(".json") {
        let text = fs::read_to_string(name).map_err(|e| usage(format!("{name}: {e}")))?;
        let gate = gate_from_json(&text)?;
        if gate.local_dim() != d {
            return Err(usage(format!("gate acts on d={}, states have d={d}", gate.local_dim())));
        }
        return Ok(gate);
    }
    Ok(TwoQuditGate::by_name(name, d)?)
}

fn parse_outcomes(raw: &str) -> CliResult<Vec<usize>> {
    raw.split(',')
        .map(|t| t.trim().parse().map_err(|_| usage(format!("bad outcome '{raw}'"))))
        .collect()
}

fn cmd_build(args: BuildArgs, allow_large: bool) -> CliResult<()> {
    let spec: StateSpec = args.state.parse()?;
    let (d, n) = spec.shape();
    guard(d, n, allow_large)?;
    emit(args.out.as_deref(), &state_to_json(&spec.build()?))
}

fn report_probability(out: Option<&Path>, p: f64) {
    // keep stdout clean for JSON when no output file is given
    if out.is_some() {
        println!("probability {p:.16e}");
    } else {
        eprintln!("probability {p:.16e}");
    }
}

fn cmd_glue(args: GlueArgs, allow_large: bool) -> CliResult<()> {
    let a = read_state(&args.a)?;
    let b = read_state(&args.b)?;
    guard(a.local_dim(), a.num_parties() + b.num_parties(), allow_large)?;
    let gate = resolve_gate(&args.gate, a.local_dim())?;
    let forced = args.outcome.as_deref().map(parse_outcomes).transpose()?;
    let result = match args.variant {
        Variant::None => {
            if forced.is_some() {
                return Err(usage("--outcome only applies to star and starstar"));
            }
            GlueOutcome {
                state: glue(&a, args.x, &b, args.y, &gate)?,
                measured: Vec::new(),
                probability: 1.0,
            }
        }
        Variant::Star => {
            let o = match forced.as_deref() {
                None => None,
                Some([o]) => Some(*o),
                Some(_) => return Err(usage("star takes one outcome")),
            };
            glue_star(&a, args.x, &b, args.y, &gate, o, args.seed)?
        }
        Variant::Starstar => {
            let o = match forced.as_deref() {
                None => None,
                Some([p, q]) => Some((*p, *q)),
                Some(_) => return Err(usage("starstar takes two outcomes, e.g. 0,1")),
            };
            glue_star_star(&a, args.x, &b, args.y, &gate, o, args.seed)?
        }
    };
    report_probability(args.out.as_deref(), result.probability);
    emit(args.out.as_deref(), &outcome_to_json(&result))
}

fn cmd_chain(args: ChainArgs, allow_large: bool) -> CliResult<()> {
    if args.steps < 1 {
        return Err(usage("--steps must be at least 1"));
    }
    let gate = resolve_gate(&args.gate, args.dim)?;
    guard(gate.local_dim(), args.steps + 2, allow_large)?;
    let policy = match args.outcome_policy {
        Policy::Zero => OutcomePolicy::zero(),
        Policy::Sample => OutcomePolicy::Sample { seed: args.seed },
    };
    let result = chain_direct(&gate, args.steps, &policy)?;
    report_probability(args.out.as_deref(), result.probability);
    emit(args.out.as_deref(), &state_to_json(&result.state))
}

fn cmd_analyze(args: AnalyzeArgs, allow_large: bool) -> CliResult<()> {
    let state = read_state(&args.state)?;
    guard(state.local_dim(), state.num_parties(), allow_large)?;
    let checks: Checks = args.checks.parse()?;
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(usage("--tol must be positive"));
    }
    let report = analyze(&state, checks, args.tol)?;
    emit(args.out.as_deref(), &report_to_json(&report))
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("QGLUE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("QGLUE_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(e.to_string()))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Build(a) => cmd_build(a, cli.allow_large),
        Command::Glue(a) => cmd_glue(a, cli.allow_large),
        Command::Chain(a) => cmd_chain(a, cli.allow_large),
        Command::Analyze(a) => cmd_analyze(a, cli.allow_large),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
