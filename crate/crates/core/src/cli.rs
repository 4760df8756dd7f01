//! `ratiolab` command-line front end.
//!
//! Exit codes: `0` success, `1` violations found or runtime failure,
//! `2` invalid instance or parameters, `3` enumeration guard refusal.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::game::{
    self, run_game_decreasing, run_game_increasing, summarize, union_bound, Algorithm, GameConfig,
};
use crate::optimize::{local_search, random_search, RatioProblem};
use crate::oracle::{
    derive_decreasing_params, Bundled, Family, FunctionTable, InstanceDescriptor, PlantSpec,
    ResolvedInstance,
};
use crate::report::{self, envelope_json, opt_row, OPT_HEADER};
use crate::setcore::{GroundSize, SubsetSpec};
use crate::value::ExactValue;
use crate::verify::{verify_function, Direction, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ratiolab", version, about = "Ratio-of-supermodular-functions value-oracle lab")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exhaustively check supermodularity, monotonicity and non-negativity
    Verify(VerifyArgs),
    /// Optimize the ratio f/g over nonempty subsets
    Solve(SolveArgs),
    /// Run the planted-instance query game
    Game(GameArgs),
    /// Print exact per-query distinguishing probabilities
    Prob(ProbArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct InstanceArgs {
    /// Instance descriptor JSON file (overrides the flags below)
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub alpha: Option<u64>,
    #[arg(long)]
    pub beta: Option<u64>,
    /// Derive alpha = floor(x*sqrt(n)/5), beta = floor(x^2/5)
    #[arg(long)]
    pub x: Option<ExactValue>,
    /// Scale of the steep branch (increasing family), default 1000000
    #[arg(long)]
    pub m: Option<ExactValue>,
    /// Default 1/100
    #[arg(long)]
    pub epsilon: Option<ExactValue>,
    /// Comma-separated element list
    #[arg(long, conflicts_with = "plant_seed")]
    pub plant: Option<String>,
    #[arg(long)]
    pub plant_seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Decreasing,
    Increasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Brute,
    Local,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Nondecreasing,
    Nonincreasing,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Nondecreasing => Direction::Nondecreasing,
            DirectionArg::Nonincreasing => Direction::Nonincreasing,
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Function table JSON to verify instead of a bundled family
    #[arg(long, conflicts_with = "family")]
    pub table: Option<PathBuf>,
    /// Monotonicity direction for --table (bundled families imply theirs)
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    #[arg(long)]
    pub out_json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum, default_value = "brute")]
    pub method: MethodArg,
    /// Maximize instead of minimize (brute force only)
    #[arg(long)]
    pub maximize: bool,
    /// Query budget for heuristics, default n^3
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    #[arg(long)]
    pub out_json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GameArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum, default_value = "random")]
    pub method: MethodArg,
    /// Query budget per trial, default n^3
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    #[arg(long)]
    pub out_json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ProbArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub alpha: usize,
    #[arg(long)]
    pub beta: usize,
    /// One cardinality, or a comma-separated list for a union bound
    #[arg(long, value_delimiter = ',', required = true)]
    pub s: Vec<usize>,
}

/// Fully resolved configuration, echoed into every output header.
#[derive(Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximize: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_json: Option<String>,
}

impl RunConfig {
    fn new(command: &'static str) -> Self {
        RunConfig {
            command,
            instance: None,
            table: None,
            method: None,
            maximize: None,
            budget: None,
            trials: None,
            seed: None,
            out_csv: None,
            out_json: None,
        }
    }
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parameter(_) | Error::InfeasibleParams { .. } | Error::Config(_) | Error::Parse(_) => {
                EXIT_INVALID
            }
            Error::GuardExceeded { .. } => EXIT_GUARD,
            Error::UndefinedRatio(_) | Error::NoConsistentPlant { .. } => EXIT_FAILURE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        code: EXIT_FAILURE,
        message: format!("{}: {e}", path.display()),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| io_error(path, e))
}

const DEFAULT_EPSILON: &str = "1/100";

/// Builds the descriptor from `--instance` or from individual flags.
pub fn build_descriptor(args: &InstanceArgs) -> Result<InstanceDescriptor, Error> {
    if let Some(path) = &args.instance {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        return InstanceDescriptor::from_json(&text);
    }
    let family = match args.family {
        Some(FamilyArg::Decreasing) => Family::Decreasing,
        Some(FamilyArg::Increasing) => Family::Increasing,
        None => return Err(Error::Parameter("--family or --instance is required".into())),
    };
    let n = args
        .n
        .ok_or_else(|| Error::Parameter("--n is required".into()))?;
    let epsilon = args
        .epsilon
        .clone()
        .unwrap_or_else(|| DEFAULT_EPSILON.parse().expect("default epsilon"));
    let plant = match (&args.plant, args.plant_seed) {
        (Some(list), _) => Some(PlantSpec::Elements(parse_index_list(list)?)),
        (None, Some(seed)) => Some(PlantSpec::Seeded { seed }),
        (None, None) => None,
    };
    let (alpha, beta, m) = match family {
        Family::Decreasing => {
            if args.m.is_some() {
                return Err(Error::Parameter("--m does not apply to the decreasing family".into()));
            }
            let (alpha, beta) = match (&args.x, args.alpha, args.beta) {
                (Some(x), None, None) => derive_decreasing_params(GroundSize::new(n)?, x)?,
                (Some(_), _, _) => {
                    return Err(Error::Parameter("--x conflicts with --alpha/--beta".into()))
                }
                (None, Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::Parameter(
                        "decreasing family needs --alpha and --beta, or --x".into(),
                    ))
                }
            };
            (Some(alpha), Some(beta), None)
        }
        Family::Increasing => {
            if args.alpha.is_some() || args.beta.is_some() || args.x.is_some() {
                return Err(Error::Parameter(
                    "--alpha/--beta/--x do not apply to the increasing family".into(),
                ));
            }
            let m = args
                .m
                .clone()
                .unwrap_or_else(|| ExactValue::from_int(crate::oracle::DEFAULT_M));
            (None, None, Some(m))
        }
    };
    Ok(InstanceDescriptor {
        family,
        n,
        alpha,
        beta,
        m,
        epsilon,
        plant,
    })
}

fn parse_index_list(text: &str) -> Result<SubsetSpec, Error> {
    let items: Result<Vec<usize>, _> = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>())
        .collect();
    items
        .map(SubsetSpec)
        .map_err(|e| Error::Parse(format!("bad element list {text:?}: {e}")))
}

/// Runs a parsed command, writing human-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify(a) => run_verify(a, out),
        Command::Solve(a) => run_solve(a, out),
        Command::Game(a) => run_game(a, out),
        Command::Prob(a) => run_prob(a, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError {
        code: EXIT_FAILURE,
        message: format!("stdout: {e}"),
    })
}

fn path_string(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn bundled_functions(inst: &ResolvedInstance) -> Result<Vec<Bundled>, Error> {
    Ok(match inst {
        ResolvedInstance::Decreasing(d) => {
            let mut v = vec![d.f()];
            if d.plant().is_some() {
                v.push(d.g_planted()?);
            }
            v
        }
        ResolvedInstance::Increasing(i) => {
            let mut v = vec![i.f(), i.g()];
            if i.plant().is_some() {
                v.push(i.g_planted()?);
            }
            v
        }
    })
}

fn run_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut config = RunConfig::new("verify");
    config.out_csv = path_string(&a.out_csv);
    config.out_json = path_string(&a.out_json);
    let reports: Vec<VerifyReport> = match &a.table {
        Some(path) => {
            config.table = Some(path.display().to_string());
            let table = FunctionTable::from_json(&read_file(path)?)?;
            vec![verify_function("table", &table, a.direction.map(Direction::from))?]
        }
        None => {
            let descriptor = build_descriptor(&a.instance)?;
            let resolved = descriptor.resolve()?;
            config.instance = Some(descriptor);
            let direction = match resolved.family() {
                Family::Decreasing => Direction::Nonincreasing,
                Family::Increasing => Direction::Nondecreasing,
            };
            let direction = a.direction.map(Direction::from).unwrap_or(direction);
            bundled_functions(&resolved)?
                .iter()
                .map(|f| verify_function(f.label(), f, Some(direction)))
                .collect::<Result<_, _>>()?
        }
    };
    let mut text = String::new();
    for r in &reports {
        let mono = match &r.monotone {
            Some((d, v)) => format!(" monotone({})={}", d.label(), v.len()),
            None => String::new(),
        };
        text.push_str(&format!(
            "{}: n={} supermodular={}{} nonnegative={} queries={}\n",
            r.label,
            r.n,
            r.supermodular.len(),
            mono,
            r.nonnegative.len(),
            r.queries
        ));
    }
    let total: usize = reports.iter().map(VerifyReport::violation_count).sum();
    text.push_str(&format!("violations: {total}\n"));
    emit(out, &text)?;

    if let Some(path) = &a.out_csv {
        let mut csv = report::csv_preamble(&config, None);
        csv.push_str("function,base_mask_hex,i,j,lhs,rhs\n");
        for r in &reports {
            for v in &r.supermodular {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.label,
                    v.base.to_hex(),
                    v.i,
                    v.j,
                    v.lhs_margin,
                    v.rhs_margin
                ));
            }
        }
        write_file(path, &csv)?;
    }
    if let Some(path) = &a.out_json {
        write_file(path, &envelope_json(&config, None, &reports))?;
    }
    Ok(if total == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn default_budget(n: usize) -> u64 {
    (n as u64).pow(3)
}

fn run_solve(a: SolveArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let descriptor = build_descriptor(&a.instance)?;
    let resolved = descriptor.resolve()?;
    let n = resolved.n();
    let family = resolved.family();
    let (f, g) = match &resolved {
        ResolvedInstance::Decreasing(d) => (d.f(), d.g_planted()?),
        ResolvedInstance::Increasing(i) => match i.plant() {
            Some(_) => (i.f(), i.g_planted()?),
            None => (i.f(), i.g()),
        },
    };
    let heuristic = a.method != MethodArg::Brute;
    if heuristic && a.maximize {
        return Err(Error::Parameter("--maximize is only supported with --method brute".into()).into());
    }
    let budget = a.budget.unwrap_or_else(|| default_budget(n.get()));
    let mut config = RunConfig::new("solve");
    config.instance = Some(descriptor);
    config.method = Some(a.method);
    config.maximize = Some(a.maximize);
    config.budget = heuristic.then_some(budget);
    config.seed = heuristic.then_some(a.seed);
    config.out_csv = path_string(&a.out_csv);
    config.out_json = path_string(&a.out_json);

    let problem = if a.maximize {
        RatioProblem::maximize(&f, &g)
    } else {
        RatioProblem::minimize(&f, &g)
    };
    let result = match a.method {
        MethodArg::Brute => problem.solve_exhaustive()?,
        MethodArg::Local => local_search(&mut problem.oracle()?, budget, a.seed)?,
        MethodArg::Random => random_search(&mut problem.oracle()?, (budget / 2).max(1), a.seed)?,
    };
    emit(
        out,
        &format!(
            "{} argset={} value={} (~{}) queries={}\n",
            result.method,
            serde_json::to_string(&result.argset).expect("subset serializes"),
            result.value,
            result.value.to_decimal(report::DECIMAL_DIGITS),
            result.queries_used
        ),
    )?;
    if let Some(path) = &a.out_csv {
        let mut csv = report::csv_preamble(&config, None);
        csv.push_str(OPT_HEADER);
        csv.push('\n');
        csv.push_str(&opt_row(&result, family.label(), config.seed));
        csv.push('\n');
        write_file(path, &csv)?;
    }
    if let Some(path) = &a.out_json {
        write_file(path, &envelope_json(&config, None, &result))?;
    }
    Ok(EXIT_OK)
}

fn run_game(a: GameArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let descriptor = build_descriptor(&a.instance)?;
    if descriptor.plant.is_some() {
        return Err(Error::Parameter("the game chooses its own plant; drop --plant/--plant-seed".into()).into());
    }
    let resolved = descriptor.resolve()?;
    let algorithm = match a.method {
        MethodArg::Local => Algorithm::LocalSearch,
        MethodArg::Random => Algorithm::RandomSearch,
        MethodArg::Brute => {
            return Err(Error::Parameter("the game runs query-budgeted methods: local or random".into()).into())
        }
    };
    let cfg = GameConfig {
        algorithm,
        budget: a.budget.unwrap_or_else(|| default_budget(resolved.n().get())),
        trials: a.trials,
        seed: a.seed,
    };
    let mut config = RunConfig::new("game");
    config.instance = Some(descriptor);
    config.method = Some(a.method);
    config.budget = Some(cfg.budget);
    config.trials = Some(cfg.trials);
    config.seed = Some(cfg.seed);
    config.out_csv = path_string(&a.out_csv);
    config.out_json = path_string(&a.out_json);

    let (reports, guaranteed) = match &resolved {
        ResolvedInstance::Decreasing(d) => {
            let undistinguished = d
                .planted_optimum()
                .recip()
                .expect("planted optimum is positive");
            (run_game_decreasing(d, &cfg)?, undistinguished)
        }
        ResolvedInstance::Increasing(i) => (run_game_increasing(i, &cfg)?, i.gap_bound()),
    };
    let seeds = game::trial_seeds(&cfg);
    let summary = summarize(&reports, &cfg, guaranteed)?;
    let csv = report::game_csv(&config, &seeds, &reports);
    let json = envelope_json(&config, Some(&seeds), &summary);
    match &a.out_csv {
        Some(path) => write_file(path, &csv)?,
        None if a.out_json.is_none() => emit(out, &csv)?,
        None => {}
    }
    match &a.out_json {
        Some(path) => write_file(path, &json)?,
        None => emit(out, &json)?,
    }
    Ok(EXIT_OK)
}

fn run_prob(a: ProbArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut text = String::new();
    for &s in &a.s {
        let p = game::distinguish_probability(a.n, a.alpha, a.beta, s)?;
        if a.s.len() == 1 {
            text.push_str(&format!("{p}\n"));
        } else {
            text.push_str(&format!("s={s} {p}\n"));
        }
    }
    if a.s.len() > 1 {
        let u = union_bound(&a.s, a.n, a.alpha, a.beta)?;
        text.push_str(&format!("union_bound {u}\n"));
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}

/// Parses `args`, runs, and returns the process exit code. Diagnostics go
/// to stderr.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
