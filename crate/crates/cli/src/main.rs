mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gldpc::bounds::{
    bound_report, f_sweep, finite_length_bound, BoundConfig, BoundsError, Denominator, EtaBound,
    FiniteLengthOptions, Mode, Tolerances, DEFAULT_PRUNE_NATS,
};
use gldpc::bounds::{best_alpha0, C1Choice};
use gldpc::codes::CodeSpec;
use gldpc::ensemble::{nearest_admissible_n, EnsembleParams, TannerGraph};
use gldpc::experiment::{
    expurgate, parse_patterns, simulate, ErrorModel, ExperimentError, SimulationConfig,
};
use gldpc::partition::{expurgation_scan, PartitionError};

use output::{num, Csv, Format};

#[derive(Parser)]
#[command(name = "gldpc", version, about = "GLDPC decoding experiments and ensemble bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Worst-case and random-error radii, with an f(alpha) sweep or a family table.
    Bounds(BoundsArgs),
    /// Finite-length failure bound p_e(i) and its running sum.
    FiniteLength(FiniteLengthArgs),
    /// Monte-Carlo decoding of the all-zero codeword.
    Simulate(SimulateArgs),
    /// Scan sampled graphs for possibly bad corrupt sets.
    Expurgate(ExpurgateArgs),
    /// Generate or verify graph files.
    #[command(subcommand)]
    Graph(GraphCommand),
}

#[derive(Subcommand)]
enum GraphCommand {
    Gen(GraphGenArgs),
    Check(GraphCheckArgs),
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Variable degree; repeat alongside --code for a family table.
    #[arg(long = "c", required = true)]
    c: Vec<usize>,
    #[arg(long = "d")]
    d: Option<usize>,
    #[arg(long = "t")]
    t: Option<usize>,
    /// Flip threshold; the one maximizing alpha0 when omitted.
    #[arg(long = "c1")]
    c1: Option<usize>,
    /// Field order when no --code is given; q > 2 forces c1 > c/2.
    #[arg(long = "q", default_value_t = 2)]
    q: u32,
    /// Component code, e.g. hamming:m=7 or rs:d=30,k=24,q=31.
    #[arg(long)]
    code: Vec<CodeSpec>,
    /// Points in the f(alpha) sweep.
    #[arg(long, default_value_t = 40)]
    sweep_points: usize,
    /// Outer grid points per axis of the maximization.
    #[arg(long)]
    grid_points: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum DenominatorArg {
    Exact,
    StirlingBound,
}

#[derive(Clone, Copy, ValueEnum)]
enum EtaArg {
    Stirling,
    Entropy,
}

#[derive(Args)]
struct FiniteLengthArgs {
    #[arg(long = "c")]
    c: usize,
    #[arg(long = "d")]
    d: Option<usize>,
    #[arg(long = "t")]
    t: Option<usize>,
    #[arg(long = "c1")]
    c1: Option<usize>,
    #[arg(long = "q", default_value_t = 2)]
    q: u32,
    #[arg(long)]
    code: Option<CodeSpec>,
    #[arg(long = "N")]
    n: usize,
    /// Largest number of corrupt variables.
    #[arg(long, default_value_t = 25)]
    i_max: usize,
    /// Move N to the nearest blocklength with N*c divisible by d.
    #[arg(long)]
    round_n: bool,
    #[arg(long, value_enum, default_value_t = DenominatorArg::Exact)]
    denominator: DenominatorArg,
    #[arg(long, value_enum, default_value_t = EtaArg::Stirling)]
    eta: EtaArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ErrorModelArg {
    Random,
    File,
}

#[derive(Args)]
struct EnsembleArgs {
    #[arg(long)]
    code: CodeSpec,
    #[arg(long = "c")]
    c: usize,
    /// Flip threshold; defaults to ceil(c/2), or floor(c/2)+1 for q > 2.
    #[arg(long = "c1")]
    c1: Option<usize>,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    weight: usize,
    #[arg(long, value_enum, default_value_t = ErrorModelArg::Random)]
    error_model: ErrorModelArg,
    /// Pattern file for --error-model file: one "w p_1..p_w v_1..v_w" per line.
    #[arg(long)]
    patterns: Option<PathBuf>,
    /// Decode on this graph file in every trial.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = gldpc::decoder::DEFAULT_MAX_ITERATIONS)]
    max_iterations: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ExpurgateArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    /// Largest corrupt set examined.
    #[arg(long, default_value_t = 1)]
    b_max: usize,
    /// Largest number of candidate sets a scan may enumerate.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    /// Seeds to try, counting up from --seed, before giving up.
    #[arg(long, default_value_t = 1)]
    attempts: usize,
    /// Scan this graph file instead of sampling.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GraphGenArgs {
    #[arg(long = "c")]
    c: usize,
    #[arg(long = "d")]
    d: Option<usize>,
    #[arg(long)]
    code: Option<CodeSpec>,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphCheckArgs {
    path: PathBuf,
}

/// Failure classes and their exit codes.
#[derive(Debug)]
enum Failure {
    Io(String),
    Config(String),
    Condition(String),
    Budget(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Condition(_) => 3,
            Failure::Budget(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Config(m) | Failure::Condition(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<BoundsError> for Failure {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::ConditionViolated(_) | BoundsError::NoRoot(_) => {
                Failure::Condition(e.to_string())
            }
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Partition(p) => p.into(),
            other => Failure::Config(other.to_string()),
        }
    }
}

impl From<PartitionError> for Failure {
    fn from(e: PartitionError) -> Self {
        match e {
            PartitionError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::FiniteLength(a) => cmd_finite_length(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Expurgate(a) => cmd_expurgate(a),
        Command::Graph(GraphCommand::Gen(a)) => cmd_graph_gen(a),
        Command::Graph(GraphCommand::Check(a)) => cmd_graph_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

/// `(d, t, q)` from a code, or from explicit flags.
fn code_shape(
    code: Option<&CodeSpec>,
    d: Option<usize>,
    t: Option<usize>,
    q: u32,
) -> Result<(usize, usize, u32), Failure> {
    match code {
        Some(code) => {
            let shape = (code.blocklength(), code.radius(), code.q());
            if d.is_some_and(|d| d != shape.0) || t.is_some_and(|t| t != shape.1) {
                return Err(Failure::Config(format!(
                    "--d/--t disagree with {code}: d = {}, t = {}",
                    shape.0, shape.1
                )));
            }
            Ok(shape)
        }
        None => match (d, t) {
            (Some(d), Some(t)) => Ok((d, t, q)),
            _ => Err(Failure::Config("give --code or both --d and --t".into())),
        },
    }
}

fn tolerances(grid_points: Option<usize>) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(g) = grid_points {
        tol.grid_points = g;
    }
    tol
}

fn cmd_bounds(a: BoundsArgs) -> Result<(), Failure> {
    let tol = tolerances(a.grid_points);
    let shapes: Vec<(usize, usize, usize, u32)> = if a.code.is_empty() {
        if a.c.len() != 1 {
            return Err(Failure::Config("several --c values need one --code each".into()));
        }
        let (d, t, q) = code_shape(None, a.d, a.t, a.q)?;
        vec![(a.c[0], d, t, q)]
    } else {
        if a.c.len() != a.code.len() && a.c.len() != 1 {
            return Err(Failure::Config(format!(
                "{} --code values but {} --c values",
                a.code.len(),
                a.c.len()
            )));
        }
        a.code
            .iter()
            .enumerate()
            .map(|(k, code)| {
                let c = if a.c.len() == 1 { a.c[0] } else { a.c[k] };
                code_shape(Some(code), a.d, a.t, a.q).map(|(d, t, q)| (c, d, t, q))
            })
            .collect::<Result<_, _>>()?
    };

    let reports = shapes
        .iter()
        .map(|&(c, d, t, q)| bound_report(c, d, t, a.c1, q > 2, &tol, None))
        .collect::<Result<Vec<_>, _>>()?;

    let text = match (a.output.format, reports.as_slice()) {
        (Format::Json, [single]) => output::json(single)?,
        (Format::Json, many) => output::json(&many)?,
        (Format::Csv, [r]) => {
            let cfg = BoundConfig::new(r.c, r.d, r.t, r.c1)?.with_tolerances(tol.clone());
            let lo = r.alpha0.value / 10.0;
            let hi = (r.alpha0.value * 10.0).min(tol.alpha_max);
            let mut csv = Csv::new("f-sweep", &["alpha", "f_alpha"]);
            csv.comment(&format!(
                "c={} d={} t={} c1={} c1_policy={} alpha0={:e} alphaR={:e}",
                r.c,
                r.d,
                r.t,
                r.c1,
                policy_name(r.c1_policy),
                r.alpha0.value,
                r.alpha_r.value
            ));
            for (alpha, f) in f_sweep(&cfg, lo, hi, a.sweep_points.max(1), Mode::WorstCase) {
                csv.row(&[num(alpha), num(f)]);
            }
            csv.finish()?
        }
        (Format::Csv, many) => {
            let mut csv = Csv::new("family", &["d", "alpha0", "alphaR"]);
            for r in many {
                csv.comment(&format!(
                    "d={} c={} t={} c1={} c1_policy={}",
                    r.d,
                    r.c,
                    r.t,
                    r.c1,
                    policy_name(r.c1_policy)
                ));
            }
            for r in many {
                csv.row(&[r.d.to_string(), num(r.alpha0.value), num(r.alpha_r.value)]);
            }
            csv.finish()?
        }
    };
    output::emit(a.output.out.as_deref(), &text)
}

fn policy_name(p: C1Choice) -> &'static str {
    match p {
        C1Choice::Given => "given",
        C1Choice::MaximizedAlpha0 => "maximized-alpha0",
    }
}

fn cmd_finite_length(a: FiniteLengthArgs) -> Result<(), Failure> {
    let (d, t, q) = code_shape(a.code.as_ref(), a.d, a.t, a.q)?;
    let c = a.c;
    let n = if (a.n * c) % d == 0 && a.n > 0 {
        a.n
    } else if a.round_n {
        let n = nearest_admissible_n(a.n, c, d);
        eprintln!("note: N = {} rounded to {n} so that N*c is divisible by d", a.n);
        n
    } else {
        return Err(Failure::Config(format!(
            "N*c = {} is not divisible by d = {d}; the nearest valid N is {} (or pass --round-n)",
            a.n * c,
            nearest_admissible_n(a.n, c, d)
        )));
    };
    let (c1, policy) = match a.c1 {
        Some(c1) => (c1, C1Choice::Given),
        None => {
            let (c1, policy, _) = best_alpha0(c, d, t, None, q > 2, &Tolerances::default())?;
            (c1, policy)
        }
    };
    let cfg = BoundConfig::new(c, d, t, c1)?;
    let options = FiniteLengthOptions {
        denominator: match a.denominator {
            DenominatorArg::Exact => Denominator::Exact,
            DenominatorArg::StirlingBound => Denominator::StirlingBound,
        },
        eta: match a.eta {
            EtaArg::Stirling => EtaBound::Stirling,
            EtaArg::Entropy => EtaBound::Entropy,
        },
        prune_nats: DEFAULT_PRUNE_NATS,
    };
    let mut curve = finite_length_bound(n, a.i_max, &cfg, options)?;
    let keep = curve.useful_len();
    curve.ln_pe.truncate(keep);
    curve.pe.truncate(keep);
    curve.cumulative.truncate(keep);

    let text = match a.output.format {
        Format::Json => output::json(&output::FiniteLengthOutput {
            c,
            d,
            t,
            c1,
            c1_policy: policy,
            curve: &curve,
        })?,
        Format::Csv => {
            let mut csv = Csv::new("finite-length", &["i", "pe_i", "cumulative"]);
            csv.comment(&format!(
                "N={n} c={c} d={d} t={t} c1={c1} c1_policy={} denominator={:?} eta={:?}",
                policy_name(policy),
                options.denominator,
                options.eta
            ));
            for (k, (pe, cum)) in curve.pe.iter().zip(&curve.cumulative).enumerate() {
                csv.row(&[(k + 1).to_string(), num(*pe), num(*cum)]);
            }
            csv.finish()?
        }
    };
    output::emit(a.output.out.as_deref(), &text)
}

fn ensemble_params(e: &EnsembleArgs) -> Result<EnsembleParams, Failure> {
    let c1 = e.c1.unwrap_or(if e.code.q() > 2 { e.c / 2 + 1 } else { e.c.div_ceil(2) });
    EnsembleParams::new(e.n, e.c, e.code, c1).map_err(config_err)
}

fn load_graph(path: &Path) -> Result<TannerGraph, Failure> {
    TannerGraph::parse(&read_file(path)?).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn cmd_simulate(a: SimulateArgs) -> Result<(), Failure> {
    let params = ensemble_params(&a.ensemble)?;
    let model = match a.error_model {
        ErrorModelArg::Random => ErrorModel::Random { weight: a.weight },
        ErrorModelArg::File => {
            let path = a
                .patterns
                .as_deref()
                .ok_or_else(|| Failure::Config("--error-model file needs --patterns".into()))?;
            ErrorModel::Patterns(parse_patterns(&read_file(path)?)?)
        }
    };
    let graph = a.graph.as_deref().map(load_graph).transpose()?;
    let config = SimulationConfig {
        params,
        trials: a.trials,
        master_seed: a.ensemble.seed,
        model,
        max_iterations: a.max_iterations,
        graph,
    };
    let (records, summary) = simulate(&config)?;
    eprintln!("{}", output::json_line(&summary)?);
    let text = match a.output.format {
        Format::Json => output::json(&output::SimulationOutput {
            params: &params,
            master_seed: a.ensemble.seed,
            summary: &summary,
            records: &records,
        })?,
        Format::Csv => {
            let mut csv = Csv::new(
                "trials",
                &["trial", "seed", "weight", "iterations", "success", "residual"],
            );
            csv.comment(&format!(
                "code={} N={} c={} c1={} master_seed={}",
                params.code, params.n, params.c, params.c1, a.ensemble.seed
            ));
            for r in &records {
                csv.row(&[
                    r.trial.to_string(),
                    r.seed.to_string(),
                    r.weight.to_string(),
                    r.iterations.to_string(),
                    r.success.to_string(),
                    r.residual.to_string(),
                ]);
            }
            csv.finish()?
        }
    };
    output::emit(a.output.out.as_deref(), &text)
}

fn cmd_expurgate(a: ExpurgateArgs) -> Result<(), Failure> {
    let params = ensemble_params(&a.ensemble)?;
    let outcome = match a.graph.as_deref() {
        Some(path) => {
            let graph = load_graph(path)?;
            if (graph.num_variables(), graph.var_degree(), graph.check_degree())
                != (params.n, params.c, params.d)
            {
                return Err(Failure::Config("graph file does not match --N/--c/--code".into()));
            }
            let bad_sets = expurgation_scan(&graph, a.b_max, params.c1, params.t(), a.budget)?;
            gldpc::experiment::ExpurgationOutcome {
                accepted_seed: None,
                attempts: 1,
                bad_sets,
            }
        }
        None => expurgate(&params, a.ensemble.seed, a.b_max, a.budget, a.attempts)?,
    };
    let text = match a.output.format {
        Format::Json => output::json(&outcome)?,
        Format::Csv => {
            let mut csv = Csv::new("bad-sets", &["size", "set"]);
            csv.comment(&format!(
                "accepted_seed={} attempts={}",
                outcome.accepted_seed.map_or("none".to_string(), |s| s.to_string()),
                outcome.attempts
            ));
            for set in &outcome.bad_sets {
                let joined: Vec<String> = set.iter().map(usize::to_string).collect();
                csv.row(&[set.len().to_string(), joined.join(" ")]);
            }
            csv.finish()?
        }
    };
    output::emit(a.output.out.as_deref(), &text)
}

fn cmd_graph_gen(a: GraphGenArgs) -> Result<(), Failure> {
    let d = match (&a.code, a.d) {
        (Some(code), Some(d)) if code.blocklength() != d => {
            return Err(Failure::Config(format!("--d {d} disagrees with {code}")));
        }
        (Some(code), _) => code.blocklength(),
        (None, Some(d)) => d,
        (None, None) => return Err(Failure::Config("give --code or --d".into())),
    };
    let graph = TannerGraph::sample(a.n, a.c, d, a.seed).map_err(config_err)?;
    output::emit(a.out.as_deref(), &graph.to_text())
}

fn cmd_graph_check(a: GraphCheckArgs) -> Result<(), Failure> {
    let graph = load_graph(&a.path)?;
    println!(
        "ok N={} c={} d={} checks={} simple={}",
        graph.num_variables(),
        graph.var_degree(),
        graph.check_degree(),
        graph.num_checks(),
        graph.is_simple()
    );
    Ok(())
}
