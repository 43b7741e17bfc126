use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rflcs::bounds::{
    bernstein_tail, claim_inequality_gap, coupon_tail, expectation_lower_bound, lambda_empty, occupancy_tail,
    p1_bound, p2_bound_reduction, regime_target, BoundParams, Regime, TailBound,
};
use rflcs::experiments::{
    run_fixed_k_saturation, run_regime_sweep, run_tailbound_suite, uniformity_test_exhaustive, with_workers, Estimator,
    SweepConfig,
};
use rflcs::generators::{gen_planted_pair, gen_uniform_pair};
use rflcs::solvers::{
    heuristic_segment_size, lcs_length, rflcs_bruteforce, segment_merge_heuristic, ExactSolver, Leftover,
    PerSegment, SegmentPlan, DEFAULT_K_MAX_EXACT,
};
use rflcs::urns::{
    classical_histogram, classical_urn_exact, grouped_histogram, grouped_urn_exact, survival, GroupedUrnSpec,
    SurvivalTable, UrnModel,
};
use rflcs::{Instance, NoncrossingMatching, RngStream, SolveMethod, SolveResult};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] rflcs::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_capacity() => 3,
            CliError::Core(_) | CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::CheckFailed(_) => 4,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Repetition-free LCS of random sequences: generation, solvers, urn models, bounds and sweeps.
#[derive(Debug, Parser)]
#[command(name = "rflcs", version)]
struct Cli {
    /// Worker threads for parallel work; 0 uses every core. Output never depends on it.
    #[arg(long, global = true, env = "RFLCS_WORKERS", default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a uniform or planted instance as JSON.
    Gen(GenArgs),
    /// Solve an instance read from a JSON file.
    Solve(SolveArgs),
    /// Monte Carlo survival function of an urn model, as CSV.
    Urn(UrnArgs),
    /// Exact distribution of an urn model.
    UrnExact(UrnExactArgs),
    /// Evaluate one closed-form bound, as JSON.
    Bounds(BoundsArgs),
    /// Regime sweep report.
    Sweep(SweepArgs),
    /// Exact mean of R at a fixed alphabet, as JSON.
    Saturation(SaturationArgs),
    /// Exhaustive symbol-set uniformity test, as JSON; exits 4 when not uniform.
    Uniformity(UniformityArgs),
    /// Run the tail-bound battery, as JSON; exits 4 when any item fails.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    seed: u64,
    /// Plant a repetition-free sequence of this length.
    #[arg(long)]
    planted: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Brute,
    Heuristic,
    Lcs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PerSegmentArg {
    Exact,
    Lis,
    Auto,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LeftoverArg {
    Drop,
    FoldIntoLast,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Block size for the heuristic; defaults to ceil(k^(3/4)).
    #[arg(long)]
    segment_size: Option<usize>,
    #[arg(long, value_enum, default_value = "auto")]
    per_segment: PerSegmentArg,
    #[arg(long, value_enum, default_value = "fold-into-last")]
    leftover: LeftoverArg,
    /// Largest alphabet the exact solver accepts.
    #[arg(long, default_value_t = DEFAULT_K_MAX_EXACT)]
    k_max: usize,
}

#[derive(Debug, Clone, Args)]
struct UrnSpecArgs {
    #[arg(long)]
    k: usize,
    /// Balls in the classical model.
    #[arg(long, conflicts_with = "s_vec", required_unless_present = "s_vec")]
    s: Option<usize>,
    /// Comma-separated group sizes of the grouped model.
    #[arg(long, value_delimiter = ',')]
    s_vec: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
struct UrnArgs {
    #[command(flatten)]
    spec: UrnSpecArgs,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct UrnExactArgs {
    #[command(flatten)]
    spec: UrnSpecArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BoundOp {
    Lambda,
    Bernstein,
    Coupon,
    Occupancy,
    P1,
    P2,
    Claim,
    Regime,
    Expectation,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    op: BoundOp,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_tilde: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    p_below: Option<f64>,
    #[arg(long)]
    regime: Option<u32>,
    /// Deviation at which a regime tail is evaluated; defaults to xi.
    #[arg(long)]
    dev: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Exact,
    Heuristic,
    Bracket,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    regime: u32,
    /// Comma-separated alphabet sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    k_list: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value_t = 1.0)]
    xi: f64,
    #[arg(long)]
    trials: usize,
    #[arg(long, value_enum, default_value = "bracket")]
    estimator: EstimatorArg,
    /// Sequence length; required in regime 1, overrides the derived length otherwise.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SaturationArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Debug, Args)]
struct UniformityArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    seed: u64,
}

fn need<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this operation")))
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn emit(text: String, out: Option<&PathBuf>) -> CliResult<String> {
    let text = with_newline(text);
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn cmd_gen(a: &GenArgs) -> CliResult<String> {
    let mut rng = RngStream::new(a.seed, 0);
    let inst = match a.planted {
        Some(l) => gen_planted_pair(a.n, a.k, l, &mut rng)?,
        None => gen_uniform_pair(a.n, a.k, &mut rng)?,
    };
    emit(inst.to_json(), a.out.as_ref())
}

fn cmd_solve(a: &SolveArgs) -> CliResult<String> {
    let text = fs::read_to_string(&a.input).map_err(|source| CliError::Io {
        path: a.input.clone(),
        source,
    })?;
    let inst = Instance::from_json(&text)?;
    let result = match a.method {
        MethodArg::Exact => ExactSolver::default().with_k_max(a.k_max).solve(&inst)?,
        MethodArg::Brute => rflcs_bruteforce(&inst)?,
        MethodArg::Lcs => lcs_length(inst.x(), inst.y()),
        MethodArg::Heuristic => {
            let leftover = match a.leftover {
                LeftoverArg::Drop => Leftover::Drop,
                LeftoverArg::FoldIntoLast => Leftover::FoldIntoLast,
            };
            let per_segment = match a.per_segment {
                PerSegmentArg::Exact => PerSegment::Exact,
                PerSegmentArg::Lis => PerSegment::Lis,
                PerSegmentArg::Auto => PerSegment::Auto,
            };
            if inst.n() == 0 {
                SolveResult::new(SolveMethod::Heuristic, NoncrossingMatching::new())
            } else {
                let size = a.segment_size.unwrap_or_else(|| heuristic_segment_size(inst.k()).min(inst.n()));
                let plan = SegmentPlan::for_length(inst.n(), size, leftover)?;
                segment_merge_heuristic(&inst, &plan, per_segment)?
            }
        }
    };
    Ok(with_newline(result.to_json()))
}

enum UrnSpec {
    Classical { k: usize, s: usize },
    Grouped(GroupedUrnSpec),
}

fn urn_spec(a: &UrnSpecArgs) -> CliResult<UrnSpec> {
    match (&a.s_vec, a.s) {
        (Some(v), _) => Ok(UrnSpec::Grouped(GroupedUrnSpec::new(a.k, v.clone())?)),
        (None, Some(s)) => Ok(UrnSpec::Classical { k: a.k, s }),
        (None, None) => Err(CliError::Usage("one of --s or --s-vec is required".into())),
    }
}

fn cmd_urn(a: &UrnArgs) -> CliResult<String> {
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let table = match urn_spec(&a.spec)? {
        UrnSpec::Classical { k, s } => {
            SurvivalTable::from_histogram(UrnModel::Classical, k, vec![s], &classical_histogram(k, s, a.trials, a.seed)?)
        }
        UrnSpec::Grouped(spec) => SurvivalTable::from_histogram(
            UrnModel::Grouped,
            spec.k(),
            spec.s_vec().to_vec(),
            &grouped_histogram(&spec, a.trials, a.seed),
        ),
    };
    Ok(table.to_csv())
}

fn cmd_urn_exact(a: &UrnExactArgs) -> CliResult<String> {
    let (model, k, s_vec, pmf) = match urn_spec(&a.spec)? {
        UrnSpec::Classical { k, s } => (UrnModel::Classical, k, vec![s], classical_urn_exact(k, s)?),
        UrnSpec::Grouped(spec) => (UrnModel::Grouped, spec.k(), spec.s_vec().to_vec(), grouped_urn_exact(&spec)?),
    };
    match a.format {
        Format::Csv => Ok(SurvivalTable::from_pmf(model, k, s_vec, &pmf).to_csv()),
        Format::Json => {
            let v = json!({
                "model": model.as_str(),
                "k": k,
                "s_vec": s_vec,
                "pmf": pmf,
                "survival": survival(&pmf),
            });
            Ok(with_newline(v.to_string()))
        }
    }
}

fn bound_json(b: TailBound) -> Value {
    json!({ "value": b.value(), "ln": b.ln() })
}

fn bound_params(a: &BoundsArgs) -> CliResult<BoundParams> {
    let mut p = BoundParams::new(
        need(a.k, "k")?,
        need(a.n, "n")?,
        need(a.n_tilde, "n-tilde")?,
        need(a.delta, "delta")?,
    )?;
    if let Some(b) = a.b {
        p.b = b;
    }
    p.rho = a.rho.unwrap_or(0.0);
    p.xi = a.xi.unwrap_or(0.0);
    p.t = a.t.unwrap_or(0.0);
    p.a = a.a.unwrap_or(0.0);
    p.r = a.r.unwrap_or(0.0);
    p.s = a.s.unwrap_or(0);
    p.validate()?;
    Ok(p)
}

fn cmd_bounds(a: &BoundsArgs) -> CliResult<String> {
    let v = match a.op {
        BoundOp::Lambda => {
            let (k, s) = (need(a.k, "k")?, need(a.s, "s")?);
            if k == 0 {
                return Err(CliError::Usage("--k must be at least 1".into()));
            }
            json!({ "op": "lambda", "k": k, "s": s, "value": lambda_empty(k, s) })
        }
        BoundOp::Bernstein => {
            let (k, s, dev) = (need(a.k, "k")?, need(a.s, "s")?, need(a.a, "a")?);
            let b = bernstein_tail(k, s, dev)?;
            json!({ "op": "bernstein", "k": k, "s": s, "a": dev, "value": b.value(), "ln": b.ln() })
        }
        BoundOp::Coupon => {
            let (k, xi) = (need(a.k, "k")?, need(a.xi, "xi")?);
            let c = coupon_tail(k, xi)?;
            json!({ "op": "coupon", "k": k, "xi": xi, "s": c.s, "bound": c.bound })
        }
        BoundOp::Occupancy => {
            let (k, s, dev) = (need(a.k, "k")?, need(a.s, "s")?, need(a.a, "a")?);
            let b = occupancy_tail(k, s, dev)?;
            json!({ "op": "occupancy", "k": k, "s": s, "a": dev, "value": b.value(), "ln": b.ln() })
        }
        BoundOp::P1 => {
            let p = bound_params(a)?;
            let mut v = bound_json(p1_bound(&p)?);
            v["op"] = json!("p1");
            v["params"] = serde_json::to_value(p).expect("params serialize");
            v["m_l"] = json!(p.m_l());
            v["m_u"] = json!(p.m_u());
            v
        }
        BoundOp::P2 => {
            let p = bound_params(a)?;
            let q = p2_bound_reduction(&p)?;
            let exact = match q.exact() {
                Ok(v) => json!(v),
                Err(e) if e.is_capacity() => Value::Null,
                Err(e) => return Err(e.into()),
            };
            json!({ "op": "p2", "k": q.k, "s": q.s, "threshold": q.threshold, "exact": exact })
        }
        BoundOp::Claim => {
            let (x, rho) = (need(a.x, "x")?, need(a.rho, "rho")?);
            json!({ "op": "claim", "x": x, "rho": rho, "gap": claim_inequality_gap(x, rho)? })
        }
        BoundOp::Regime => {
            let regime = Regime::from_index(need(a.regime, "regime")?)?;
            let xi = a.xi.unwrap_or(0.0);
            let t = regime_target(regime, need(a.k, "k")?, a.rho.unwrap_or(0.0), xi, a.n)?;
            let dev = a.dev.unwrap_or(xi);
            json!({
                "op": "regime",
                "regime": regime.index(),
                "k": t.k,
                "n": t.n,
                "target": t.target,
                "rho": t.rho,
                "xi": t.xi,
                "within_regime": t.within_regime,
                "dev": dev,
                "tail": t.tail(dev),
            })
        }
        BoundOp::Expectation => {
            let (x, p) = (need(a.x, "x")?, need(a.p_below, "p-below")?);
            json!({ "op": "expectation", "x": x, "p_below": p, "value": expectation_lower_bound(x, p)? })
        }
    };
    Ok(with_newline(v.to_string()))
}

fn cmd_sweep(a: &SweepArgs, workers: usize) -> CliResult<String> {
    let config = SweepConfig {
        regime: Regime::from_index(a.regime)?,
        k_list: a.k_list.clone(),
        rho: a.rho,
        xi: a.xi,
        trials: a.trials,
        estimator: match a.estimator {
            EstimatorArg::Exact => Estimator::Exact,
            EstimatorArg::Heuristic => Estimator::Heuristic,
            EstimatorArg::Bracket => Estimator::Bracket,
        },
        n_override: a.n,
        master_seed: a.seed,
        workers,
    };
    let report = run_regime_sweep(&config)?;
    let text = match a.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    emit(text, a.out.as_ref())
}

fn cmd_saturation(a: &SaturationArgs) -> CliResult<String> {
    let stats = run_fixed_k_saturation(a.k, a.n, a.trials, &RngStream::new(a.seed, 0))?;
    Ok(with_newline(serde_json::to_string(&stats).expect("stats serialize")))
}

fn cmd_uniformity(a: &UniformityArgs) -> CliResult<String> {
    let report = uniformity_test_exhaustive(a.n, a.k)?;
    let text = with_newline(serde_json::to_string(&report).expect("report serializes"));
    if !report.uniform {
        print!("{text}");
        return Err(CliError::CheckFailed("conditional symbol-set distribution is not uniform".into()));
    }
    Ok(text)
}

fn cmd_check(a: &CheckArgs) -> CliResult<String> {
    let report = run_tailbound_suite(&RngStream::new(a.seed, 0))?;
    let text = with_newline(report.to_json());
    if !report.passed() {
        print!("{text}");
        let failed: Vec<&str> = report.items.iter().filter(|i| !i.passed).map(|i| i.name.as_str()).collect();
        return Err(CliError::CheckFailed(failed.join(", ")));
    }
    Ok(text)
}

fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Urn(a) => cmd_urn(a),
        Command::UrnExact(a) => cmd_urn_exact(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Sweep(a) => cmd_sweep(a, cli.workers),
        Command::Saturation(a) => cmd_saturation(a),
        Command::Uniformity(a) => cmd_uniformity(a),
        Command::Check(a) => cmd_check(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = with_workers(cli.workers, || run(&cli)).map_err(CliError::from).and_then(|r| r);
    match outcome {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
