//! The `robust-chaos` command line.
//!
//! Every subcommand writes its artifact to `--out` (or stdout) and reports
//! through the exit status: 0 success, 1 verified-false or nothing found,
//! 2 no seed, 3 numerical failure, 64 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::attractors::{AttractorBudget, TOL_CYCLE, TOL_NEUTRAL};
use crate::baire::{search_alpha, OpenDenseTestSet, SampledCurve};
use crate::error::Error;
use crate::kneading::kneading_invariant;
use crate::polymap::{CubicMap, IntervalMap, QuadraticMap};
use crate::robustfamily::{
    find_seed, trace_curve, verify_robust, FamilyCurve, Seed, SeedBox, DEFAULT_SEED_GRID,
};
use crate::scan::{hyperbolic_windows, perturb_and_scan, scan_family, Family, ScanBudget};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_NOT_FOUND: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "robust-chaos", version, about = "Robustly chaotic cubic families of interval maps")]
struct Cli {
    /// JSON file supplying flag values; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (default: all cores). Outputs do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search a box of (a, b) for a point of the robust family.
    Seed(SeedArgs),
    /// Continue a seed into a curve and write it as CSV.
    Trace(TraceArgs),
    /// Check every sample of a curve CSV and write a certificate.
    Verify(VerifyArgs),
    /// Scan a one-parameter family and write one CSV row per parameter.
    Scan(ScanArgs),
    /// Search for a translation whose accepted parameter set is delta-dense.
    Baire(BaireArgs),
    /// Dump the kneading invariant of one map.
    Kneading(KneadingArgs),
    /// Scan normal displacements of a traced curve.
    Perturb(PerturbArgs),
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
struct SeedArgs {
    #[arg(long, default_value_t = -4.0)]
    a_min: f64,
    #[arg(long, default_value_t = 10.0)]
    a_max: f64,
    #[arg(long, default_value_t = -30.0)]
    b_min: f64,
    #[arg(long, default_value_t = 10.0)]
    b_max: f64,
    /// Lattice points per axis.
    #[arg(long, default_value_t = DEFAULT_SEED_GRID)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
struct TraceArgs {
    /// Seed JSON as written by `seed`.
    #[arg(long)]
    seed_file: PathBuf,
    /// Arclength step in the (a, b) plane.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Total samples over both directions.
    #[arg(long, default_value_t = 2000)]
    max_samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args, Serialize, Deserialize)]
struct BudgetArgs {
    /// Burn-in iterations before cycle detection.
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 64)]
    max_period: usize,
    #[arg(long, default_value_t = TOL_CYCLE)]
    tol_cycle: f64,
    #[arg(long, default_value_t = TOL_NEUTRAL)]
    tol_neutral: f64,
    #[arg(long, default_value_t = 1000)]
    no_cycle_horizon: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Result<AttractorBudget, Error> {
        if !(self.tol_cycle > 0.0 && self.tol_neutral > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.max_period == 0 {
            return Err(Error::InvalidArgument("max-period must be at least 1".into()));
        }
        Ok(AttractorBudget {
            max_iter: self.max_iter,
            max_period: self.max_period,
            tol_cycle: self.tol_cycle,
            tol_neutral: self.tol_neutral,
            no_cycle_horizon: self.no_cycle_horizon,
        })
    }
}

#[derive(Debug, Args, Serialize, Deserialize)]
struct VerifyArgs {
    /// Curve CSV with at least `t`, `a`, `b` columns.
    #[arg(long)]
    curve: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
struct ScanBudgetArgs {
    #[command(flatten)]
    #[serde(flatten)]
    attractor: BudgetArgs,
    /// Iterates averaged in each Lyapunov estimate.
    #[arg(long, default_value_t = 100_000)]
    lyapunov_n: usize,
    #[arg(long, default_value_t = 1000)]
    lyapunov_burn_in: usize,
    /// Symbols per critical value in the kneading column.
    #[arg(long, default_value_t = 16)]
    kneading_len: usize,
}

impl ScanBudgetArgs {
    fn budget(&self) -> Result<ScanBudget, Error> {
        if self.lyapunov_n == 0 {
            return Err(Error::InvalidArgument("lyapunov-n must be at least 1".into()));
        }
        Ok(ScanBudget {
            attractor: self.attractor.budget()?,
            lyapunov_n: self.lyapunov_n,
            lyapunov_burn_in: self.lyapunov_burn_in,
            kneading_len: self.kneading_len,
        })
    }
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
struct ScanArgs {
    /// `curve:PATH`, `segment:A0,B0,A1,B1`, `quadratic:MU0,MU1` or `constant:A,B`.
    #[arg(long)]
    family: String,
    /// Number of equally spaced parameters in [0, 1].
    #[arg(long, default_value_t = 201)]
    grid: usize,
    #[command(flatten)]
    #[serde(flatten)]
    budget: ScanBudgetArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
struct BaireArgs {
    /// `segment:X0,..:X1,..[:POINTS]` or `family:PATH` (the (a, b) points of a curve CSV).
    #[arg(long, default_value = "segment:0,0:1,0:201")]
    curve: String,
    /// JSON array of `{center, radius}` balls; omitted means no obstacles.
    #[arg(long)]
    obstacles: Option<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Radius of the ball the translations are drawn from.
    #[arg(long, default_value_t = 0.25)]
    radius: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
struct KneadingArgs {
    /// Linear coefficient of the cubic.
    #[arg(long, requires = "b", conflicts_with = "mu")]
    a: Option<f64>,
    /// Quadratic coefficient of the cubic.
    #[arg(long, requires = "a")]
    b: Option<f64>,
    /// Logistic parameter; used instead of `a` and `b`.
    #[arg(long)]
    mu: Option<f64>,
    /// Symbols per critical value.
    #[arg(long, default_value_t = 30)]
    len: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
struct PerturbArgs {
    /// Curve CSV as written by `trace`.
    #[arg(long)]
    curve: PathBuf,
    /// Normal displacements to scan.
    #[arg(long, value_delimiter = ',', default_values_t = [-1e-2, -1e-3, 0.0, 1e-3, 1e-2])]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 201)]
    grid: usize,
    #[command(flatten)]
    #[serde(flatten)]
    budget: ScanBudgetArgs,
    /// Directory receiving one scan CSV per displacement and `summary.json`;
    /// without it only the summary is printed.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Runs the command line on `args` (program name first) and returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let matches = match Cli::command().try_get_matches_from(&args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return EXIT_OK;
            }
            if !e.to_string().contains("Usage:") {
                eprintln!("\n{}", usage_for(&args));
            }
            return EXIT_USAGE;
        }
    };
    match dispatch(&matches) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Usage line of the subcommand named in `args`, or of the whole program.
fn usage_for(args: &[OsString]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let sub = args
        .iter()
        .skip(1)
        .filter_map(|a| a.to_str())
        .find_map(|a| cmd.find_subcommand(a).map(|c| c.get_name().to_string()));
    match sub.and_then(|name| cmd.find_subcommand_mut(&name).map(|c| c.render_usage())) {
        Some(usage) => usage.to_string(),
        None => cmd.render_usage().to_string(),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoSeedFound => EXIT_NOT_FOUND,
        Error::DegenerateCritical { .. }
        | Error::OutOfRange { .. }
        | Error::NearCriticalPoint { .. }
        | Error::EscapedDomain { .. }
        | Error::DegenerateIdentity
        | Error::CorrectorDiverged { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn dispatch(matches: &ArgMatches) -> Result<i32, Error> {
    let cli = Cli::from_arg_matches(matches).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let config = match &cli.config {
        Some(path) => Some(load_config(path)?),
        None => None,
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let config = config.as_ref().map(|c| config_section(c, name)).transpose()?;
    let cfg = config.as_ref();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Error::InvalidArgument("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    pool.install(|| match cli.command {
        Command::Seed(a) => cmd_seed(merge(a, sub, cfg)?),
        Command::Trace(a) => cmd_trace(merge(a, sub, cfg)?),
        Command::Verify(a) => cmd_verify(merge(a, sub, cfg)?),
        Command::Scan(a) => cmd_scan(merge(a, sub, cfg)?),
        Command::Baire(a) => cmd_baire(merge(a, sub, cfg)?),
        Command::Kneading(a) => cmd_kneading(merge(a, sub, cfg)?),
        Command::Perturb(a) => cmd_perturb(merge(a, sub, cfg)?),
    })
}

fn load_config(path: &Path) -> Result<Map<String, Value>, Error> {
    let text = fs::read_to_string(path)?;
    match serde_json::from_str(&text)? {
        Value::Object(map) => Ok(map),
        _ => Err(Error::InvalidArgument("config must be a JSON object".into())),
    }
}

/// Top-level scalar keys, overlaid by the object stored under the
/// subcommand's name, if any. Keys may use `-` or `_`.
fn config_section(config: &Map<String, Value>, name: &str) -> Result<Map<String, Value>, Error> {
    let mut out = Map::new();
    for (k, v) in config {
        if !v.is_object() {
            out.insert(k.replace('-', "_"), v.clone());
        }
    }
    match config.get(name) {
        Some(Value::Object(section)) => {
            for (k, v) in section {
                out.insert(k.replace('-', "_"), v.clone());
            }
        }
        Some(_) => return Err(Error::InvalidArgument(format!("config entry '{name}' must be an object"))),
        None => {}
    }
    Ok(out)
}

fn merge<A>(args: A, matches: &ArgMatches, config: Option<&Map<String, Value>>) -> Result<A, Error>
where
    A: Serialize + DeserializeOwned,
{
    match config {
        Some(c) => apply_config(args, matches, c),
        None => Ok(args),
    }
}

/// Overwrites every field of `args` that was not given on the command line
/// with the config value of the same name.
fn apply_config<A>(args: A, matches: &ArgMatches, config: &Map<String, Value>) -> Result<A, Error>
where
    A: Serialize + DeserializeOwned,
{
    let Value::Object(mut fields) = serde_json::to_value(&args)? else {
        unreachable!("argument structs serialize to objects");
    };
    for (key, value) in config {
        if !fields.contains_key(key) {
            continue;
        }
        let from_cli = matches!(matches.value_source(key), Some(ValueSource::CommandLine));
        if !from_cli {
            fields.insert(key.clone(), value.clone());
        }
    }
    serde_json::from_value(Value::Object(fields)).map_err(|e| Error::InvalidArgument(format!("config: {e}")))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, Error> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn read_curve(path: &Path) -> Result<FamilyCurve, Error> {
    let curve = FamilyCurve::read_csv(fs::File::open(path)?)?;
    if curve.is_empty() {
        return Err(Error::InvalidArgument(format!("{} holds no samples", path.display())));
    }
    Ok(curve)
}

fn cmd_seed(args: SeedArgs) -> Result<i32, Error> {
    let bx = SeedBox { a_min: args.a_min, a_max: args.a_max, b_min: args.b_min, b_max: args.b_max };
    let seed = find_seed(&bx, args.grid)?;
    log::info!("seed a={} b={} residual={:e}", seed.a, seed.b, seed.residual);
    emit(args.out.as_deref(), &to_json(&seed)?)?;
    Ok(EXIT_OK)
}

fn cmd_trace(args: TraceArgs) -> Result<i32, Error> {
    let seed: Seed = serde_json::from_str(&fs::read_to_string(&args.seed_file)?)?;
    match trace_curve((seed.a, seed.b), args.step, args.max_samples) {
        Ok(curve) => {
            log::info!("traced {} samples, stops {:?}", curve.len(), curve.stops);
            let mut bytes = Vec::new();
            curve.write_csv(&mut bytes)?;
            emit(args.out.as_deref(), &bytes)?;
            Ok(EXIT_OK)
        }
        Err(Error::CorrectorDiverged { partial }) if !partial.is_empty() => {
            let mut bytes = Vec::new();
            partial.write_csv(&mut bytes)?;
            emit(args.out.as_deref(), &bytes)?;
            eprintln!("error: corrector diverged after {} samples; partial curve written", partial.len());
            Ok(EXIT_NUMERICAL)
        }
        Err(e) => Err(e),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Error> {
    let curve = read_curve(&args.curve)?;
    let cert = verify_robust(&curve, &args.budget.budget()?);
    for bad in cert.failing() {
        log::warn!("sample t={} (a={}, b={}) fails: {:?}", bad.t, bad.a, bad.b, bad);
    }
    emit(args.out.as_deref(), &to_json(&cert)?)?;
    Ok(if cert.overall { EXIT_OK } else { EXIT_FALSE })
}

fn parse_numbers(text: &str, expected: usize, what: &str) -> Result<Vec<f64>, Error> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Error::InvalidArgument(format!("bad numbers in {what} '{text}'")))?;
    if values.len() != expected {
        return Err(Error::InvalidArgument(format!("{what} needs {expected} numbers, got {}", values.len())));
    }
    Ok(values)
}

fn parse_family(spec: &str) -> Result<Family, Error> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidArgument(format!("family spec '{spec}' lacks a kind")))?;
    match kind {
        "curve" => Family::curve(&read_curve(Path::new(rest))?),
        "segment" => {
            let v = parse_numbers(rest, 4, "segment")?;
            Ok(Family::Segment { a0: v[0], b0: v[1], a1: v[2], b1: v[3] })
        }
        "quadratic" => {
            let v = parse_numbers(rest, 2, "quadratic")?;
            Ok(Family::Quadratic { mu0: v[0], mu1: v[1] })
        }
        "constant" => {
            let v = parse_numbers(rest, 2, "constant")?;
            Ok(Family::constant(CubicMap::new(v[0], v[1])))
        }
        _ => Err(Error::InvalidArgument(format!("unknown family kind '{kind}'"))),
    }
}

fn cmd_scan(args: ScanArgs) -> Result<i32, Error> {
    let family = parse_family(&args.family)?;
    let report = scan_family(&family, args.grid, &args.budget.budget()?)?;
    log::info!("{} of {} rows hyperbolic", report.hyperbolic_count(), report.rows.len());
    let mut bytes = Vec::new();
    report.write_csv(&mut bytes)?;
    emit(args.out.as_deref(), &bytes)?;
    Ok(EXIT_OK)
}

fn parse_baire_curve(spec: &str) -> Result<SampledCurve, Error> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidArgument(format!("curve spec '{spec}' lacks a kind")))?;
    match kind {
        "segment" => {
            let parts: Vec<&str> = rest.split(':').collect();
            if !(2..=3).contains(&parts.len()) {
                return Err(Error::InvalidArgument(format!(
                    "segment spec '{spec}' needs START:END[:POINTS]"
                )));
            }
            let start = parse_numbers(parts[0], parts[0].split(',').count(), "segment start")?;
            let end = parse_numbers(parts[1], start.len(), "segment end")?;
            let len = match parts.get(2) {
                Some(n) => n.parse().map_err(|_| Error::InvalidArgument(format!("bad point count '{n}'")))?,
                None => 201,
            };
            SampledCurve::segment(&start, &end, len)
        }
        "family" => {
            let curve = read_curve(Path::new(rest))?;
            SampledCurve::new(curve.samples.iter().map(|s| vec![s.a, s.b]).collect())
        }
        _ => Err(Error::InvalidArgument(format!("unknown curve kind '{kind}'"))),
    }
}

fn cmd_baire(args: BaireArgs) -> Result<i32, Error> {
    if args.trials == 0 || !(args.radius >= 0.0) {
        return Err(Error::InvalidArgument("trials must be positive and radius non-negative".into()));
    }
    let curve = parse_baire_curve(&args.curve)?;
    let set = match &args.obstacles {
        Some(path) => OpenDenseTestSet::from_json(&fs::read_to_string(path)?, Some(curve.dimension()))?,
        None => OpenDenseTestSet::new(curve.dimension(), Vec::new())?,
    };
    let found = search_alpha(&curve, &set, args.delta, args.trials, args.radius, args.seed)?;
    emit(args.out.as_deref(), &to_json(&found)?)?;
    Ok(if found.is_some() { EXIT_OK } else { EXIT_FALSE })
}

fn cmd_kneading(args: KneadingArgs) -> Result<i32, Error> {
    let (params, map): (Value, Box<dyn IntervalMap>) = match (args.a, args.b, args.mu) {
        (Some(a), Some(b), None) => (json!({ "a": a, "b": b }), Box::new(CubicMap::new(a, b))),
        (None, None, Some(mu)) => (json!({ "mu": mu }), Box::new(QuadraticMap::new(mu))),
        _ => return Err(Error::InvalidArgument("give either --a and --b, or --mu".into())),
    };
    let invariant = kneading_invariant(map.as_ref(), args.len)?;
    let crit = map.criticals()?.points();
    let values: Vec<f64> = crit.iter().map(|&c| map.eval(c)).collect();
    let hits: Vec<Option<usize>> = invariant.itineraries.iter().map(|i| i.critical_hit).collect();
    let doc = json!({
        "map": params,
        "critical_points": crit,
        "critical_values": values,
        "length": invariant.length,
        "itineraries": invariant.itineraries,
        "critical_hits": hits,
        "invariant": invariant.to_string(),
    });
    emit(args.out.as_deref(), &to_json(&doc)?)?;
    Ok(EXIT_OK)
}

/// File name of the scan written for displacement `eps`, e.g. `scan_eps_-1e-3.csv`.
pub fn perturb_file_name(eps: f64) -> String {
    format!("scan_eps_{eps:+e}.csv")
}

fn cmd_perturb(args: PerturbArgs) -> Result<i32, Error> {
    let curve = read_curve(&args.curve)?;
    let budget = args.budget.budget()?;
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir)?;
    }
    let mut summary = Vec::new();
    for &eps in &args.eps {
        let report = perturb_and_scan(&curve, eps, args.grid, &budget)?;
        let windows = hyperbolic_windows(&report);
        let attracting = report
            .rows
            .iter()
            .filter(|r| r.hyperbolic && r.multiplier.is_some_and(|m| m.abs() < 1.0))
            .count();
        log::info!("eps {eps:e}: {} hyperbolic rows, windows {windows:?}", report.hyperbolic_count());
        let file = perturb_file_name(eps);
        if let Some(dir) = &args.out_dir {
            let mut bytes = Vec::new();
            report.write_csv(&mut bytes)?;
            fs::write(dir.join(&file), bytes)?;
        }
        summary.push(json!({
            "epsilon": eps,
            "file": file,
            "hyperbolic_rows": report.hyperbolic_count(),
            "attracting_rows": attracting,
            "windows": windows,
        }));
    }
    let bytes = to_json(&summary)?;
    match &args.out_dir {
        Some(dir) => fs::write(dir.join("summary.json"), bytes)?,
        None => emit(None, &bytes)?,
    }
    Ok(EXIT_OK)
}
