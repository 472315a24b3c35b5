//! Command-line front end.
//!
//! Exit codes: 0 success, 1 solver failure (or, for `verify`, a failed
//! check), 2 usage, 3 invalid parameters, 4 I/O.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{Map, Number, Value};

use crate::diagnostics::{CheckKind, DiagnosticsReport};
use crate::error::Error;
use crate::fixedpoint::solve_wave;
use crate::limits::{LimitCase, LimitKind};
use crate::manifold::{grow_manifold, sample_phase_portrait, BoundingBox};
use crate::model::{ClosureMode, PhaseState, PhysicalParams, SolverConfig};
use crate::profiles::{extend_full_line, solve_full, Profile, WaveSolution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SOLVER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "flamewave", version, about = "Travelling waves for free-interface combustion with fractional reaction order")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Solve one parameter set; writes profile.csv and summary.json.
    Solve(Common),
    /// Solve every combination of the given parameters; writes sweep.csv and
    /// one summary per row.
    Sweep(Common),
    /// Evaluate a limit case; writes limit.json.
    Limit {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Trajectories of the extended field; writes portrait_NNN.csv.
    Portrait {
        #[command(flatten)]
        common: Common,
        /// Speed to use instead of the solved one.
        #[arg(long)]
        speed: Option<f64>,
        #[arg(long, default_value_t = 10.0)]
        t_span: f64,
        /// Half-width of the square clipping box.
        #[arg(long = "box", default_value_t = 2.0)]
        half_width: f64,
        /// Seed as `x,y`; repeatable. Defaults to a ring plus the manifold.
        #[arg(long = "seed", action = clap::ArgAction::Append, allow_hyphen_values = true)]
        seeds: Vec<String>,
    },
    /// Solve and run all diagnostics; exit status 0 only if every check
    /// passes.
    Verify(Common),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    AlphaOne,
    AlphaZero,
    LambdaZero,
    LambdaOne,
}

#[derive(Debug, Args)]
struct Common {
    /// Reaction order; a value or an inclusive range `start:stop:step`.
    /// Repeatable.
    #[arg(long, action = clap::ArgAction::Append, allow_hyphen_values = true)]
    alpha: Vec<String>,
    /// Inverse Lewis number; value or range, repeatable.
    #[arg(long, action = clap::ArgAction::Append, allow_hyphen_values = true)]
    lambda: Vec<String>,
    /// Ignition temperature; value or range, repeatable.
    #[arg(long, action = clap::ArgAction::Append, allow_hyphen_values = true)]
    theta: Vec<String>,
    /// Output directory (created if missing).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative ODE tolerance; the absolute one is 10⁻⁴ of it.
    #[arg(long)]
    tol_ode: Option<f64>,
    /// Tolerance on v0 in the closure; the speed is bracketed 10³ tighter.
    #[arg(long)]
    tol_root: Option<f64>,
    /// Profile grid points on [0, R].
    #[arg(long)]
    grid: Option<usize>,
    /// Where the series tail hands off to integration.
    #[arg(long)]
    seed_x: Option<f64>,
    /// Use the projected fixed-point iteration instead of bisection
    /// (experimental).
    #[arg(long)]
    picard: bool,
    /// File of `key=value` lines with the same keys as the long flags.
    /// Flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Sweep,
    Limit,
    Portrait,
    Verify,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PortraitSpec {
    None,
    Portrait { speed: Option<f64>, t_span: f64, half_width: f64, seeds: Vec<PhaseState<f64>> },
}

/// A fully parsed and validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub thetas: Vec<f64>,
    pub cfg: SolverConfig<f64>,
    pub output_dir: PathBuf,
    pub limit_kind: Option<LimitKind>,
    pub portrait: PortraitSpec,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(m: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: m.into() }
    }
    fn invalid(m: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, message: m.into() }
    }
    fn io(path: &Path, e: std::io::Error) -> Self {
        Self { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParams(_) => EXIT_INVALID,
            _ => EXIT_SOLVER,
        };
        Self { code, message: e.to_string() }
    }
}

/// Expands `v` or `start:stop:step` (inclusive, step > 0).
pub fn parse_values(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| f64::from_str(t.trim()).map_err(|_| format!("not a number: {t:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
                return Err(format!("bad range {s:?}: need start <= stop and step > 0"));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize + 1;
            // Round away the representation noise of a + i·step.
            Ok((0..n).map(|i| round12(a + step * i as f64)).collect())
        }
        _ => Err(format!("expected a number or start:stop:step, got {s:?}")),
    }
}

fn round12(x: f64) -> f64 {
    format!("{x:.12}").parse().unwrap_or(x)
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::usage(format!("{}:{}: expected key=value", path.display(), n + 1)));
        };
        let key = k.trim().replace('_', "-");
        const KEYS: [&str; 9] = ["alpha", "lambda", "theta", "out", "tol-ode", "tol-root", "grid", "seed-x", "picard"];
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::usage(format!("{}:{}: unknown key {key:?}", path.display(), n + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn values(flag: &[String], file: Option<&String>, name: &str) -> Result<Vec<f64>, CliError> {
    let raw: Vec<String> = if flag.is_empty() {
        file.map(|s| s.split(',').map(str::to_string).collect()).unwrap_or_default()
    } else {
        flag.to_vec()
    };
    let mut out = Vec::new();
    for r in &raw {
        out.extend(parse_values(r).map_err(|e| CliError::usage(format!("--{name}: {e}")))?);
    }
    Ok(out)
}

fn scalar<T: FromStr>(flag: Option<T>, file: Option<&String>, name: &str) -> Result<Option<T>, CliError> {
    match (flag, file) {
        (Some(v), _) => Ok(Some(v)),
        (None, Some(s)) => s
            .parse()
            .map(Some)
            .map_err(|_| CliError::usage(format!("config {name}: cannot parse {s:?}"))),
        (None, None) => Ok(None),
    }
}

fn parse_seed(s: &str) -> Result<PhaseState<f64>, CliError> {
    let (x, y) = s.split_once(',').ok_or_else(|| CliError::usage(format!("--seed: expected x,y, got {s:?}")))?;
    let f = |t: &str| f64::from_str(t.trim()).map_err(|_| CliError::usage(format!("--seed: not a number {t:?}")));
    Ok(PhaseState::new(f(x)?, f(y)?))
}

fn build_spec(command: Command, c: Common) -> Result<RunSpec, CliError> {
    let file = match &c.config {
        Some(path) => read_config(path)?,
        None => BTreeMap::new(),
    };
    let alphas = values(&c.alpha, file.get("alpha"), "alpha")?;
    let lambdas = values(&c.lambda, file.get("lambda"), "lambda")?;
    let thetas = values(&c.theta, file.get("theta"), "theta")?;
    let mut cfg = SolverConfig::default();
    if let Some(t) = scalar(c.tol_ode, file.get("tol-ode"), "tol-ode")? {
        cfg.ode_rel_tol = t;
        cfg.ode_abs_tol = t * 1e-4;
    }
    if let Some(t) = scalar(c.tol_root, file.get("tol-root"), "tol-root")? {
        cfg.v0_bisect_tol = t;
        cfg.c_bisect_tol = t * 1e-3;
    }
    if let Some(n) = scalar(c.grid, file.get("grid"), "grid")? {
        cfg.profile_points = n;
    }
    if let Some(s) = scalar(c.seed_x, file.get("seed-x"), "seed-x")? {
        cfg.seed_x = s;
    }
    let picard = c.picard || scalar::<bool>(None, file.get("picard"), "picard")?.unwrap_or(false);
    if picard {
        cfg.closure_mode = ClosureMode::Picard;
    }
    cfg.validate().map_err(|e| CliError::invalid(e.to_string()))?;
    let output_dir = c.out.or_else(|| file.get("out").map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."));
    Ok(RunSpec {
        command,
        alphas,
        lambdas,
        thetas,
        cfg,
        output_dir,
        limit_kind: None,
        portrait: PortraitSpec::None,
    })
}

fn one(v: &[f64], name: &str) -> Result<f64, CliError> {
    match v {
        [x] => Ok(*x),
        [] => Err(CliError::usage(format!("--{name} is required"))),
        _ => Err(CliError::usage(format!("--{name} takes a single value for this command"))),
    }
}

fn validate(spec: &RunSpec) -> Result<(), CliError> {
    let need = |v: &[f64], name: &str| -> Result<(), CliError> {
        if v.is_empty() {
            Err(CliError::usage(format!("--{name} is required")))
        } else {
            Ok(())
        }
    };
    match spec.command {
        Command::Solve | Command::Verify | Command::Portrait => {
            let p = PhysicalParams::new(one(&spec.alphas, "alpha")?, one(&spec.lambdas, "lambda")?, one(&spec.thetas, "theta")?);
            p.map_err(|e| CliError::invalid(e.to_string()))?;
        }
        Command::Sweep => {
            need(&spec.alphas, "alpha")?;
            need(&spec.lambdas, "lambda")?;
            need(&spec.thetas, "theta")?;
            for &a in &spec.alphas {
                for &l in &spec.lambdas {
                    for &t in &spec.thetas {
                        PhysicalParams::new(a, l, t).map_err(|e| CliError::invalid(e.to_string()))?;
                    }
                }
            }
        }
        Command::Limit => {
            limit_case(spec)?;
        }
    }
    if let PortraitSpec::Portrait { t_span, half_width, .. } = &spec.portrait {
        if !(*t_span > 0.0) || !(*half_width > 0.0) {
            return Err(CliError::invalid("--t-span and --box must be positive"));
        }
    }
    Ok(())
}

/// The limit case named by `--kind`; the parameter fixed by the limit may
/// be omitted.
fn limit_case(spec: &RunSpec) -> Result<LimitCase<f64>, CliError> {
    let kind = spec.limit_kind.ok_or_else(|| CliError::usage("--kind is required"))?;
    let or = |v: &[f64], name: &str, default: Option<f64>| match (v, default) {
        ([], Some(d)) => Ok(d),
        _ => one(v, name),
    };
    let theta = one(&spec.thetas, "theta")?;
    let (alpha, lambda) = match kind {
        LimitKind::AlphaOne => (or(&spec.alphas, "alpha", Some(1.0))?, one(&spec.lambdas, "lambda")?),
        LimitKind::AlphaZero => (or(&spec.alphas, "alpha", Some(0.0))?, or(&spec.lambdas, "lambda", Some(1.0))?),
        LimitKind::LambdaZero => (one(&spec.alphas, "alpha")?, or(&spec.lambdas, "lambda", Some(0.0))?),
        LimitKind::LambdaOne => (one(&spec.alphas, "alpha")?, or(&spec.lambdas, "lambda", Some(1.0))?),
    };
    let p = PhysicalParams::for_limits(alpha, lambda, theta).map_err(|e| CliError::invalid(e.to_string()))?;
    LimitCase::new(kind, p).map_err(|e| CliError::invalid(e.to_string()))
}

/// Parses and validates a command line (including the program name).
pub fn parse_args<I, S>(argv: I) -> Result<RunSpec, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        let code = match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.render().to_string() }
    })?;
    let spec = match cli.command {
        Cmd::Solve(c) => build_spec(Command::Solve, c)?,
        Cmd::Sweep(c) => build_spec(Command::Sweep, c)?,
        Cmd::Verify(c) => build_spec(Command::Verify, c)?,
        Cmd::Limit { common, kind } => {
            let mut s = build_spec(Command::Limit, common)?;
            s.limit_kind = Some(match kind {
                KindArg::AlphaOne => LimitKind::AlphaOne,
                KindArg::AlphaZero => LimitKind::AlphaZero,
                KindArg::LambdaZero => LimitKind::LambdaZero,
                KindArg::LambdaOne => LimitKind::LambdaOne,
            });
            s
        }
        Cmd::Portrait { common, speed, t_span, half_width, seeds } => {
            let mut s = build_spec(Command::Portrait, common)?;
            let seeds = seeds.iter().map(|x| parse_seed(x)).collect::<Result<Vec<_>, _>>()?;
            s.portrait = PortraitSpec::Portrait { speed, t_span, half_width, seeds };
            s
        }
    };
    validate(&spec)?;
    Ok(spec)
}

/// Seventeen significant digits, enough to round-trip an f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&fmt17(x)).expect("formatted float is valid JSON"))
    } else {
        Value::Null
    }
}

fn report_json(rep: &DiagnosticsReport) -> Value {
    let checks = rep
        .checks
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("name".into(), Value::String(c.name.clone()));
            let kind = match c.kind {
                CheckKind::Equality => "equality",
                CheckKind::Margin => "margin",
            };
            m.insert("kind".into(), Value::String(kind.into()));
            m.insert("lhs".into(), num(c.lhs));
            m.insert("rhs".into(), num(c.rhs));
            m.insert("residual".into(), num(c.residual));
            m.insert("tolerance".into(), num(c.tolerance));
            m.insert("pass".into(), Value::Bool(c.pass));
            Value::Object(m)
        })
        .collect();
    Value::Array(checks)
}

/// The summary object for one solution.
pub fn summary_json(sol: &WaveSolution<f64>) -> Value {
    let p = &sol.profile.params;
    let mut m = Map::new();
    m.insert("alpha".into(), num(p.alpha));
    m.insert("lambda".into(), num(p.lambda));
    m.insert("theta".into(), num(p.theta));
    m.insert("c".into(), num(sol.closure.c));
    m.insert("R".into(), num(sol.closure.r));
    m.insert("v0".into(), num(sol.closure.v0_star));
    m.insert("iterations".into(), Value::from(sol.closure.iterations));
    let mut res = Map::new();
    res.insert("closure".into(), num(sol.closure.residual));
    for name in ["psi_residual", "integral_v", "energy_first", "energy_second", "equiv_cross"] {
        if let Some(c) = sol.diagnostics.get(name) {
            res.insert(name.trim_end_matches("_residual").into(), num(c.residual));
        }
    }
    m.insert("residuals".into(), Value::Object(res));
    m.insert("all_pass".into(), Value::Bool(sol.diagnostics.all_pass()));
    m.insert("checks".into(), report_json(&sol.diagnostics));
    Value::Object(m)
}

fn failure_json(p: &PhysicalParams<f64>, err: &Error) -> Value {
    let mut m = Map::new();
    m.insert("alpha".into(), num(p.alpha));
    m.insert("lambda".into(), num(p.lambda));
    m.insert("theta".into(), num(p.theta));
    m.insert("error".into(), Value::String(err.to_string()));
    Value::Object(m)
}

/// Profile table including the outer regions.
pub fn profile_csv(pr: &Profile<f64>) -> String {
    let mut s = String::from("xi,v,vp,u,up,region\n");
    for i in 0..pr.xi.len() {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            fmt17(pr.xi[i]),
            fmt17(pr.v[i]),
            fmt17(pr.vp[i]),
            fmt17(pr.u[i]),
            fmt17(pr.up[i]),
            pr.region[i].as_str()
        );
    }
    s
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn params_of(spec: &RunSpec) -> Result<PhysicalParams<f64>, CliError> {
    PhysicalParams::new(one(&spec.alphas, "alpha")?, one(&spec.lambdas, "lambda")?, one(&spec.thetas, "theta")?)
        .map_err(|e| CliError::invalid(e.to_string()))
}

/// Window shown around the reaction zone: ten e-folds of the slower of the
/// two preheat exponentials ahead, a quarter of R behind.
fn window(sol: &WaveSolution<f64>) -> (f64, f64) {
    let pr = &sol.profile;
    let ahead = 10.0 * pr.params.lambda.max(1.0) / pr.c;
    (-ahead, pr.r * 1.25)
}

fn run_solve(spec: &RunSpec) -> Result<i32, CliError> {
    let p = params_of(spec)?;
    let sol = solve_full(&p, &spec.cfg)?;
    let (lo, hi) = window(&sol);
    let full = extend_full_line(&sol, lo, hi)?;
    ensure_dir(&spec.output_dir)?;
    write(&spec.output_dir, "profile.csv", &profile_csv(&full))?;
    write(&spec.output_dir, "summary.json", &pretty(&summary_json(&sol)))?;
    Ok(EXIT_OK)
}

fn run_verify(spec: &RunSpec) -> Result<i32, CliError> {
    let p = params_of(spec)?;
    let sol = solve_full(&p, &spec.cfg)?;
    let mut out = String::new();
    for c in &sol.diagnostics.checks {
        let _ = writeln!(
            out,
            "{:<4} {:<24} residual {:>24}  tolerance {}",
            if c.pass { "ok" } else { "FAIL" },
            c.name,
            fmt17(c.residual),
            fmt17(c.tolerance)
        );
    }
    print!("{out}");
    if spec.output_dir != Path::new(".") {
        ensure_dir(&spec.output_dir)?;
        write(&spec.output_dir, "summary.json", &pretty(&summary_json(&sol)))?;
    }
    Ok(if sol.diagnostics.all_pass() { EXIT_OK } else { EXIT_SOLVER })
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("FLAMEWAVE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::invalid(format!("FLAMEWAVE_THREADS must be a positive integer, got {v:?}")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::invalid(e.to_string()))
}

fn run_sweep(spec: &RunSpec) -> Result<i32, CliError> {
    let mut combos = Vec::new();
    for &l in &spec.lambdas {
        for &t in &spec.thetas {
            let mut alphas = spec.alphas.clone();
            alphas.sort_by(f64::total_cmp);
            for a in alphas {
                combos.push(PhysicalParams::new(a, l, t).map_err(|e| CliError::invalid(e.to_string()))?);
            }
        }
    }
    let multi = spec.lambdas.len() > 1 || spec.thetas.len() > 1;
    let cfg = spec.cfg;
    let rows: Vec<_> = thread_pool()?.install(|| combos.par_iter().map(|p| solve_full(p, &cfg)).collect());
    ensure_dir(&spec.output_dir)?;
    let mut csv = String::from(if multi { "alpha,lambda,theta,c,R,v0\n" } else { "alpha,c,R,v0\n" });
    let mut failed = false;
    for (i, (p, row)) in combos.iter().zip(&rows).enumerate() {
        let (c, r, v0, summary) = match row {
            Ok(sol) => (sol.closure.c, sol.closure.r, sol.closure.v0_star, summary_json(sol)),
            Err(e) => {
                failed = true;
                (f64::NAN, f64::NAN, f64::NAN, failure_json(p, e))
            }
        };
        let mut line = fmt17(p.alpha);
        if multi {
            let _ = write!(line, ",{},{}", fmt17(p.lambda), fmt17(p.theta));
        }
        let _ = writeln!(csv, "{line},{},{},{}", fmt17(c), fmt17(r), fmt17(v0));
        write(&spec.output_dir, &format!("summary_{i:03}.json"), &pretty(&summary))?;
    }
    write(&spec.output_dir, "sweep.csv", &csv)?;
    Ok(if failed { EXIT_SOLVER } else { EXIT_OK })
}

fn run_limit(spec: &RunSpec) -> Result<i32, CliError> {
    let case = limit_case(spec)?;
    let s = case.solve(&spec.cfg)?;
    let p = &case.params;
    let mut m = Map::new();
    m.insert("kind".into(), Value::String(case.kind.as_str().into()));
    m.insert("alpha".into(), num(p.alpha));
    m.insert("lambda".into(), num(p.lambda));
    m.insert("theta".into(), num(p.theta));
    m.insert("c".into(), num(s.c));
    m.insert("R".into(), s.r.map_or(Value::Null, num));
    m.insert("v0".into(), s.v0.map_or(Value::Null, num));
    ensure_dir(&spec.output_dir)?;
    write(&spec.output_dir, "limit.json", &pretty(&Value::Object(m)))?;
    Ok(EXIT_OK)
}

fn run_portrait(spec: &RunSpec) -> Result<i32, CliError> {
    let PortraitSpec::Portrait { speed, t_span, half_width, seeds } = &spec.portrait else {
        return Err(CliError::usage("portrait settings missing"));
    };
    let p = params_of(spec)?;
    let c = match speed {
        Some(c) if *c >= 0.0 => *c,
        Some(c) => return Err(CliError::invalid(format!("--speed must be >= 0, got {c}"))),
        None => solve_wave(&p, &spec.cfg)?.c,
    };
    let seeds = if seeds.is_empty() {
        let mut s: Vec<PhaseState<f64>> = (0..8)
            .map(|k| {
                let a = std::f64::consts::PI * k as f64 / 4.0;
                PhaseState::new(0.5 * half_width * a.cos(), 0.5 * half_width * a.sin())
            })
            .collect();
        let x0 = 0.5 * half_width;
        let m = grow_manifold(&p, c, x0, &spec.cfg)?;
        let y0 = m.eval(x0)?;
        s.push(PhaseState::new(x0, y0));
        s.push(PhaseState::new(-x0, -y0));
        s
    } else {
        seeds.clone()
    };
    let lines = sample_phase_portrait(&p, c, &seeds, *t_span, BoundingBox::square(*half_width), &spec.cfg);
    ensure_dir(&spec.output_dir)?;
    for (i, line) in lines.iter().enumerate() {
        let mut s = String::from("t,x,y\n");
        for (t, st) in &line.points {
            let _ = writeln!(s, "{},{},{}", fmt17(*t), fmt17(st.x), fmt17(st.y));
        }
        write(&spec.output_dir, &format!("portrait_{i:03}.csv"), &s)?;
    }
    Ok(EXIT_OK)
}

pub fn execute(spec: &RunSpec) -> Result<i32, CliError> {
    match spec.command {
        Command::Solve => run_solve(spec),
        Command::Sweep => run_sweep(spec),
        Command::Limit => run_limit(spec),
        Command::Portrait => run_portrait(spec),
        Command::Verify => run_verify(spec),
    }
}

/// Entry point: parses, runs, reports errors on stderr and returns the
/// exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let result = parse_args(argv).and_then(|spec| execute(&spec));
    match result {
        Ok(code) => code,
        Err(e) => {
            if e.code == EXIT_OK {
                print!("{}", e.message);
            } else if e.code == EXIT_USAGE && !e.message.contains("Usage:") {
                eprintln!("error: {}\n\nFor usage, try 'flamewave --help'.", e.message.trim_end());
            } else {
                eprintln!("{}", e.message.trim_end());
            }
            e.code
        }
    }
}
