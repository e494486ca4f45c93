//! Command-line front end: presets, configuration, sweeps and dataset emission.
//!
//! Exit codes: 0 success, 1 invariant or numerical failure, 2 configuration error.

pub mod config;
pub mod dataset;
pub mod suite;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use config::{axis, keys_help, ConfigError, RunConfig};
use dataset::{emit, render, write_dataset, Cell, ColumnKind, Format, Record, SpectralRecord};
use nmkdv_core::asymptotics::sweep;
use nmkdv_core::exec::Execution;
use nmkdv_core::scattering::scatter_grid;
use nmkdv_core::soliton::{one_soliton, SolitonParams};
use nmkdv_core::spectral::{
    classify_case, find_kappa_root, gamma0_factor, kappa, kappa_by_formula, ProfileSpectrum, PureStepSpectrum, SpectralData, SpectralPoint, SpectralSource,
    TabulatedSpectrum,
};
use nmkdv_core::validation::{pde_residual, residual_stats, FieldGrid};
use nmkdv_core::Error;
use std::ffi::OsString;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "nmkdv", version, about = "Scattering data, long-time asymptotics and checks for the nonlocal MKdV equation with step-like data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Scatter the profile on the k grid and emit the spectral dataset
    Scatter(Common),
    /// kappa by root finding and by the trace formula, with their relative difference
    Kappa(Common),
    /// Sample the one-soliton on the x/t grid as a field grid
    Soliton(Common),
    /// Evaluate the asymptotic formulas on rays (--xi) or on the x/t grid
    Asym(Common),
    /// Residual statistics of a field grid read from --input
    Residual(ResidualArgs),
    /// Run the invariant suite; exits 1 if any check fails
    Validate(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// `key = value` configuration file
    #[arg(long)]
    config: Option<String>,
    /// override one key (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// pure-step | smooth-step | bump-step | path to an `x,du` deviation file
    #[arg(long)]
    profile: Option<String>,
    /// background amplitude
    #[arg(long = "A", allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma0: Option<String>,
    /// lo:hi:step
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// lo:hi:step
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// comma-separated rays xi = x/(12t)
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long = "kappa-delta", allow_hyphen_values = true)]
    kappa_delta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    /// csv | jsonl
    #[arg(long)]
    format: Option<String>,
    /// output path; stdout when omitted
    #[arg(long, short)]
    output: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct ResidualArgs {
    /// field grid CSV
    #[arg(long)]
    input: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Invariant(String),
    Numeric(Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn build_config(c: &Common) -> std::result::Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::new();
    if let Some(path) = &c.config {
        cfg.merge_file(path)?;
    }
    let flags = [
        ("profile", &c.profile),
        ("A", &c.a),
        ("gamma0", &c.gamma0),
        ("x", &c.x),
        ("t", &c.t),
        ("xi", &c.xi),
        ("alpha", &c.alpha),
        ("kappa_delta", &c.kappa_delta),
        ("sigma", &c.sigma),
        ("format", &c.format),
        ("output", &c.output),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, v)?;
        }
    }
    for pair in &c.set {
        cfg.set_pair(pair)?;
    }
    Ok(cfg)
}

/// Caps the rayon pool at NMKDV_THREADS.
fn apply_thread_cap() -> std::result::Result<(), ConfigError> {
    let Ok(v) = std::env::var("NMKDV_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| ConfigError(format!("NMKDV_THREADS=`{v}` is not a positive integer")))?;
    #[cfg(feature = "parallel")]
    {
        // the global pool can only be built once per process; later calls keep the first cap
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn format_of(cfg: &RunConfig) -> Format {
    Format::parse(cfg.raw("format")).expect("validated on set")
}

fn spectral_data(cfg: &RunConfig, ex: Execution) -> Result<SpectralData, Failure> {
    let build = cfg.build_options(ex);
    if cfg.is_pure_step() {
        Ok(SpectralData::pure_step(cfg.amplitude(), &build)?)
    } else {
        Ok(SpectralData::from_profile(&cfg.profile()?, &build)?)
    }
}

fn cmd_scatter(cfg: &RunConfig, ex: Execution) -> Outcome {
    let profile = cfg.profile()?;
    let samples = scatter_grid(&profile, &cfg.k_grid().points(), &cfg.scatter_options(), ex)?;
    let recs: Vec<SpectralRecord> = samples.into_iter().map(SpectralRecord).collect();
    write_dataset(&recs, format_of(cfg), cfg.raw("output"), &cfg.metadata("scatter"))?;
    Ok(())
}

fn cmd_kappa(cfg: &RunConfig, ex: Execution) -> Outcome {
    let profile = cfg.profile()?;
    let root = find_kappa_root(&profile, &cfg.kappa_options())?;
    let src: Box<dyn SpectralSource> = if cfg.is_pure_step() {
        Box::new(PureStepSpectrum::new(profile.a))
    } else {
        Box::new(TabulatedSpectrum::from_profile(&profile, cfg.scatter_options(), cfg.build_options(ex).tabulation, ex)?)
    };
    let pts = cfg.k_grid().points().iter().map(|&k| src.point(k)).collect::<nmkdv_core::Result<Vec<SpectralPoint>>>()?;
    let case = classify_case(&pts, cfg.float("eps_case"))?;
    let f = kappa_by_formula(src.as_ref(), case, &cfg.formula_options())?;
    let g = gamma0_factor(&ProfileSpectrum { profile: profile.clone(), opts: kappa::tight_scatter_options() }, root.kappa)?;
    let reldiff = (root.kappa - f.kappa).abs() / root.kappa;
    let tol = cfg.float("kappa_agreement_tol");
    let text = format!(
        "{}\nkappa_root={:?}\nkappa_formula={:?}\nreldiff={reldiff:.6e}\ncase={case:?}\ngamma0={:?}\na1_prime_re={:?}\na1_prime_im={:?}\nwinding={}\n",
        cfg.metadata("kappa"),
        root.kappa,
        f.kappa,
        g.gamma0,
        root.a1_prime.re,
        root.a1_prime.im,
        root.winding
    );
    emit(&text, cfg.raw("output"))?;
    if reldiff > tol {
        return Err(Failure::Invariant(format!("root and formula differ by {reldiff:.3e} > {tol:e}")));
    }
    Ok(())
}

struct FieldPoint {
    x: f64,
    t: f64,
    u: f64,
}

impl Record for FieldPoint {
    fn schema() -> Vec<(&'static str, ColumnKind)> {
        vec![("x", ColumnKind::Real), ("t", ColumnKind::Real), ("u", ColumnKind::Real)]
    }
    fn cells(&self) -> Vec<Cell> {
        vec![Cell::Real(self.x), Cell::Real(self.t), Cell::Real(self.u)]
    }
}

fn cmd_soliton(cfg: &RunConfig, ex: Execution) -> Outcome {
    let p = SolitonParams::new(cfg.amplitude(), cfg.float("gamma0")).map_err(|e| Failure::Config(e.to_string()))?;
    let (x0, x1, hx) = cfg.range("x");
    let (t0, t1, ht) = cfg.range("t");
    // points on the singular line of a gamma0 = +1 soliton are written as NaN
    let f = |x: f64, t: f64| match one_soliton(&p, x, t) {
        Err(Error::OnSingularLine(..)) => Ok(f64::NAN),
        v => v,
    };
    let g = FieldGrid::from_fn(axis(x0, x1, hx), axis(t0, t1, ht), f, ex)?;
    let meta = cfg.metadata("soliton");
    let text = match format_of(cfg) {
        Format::Csv => format!("{meta}\n{}", g.to_csv()),
        Format::Jsonl => {
            let pts: Vec<FieldPoint> =
                g.t_values.iter().zip(&g.u).flat_map(|(&t, row)| g.x_values.iter().zip(row).map(move |(&x, &u)| FieldPoint { x, t, u })).collect();
            render(&pts, Format::Jsonl, &meta)?
        }
    };
    emit(&text, cfg.raw("output"))?;
    Ok(())
}

fn asym_points(cfg: &RunConfig) -> Vec<(f64, f64)> {
    let (t0, t1, ht) = cfg.range("t");
    let ts: Vec<f64> = axis(t0, t1, ht).into_iter().filter(|&t| t != 0.0).collect();
    let xis = cfg.list("xi");
    if !xis.is_empty() {
        return xis.iter().flat_map(|&xi| ts.iter().map(move |&t| (12.0 * xi * t, t))).collect();
    }
    let (x0, x1, hx) = cfg.range("x");
    let xs = axis(x0, x1, hx);
    ts.iter().flat_map(|&t| xs.iter().map(move |&x| (x, t))).collect()
}

fn cmd_asym(cfg: &RunConfig, ex: Execution) -> Outcome {
    let sd = spectral_data(cfg, ex)?;
    let recs = sweep(&asym_points(cfg), &sd, &cfg.asym_options(), cfg.delta_options(), ex)?;
    write_dataset(&recs, format_of(cfg), cfg.raw("output"), &cfg.metadata("asym"))?;
    Ok(())
}

fn cmd_residual(input: &str, cfg: &RunConfig, ex: Execution) -> Outcome {
    let text = std::fs::read_to_string(input).map_err(|e| Failure::Config(format!("{input}: {e}")))?;
    let g = FieldGrid::from_csv(&text).map_err(|e| Failure::Config(format!("{input}: {e}")))?;
    let stats = residual_stats(&pde_residual(&g, cfg.float("sigma"), ex)?);
    write_dataset(&[stats], format_of(cfg), cfg.raw("output"), &cfg.metadata("residual"))?;
    Ok(())
}

fn cmd_validate(cfg: &RunConfig, ex: Execution) -> Outcome {
    let report = suite::run_suite(cfg, ex)?;
    emit(&report.render(&cfg.metadata("validate")), cfg.raw("output"))?;
    if !report.passed() {
        return Err(Failure::Invariant(format!("{} of {} checks failed", report.failures(), report.checks.len())));
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Outcome {
    apply_thread_cap()?;
    let ex = Execution::Parallel;
    match cli.command {
        Command::Scatter(c) => cmd_scatter(&build_config(&c)?, ex),
        Command::Kappa(c) => cmd_kappa(&build_config(&c)?, ex),
        Command::Soliton(c) => cmd_soliton(&build_config(&c)?, ex),
        Command::Asym(c) => cmd_asym(&build_config(&c)?, ex),
        Command::Residual(r) => cmd_residual(&r.input, &build_config(&r.common)?, ex),
        Command::Validate(c) => cmd_validate(&build_config(&c)?, ex),
    }
}

/// Parse `argv` (including the program name), run the command and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cmd = Cli::command().after_long_help(keys_help());
    let cli = match cmd.try_get_matches_from(argv).and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Config(m)) => {
            eprintln!("config error: {m}");
            EXIT_CONFIG
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("invariant failure: {m}");
            EXIT_FAILURE
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}
