//! Flat `key = value` run configuration with typed validation and defaults.

use nmkdv_core::asymptotics::AsymOptions;
use nmkdv_core::exec::Execution;
use nmkdv_core::numerics::contour::ContourOptions;
use nmkdv_core::numerics::ode::OdeOptions;
use nmkdv_core::numerics::QuadOptions;
use nmkdv_core::scattering::{JostOptions, KGrid, ScatterOptions, StepProfile};
use nmkdv_core::spectral::{DeltaOptions, FormulaOptions, KappaOptions, SpectralBuildOptions, TabulationOptions};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    /// a float or the word `auto`
    FloatOrAuto,
    Int,
    /// `lo:hi:step`
    Range,
    /// comma-separated floats, possibly empty
    List,
    Choice(&'static [&'static str]),
    /// preset name or path to a deviation file
    Profile,
    Text,
}

pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub help: &'static str,
}

pub const PRESETS: [&str; 3] = ["pure-step", "smooth-step", "bump-step"];

macro_rules! key {
    ($n:expr, $k:expr, $d:expr, $h:expr) => {
        KeySpec { name: $n, kind: $k, default: $d, help: $h }
    };
}

pub const KEYS: &[KeySpec] = &[
    key!("profile", Kind::Profile, "pure-step", "pure-step | smooth-step | bump-step | path to an `x,du` deviation file"),
    key!("A", Kind::FloatOrAuto, "auto", "background amplitude (auto: 1, or 2 for bump-step)"),
    key!("width", Kind::Float, "0.5", "smooth-step tanh width"),
    key!("support", Kind::Float, "10", "smooth-step truncation N"),
    key!("amp", Kind::Float, "-0.8", "bump-step amplitude c"),
    key!("center", Kind::Float, "-1", "bump-step centre x0"),
    key!("bump_width", Kind::Float, "0.4", "bump-step width w (truncated at 4w)"),
    key!("gamma0", Kind::Float, "-1", "soliton sign gamma0 (+1 or -1)"),
    key!("sigma", Kind::Float, "1", "mirror sign in the residual (+1 focusing)"),
    key!("x", Kind::Range, "-10:10:0.1", "x grid lo:hi:step"),
    key!("t", Kind::Range, "-1:1:0.1", "t grid lo:hi:step"),
    key!("xi", Kind::List, "", "asym rays xi = x/(12t); when set, x = 12 xi t over the t grid"),
    key!("k_min", Kind::Float, "1e-3", "smallest |k| on the spectral grid"),
    key!("k_max", Kind::Float, "50", "largest |k| on the spectral grid"),
    key!("n_k", Kind::Int, "2048", "spectral grid points"),
    key!("k_break", Kind::Float, "1", "geometric/uniform split of the spectral grid"),
    key!("x_eval", Kind::Float, "0", "Wronskian evaluation point"),
    key!("ode_rtol", Kind::Float, "1e-10", "Jost ODE relative tolerance"),
    key!("ode_atol", Kind::Float, "1e-14", "Jost ODE absolute tolerance"),
    key!("ode_max_steps", Kind::Int, "5000000", "Jost ODE step budget"),
    key!("tab_order", Kind::Int, "16", "Chebyshev order per tabulation panel"),
    key!("tab_ratio", Kind::Float, "1.5", "geometric panel ratio on [k_min, 1]"),
    key!("tab_width", Kind::Float, "1", "uniform panel width on [1, k_max]"),
    key!("kappa_scan_points", Kind::Int, "200", "imaginary-axis scan points for the kappa root"),
    key!("kappa_root_tol", Kind::Float, "1e-12", "kappa root tolerance"),
    key!("kappa_fd_step", Kind::Float, "1e-5", "relative step for a1'(i kappa)"),
    key!("kappa_winding_points", Kind::Int, "400", "argument-principle samples (0 disables)"),
    key!("kappa_agreement_tol", Kind::Float, "1e-5", "relative root/formula agreement required by `kappa`"),
    key!("eps_case", Kind::Float, "1e-3", "Case I/II threshold on |a2(0)| / max|a2|"),
    key!("formula_s_max", Kind::Float, "1e3", "kappa formula ray cut-off"),
    key!("formula_branch_step", Kind::Float, "0.02", "kappa formula branch-tracking step"),
    key!("formula_abs_tol", Kind::Float, "1e-12", "kappa formula quadrature absolute tolerance"),
    key!("formula_rel_tol", Kind::Float, "1e-12", "kappa formula quadrature relative tolerance"),
    key!("delta_abs_tol", Kind::Float, "1e-11", "delta quadrature absolute tolerance"),
    key!("delta_rel_tol", Kind::Float, "1e-12", "delta quadrature relative tolerance"),
    key!("delta_s_max", Kind::Float, "1e3", "delta contour cut-off"),
    key!("delta_branch_step", Kind::Float, "0.02", "delta branch-tracking step"),
    key!("delta_fd_step", Kind::Float, "1e-5", "relative step of d/ds log(1 + r1 r2)"),
    key!("quad_max_evals", Kind::Int, "400000", "quadrature evaluation budget"),
    key!("alpha", Kind::FloatOrAuto, "auto", "R_IV/R_II contour parameter alpha in (lambda, 1)"),
    key!("kappa_delta", Kind::FloatOrAuto, "auto", "soliton-region split kappa_delta in (0, kappa); auto = kappa/2"),
    key!("format", Kind::Choice(&["csv", "jsonl"]), "csv", "dataset format"),
    key!("output", Kind::Text, "-", "output path (- for stdout)"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

type CResult<T> = std::result::Result<T, ConfigError>;

fn err<T>(m: impl Into<String>) -> CResult<T> {
    Err(ConfigError(m.into()))
}

pub fn spec(name: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.name == name)
}

fn parse_float(name: &str, v: &str) -> CResult<f64> {
    match v.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => err(format!("{name}: `{v}` is not a finite number")),
    }
}

/// `lo:hi:step` with lo <= hi and step > 0.
pub fn parse_range(name: &str, v: &str) -> CResult<(f64, f64, f64)> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() != 3 {
        return err(format!("{name}: `{v}` is not lo:hi:step"));
    }
    let lo = parse_float(name, parts[0])?;
    let hi = parse_float(name, parts[1])?;
    let h = parse_float(name, parts[2])?;
    if !(h > 0.0) || hi < lo {
        return err(format!("{name}: `{v}` needs lo <= hi and step > 0"));
    }
    if (hi - lo) / h > 1e7 {
        return err(format!("{name}: `{v}` has more than 1e7 points"));
    }
    Ok((lo, hi, h))
}

fn parse_list(name: &str, v: &str) -> CResult<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| parse_float(name, s)).collect()
}

fn check(spec: &KeySpec, v: &str) -> CResult<()> {
    let n = spec.name;
    match spec.kind {
        Kind::Float => parse_float(n, v).map(|_| ()),
        Kind::FloatOrAuto => {
            if v.trim() == "auto" {
                Ok(())
            } else {
                parse_float(n, v).map(|_| ())
            }
        }
        Kind::Int => v.trim().parse::<usize>().map(|_| ()).map_err(|_| ConfigError(format!("{n}: `{v}` is not a non-negative integer"))),
        Kind::Range => parse_range(n, v).map(|_| ()),
        Kind::List => parse_list(n, v).map(|_| ()),
        Kind::Choice(allowed) => {
            if allowed.contains(&v.trim()) {
                Ok(())
            } else {
                err(format!("{n}: `{v}` is not one of {}", allowed.join(", ")))
            }
        }
        Kind::Profile | Kind::Text => {
            if v.trim().is_empty() {
                err(format!("{n}: empty value"))
            } else {
                Ok(())
            }
        }
    }
}

/// Effective configuration: defaults overlaid by file entries and overrides.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    set: BTreeMap<&'static str, String>,
}

impl RunConfig {
    pub fn new() -> Self {
        RunConfig::default()
    }

    /// Set a known key; unknown keys and malformed values are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> CResult<()> {
        let Some(s) = spec(key.trim()) else {
            return err(format!("unknown key `{}`", key.trim()));
        };
        check(s, value)?;
        self.set.insert(s.name, value.trim().to_string());
        Ok(())
    }

    /// `key=value`
    pub fn set_pair(&mut self, pair: &str) -> CResult<()> {
        match pair.split_once('=') {
            Some((k, v)) => self.set(k, v),
            None => err(format!("override `{pair}` is not key=value")),
        }
    }

    /// `key = value` lines; `#` starts a comment.
    pub fn merge_text(&mut self, text: &str) -> CResult<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return err(format!("line {}: `{line}` is not key = value", i + 1));
            };
            self.set(k, v).map_err(|e| ConfigError(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &str) -> CResult<()> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{path}: {e}")))?;
        self.merge_text(&text)
    }

    pub fn raw(&self, key: &str) -> &str {
        match self.set.get(key) {
            Some(v) => v,
            None => spec(key).map(|s| s.default).unwrap_or_else(|| panic!("unknown key {key}")),
        }
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.set.contains_key(key)
    }

    pub fn float(&self, key: &str) -> f64 {
        self.raw(key).parse().expect("validated on set")
    }

    pub fn int(&self, key: &str) -> usize {
        self.raw(key).parse().expect("validated on set")
    }

    pub fn float_or_auto(&self, key: &str) -> Option<f64> {
        match self.raw(key) {
            "auto" => None,
            v => Some(v.parse().expect("validated on set")),
        }
    }

    pub fn range(&self, key: &str) -> (f64, f64, f64) {
        parse_range(key, self.raw(key)).expect("validated on set")
    }

    pub fn list(&self, key: &str) -> Vec<f64> {
        parse_list(key, self.raw(key)).expect("validated on set")
    }

    pub fn amplitude(&self) -> f64 {
        self.float_or_auto("A").unwrap_or(if self.raw("profile") == "bump-step" { 2.0 } else { 1.0 })
    }

    /// The initial datum named by `profile`.
    pub fn profile(&self) -> CResult<StepProfile> {
        let a = self.amplitude();
        let p = match self.raw("profile") {
            "pure-step" => StepProfile::pure_step(a),
            "smooth-step" => StepProfile::smooth_step(a, self.float("width"), self.float("support")),
            "bump-step" => StepProfile::bump_step(a, self.float("amp"), self.float("center"), self.float("bump_width")),
            path => deviation_file(path, a)?,
        };
        p.validate().map_err(|e| ConfigError(e.to_string()))?;
        Ok(p)
    }

    pub fn is_pure_step(&self) -> bool {
        self.raw("profile") == "pure-step"
    }

    pub fn scatter_options(&self) -> ScatterOptions {
        ScatterOptions {
            jost: JostOptions { ode: OdeOptions { rtol: self.float("ode_rtol"), atol: self.float("ode_atol"), max_steps: self.int("ode_max_steps") } },
            k_min: self.float("k_min"),
            x_eval: self.float("x_eval"),
        }
    }

    pub fn k_grid(&self) -> KGrid {
        KGrid { k_min: self.float("k_min"), k_max: self.float("k_max"), n: self.int("n_k"), k_break: self.float("k_break") }
    }

    pub fn kappa_options(&self) -> KappaOptions {
        KappaOptions {
            k_min: self.float("k_min"),
            scan_points: self.int("kappa_scan_points"),
            fd_step: self.float("kappa_fd_step"),
            root_tol: self.float("kappa_root_tol"),
            winding_points: self.int("kappa_winding_points"),
        }
    }

    pub fn formula_options(&self) -> FormulaOptions {
        FormulaOptions {
            k_min: self.float("k_min"),
            s_max: self.float("formula_s_max"),
            branch_step: self.float("formula_branch_step"),
            quad: QuadOptions { abs_tol: self.float("formula_abs_tol"), rel_tol: self.float("formula_rel_tol"), max_evals: self.int("quad_max_evals") },
        }
    }

    pub fn delta_options(&self) -> DeltaOptions {
        DeltaOptions {
            contour: ContourOptions {
                quad: QuadOptions { abs_tol: self.float("delta_abs_tol"), rel_tol: self.float("delta_rel_tol"), max_evals: self.int("quad_max_evals") },
                s_max: self.float("delta_s_max"),
            },
            branch_step: self.float("delta_branch_step"),
            fd_step: self.float("delta_fd_step"),
        }
    }

    pub fn build_options(&self, exec: Execution) -> SpectralBuildOptions {
        SpectralBuildOptions {
            grid: self.k_grid(),
            tabulation: TabulationOptions {
                k_min: self.float("k_min"),
                k_max: self.float("k_max"),
                ratio: self.float("tab_ratio"),
                width: self.float("tab_width"),
                order: self.int("tab_order"),
            },
            scatter: self.scatter_options(),
            kappa: self.kappa_options(),
            eps_case: self.float("eps_case"),
            exec,
        }
    }

    pub fn asym_options(&self) -> AsymOptions {
        AsymOptions { alpha: self.float_or_auto("alpha"), kappa_delta: self.float_or_auto("kappa_delta") }
    }

    /// One `#` line with the code version, the command and every effective key.
    pub fn metadata(&self, command: &str) -> String {
        let mut s = format!("# nmkdv {} command={command}", env!("CARGO_PKG_VERSION"));
        for k in KEYS {
            if k.name == "output" {
                continue;
            }
            let v = self.raw(k.name);
            let v = if k.name == "A" && v == "auto" { format!("{:?}", self.amplitude()) } else { v.to_string() };
            s.push_str(&format!(" {}={}", k.name, if v.is_empty() { "none" } else { &v }));
        }
        s
    }
}

/// Deviation from the pure step sampled on a uniform grid: lines `x,du`.
fn deviation_file(path: &str, a: f64) -> CResult<StepProfile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("profile `{path}` is neither a preset ({}) nor a readable file: {e}", PRESETS.join(", "))))?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('x') {
            continue;
        }
        let Some((x, v)) = line.split_once(',') else {
            return err(format!("{path}: `{line}` is not x,du"));
        };
        xs.push(parse_float(path, x)?);
        vs.push(parse_float(path, v)?);
    }
    if xs.len() < 2 {
        return err(format!("{path}: need at least two samples"));
    }
    let step = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    if !(step > 0.0) || xs.iter().enumerate().any(|(j, x)| (x - xs[0] - step * j as f64).abs() > 1e-9 * step.max(1.0)) {
        return err(format!("{path}: x samples must be uniform and increasing"));
    }
    let support_n = xs[0].abs().max(xs[xs.len() - 1].abs()).max(1.0);
    Ok(StepProfile { a, sigma: 1.0, support_n, perturbation: nmkdv_core::scattering::Perturbation::Sampled { x0: xs[0], step, values: vs } })
}

/// Points of a range; exactly symmetric when lo = -hi.
pub fn axis(lo: f64, hi: f64, h: f64) -> Vec<f64> {
    if lo == -hi {
        return nmkdv_core::validation::symmetric_axis(hi, h);
    }
    let n = ((hi - lo) / h).round() as usize;
    (0..=n).map(|j| lo + h * j as f64).collect()
}

/// `--help` text listing every key.
pub fn keys_help() -> String {
    let mut s = String::from("Configuration keys (config file `key = value`, or --set key=value):\n");
    for k in KEYS {
        s.push_str(&format!("  {:<22} {} [default: {}]\n", k.name, k.help, if k.default.is_empty() { "none" } else { k.default }));
    }
    s
}
