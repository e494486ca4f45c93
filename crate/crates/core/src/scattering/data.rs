use super::jost::{jost_column_at, Jost, JostOptions};
use super::profile::StepProfile;
use super::{det, inv, mul, Mat2};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringSample {
    pub k: f64,
    pub s: Mat2,
    pub a1: Complex64,
    pub a2: Complex64,
    pub b: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionSample {
    pub k: f64,
    pub r1: Complex64,
    pub r2: Complex64,
}

#[derive(Debug, Clone, Copy)]
pub struct ScatterOptions {
    pub jost: JostOptions,
    pub k_min: f64,
    /// Wronskian evaluation point
    pub x_eval: f64,
}

impl Default for ScatterOptions {
    fn default() -> Self {
        ScatterOptions { jost: JostOptions::default(), k_min: 1e-3, x_eval: 0.0 }
    }
}

fn wr(u: [Complex64; 2], v: [Complex64; 2]) -> Complex64 {
    u[0] * v[1] - u[1] * v[0]
}

/// a1, a2, b and S = psi2^{-1} psi1 at real k.
pub fn scattering_matrix(profile: &StepProfile, k: f64, opts: &ScatterOptions) -> Result<ScatteringSample> {
    if k.abs() < opts.k_min {
        return Err(Error::TooCloseToOrigin(k.abs()));
    }
    profile.validate()?;
    let kc = Complex64::new(k, 0.0);
    let x = opts.x_eval;
    let p11 = jost_column_at(profile, kc, Jost::Psi1, 0, x, &opts.jost)?;
    let p12 = jost_column_at(profile, kc, Jost::Psi1, 1, x, &opts.jost)?;
    let p21 = jost_column_at(profile, kc, Jost::Psi2, 0, x, &opts.jost)?;
    let p22 = jost_column_at(profile, kc, Jost::Psi2, 1, x, &opts.jost)?;
    let psi1: Mat2 = [[p11[0], p12[0]], [p11[1], p12[1]]];
    let psi2: Mat2 = [[p21[0], p22[0]], [p21[1], p22[1]]];
    let s = mul(&inv(&psi2), &psi1);
    Ok(ScatteringSample { k, s, a1: wr(p11, p22), a2: wr(p21, p12), b: wr(p21, p11) })
}

/// a1(k) for Im k >= 0 from the two analytic columns.
pub fn continue_a1(profile: &StepProfile, k: Complex64, opts: &ScatterOptions) -> Result<Complex64> {
    if k.im < 0.0 {
        return Err(Error::NonAnalyticColumnRequest { solution: 1, column: 1, im_k: k.im });
    }
    let x = opts.x_eval;
    let u = jost_column_at(profile, k, Jost::Psi1, 0, x, &opts.jost)?;
    let v = jost_column_at(profile, k, Jost::Psi2, 1, x, &opts.jost)?;
    Ok(wr(u, v))
}

/// a2(k) for Im k <= 0.
pub fn continue_a2(profile: &StepProfile, k: Complex64, opts: &ScatterOptions) -> Result<Complex64> {
    if k.im > 0.0 {
        return Err(Error::NonAnalyticColumnRequest { solution: 2, column: 1, im_k: k.im });
    }
    let x = opts.x_eval;
    let u = jost_column_at(profile, k, Jost::Psi2, 0, x, &opts.jost)?;
    let v = jost_column_at(profile, k, Jost::Psi1, 1, x, &opts.jost)?;
    Ok(wr(u, v))
}

pub fn reflection_coefficients(s: &ScatteringSample) -> Result<ReflectionSample> {
    if s.a1.norm() <= 1e-12 || s.a2.norm() <= 1e-12 {
        return Err(Error::SpectralZeroOnRealAxis(s.k));
    }
    Ok(ReflectionSample { k: s.k, r1: s.b / s.a1, r2: s.b / s.a2 })
}

/// Closed form for the pure step: S = N_+^{-1} N_-.
pub fn pure_step_sample(a: f64, sigma: f64, k: f64) -> ScatteringSample {
    let kc = Complex64::new(k, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let a1 = 1.0 + sigma * a * a / (4.0 * kc * kc);
    let b = sigma * a / (2.0 * i * kc);
    let a2 = Complex64::new(1.0, 0.0);
    ScatteringSample { k, s: [[a1, -sigma * b], [b, a2]], a1, a2, b }
}

/// Symmetric k-grid: geometric on [k_min, k_break], uniform on [k_break, k_max], mirrored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KGrid {
    pub k_min: f64,
    pub k_max: f64,
    pub n: usize,
    pub k_break: f64,
}

impl Default for KGrid {
    fn default() -> Self {
        KGrid { k_min: 1e-3, k_max: 50.0, n: 2048, k_break: 1.0 }
    }
}

impl KGrid {
    /// Ascending, exactly symmetric under k -> -k.
    pub fn points(&self) -> Vec<f64> {
        let half = (self.n / 2).max(2);
        let kb = self.k_break.clamp(self.k_min, self.k_max);
        let n_geo = if kb > self.k_min { half / 2 } else { 0 };
        let n_uni = half - n_geo;
        let mut pos = Vec::with_capacity(half);
        if n_geo > 0 {
            let r = (kb / self.k_min).ln();
            for j in 0..n_geo {
                pos.push(self.k_min * (r * j as f64 / n_geo as f64).exp());
            }
        }
        for j in 0..n_uni {
            let f = if n_uni == 1 { 1.0 } else { j as f64 / (n_uni - 1) as f64 };
            pos.push(kb + (self.k_max - kb) * f);
        }
        let mut all: Vec<f64> = pos.iter().rev().map(|k| -k).collect();
        all.extend(pos);
        all
    }
}

pub fn scatter_grid(profile: &StepProfile, ks: &[f64], opts: &ScatterOptions, exec: Execution) -> Result<Vec<ScatteringSample>> {
    exec::try_map(exec, ks, |&k| scattering_matrix(profile, k, opts))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub det_s: f64,
    pub a1a2_plus_sigma_b2: f64,
    pub s12_vs_b: f64,
    pub trace: f64,
    pub b_symmetry: f64,
    pub a1_symmetry: f64,
    pub a2_symmetry: f64,
    /// max |k| |a_j(k) - 1| over the outer quarter of the grid
    pub large_k_a_scaled: f64,
    /// max |k| |b(k)| over the outer quarter of the grid
    pub large_k_b_scaled: f64,
}

impl IdentityReport {
    pub fn max_violation(&self) -> f64 {
        [self.det_s, self.a1a2_plus_sigma_b2, self.s12_vs_b, self.trace, self.b_symmetry, self.a1_symmetry, self.a2_symmetry].into_iter().fold(0.0, f64::max)
    }
}

/// Algebraic and symmetry identities; relative where the entries are large near k = 0.
pub fn verify_scattering_identities(samples: &[ScatteringSample], sigma: f64) -> Result<IdentityReport> {
    let n = samples.len();
    for j in 0..n {
        if samples[j].k != -samples[n - 1 - j].k {
            return Err(Error::AsymmetricGrid);
        }
    }
    let mut r = IdentityReport::default();
    let kmax = samples.iter().map(|s| s.k.abs()).fold(0.0, f64::max);
    for (j, s) in samples.iter().enumerate() {
        let scale = 1.0 + s.a1.norm() * s.a2.norm() + s.b.norm_sqr();
        r.det_s = r.det_s.max((det(&s.s) - 1.0).norm() / scale);
        r.a1a2_plus_sigma_b2 = r.a1a2_plus_sigma_b2.max((s.a1 * s.a2 + sigma * s.b * s.b - 1.0).norm() / scale);
        r.s12_vs_b = r.s12_vs_b.max((s.s[0][1] + sigma * s.b).norm() / (1.0 + s.b.norm()));
        r.trace = r.trace.max((s.s[0][0] + s.s[1][1] - s.a1 - s.a2).norm() / (1.0 + s.a1.norm() + s.a2.norm()));
        let m = &samples[n - 1 - j];
        r.b_symmetry = r.b_symmetry.max((s.b - m.b.conj()).norm() / (1.0 + s.b.norm()));
        r.a1_symmetry = r.a1_symmetry.max((s.a1 - m.a1.conj()).norm() / (1.0 + s.a1.norm()));
        r.a2_symmetry = r.a2_symmetry.max((s.a2 - m.a2.conj()).norm() / (1.0 + s.a2.norm()));
        if s.k.abs() >= 0.75 * kmax {
            r.large_k_a_scaled = r.large_k_a_scaled.max(s.k.abs() * (s.a1 - 1.0).norm().max((s.a2 - 1.0).norm()));
            r.large_k_b_scaled = r.large_k_b_scaled.max(s.k.abs() * s.b.norm());
        }
    }
    Ok(r)
}

pub const SPECTRAL_CSV_HEADER: &str = "k,a1_re,a1_im,a2_re,a2_im,b_re,b_im,r1_re,r1_im,r2_re,r2_im";

/// One CSV row in the spectral schema (shortest round-trip decimals).
pub fn spectral_csv_row(s: &ScatteringSample) -> Result<String> {
    let r = reflection_coefficients(s)?;
    let v = [s.k, s.a1.re, s.a1.im, s.a2.re, s.a2.im, s.b.re, s.b.im, r.r1.re, r.r1.im, r.r2.re, r.r2.im];
    Ok(v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(","))
}
