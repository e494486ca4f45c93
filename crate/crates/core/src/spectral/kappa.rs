//! Discrete spectrum: the zero i*kappa of a1, gamma0, and the Case I/II split.

use super::branch::{ray_grid, Anchor, BranchMap};
use super::source::{AnalyticA1, ProfileSpectrum, SpectralPoint, SpectralSource};
use crate::error::{Error, Result};
use crate::numerics::ode::OdeOptions;
use crate::numerics::quad::{integrate_split, QuadOptions};
use crate::scattering::jost::GAUGE_LIMIT;
use crate::scattering::{JostOptions, ScatterOptions, StepProfile};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    /// a2(0) != 0
    I,
    /// a2(0) = 0
    II,
}

/// Quadratic Lagrange extrapolation to k = 0 from three (k, f) pairs.
pub fn extrapolate_to_zero(p: &[(f64, Complex64); 3]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        let mut w = 1.0;
        for j in 0..3 {
            if i != j {
                w *= (0.0 - p[j].0) / (p[i].0 - p[j].0);
            }
        }
        acc += w * p[i].1;
    }
    acc
}

fn smallest_positive(points: &[SpectralPoint]) -> Vec<&SpectralPoint> {
    let mut pos: Vec<&SpectralPoint> = points.iter().filter(|p| p.k > 0.0).collect();
    pos.sort_by(|a, b| a.k.partial_cmp(&b.k).unwrap());
    pos.truncate(3);
    pos
}

/// Case II iff the extrapolated |a2(0)| is below eps_case * max|a2|.
pub fn classify_case(points: &[SpectralPoint], eps_case: f64) -> Result<Case> {
    let p = smallest_positive(points);
    if p.len() < 3 {
        return Err(Error::GridTooSmall(points.len()));
    }
    let a20 = extrapolate_to_zero(&[(p[0].k, p[0].a2), (p[1].k, p[1].a2), (p[2].k, p[2].a2)]);
    let scale = points.iter().map(|q| q.a2.norm()).fold(0.0, f64::max);
    let ratio = a20.norm() / scale;
    if ratio > 0.5 * eps_case && ratio < 2.0 * eps_case {
        return Err(Error::AmbiguousClassification(ratio));
    }
    Ok(if ratio < eps_case { Case::II } else { Case::I })
}

#[derive(Debug, Clone, Copy)]
pub struct KappaOptions {
    pub k_min: f64,
    pub scan_points: usize,
    /// relative finite-difference step for a1'(i kappa)
    pub fd_step: f64,
    pub root_tol: f64,
    /// initial boundary samples for the argument-principle count (0 disables it)
    pub winding_points: usize,
}

impl Default for KappaOptions {
    fn default() -> Self {
        KappaOptions { k_min: 1e-3, scan_points: 200, fd_step: 1e-5, root_tol: 1e-12, winding_points: 400 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaRoot {
    pub kappa: f64,
    pub a1_prime: Complex64,
    /// |a1(i kappa)|
    pub residual: f64,
    /// zeros counted inside the search rectangle (0 when the count is disabled)
    pub winding: i64,
}

fn a1_axis<S: AnalyticA1 + ?Sized>(src: &S, y: f64) -> Result<f64> {
    let v = src.a1_upper(Complex64::new(0.0, y))?;
    if v.im.abs() > 1e-6 * v.norm().max(1.0) {
        return Err(Error::NotRealOnAxis(y));
    }
    Ok(v.re)
}

/// 4th-order central difference of a1 along the imaginary axis; returns d a1/dk.
pub fn a1_derivative_on_axis<S: AnalyticA1 + ?Sized>(src: &S, y: f64, h: f64) -> Result<Complex64> {
    let f = |d: f64| src.a1_upper(Complex64::new(0.0, y + d));
    let dy = (-f(2.0 * h)? + 8.0 * f(h)? - 8.0 * f(-h)? + f(-2.0 * h)?) / (12.0 * h);
    // d/dy a1(iy) = i a1'(iy)
    Ok(dy / Complex64::new(0.0, 1.0))
}

/// Number of zeros of a1 inside [-x_half, x_half] x [y_lo, y_hi] by the
/// winding of a1 along the boundary, refined until arg steps stay below 0.5.
pub fn count_zeros_in_rectangle<S: AnalyticA1 + ?Sized>(src: &S, x_half: f64, y_lo: f64, y_hi: f64, n: usize) -> Result<i64> {
    let corners = [Complex64::new(-x_half, y_lo), Complex64::new(x_half, y_lo), Complex64::new(x_half, y_hi), Complex64::new(-x_half, y_hi)];
    let per_side = (n / 4).max(4);
    let mut total = 0.0;
    for e in 0..4 {
        let (z0, z1) = (corners[e], corners[(e + 1) % 4]);
        let mut prev_z = z0;
        let mut prev_v = src.a1_upper(z0)?;
        for j in 1..=per_side {
            let z = z0 + (z1 - z0) * (j as f64 / per_side as f64);
            let v = src.a1_upper(z)?;
            total += refined_arg_step(src, prev_z, prev_v, z, v, 0)?;
            prev_z = z;
            prev_v = v;
        }
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

fn refined_arg_step<S: AnalyticA1 + ?Sized>(src: &S, za: Complex64, va: Complex64, zb: Complex64, vb: Complex64, depth: u32) -> Result<f64> {
    let d = (vb / va).arg();
    if d.abs() < 0.5 || depth > 20 {
        return Ok(d);
    }
    let zm = 0.5 * (za + zb);
    let vm = src.a1_upper(zm)?;
    Ok(refined_arg_step(src, za, va, zm, vm, depth + 1)? + refined_arg_step(src, zm, vm, zb, vb, depth + 1)?)
}

/// Zero i*kappa of a1 on (k_min, y_max]: geometric scan, bisection, then Newton.
pub fn find_kappa_root_with<S: AnalyticA1 + ?Sized>(src: &S, y_max: f64, opts: &KappaOptions) -> Result<KappaRoot> {
    if !(y_max > opts.k_min) {
        return Err(Error::NoSignChange);
    }
    let n = opts.scan_points.max(8);
    let ratio = (y_max / opts.k_min).powf(1.0 / (n - 1) as f64);
    let ys: Vec<f64> = (0..n).map(|j| opts.k_min * ratio.powi(j as i32)).collect();
    let fs = ys.iter().map(|&y| a1_axis(src, y)).collect::<Result<Vec<_>>>()?;
    let brackets: Vec<usize> = (0..n - 1).filter(|&j| fs[j] == 0.0 || fs[j].signum() != fs[j + 1].signum()).collect();
    match brackets.len() {
        0 => return Err(Error::NoSignChange),
        1 => {}
        m => return Err(Error::MultipleZeros(m)),
    }
    let j = brackets[0];
    let (mut lo, mut hi) = (ys[j], ys[j + 1]);
    let (mut flo, _) = (fs[j], fs[j + 1]);
    if flo == 0.0 {
        hi = lo;
    }
    while hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        let fm = a1_axis(src, mid)?;
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mut y = 0.5 * (lo + hi);
    for _ in 0..50 {
        let f = a1_axis(src, y)?;
        if f.abs() <= opts.root_tol {
            break;
        }
        if f.signum() == flo.signum() {
            lo = y;
        } else {
            hi = y;
        }
        let h = opts.fd_step * y.max(1.0);
        let dy = (a1_derivative_on_axis(src, y, h)? * Complex64::new(0.0, 1.0)).re;
        let mut next = y - f / dy;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() <= 1e-15 * y {
            y = next;
            break;
        }
        y = next;
    }
    let residual = src.a1_upper(Complex64::new(0.0, y))?.norm();
    let a1_prime = a1_derivative_on_axis(src, y, opts.fd_step * y.max(1.0))?;
    let winding = if opts.winding_points > 0 {
        let w = count_zeros_in_rectangle(src, y_max, 0.5 * opts.k_min.max(0.05 * y), y_max, opts.winding_points)?;
        if w > 1 {
            return Err(Error::MultipleZeros(w as usize));
        }
        w
    } else {
        0
    };
    Ok(KappaRoot { kappa: y, a1_prime, residual, winding })
}

/// Scattering options used when a1 is evaluated for root finding.
pub fn tight_scatter_options() -> ScatterOptions {
    ScatterOptions { jost: JostOptions { ode: OdeOptions { rtol: 1e-12, atol: 1e-15, max_steps: 5_000_000 } }, ..ScatterOptions::default() }
}

/// Upper end of the imaginary-axis search: 10 A, capped by the overflow gauge.
pub fn kappa_search_cap(profile: &StepProfile) -> f64 {
    (10.0 * profile.a).min(0.99 * GAUGE_LIMIT / profile.support_n)
}

pub fn find_kappa_root(profile: &StepProfile, opts: &KappaOptions) -> Result<KappaRoot> {
    let src = ProfileSpectrum { profile: profile.clone(), opts: tight_scatter_options() };
    find_kappa_root_with(&src, kappa_search_cap(profile), opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gamma0 {
    pub gamma0: f64,
    /// ratio of first components
    pub ratio: Complex64,
    /// ratio of second components
    pub ratio_second: Complex64,
    /// |ratio^2 - 1|
    pub snap_residual: f64,
}

/// psi1^(1)(0, 0, i kappa) = gamma0 psi2^(2)(0, 0, i kappa), gamma0 snapped to +-1.
pub fn gamma0_factor<S: AnalyticA1 + ?Sized>(src: &S, kappa: f64) -> Result<Gamma0> {
    let k = Complex64::new(0.0, kappa);
    let (u, v) = src.jost_pair_upper(k)?.ok_or(Error::NonFinite("jost columns unavailable"))?;
    let ratio = u[0] / v[0];
    let ratio_second = u[1] / v[1];
    let snap_residual = (ratio * ratio - 1.0).norm();
    let mismatch = (ratio - ratio_second).norm();
    if snap_residual > 1e-4 || mismatch > 1e-4 * ratio.norm() {
        return Err(Error::ProportionalityViolated(snap_residual.max(mismatch)));
    }
    Ok(Gamma0 { gamma0: if ratio.re >= 0.0 { 1.0 } else { -1.0 }, ratio, ratio_second, snap_residual })
}

#[derive(Debug, Clone, Copy)]
pub struct FormulaOptions {
    pub k_min: f64,
    pub s_max: f64,
    /// uniform sample step of the branch grid on [1, 50]
    pub branch_step: f64,
    pub quad: QuadOptions,
}

impl Default for FormulaOptions {
    fn default() -> Self {
        FormulaOptions { k_min: 1e-3, s_max: 1e3, branch_step: 0.02, quad: QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_evals: 400_000 } }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaFormula {
    pub kappa: f64,
    /// |Im| of the evaluated expression relative to kappa
    pub imag_residue: f64,
    pub i1: Complex64,
    pub i2: Complex64,
    pub b0: Complex64,
}

/// p.v. of the integral over R of log v(s) / s, with log v contour-continuous
/// and vanishing at both infinities. Folded onto (0, inf); below k_min the odd
/// part is taken linear in s.
fn folded_log_pv<F>(v: F, opts: &FormulaOptions) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let grid = ray_grid(opts.k_min, opts.s_max, opts.branch_step);
    let pos = BranchMap::build(&v, &grid, Anchor::Right)?;
    let neg_grid: Vec<f64> = grid.iter().rev().map(|s| -s).collect();
    let neg = BranchMap::build(&v, &neg_grid, Anchor::Left)?;
    let err = std::cell::Cell::new(None);
    let g = |s: f64| -> Complex64 {
        match (v(s), v(-s)) {
            (Ok(p), Ok(m)) => pos.log(s, p) - neg.log(-s, m),
            (Err(e), _) | (_, Err(e)) => {
                err.set(Some(e));
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let h = |s: f64| g(s) / s;
    let mut pts = vec![opts.k_min];
    for p in [0.01, 0.1, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
        if p > opts.k_min && p < opts.s_max {
            pts.push(p);
        }
    }
    pts.push(opts.s_max);
    let (mut acc, _) = integrate_split(&h, &pts, &opts.quad)?;
    acc += g(opts.k_min);
    acc += g(opts.s_max) / 2.0;
    if let Some(e) = err.take() {
        return Err(e);
    }
    Ok(acc)
}

/// kappa from the trace-type formulas: Case I from log[(s^2/(1+s^2))(1-b^2)],
/// Case II from I1, I2.
pub fn kappa_by_formula<S: SpectralSource + ?Sized>(src: &S, case: Case, opts: &FormulaOptions) -> Result<KappaFormula> {
    let a = src.amplitude();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let b_at = |s: f64| src.point(s).map(|p| p.b);
    match case {
        Case::I => {
            let pv = folded_log_pv(|s| Ok((s * s / (1.0 + s * s)) * (1.0 - b_at(s)?.powi(2))), opts)?;
            let k = 0.5 * a * (-pv / two_pi_i).exp();
            Ok(KappaFormula {
                kappa: k.re,
                imag_residue: k.im.abs() / k.re.abs().max(f64::MIN_POSITIVE),
                i1: Complex64::new(1.0, 0.0),
                i2: Complex64::new(1.0, 0.0),
                b0: Complex64::new(0.0, 0.0),
            })
        }
        Case::II => {
            let pv = folded_log_pv(|s| Ok(1.0 - b_at(s)?.powi(2)), opts)?;
            let i1 = (pv / two_pi_i).exp();
            let h = opts.k_min;
            let b0 = extrapolate_to_zero(&[(h, b_at(h)?), (2.0 * h, b_at(2.0 * h)?), (3.0 * h, b_at(3.0 * h)?)]);
            let i2 = (0.5 * (1.0 - b0 * b0).ln()).exp();
            let k = a * ((b0 * b0 + i2 * i2).sqrt() - b0) / (2.0 * i1 * i2);
            Ok(KappaFormula { kappa: k.re, imag_residue: k.im.abs() / k.re.abs().max(f64::MIN_POSITIVE), i1, i2, b0 })
        }
    }
}
