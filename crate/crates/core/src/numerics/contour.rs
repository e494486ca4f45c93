//! Principal-value and Cauchy integrals over unions of real segments and rays.

use super::quad::{gauss_legendre, integrate_split, QuadOptions};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourSegment {
    Finite(f64, f64),
    /// [a, +inf)
    ToPosInf(f64),
    /// (-inf, b]
    ToNegInf(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ContourOptions {
    pub quad: QuadOptions,
    /// rays are truncated here; the remainder uses the O(s^-2) tail model
    pub s_max: f64,
}

impl Default for ContourOptions {
    fn default() -> Self {
        ContourOptions { quad: QuadOptions::default(), s_max: 1e3 }
    }
}

impl ContourSegment {
    pub fn contains(&self, s: f64) -> bool {
        match *self {
            ContourSegment::Finite(a, b) => s >= a && s <= b,
            ContourSegment::ToPosInf(a) => s >= a,
            ContourSegment::ToNegInf(b) => s <= b,
        }
    }

    fn contains_interior(&self, s: f64) -> bool {
        match *self {
            ContourSegment::Finite(a, b) => s > a && s < b,
            ContourSegment::ToPosInf(a) => s > a,
            ContourSegment::ToNegInf(b) => s < b,
        }
    }

    /// Finite part after truncation at +-s_max.
    fn truncated(&self, s_max: f64) -> (f64, f64) {
        match *self {
            ContourSegment::Finite(a, b) => (a, b),
            ContourSegment::ToPosInf(a) => (a, s_max.max(a)),
            ContourSegment::ToNegInf(b) => ((-s_max).min(b), b),
        }
    }
}

/// Integral of f(s)/(s - k) over [S, inf) (dir = +1) or (-inf, -S] (dir = -1),
/// with f(s) ~ f(+-S) S^2 / s^2.
fn tail<F: Fn(f64) -> Complex64>(f: &F, s: f64, dir: f64, k: Complex64) -> Result<Complex64> {
    let edge = dir * s;
    let fe = f(edge);
    let fh = f(edge / 2.0);
    if fe.norm() > 1e-10 && fe.norm() > 0.6 * fh.norm() {
        return Err(Error::NonDecayingTail(edge));
    }
    let c = fe * s * s;
    // s' = dir * S / u maps u in (0, 1] onto the tail
    let (x, w) = gauss_legendre(12);
    let mut acc = Complex64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(&w) {
        let u = 0.5 * (xi + 1.0);
        acc += 0.5 * wi * u / (s * (s - dir * k * u));
    }
    Ok(dir * c * acc)
}

fn segment_direct<F>(f: &F, seg: &ContourSegment, k: Complex64, opts: &ContourOptions, extra_breaks: &[f64]) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let (a, b) = seg.truncated(opts.s_max);
    let mut pts = vec![a];
    pts.extend(extra_breaks.iter().copied().filter(|&p| p > a && p < b));
    pts.push(b);
    let g = |s: f64| f(s) / (s - k);
    let mut v = if b > a { integrate_split(&g, &pts, &opts.quad)?.0 } else { Complex64::new(0.0, 0.0) };
    match *seg {
        ContourSegment::ToPosInf(_) => v += tail(f, opts.s_max, 1.0, k)?,
        ContourSegment::ToNegInf(_) => v += tail(f, opts.s_max, -1.0, k)?,
        ContourSegment::Finite(..) => {}
    }
    Ok(v)
}

/// Integral of f(s)/(s - k) on one segment with f(k_r) subtracted on a window
/// around k_r = Re k (clamped to the segment); the log term is added back analytically.
fn segment_subtracted<F>(f: &F, seg: &ContourSegment, k: Complex64, opts: &ContourOptions, principal: bool) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let (a, b) = seg.truncated(opts.s_max);
    let kr = k.re.clamp(a, b);
    let half = 1.0f64.max(k.im.abs());
    let wa = (kr - half).max(a);
    let wb = (kr + half).min(b);
    let fk = f(kr);
    let g = |s: f64| (f(s) - fk) / (s - k);
    let mut pts = vec![wa];
    if kr > wa && kr < wb {
        pts.push(kr);
    }
    pts.push(wb);
    let mut v = integrate_split(&g, &pts, &opts.quad)?.0;
    v += if principal {
        Complex64::new(((wb - k.re).abs() / (wa - k.re).abs()).ln(), 0.0) * fk
    } else {
        fk * ((Complex64::new(wb, 0.0) - k).ln() - (Complex64::new(wa, 0.0) - k).ln())
    };
    // outside the window, integrate directly
    let h = |s: f64| f(s) / (s - k);
    if wa > a {
        v += integrate_split(&h, &[a, wa], &opts.quad)?.0;
    }
    if wb < b {
        v += integrate_split(&h, &[wb, b], &opts.quad)?.0;
    }
    match *seg {
        ContourSegment::ToPosInf(_) => v += tail(f, opts.s_max, 1.0, k)?,
        ContourSegment::ToNegInf(_) => v += tail(f, opts.s_max, -1.0, k)?,
        ContourSegment::Finite(..) => {}
    }
    Ok(v)
}

/// p.v. of the integral of f(s)/(s - pole) over the domain.
pub fn principal_value_integral<F>(f: F, pole: f64, domain: &[ContourSegment], opts: &ContourOptions) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !domain.iter().any(|s| s.contains_interior(pole)) {
        return Err(Error::PoleOutsideDomain(pole));
    }
    let k = Complex64::new(pole, 0.0);
    let mut total = Complex64::new(0.0, 0.0);
    for seg in domain {
        total += if seg.contains_interior(pole) { segment_subtracted(&f, seg, k, opts, true)? } else { segment_direct(&f, seg, k, opts, &[])? };
    }
    Ok(total)
}

/// (1/2 pi i) times the integral of g(s)/(s - k). On the contour a side flag
/// selects the Sokhotski-Plemelj boundary value.
pub fn cauchy_contour_integral<F>(g: F, k: Complex64, side: Option<Side>, domain: &[ContourSegment], opts: &ContourOptions) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let on_contour = k.im == 0.0 && domain.iter().any(|s| s.contains(k.re));
    if on_contour {
        let side = side.ok_or(Error::EvaluationOnContourWithoutSideFlag(k.re))?;
        let pv = principal_value_integral(&g, k.re, domain, opts)?;
        return Ok(pv / two_pi_i + side.sign() * g(k.re) / 2.0);
    }
    let mut total = Complex64::new(0.0, 0.0);
    for seg in domain {
        let (a, b) = seg.truncated(opts.s_max);
        let dist = if k.re < a {
            Complex64::new(a - k.re, k.im).norm()
        } else if k.re > b {
            Complex64::new(k.re - b, k.im).norm()
        } else {
            k.im.abs()
        };
        total += if dist < 0.5 { segment_subtracted(&g, seg, k, opts, false)? } else { segment_direct(&g, seg, k, opts, &[k.re])? };
    }
    Ok(total / two_pi_i)
}
