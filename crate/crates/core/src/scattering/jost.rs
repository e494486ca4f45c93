//! Jost solutions as solutions of psi_x + ik[sigma_3, psi] = U psi, marched
//! from the edge of the support where they equal the background exactly.

use super::background::{n_matrix, BgSide};
use super::profile::StepProfile;
use super::Mat2;
use crate::error::{Error, Result};
use crate::numerics::ode::{self, OdeOptions};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type Col = [Complex64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Jost {
    /// normalised at x -> -inf
    Psi1,
    /// normalised at x -> +inf
    Psi2,
}

pub const GAUGE_LIMIT: f64 = 50.0;

#[derive(Debug, Clone, Copy)]
pub struct JostOptions {
    pub ode: OdeOptions,
}

impl Default for JostOptions {
    fn default() -> Self {
        JostOptions { ode: OdeOptions { rtol: 1e-10, atol: 1e-14, max_steps: 5_000_000 } }
    }
}

/// Whether column `col` (0 or 1) of `which` is analytic at `k`.
pub fn is_analytic(which: Jost, col: usize, k: Complex64) -> bool {
    match (which, col) {
        (Jost::Psi1, 0) | (Jost::Psi2, 1) => k.im >= 0.0,
        _ => k.im <= 0.0,
    }
}

fn check_request(profile: &StepProfile, which: Jost, col: usize, k: Complex64) -> Result<()> {
    if k.norm() < 1e-12 {
        return Err(Error::SingularAtOrigin);
    }
    if !is_analytic(which, col, k) {
        return Err(Error::NonAnalyticColumnRequest { solution: if which == Jost::Psi1 { 1 } else { 2 }, column: col as u8 + 1, im_k: k.im });
    }
    let g = k.im.abs() * profile.support_n;
    if g > GAUGE_LIMIT {
        return Err(Error::OverflowGauge(g));
    }
    Ok(())
}

fn initial(profile: &StepProfile, which: Jost, col: usize, k: Complex64) -> (f64, Col) {
    let (side, x0) = match which {
        Jost::Psi1 => (BgSide::Minus, -profile.support_n),
        Jost::Psi2 => (BgSide::Plus, profile.support_n),
    };
    let n = n_matrix(profile.a, profile.sigma, k, side);
    (x0, [n[0][col], n[1][col]])
}

fn march(profile: &StepProfile, k: Complex64, col: usize, x0: f64, y0: Col, x1: f64, breaks: &[f64], opts: &JostOptions) -> Result<Col> {
    let i2k = 2.0 * Complex64::new(0.0, 1.0) * k;
    let sigma = profile.sigma;
    let (lo, hi) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&b| b > lo && b < hi).collect();
    if x0 > x1 {
        pts.reverse();
    }
    let mut x = x0;
    let mut y = y0;
    for p in pts.into_iter().chain(std::iter::once(x1)) {
        // one-sided limits of the potential at the segment ends
        let (sa, sb) = if x < p { (x, p) } else { (p, x) };
        let rhs = |s: f64, y: &Col| -> Col {
            let d = 1e-12 * s.abs().max(1.0);
            let s = if s <= sa {
                sa + d
            } else if s >= sb {
                sb - d
            } else {
                s
            };
            let u = profile.u0(s);
            let um = -sigma * profile.u0(-s);
            if col == 0 {
                [u * y[1], i2k * y[1] + um * y[0]]
            } else {
                [-i2k * y[0] + u * y[1], um * y[0]]
            }
        };
        y = ode::integrate(rhs, x, y, p, &opts.ode)?;
        x = p;
    }
    Ok(y)
}

/// Column `col` of `which` at the points `xs` (any order).
pub fn jost_column(profile: &StepProfile, k: Complex64, which: Jost, col: usize, xs: &[f64], opts: &JostOptions) -> Result<Vec<Col>> {
    check_request(profile, which, col, k)?;
    let (x0, y0) = initial(profile, which, col, k);
    let breaks = profile.potential_breakpoints();
    let mut order: Vec<usize> = (0..xs.len()).collect();
    // march away from the normalisation edge
    match which {
        Jost::Psi1 => order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j])),
        Jost::Psi2 => order.sort_by(|&i, &j| xs[j].total_cmp(&xs[i])),
    }
    let mut out = vec![[Complex64::new(0.0, 0.0); 2]; xs.len()];
    let mut x = x0;
    let mut y = y0;
    for idx in order {
        let target = xs[idx];
        let behind = match which {
            Jost::Psi1 => target <= x0,
            Jost::Psi2 => target >= x0,
        };
        if behind {
            out[idx] = y0;
            continue;
        }
        y = march(profile, k, col, x, y, target, &breaks, opts)?;
        x = target;
        out[idx] = y;
    }
    Ok(out)
}

/// Single column at a single point.
pub fn jost_column_at(profile: &StepProfile, k: Complex64, which: Jost, col: usize, x: f64, opts: &JostOptions) -> Result<Col> {
    Ok(jost_column(profile, k, which, col, &[x], opts)?[0])
}

/// Jost matrices sampled on an x-grid. Non-analytic columns at complex k are `None`.
#[derive(Debug, Clone)]
pub struct JostSamples {
    pub k: Complex64,
    pub x: Vec<f64>,
    pub psi1: [Option<Vec<Col>>; 2],
    pub psi2: [Option<Vec<Col>>; 2],
}

impl JostSamples {
    /// Full matrix at sample `j` when all four columns are available.
    pub fn matrices(&self, j: usize) -> Option<(Mat2, Mat2)> {
        let get = |c: &Option<Vec<Col>>| c.as_ref().map(|v| v[j]);
        let (a, b, c, d) = (get(&self.psi1[0])?, get(&self.psi1[1])?, get(&self.psi2[0])?, get(&self.psi2[1])?);
        Some(([[a[0], b[0]], [a[1], b[1]]], [[c[0], d[0]], [c[1], d[1]]]))
    }
}

/// Jost solutions on `xs` at t = 0; only the analytic columns are computed off the real axis.
pub fn jost_solutions(profile: &StepProfile, k: Complex64, xs: &[f64], opts: &JostOptions) -> Result<JostSamples> {
    profile.validate()?;
    let col = |which, c| -> Result<Option<Vec<Col>>> {
        if is_analytic(which, c, k) {
            jost_column(profile, k, which, c, xs, opts).map(Some)
        } else {
            Ok(None)
        }
    };
    Ok(JostSamples { k, x: xs.to_vec(), psi1: [col(Jost::Psi1, 0)?, col(Jost::Psi1, 1)?], psi2: [col(Jost::Psi2, 0)?, col(Jost::Psi2, 1)?] })
}
