//! The scalar function delta(k, xi) for rays xi < 0, with nu, Delta, chi, chi-hat.

use super::branch::{ray_grid, Anchor, BranchMap};
use super::source::SpectralSource;
use crate::error::{Error, Result};
use crate::numerics::contour::{cauchy_contour_integral, ContourOptions, ContourSegment, Side};
use crate::numerics::quad::{gauss_legendre, integrate_split, QuadOptions};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cell::Cell;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy)]
pub struct DeltaOptions {
    pub contour: ContourOptions,
    pub branch_step: f64,
    /// relative step of the finite difference d_s log(1 + r1 r2)
    pub fd_step: f64,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        DeltaOptions {
            contour: ContourOptions { quad: QuadOptions { abs_tol: 1e-11, rel_tol: 1e-12, max_evals: 400_000 }, s_max: 1e3 },
            branch_step: 0.02,
            fd_step: 1e-5,
        }
    }
}

/// delta(k) = exp{(1/2 pi i) int_{(-inf,-k0) u (k0,inf)} log(1 + r1 r2)(s) / (s - k) ds}.
pub struct DeltaFunction<'a, S: SpectralSource + ?Sized> {
    src: &'a S,
    pub xi: f64,
    pub k0: f64,
    pos: BranchMap,
    neg: BranchMap,
    pub opts: DeltaOptions,
}

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

impl<'a, S: SpectralSource + ?Sized> DeltaFunction<'a, S> {
    pub fn new(src: &'a S, xi: f64, opts: DeltaOptions) -> Result<Self> {
        if !(xi < 0.0) {
            return Err(Error::WrongSector { expected: "xi < 0", got: format!("xi = {xi}") });
        }
        let k0 = (-xi).sqrt();
        let s_max = opts.contour.s_max.max(2.0 * k0);
        let grid = ray_grid(k0, s_max, opts.branch_step);
        let f = |s: f64| src.point(s).map(|p| p.one_plus_r1r2());
        let pos = BranchMap::build(f, &grid, Anchor::Right)?;
        let ng: Vec<f64> = grid.iter().rev().map(|s| -s).collect();
        let neg = BranchMap::build(f, &ng, Anchor::Left)?;
        Ok(DeltaFunction { src, xi, k0, pos, neg, opts: DeltaOptions { contour: ContourOptions { s_max, ..opts.contour }, ..opts } })
    }

    fn domain(&self) -> [ContourSegment; 2] {
        [ContourSegment::ToNegInf(-self.k0), ContourSegment::ToPosInf(self.k0)]
    }

    /// Contour-continuous log(1 + r1 r2) at |s| >= k0.
    pub fn log_jump(&self, s: f64) -> Result<Complex64> {
        let v = self.src.point(s)?.one_plus_r1r2();
        Ok(if s > 0.0 { self.pos.log(s, v) } else { self.neg.log(s, v) })
    }

    fn guarded<'e, F: Fn(f64) -> Result<Complex64> + 'e>(f: F, err: &'e Cell<Option<Error>>) -> impl Fn(f64) -> Complex64 + 'e {
        move |s| match f(s) {
            Ok(v) => v,
            Err(e) => {
                err.set(Some(e));
                Complex64::new(0.0, 0.0)
            }
        }
    }

    /// log delta at k; on the contour a side flag selects the boundary value.
    pub fn log_delta(&self, k: Complex64, side: Option<Side>) -> Result<Complex64> {
        let err = Cell::new(None);
        let g = Self::guarded(|s| self.log_jump(s), &err);
        let v = cauchy_contour_integral(g, k, side, &self.domain(), &self.opts.contour)?;
        match err.take() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    pub fn delta(&self, k: Complex64, side: Option<Side>) -> Result<Complex64> {
        Ok(self.log_delta(k, side)?.exp())
    }

    /// nu(-k0) = -(1/2 pi) log|1 + r1 r2(-k0)| - (i/2 pi) Delta(-k0).
    pub fn nu(&self) -> Result<(Complex64, f64)> {
        let l = self.log_jump(-self.k0)?;
        let delta = l.im;
        if delta.abs() >= PI {
            return Err(Error::WindingOutOfRange(delta));
        }
        Ok((-l / (2.0 * PI), delta))
    }

    fn check_endpoints(&self) -> Result<()> {
        for s in [-self.k0, self.k0] {
            let v = self.src.point(s)?.one_plus_r1r2().norm();
            if v < 1e-10 {
                return Err(Error::EndpointDivergence(v));
            }
        }
        Ok(())
    }

    /// chi-hat(-k0) = -(1/2 pi i) int log(-k0 - s) d_s log(1 + r1 r2), principal log,
    /// evaluated after integrating by parts on each ray.
    pub fn chi_hat_minus_k0(&self) -> Result<Complex64> {
        self.check_endpoints()?;
        let k0 = self.k0;
        let s_max = self.opts.contour.s_max;
        let q = &self.opts.contour.quad;
        let lm = self.log_jump(-k0)?;
        let lp = self.log_jump(k0)?;
        let err = Cell::new(None);
        let left = Self::guarded(
            |s: f64| {
                let sub = if s >= -k0 - 1.0 { lm } else { Complex64::new(0.0, 0.0) };
                Ok((self.log_jump(s)? - sub) / (-k0 - s))
            },
            &err,
        );
        let right = Self::guarded(|s: f64| Ok(self.log_jump(s)? / (s + k0)), &err);
        let lb = breaks(k0, s_max);
        let neg_pts: Vec<f64> = lb.iter().rev().map(|s| -s).collect();
        let mut int_left = integrate_split(&left, &neg_pts, q)?.0;
        let mut int_right = integrate_split(&right, &lb, q)?.0;
        int_left += self.log_jump(-s_max)? / 2.0;
        int_right += self.log_jump(s_max)? / 2.0;
        if let Some(e) = err.take() {
            return Err(e);
        }
        let log_2k0 = Complex64::new((2.0 * k0).ln(), PI);
        let total = int_left - log_2k0 * lp - int_right;
        Ok(-total / two_pi_i())
    }

    /// chi(-k0) = chi-hat(-k0) + (1/2 pi i) log(ratio) (log(2 k0) + i pi), with the
    /// log of (1 + r1r2(-k0)) / (1 + conj r1r2(-k0)) taken as 2 i Delta.
    pub fn chi_minus_k0(&self) -> Result<(Complex64, Complex64)> {
        let chi_hat = self.chi_hat_minus_k0()?;
        let (_, delta) = self.nu()?;
        let log_ratio = Complex64::new(0.0, 2.0 * delta);
        let log_2k0 = Complex64::new((2.0 * self.k0).ln(), PI);
        Ok((chi_hat, chi_hat + log_ratio * log_2k0 / two_pi_i()))
    }

    fn log_jump_derivative(&self, s: f64) -> Result<Complex64> {
        let h = self.opts.fd_step * s.abs().max(1.0);
        let inside = |x: f64| x.abs() >= self.k0 && x.signum() == s.signum();
        if inside(s - 2.0 * h) && inside(s + 2.0 * h) {
            let f = |d: f64| self.log_jump(s + d);
            return Ok((-f(2.0 * h)? + 8.0 * f(h)? - 8.0 * f(-h)? + f(-2.0 * h)?) / (12.0 * h));
        }
        // one-sided, pointing away from the endpoint
        let d = if s > 0.0 { h } else { -h };
        let f = |j: f64| self.log_jump(s + j * d);
        Ok((-3.0 * f(0.0)? + 4.0 * f(1.0)? - f(2.0)?) / (2.0 * d))
    }

    /// chi-hat(k) = -(1/2 pi i) int Log(k - s) d_s log(1 + r1 r2) ds off the contour,
    /// from a finite-difference derivative of the jump log.
    pub fn chi_hat_direct(&self, k: Complex64) -> Result<Complex64> {
        let s_max = self.opts.contour.s_max;
        let q = QuadOptions { abs_tol: 1e-10, rel_tol: 1e-10, ..self.opts.contour.quad };
        let err = Cell::new(None);
        let g = Self::guarded(|s: f64| Ok((k - s).ln() * self.log_jump_derivative(s)?), &err);
        let mut pts = breaks(self.k0, s_max);
        if k.re > self.k0 && k.re < s_max {
            pts.push(k.re);
            pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        let mut total = integrate_split(&g, &pts, &q)?.0;
        let mut npts: Vec<f64> = breaks(self.k0, s_max).iter().rev().map(|s| -s).collect();
        if -k.re > self.k0 && -k.re < s_max {
            npts.push(k.re);
            npts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        total += integrate_split(&g, &npts, &q)?.0;
        if let Some(e) = err.take() {
            return Err(e);
        }
        // tails: log(1 + r1 r2) ~ c / s^2
        let (x, w) = gauss_legendre(16);
        for dir in [1.0, -1.0] {
            let c = self.log_jump(dir * s_max)? * s_max * s_max;
            let mut acc = Complex64::new(0.0, 0.0);
            for (xi, wi) in x.iter().zip(&w) {
                let u = 0.5 * (xi + 1.0);
                let s = dir * s_max / u;
                // d/ds (c/s^2) ds = -2c/s^3 ds, ds = s_max/u^2 du (orientation absorbed)
                acc += 0.5 * wi * (k - s).ln() * (-2.0 * c * u / (s_max * s_max)) * dir;
            }
            total += acc;
        }
        Ok(-total / two_pi_i())
    }

    /// log delta(k) - i nu Log(k + k0) + i conj(nu) Log(k - k0), which equals chi-hat(k).
    pub fn chi_hat_from_delta(&self, k: Complex64) -> Result<Complex64> {
        let (nu, _) = self.nu()?;
        let i = Complex64::new(0.0, 1.0);
        Ok(self.log_delta(k, None)? - i * nu * (k + self.k0).ln() + i * nu.conj() * (k - self.k0).ln())
    }
}

fn breaks(k0: f64, s_max: f64) -> Vec<f64> {
    let mut p = vec![k0];
    for b in [k0 + 0.01, k0 + 0.1, k0 + 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
        if b > *p.last().unwrap() && b < s_max {
            p.push(b);
        }
    }
    p.push(s_max);
    p
}

/// Everything downstream evaluators need from delta for one ray xi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaCache {
    pub xi: f64,
    pub k0: f64,
    pub nu: Complex64,
    #[serde(rename = "Delta")]
    pub winding: f64,
    pub delta_at_0: Complex64,
    pub delta_at_ikappa: Complex64,
    pub chi_at_minus_k0: Complex64,
    pub chi_hat_at_minus_k0: Complex64,
    pub r1_at_minus_k0: Complex64,
    pub r2_at_minus_k0: Complex64,
}

impl DeltaCache {
    pub fn build<S: SpectralSource + ?Sized>(src: &S, xi: f64, kappa: f64, opts: DeltaOptions) -> Result<Self> {
        let d = DeltaFunction::new(src, xi, opts)?;
        let (nu, winding) = d.nu()?;
        let delta_at_0 = d.delta(Complex64::new(0.0, 0.0), None)?;
        let delta_at_ikappa = d.delta(Complex64::new(0.0, kappa), None)?;
        let (chi_hat, chi) = d.chi_minus_k0()?;
        let p = src.point(-d.k0)?;
        Ok(DeltaCache {
            xi,
            k0: d.k0,
            nu,
            winding,
            delta_at_0,
            delta_at_ikappa,
            chi_at_minus_k0: chi,
            chi_hat_at_minus_k0: chi_hat,
            r1_at_minus_k0: p.r1(),
            r2_at_minus_k0: p.r2(),
        })
    }

    /// One JSON-lines record: {xi, k0, nu_re, nu_im, Delta, delta0_re, delta0_im, chi_re, chi_im}.
    pub fn to_jsonl(&self) -> String {
        serde_json::json!({
            "xi": self.xi,
            "k0": self.k0,
            "nu_re": self.nu.re,
            "nu_im": self.nu.im,
            "Delta": self.winding,
            "delta0_re": self.delta_at_0.re,
            "delta0_im": self.delta_at_0.im,
            "chi_re": self.chi_at_minus_k0.re,
            "chi_im": self.chi_at_minus_k0.im,
        })
        .to_string()
    }
}

/// nu(-k0) and Delta(-k0) from the negative ray alone.
pub fn nu_at<S: SpectralSource + ?Sized>(src: &S, k0: f64, opts: &DeltaOptions) -> Result<(Complex64, f64)> {
    let grid: Vec<f64> = ray_grid(k0, opts.contour.s_max.max(2.0 * k0), opts.branch_step).iter().rev().map(|s| -s).collect();
    let f = |s: f64| src.point(s).map(|p| p.one_plus_r1r2());
    let map = BranchMap::build(f, &grid, Anchor::Left)?;
    let l = map.log(-k0, f(-k0)?);
    if l.im.abs() >= PI {
        return Err(Error::WindingOutOfRange(l.im));
    }
    Ok((-l / (2.0 * PI), l.im))
}
