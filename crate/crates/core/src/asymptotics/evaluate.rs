//! Leading and subleading terms of u(x, t) in each sector.

use super::params::{asym_params, soliton_constants, SaddleParams, SolitonConstants};
use super::{classify_sector, SectorTag};
use crate::error::{Error, Result};
use crate::spectral::{DeltaCache, SpectralData};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Exponents beyond this magnitude return the analytic limit of the soliton formulas.
const EXP_GUARD: f64 = 700.0;
/// |denominator| below this is reported as singular.
const SINGULAR_DEN: f64 = 1e-12;
/// |Im nu| below this counts as Im nu = 0 in the R3 order.
const IM_NU_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AsymOptions {
    pub alpha: Option<f64>,
    pub kappa_delta: Option<f64>,
}

/// Order of the remainder: `text` is the order expression, `exponent` the
/// power of tau (xi < 0) or of |t| (xi > 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorOrder {
    pub text: String,
    pub exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RivBranch {
    /// Im nu <= -alpha/6: gamma term only
    A,
    /// |Im nu| < alpha/6: both terms
    B,
    /// Im nu >= alpha/6: beta term only
    C,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticResult {
    pub x: f64,
    pub t: f64,
    pub sector: SectorTag,
    pub u_leading: f64,
    pub u_subleading: f64,
    pub u_total: f64,
    /// Sum of the moduli of the oscillatory terms before taking real parts.
    pub subleading_envelope: f64,
    pub error_order: ErrorOrder,
    pub riv_branch: Option<RivBranch>,
    pub saddle: Option<SaddleParams>,
    pub soliton: Option<SolitonConstants>,
}

impl AsymptoticResult {
    fn new(x: f64, t: f64, sector: SectorTag, lead: f64, sub: f64, env: f64, order: ErrorOrder) -> Self {
        AsymptoticResult {
            x,
            t,
            sector,
            u_leading: lead,
            u_subleading: sub,
            u_total: lead + sub,
            subleading_envelope: env,
            error_order: order,
            riv_branch: None,
            saddle: None,
            soliton: None,
        }
    }
}

fn require(x: f64, t: f64, kappa: f64, ok: fn(SectorTag) -> bool, expected: &'static str) -> Result<SectorTag> {
    let s = classify_sector(x, t, kappa)?;
    if ok(s) {
        Ok(s)
    } else {
        Err(Error::WrongSector { expected, got: s.name().to_string() })
    }
}

/// b^(p + i q) for b > 0.
fn real_pow(b: f64, e: Complex64) -> Complex64 {
    (e * b.ln()).exp()
}

/// e^{i theta} with theta = 16 k0^3 t, the value of e^{t phi(xi, 0)}.
fn phase(p: &SaddleParams) -> Complex64 {
    (p.phi0 * p.t).exp()
}

fn power_order(base: &str, alpha: f64, widen: bool, im_nu: f64) -> ErrorOrder {
    let e = -(1.0 + alpha) / 2.0 + if widen { 2.0 * im_nu.abs() } else { 0.0 };
    ErrorOrder { text: format!("O(eps {base}^({e:.6}))"), exponent: e }
}

/// R1 at base tau: widened by 2|Im nu| when Im nu < 0.
fn r1(base: &str, p: &SaddleParams) -> ErrorOrder {
    power_order(base, p.alpha, p.nu.im < 0.0, p.nu.im)
}

fn r2(base: &str, p: &SaddleParams) -> ErrorOrder {
    power_order(base, p.alpha, p.nu.im >= 0.0, p.nu.im)
}

fn r3(base: &str, p: &SaddleParams) -> ErrorOrder {
    power_order(base, p.alpha, p.nu.im.abs() > IM_NU_ZERO, p.nu.im)
}

/// x < 0, t > 0: u = -4 eta (-tau)^{-1/2 - Im nu} Re(gamma e^{t phi} (-tau)^{i Re nu}) + R1(xi, -t).
pub fn evaluate_rii(x: f64, t: f64, spectral: &SpectralData, cache: &DeltaCache, opts: &AsymOptions) -> Result<AsymptoticResult> {
    let sector = require(x, t, spectral.kappa, |s| s == SectorTag::RII, "R_II")?;
    let p = asym_params(x / (12.0 * t), t, spectral, cache, opts.alpha)?;
    let base = -p.tau;
    let w = p.gamma * phase(&p) * real_pow(base, Complex64::new(0.0, p.nu.re));
    let amp = 4.0 * p.eta * base.powf(-0.5 - p.nu.im);
    let mut r = AsymptoticResult::new(x, t, sector, 0.0, -amp * w.re, amp * w.norm(), r1("(-tau)", &p));
    r.saddle = Some(p);
    Ok(r)
}

/// x > 0, t < 0: u = A delta(0, xi)^2 plus the branch terms selected by Im nu against +-alpha/6.
pub fn evaluate_riv(x: f64, t: f64, spectral: &SpectralData, cache: &DeltaCache, opts: &AsymOptions) -> Result<AsymptoticResult> {
    let sector = require(x, t, spectral.kappa, |s| s == SectorTag::RIV, "R_IV")?;
    let p = asym_params(x / (12.0 * t), t, spectral, cache, opts.alpha)?;
    let i = Complex64::new(0.0, 1.0);
    let d0 = cache.delta_at_0;
    let lead = (spectral.amplitude * d0 * d0).re;
    let tau = p.tau;
    let ph = phase(&p);
    let branch = if p.nu.im <= -p.alpha / 6.0 {
        RivBranch::A
    } else if p.nu.im >= p.alpha / 6.0 {
        RivBranch::C
    } else {
        RivBranch::B
    };
    let (mut sub, mut env) = (0.0, 0.0);
    if branch != RivBranch::C {
        let coef = -(4.0 * p.c0 * p.c0 / (p.k0 * p.k0)).re * p.eta * tau.powf(-0.5 - p.nu.im);
        let w = i * p.gamma * ph * real_pow(tau, Complex64::new(0.0, p.nu.re));
        sub += coef * w.re;
        env += coef.abs() * w.norm();
    }
    if branch != RivBranch::A {
        let coef = 4.0 * p.eta * tau.powf(-0.5 + p.nu.im);
        let w = p.beta / ph * real_pow(tau, Complex64::new(0.0, -p.nu.re));
        sub += coef * w.re;
        env += coef.abs() * w.norm();
    }
    let order = match branch {
        RivBranch::A => r1("tau", &p),
        RivBranch::B => r3("tau", &p),
        RivBranch::C => r2("tau", &p),
    };
    let mut r = AsymptoticResult::new(x, t, sector, lead, sub, env, order);
    r.riv_branch = Some(branch);
    r.saddle = Some(p);
    Ok(r)
}

fn exp_order(prefix: &str, rate: f64) -> ErrorOrder {
    ErrorOrder { text: format!("O({prefix}^(-1/2) e^({rate:.6e}))"), exponent: -0.5 }
}

/// x > 0, t > 0: the soliton A / (1 - C1 e^{-2 kappa x + 8 kappa^3 t}) on R_I_L, A elsewhere.
pub fn evaluate_ri(x: f64, t: f64, spectral: &SpectralData, opts: &AsymOptions) -> Result<AsymptoticResult> {
    let sector = require(x, t, spectral.kappa, SectorTag::is_region_i, "R_I")?;
    let c = soliton_constants(spectral, opts.kappa_delta)?;
    let a = spectral.amplitude;
    let xi = x / (12.0 * t);
    let k = c.kappa;
    let (lead, order) = match sector {
        SectorTag::RIL => {
            let e = -2.0 * k * x + 8.0 * k.powi(3) * t;
            let u = if e > EXP_GUARD {
                0.0
            } else if e < -EXP_GUARD {
                a
            } else {
                let den = 1.0 - c.c1 * e.exp();
                if den.norm() < SINGULAR_DEN {
                    return Err(Error::SingularDenominator);
                }
                (a / den).re
            };
            (u, exp_order("t", -16.0 * t * xi.powf(1.5)))
        }
        SectorTag::RIM => (a, exp_order("t", -16.0 * t * xi.powf(1.5))),
        _ => {
            let kd = c.kappa_delta;
            (a, exp_order("t", -8.0 * t * kd * (3.0 * xi - kd * kd)))
        }
    };
    let mut r = AsymptoticResult::new(x, t, sector, lead, 0.0, 0.0, order);
    r.soliton = Some(c);
    Ok(r)
}

/// x < 0, t < 0: 4 / (C2 E - A kappa^-2) on R_III_R, 0 elsewhere.
///
/// E is the soliton exponential taken at the mirrored point (-x, -t),
/// E = e^{2 kappa x - 8 kappa^3 t}, which is how the formula arises from the
/// R_I problem under (x, t) -> (-x, -t). See `riii_r_literal_exponent` for the
/// variant with e^{-2 kappa x + 8 kappa^3 t}.
pub fn evaluate_riii(x: f64, t: f64, spectral: &SpectralData, opts: &AsymOptions) -> Result<AsymptoticResult> {
    let sector = require(x, t, spectral.kappa, SectorTag::is_region_iii, "R_III")?;
    let c = soliton_constants(spectral, opts.kappa_delta)?;
    let xi = x / (12.0 * t);
    let k = c.kappa;
    let (lead, order) = match sector {
        SectorTag::RIIIR => {
            let e = 2.0 * k * x - 8.0 * k.powi(3) * t;
            (riii_r_value(spectral, &c, e)?, exp_order("(-t)", 16.0 * t * xi.powf(1.5)))
        }
        SectorTag::RIIIM => (0.0, exp_order("(-t)", 16.0 * t * xi.powf(1.5))),
        _ => {
            let kd = c.kappa_delta;
            (0.0, exp_order("(-t)", 8.0 * t * kd * (3.0 * xi - kd * kd)))
        }
    };
    let mut r = AsymptoticResult::new(x, t, sector, lead, 0.0, 0.0, order);
    r.soliton = Some(c);
    Ok(r)
}

fn riii_r_value(spectral: &SpectralData, c: &SolitonConstants, e: f64) -> Result<f64> {
    let shift = spectral.amplitude / (c.kappa * c.kappa);
    if e > EXP_GUARD {
        return Ok(0.0);
    }
    if e < -EXP_GUARD {
        return Ok(-4.0 / shift);
    }
    let den = c.c2 * e.exp() - shift;
    if den.norm() < SINGULAR_DEN {
        return Err(Error::SingularDenominator);
    }
    Ok((4.0 / den).re)
}

/// 4 / (C2 e^{-2 kappa x + 8 kappa^3 t} - A kappa^-2) with the exponent taken at (x, t) itself.
pub fn riii_r_literal_exponent(x: f64, t: f64, spectral: &SpectralData, opts: &AsymOptions) -> Result<f64> {
    require(x, t, spectral.kappa, |s| s == SectorTag::RIIIR, "R_III_R")?;
    let c = soliton_constants(spectral, opts.kappa_delta)?;
    let k = c.kappa;
    riii_r_value(spectral, &c, -2.0 * k * x + 8.0 * k.powi(3) * t)
}

/// Dispatch on the sector of (x, t). Saddle sectors need the delta cache of the ray.
pub fn evaluate(x: f64, t: f64, spectral: &SpectralData, cache: Option<&DeltaCache>, opts: &AsymOptions) -> Result<AsymptoticResult> {
    let sector = classify_sector(x, t, spectral.kappa)?;
    let need = || cache.ok_or(Error::InvalidParameter("a delta cache is required for xi < 0".into()));
    match sector {
        SectorTag::Boundary => Err(Error::WrongSector { expected: "an open sector", got: "Boundary".into() }),
        SectorTag::RII => evaluate_rii(x, t, spectral, need()?, opts),
        SectorTag::RIV => evaluate_riv(x, t, spectral, need()?, opts),
        s if s.is_region_i() => evaluate_ri(x, t, spectral, opts),
        _ => evaluate_riii(x, t, spectral, opts),
    }
}
