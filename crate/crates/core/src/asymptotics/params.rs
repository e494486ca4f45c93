//! Constants of the saddle-point formulas (xi < 0) and of the soliton
//! formulas (xi > 0).

use crate::error::{Error, Result};
use crate::numerics::recip_gamma;
use crate::spectral::{DeltaCache, SpectralData};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
/// |r1 r2(-k0)| at or below this takes the degenerate path.
pub const DEGENERATE_R1R2: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleParams {
    pub xi: f64,
    pub t: f64,
    pub k0: f64,
    pub eta: f64,
    pub rho: f64,
    pub tau: f64,
    pub nu: Complex64,
    pub phi0: Complex64,
    pub q1: Complex64,
    pub q2: Complex64,
    pub beta: Complex64,
    /// Sign chosen so that beta * gamma = nu and the model solution has jump J0.
    pub gamma: Complex64,
    /// gamma as printed in the theorem (= -gamma).
    pub gamma_printed: Complex64,
    pub lambda: f64,
    pub alpha: f64,
    pub epsilon: f64,
    /// A delta(0, xi)^2 / (2i)
    pub c0: Complex64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonConstants {
    pub kappa: f64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub kappa_delta: f64,
}

/// C1 = A gamma0 / (2i a1'(i kappa) kappa^2), C2 = 2i a1'(i kappa) / gamma0.
pub fn soliton_constants(spectral: &SpectralData, kappa_delta: Option<f64>) -> Result<SolitonConstants> {
    let i = Complex64::new(0.0, 1.0);
    let kappa = spectral.kappa;
    let ap = spectral.a1_prime_at_pole;
    let kd = kappa_delta.unwrap_or(kappa / 2.0);
    if !(kd > 0.0 && kd < kappa) {
        return Err(Error::InvalidParameter(format!("kappa_delta = {kd} must lie in (0, {kappa})")));
    }
    Ok(SolitonConstants {
        kappa,
        c1: spectral.amplitude * spectral.gamma0 / (2.0 * i * ap * kappa * kappa),
        c2: 2.0 * i * ap / spectral.gamma0,
        kappa_delta: kd,
    })
}

/// Saddle-point constants on the ray xi < 0 at time t.
pub fn asym_params(xi: f64, t: f64, spectral: &SpectralData, cache: &DeltaCache, alpha_override: Option<f64>) -> Result<SaddleParams> {
    if !(xi < 0.0) {
        return Err(Error::WrongSector { expected: "xi < 0", got: format!("xi = {xi}") });
    }
    if (cache.xi - xi).abs() > 1e-12 * xi.abs().max(1.0) {
        return Err(Error::CacheMismatch { cached: cache.xi, requested: xi });
    }
    let i = Complex64::new(0.0, 1.0);
    let k0 = cache.k0;
    let r1 = cache.r1_at_minus_k0;
    let r2 = cache.r2_at_minus_k0;
    let degenerate = (r1 * r2).norm() <= DEGENERATE_R1R2;
    let zero = Complex64::new(0.0, 0.0);
    let (nu, q1, q2, beta, gamma_printed) = if degenerate {
        (zero, zero, zero, zero, zero)
    } else {
        let nu = cache.nu;
        if nu.im.abs() >= 0.5 {
            return Err(Error::NuOutOfRange(nu.im));
        }
        let chi = cache.chi_at_minus_k0;
        let log4 = 4f64.ln();
        let q1 = (-2.0 * chi).exp() * r1 * (2.0 * i * nu * log4).exp();
        let q2 = (2.0 * chi).exp() * r2 * (-2.0 * i * nu * log4).exp();
        let damp = (-PI * nu / 2.0).exp();
        let beta = SQRT_2PI * Complex64::from_polar(1.0, FRAC_PI_4) * damp * recip_gamma(-i * nu) / q1;
        let gamma_printed = SQRT_2PI * Complex64::from_polar(1.0, -FRAC_PI_4) * damp * recip_gamma(i * nu) / q2;
        (nu, q1, q2, beta, gamma_printed)
    };
    let lambda = 0.5f64.max(2.0 * nu.im.abs());
    let alpha = match alpha_override {
        Some(a) if a > lambda && a < 1.0 => a,
        Some(a) => return Err(Error::InvalidParameter(format!("alpha = {a} must lie in ({lambda}, 1)"))),
        None => (lambda + 1.0) / 2.0,
    };
    let eta = k0 / 2.0;
    let kappa = spectral.kappa;
    let d0 = cache.delta_at_0;
    Ok(SaddleParams {
        xi,
        t,
        k0,
        eta,
        rho: eta * (48.0 * k0).sqrt(),
        tau: -12.0 * t * k0.powi(3),
        nu,
        phi0: Complex64::new(0.0, 16.0 * k0.powi(3)),
        q1,
        q2,
        beta,
        gamma: -gamma_printed,
        gamma_printed,
        lambda,
        alpha,
        epsilon: (k0 / 2.0).min(Complex64::new(k0, kappa).norm() / 2.0),
        c0: spectral.amplitude * d0 * d0 / (2.0 * i),
        degenerate,
    })
}
