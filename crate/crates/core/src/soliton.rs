//! Exact one-soliton solution u = A / (1 - gamma0 e^{-A x + A^3 t}) and its
//! reflectionless spectral data.

use crate::error::{Error, Result};
use crate::spectral::{Case, ReflectionlessSpectrum, SpectralBuildOptions, SpectralData, Spectrum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Exponents beyond this magnitude return the analytic limit.
pub const EXP_GUARD: f64 = 700.0;
/// Half-width of the excluded band around the singular line (gamma0 = +1).
pub const SINGULAR_BAND: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonParams {
    pub a: f64,
    pub gamma0: f64,
}

impl SolitonParams {
    pub fn new(a: f64, gamma0: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidProfile(format!("amplitude {a} must be positive")));
        }
        if gamma0 != 1.0 && gamma0 != -1.0 {
            return Err(Error::InvalidProfile(format!("gamma0 = {gamma0} must be +-1")));
        }
        Ok(SolitonParams { a, gamma0 })
    }

    /// True for gamma0 = +1, where the field blows up on t = x / A^2.
    pub fn is_singular(&self) -> bool {
        self.gamma0 > 0.0
    }
}

/// A / (1 - gamma0 e^{-A x + A^3 t}).
pub fn one_soliton(p: &SolitonParams, x: f64, t: f64) -> Result<f64> {
    let e = -p.a * x + p.a.powi(3) * t;
    if p.is_singular() && e.abs() <= SINGULAR_BAND {
        return Err(Error::OnSingularLine(x, t));
    }
    if e > EXP_GUARD {
        return Ok(0.0);
    }
    if e < -EXP_GUARD {
        return Ok(p.a);
    }
    Ok(p.a / (1.0 - p.gamma0 * e.exp()))
}

/// Reflectionless data a1 = (k - iA/2)/k, a2 = k/(k - iA/2), b = 0 with
/// kappa = A/2, a1'(i kappa) = -i/kappa, a11 = A/(2i), a2'(0) = 2i/A.
pub fn soliton_spectral_fixture(a: f64, gamma0: f64, opts: &SpectralBuildOptions) -> Result<SpectralData> {
    let p = SolitonParams::new(a, gamma0)?;
    let kappa = p.a / 2.0;
    let a1_prime = Complex64::new(0.0, -1.0 / kappa);
    let mut data = SpectralData::assemble(Spectrum::Reflectionless(ReflectionlessSpectrum { a: p.a }), kappa, p.gamma0, a1_prime, opts)?;
    data.case = Case::II;
    data.a11 = Some(Complex64::new(0.0, -p.a / 2.0));
    data.a2_prime_0 = Some(Complex64::new(0.0, 2.0 / p.a));
    data.a2_at_0 = None;
    data.b_at_0 = Some(Complex64::new(0.0, 0.0));
    Ok(data)
}
