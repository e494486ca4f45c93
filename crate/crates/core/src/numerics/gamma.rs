//! Complex Gamma function (Lanczos, g = 7, n = 9) with reflection for Re z < 1/2.

use super::is_finite;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

fn pole_index(z: Complex64) -> Option<f64> {
    let n = z.re.round();
    if n <= 0.0 && (z - n).norm() < 1e-12 {
        Some(n)
    } else {
        None
    }
}

/// log Gamma for Re z >= 1/2 (principal-free sum of logs; not the principal branch of log(Gamma)).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut a = Complex64::new(COEF[0], 0.0);
    for (i, &ci) in COEF.iter().enumerate().skip(1) {
        a += ci / (z + i as f64);
    }
    let t = z + G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

/// A logarithm of Gamma(z); exp of it is Gamma(z). Branch is not normalised.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if let Some(n) = pole_index(z) {
        return Err(Error::PoleAtNonPositiveInteger(format!("{n}")));
    }
    if z.re < 0.5 {
        // Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
        let s = (PI * z).sin();
        Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_right(1.0 - z))
    } else {
        Ok(ln_gamma_right(z))
    }
}

pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    if !is_finite(z) {
        return Err(Error::NonFinite("complex_gamma"));
    }
    let v = if z.re < 0.5 {
        if let Some(n) = pole_index(z) {
            return Err(Error::PoleAtNonPositiveInteger(format!("{n}")));
        }
        PI / ((PI * z).sin() * ln_gamma_right(1.0 - z).exp())
    } else {
        ln_gamma_right(z).exp()
    };
    if is_finite(v) {
        Ok(v)
    } else {
        Err(Error::NonFinite("complex_gamma"))
    }
}

/// 1/Gamma(z), entire; exactly zero at the poles of Gamma.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let n = z.re.round();
        if n <= 0.0 && (z - n).norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        (PI * z).sin() * ln_gamma_right(1.0 - z).exp() / PI
    } else {
        (-ln_gamma_right(z)).exp()
    }
}
