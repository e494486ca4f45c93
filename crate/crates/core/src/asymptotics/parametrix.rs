//! Parabolic cylinder model: the explicit solution m0(zeta) with constant
//! jump J0 = ((1 + q1 q2, q2), (q1, 1)) on the real line.

use crate::error::{Error, Result};
use crate::numerics::{recip_gamma, weber_d, weber_d_pair};
use crate::scattering::{identity, inv, mul, norm_max, Mat2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
/// Radii on the imaginary axis used to extrapolate zeta (m_pc - I) to infinity.
const EXPANSION_RADII: [f64; 5] = [12.0, 16.0, 20.0, 24.0, 28.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfPlane {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParametrixModel {
    pub nu: Complex64,
    pub q1: Complex64,
    pub q2: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametrixDiagnostics {
    /// (zeta, |m0-^-1 m0+ - J0|_max)
    pub jump_residuals: Vec<(f64, f64)>,
    /// largest |(m0-^-1 m0+)_21 - q1|
    pub q1_reconstruction: f64,
    /// lim zeta (m_pc - I) as zeta -> infinity
    pub m1: Mat2,
    /// |m1 - ((0, -i beta), (i gamma, 0))|_max
    pub expansion_residual: f64,
    /// beta gamma read off m1
    pub beta_gamma_recovered: Complex64,
}

fn cexp(z: Complex64) -> Complex64 {
    z.exp()
}

fn rot(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

impl ParametrixModel {
    /// beta and gamma from q1, q2 and nu; gamma carries the sign that makes
    /// beta gamma = nu.
    pub fn new(nu: Complex64, q1: Complex64, q2: Complex64) -> Result<Self> {
        let j = 1.0 + q1 * q2;
        if j.norm() < 1e-10 {
            return Err(Error::DegenerateJump(j.norm()));
        }
        let zero = Complex64::new(0.0, 0.0);
        if q1 * q2 == zero {
            return Ok(ParametrixModel { nu: zero, q1, q2, beta: zero, gamma: zero, trivial: true });
        }
        let i = Complex64::new(0.0, 1.0);
        let damp = (-PI * nu / 2.0).exp();
        let beta = SQRT_2PI * rot(FRAC_PI_4) * damp * recip_gamma(-i * nu) / q1;
        let gamma = -SQRT_2PI * rot(-FRAC_PI_4) * damp * recip_gamma(i * nu) / q2;
        Ok(ParametrixModel { nu, q1, q2, beta, gamma, trivial: false })
    }

    /// q1, q2 with q1 q2 = e^{-2 pi nu} - 1 for a given nu, split as q2 = s q1.
    pub fn consistent(nu: Complex64, q1: Complex64) -> Result<Self> {
        let prod = (-2.0 * PI * nu).exp() - 1.0;
        Self::new(nu, q1, prod / q1)
    }

    pub fn jump(&self) -> Mat2 {
        [[1.0 + self.q1 * self.q2, self.q2], [self.q1, Complex64::new(1.0, 0.0)]]
    }

    /// m0(zeta) from the explicit formula of the given half-plane (entire in zeta,
    /// so real zeta gives the boundary value from that side).
    pub fn m0(&self, zeta: Complex64, half: HalfPlane) -> Result<Mat2> {
        let i = Complex64::new(0.0, 1.0);
        if self.trivial {
            let e = cexp(-i * zeta * zeta / 4.0);
            let z = Complex64::new(0.0, 0.0);
            return Ok([[e, z], [z, 1.0 / e]]);
        }
        let nu = self.nu;
        let inu = i * nu;
        let c12 = -inu / self.gamma;
        let c21 = inu / self.beta;
        let pi = PI;
        Ok(match half {
            HalfPlane::Upper => {
                let za = rot(-3.0 * FRAC_PI_4) * zeta;
                let zb = rot(-FRAC_PI_4) * zeta;
                [
                    [cexp(-3.0 * pi * nu / 4.0) * weber_d(inu, za)?, c12 * cexp(pi * (nu - i) / 4.0) * weber_d(-inu - 1.0, zb)?],
                    [c21 * cexp(-3.0 * pi * (nu + i) / 4.0) * weber_d(inu - 1.0, za)?, cexp(pi * nu / 4.0) * weber_d(-inu, zb)?],
                ]
            }
            HalfPlane::Lower => {
                let za = rot(FRAC_PI_4) * zeta;
                let zb = rot(3.0 * FRAC_PI_4) * zeta;
                [
                    [cexp(pi * nu / 4.0) * weber_d(inu, za)?, c12 * cexp(-3.0 * pi * (nu - i) / 4.0) * weber_d(-inu - 1.0, zb)?],
                    [c21 * cexp(pi * (nu + i) / 4.0) * weber_d(inu - 1.0, za)?, cexp(-3.0 * pi * nu / 4.0) * weber_d(-inu, zb)?],
                ]
            }
        })
    }

    /// m0-^-1 m0+ at real zeta.
    pub fn jump_from_boundary_values(&self, zeta: f64) -> Result<Mat2> {
        let z = Complex64::new(zeta, 0.0);
        let plus = self.m0(z, HalfPlane::Upper)?;
        let minus = self.m0(z, HalfPlane::Lower)?;
        Ok(mul(&inv(&minus), &plus))
    }

    /// The piecewise-constant factor P of the sector containing zeta.
    fn sector_factor(&self, zeta: Complex64) -> Mat2 {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let den = 1.0 + self.q1 * self.q2;
        let arg = zeta.arg();
        let q = FRAC_PI_4;
        if arg > 0.0 && arg < q {
            [[one, zero], [-self.q1, one]]
        } else if arg < 0.0 && arg > -q {
            [[one, self.q2], [zero, one]]
        } else if arg > 3.0 * q && arg < PI {
            [[one, -self.q2 / den], [zero, one]]
        } else if arg < -3.0 * q && arg > -PI {
            [[one, zero], [self.q1 / den, one]]
        } else {
            identity()
        }
    }

    /// m_pc = m0 P zeta^{-i nu sigma3} e^{i zeta^2 sigma3 / 4}.
    pub fn m_pc(&self, zeta: Complex64) -> Result<Mat2> {
        let i = Complex64::new(0.0, 1.0);
        let half = if zeta.im >= 0.0 { HalfPlane::Upper } else { HalfPlane::Lower };
        let m = mul(&self.m0(zeta, half)?, &self.sector_factor(zeta));
        let d = cexp(-i * self.nu * zeta.ln() + i * zeta * zeta / 4.0);
        Ok([[m[0][0] * d, m[0][1] / d], [m[1][0] * d, m[1][1] / d]])
    }

    /// m1 = lim zeta (m_pc - I): the average over zeta = +-iR cancels the odd
    /// terms of the expansion, the remainder is extrapolated in 1/R^2.
    fn first_moment(&self) -> Result<Mat2> {
        let i = Complex64::new(0.0, 1.0);
        let n = EXPANSION_RADII.len();
        let mut hs = Vec::with_capacity(n);
        let mut vals: Vec<Mat2> = Vec::with_capacity(n);
        for &r in &EXPANSION_RADII {
            let mut v = [[Complex64::new(0.0, 0.0); 2]; 2];
            for z in [i * r, -i * r] {
                let m = self.m_pc(z)?;
                for a in 0..2 {
                    for b in 0..2 {
                        let id = if a == b { 1.0 } else { 0.0 };
                        v[a][b] += z * (m[a][b] - id) / 2.0;
                    }
                }
            }
            hs.push(1.0 / (r * r));
            vals.push(v);
        }
        // Neville extrapolation to h = 0 entrywise
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let mut p: Vec<Complex64> = vals.iter().map(|v| v[a][b]).collect();
                for lvl in 1..n {
                    for j in 0..n - lvl {
                        p[j] = (p[j + 1] * hs[j] - p[j] * hs[j + lvl]) / (hs[j] - hs[j + lvl]);
                    }
                }
                out[a][b] = p[0];
            }
        }
        Ok(out)
    }

    pub fn diagnostics(&self, zetas: &[f64]) -> Result<ParametrixDiagnostics> {
        let i = Complex64::new(0.0, 1.0);
        let j0 = self.jump();
        let mut jump_residuals = Vec::with_capacity(zetas.len());
        let mut q1_rec: f64 = 0.0;
        for &z in zetas {
            let j = self.jump_from_boundary_values(z)?;
            let mut diff = j;
            for a in 0..2 {
                for b in 0..2 {
                    diff[a][b] -= j0[a][b];
                }
            }
            jump_residuals.push((z, norm_max(&diff)));
            q1_rec = q1_rec.max((j[1][0] - self.q1).norm());
        }
        let m1 = self.first_moment()?;
        let zero = Complex64::new(0.0, 0.0);
        let want = [[zero, -i * self.beta], [i * self.gamma, zero]];
        let res = |m: &Mat2| {
            let mut d = *m;
            for a in 0..2 {
                for b in 0..2 {
                    d[a][b] -= want[a][b];
                }
            }
            norm_max(&d)
        };
        Ok(ParametrixDiagnostics { jump_residuals, q1_reconstruction: q1_rec, expansion_residual: res(&m1), beta_gamma_recovered: m1[0][1] * m1[1][0], m1 })
    }
}

/// Wr_zeta(D_{i nu}(e^{i pi/4} zeta), D_{i nu}(e^{-3i pi/4} zeta)) and the
/// closed form sqrt(2 pi) e^{i pi/4} / Gamma(-i nu).
pub fn weber_wronskian(nu: Complex64, zeta: Complex64) -> Result<(Complex64, Complex64)> {
    let i = Complex64::new(0.0, 1.0);
    let a = i * nu;
    let (ra, rb) = (rot(FRAC_PI_4), rot(-3.0 * FRAC_PI_4));
    let (f, fp) = weber_d_pair(a, ra * zeta)?;
    let (g, gp) = weber_d_pair(a, rb * zeta)?;
    let wr = f * rb * gp - ra * fp * g;
    Ok((wr, SQRT_2PI * ra * recip_gamma(-a)))
}
