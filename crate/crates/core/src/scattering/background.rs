use super::Mat2;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BgSide {
    /// x -> +inf, u -> A
    Plus,
    /// x -> -inf, u -> 0
    Minus,
}

/// N_+(k) = ((1, A/(2ik)), (0, 1)), N_-(k) = ((1, 0), (sigma A/(2ik), 1)).
pub fn n_matrix(a: f64, sigma: f64, k: Complex64, side: BgSide) -> Mat2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let e = a / (2.0 * Complex64::new(0.0, 1.0) * k);
    match side {
        BgSide::Plus => [[one, e], [zero, one]],
        BgSide::Minus => [[one, zero], [sigma * e, one]],
    }
}

/// N_side(k) exp(-(ikx + 4ik^3 t) sigma_3).
pub fn background_solution(a: f64, sigma: f64, k: Complex64, x: f64, t: f64, side: BgSide) -> Result<Mat2> {
    if k.norm() < 1e-12 {
        return Err(Error::SingularAtOrigin);
    }
    let n = n_matrix(a, sigma, k, side);
    let i = Complex64::new(0.0, 1.0);
    let ph = i * k * x + 4.0 * i * k * k * k * t;
    let em = (-ph).exp();
    let ep = ph.exp();
    Ok([[n[0][0] * em, n[0][1] * ep], [n[1][0] * em, n[1][1] * ep]])
}
