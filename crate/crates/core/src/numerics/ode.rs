//! Dormand-Prince 5(4) for complex linear systems of fixed size.

use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-10, atol: 1e-13, max_steps: 2_000_000 }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type State<const N: usize> = [Complex64; N];

fn axpy<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, k) in terms {
            acc += *c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Integrates y' = f(x, y) from x0 to x1 (either direction).
pub fn integrate<const N: usize, F>(f: F, x0: f64, y0: State<N>, x1: f64, opts: &OdeOptions) -> Result<State<N>>
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    let mut h = dir * (span.abs() / 16.0).min(0.05);
    let mut k1 = f(x, &y);
    let mut steps = 0usize;
    while (x1 - x) * dir > 0.0 {
        if steps >= opts.max_steps {
            return Err(Error::OdeFailure(format!("step limit reached at x = {x}")));
        }
        steps += 1;
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let k2 = f(x + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(x + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(x + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(x + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(x + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y5 = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(x + h, &y5);
        let mut err = 0.0f64;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].norm().max(y5[i].norm());
            err = err.max(e.norm() / sc);
        }
        if !err.is_finite() {
            return Err(Error::NonFinite("ode step"));
        }
        if err <= 1.0 {
            x += h;
            y = y5;
            k1 = k7;
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h.abs() < 1e-14 * (1.0 + x.abs()) {
                return Err(Error::OdeFailure(format!("step size underflow at x = {x}")));
            }
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_and_rotation() {
        let lam = Complex64::new(-0.3, 2.0);
        let y = integrate(|_, y: &[Complex64; 1]| [lam * y[0]], 0.0, [Complex64::new(1.0, 0.0)], 3.0, &OdeOptions::default()).unwrap();
        let want = (lam * 3.0).exp();
        assert!((y[0] - want).norm() < 1e-9);
        // backwards
        let y = integrate(|_, y: &[Complex64; 1]| [lam * y[0]], 3.0, [want], 0.0, &OdeOptions::default()).unwrap();
        assert!((y[0] - 1.0).norm() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator() {
        let f = |_: f64, y: &[Complex64; 2]| [y[1], -y[0]];
        let y = integrate(f, 0.0, [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], 10.0, &OdeOptions::default()).unwrap();
        assert!((y[0].re - 10f64.sin()).abs() < 1e-9);
    }
}
