//! Parabolic cylinder (Weber) functions D_a(z) for complex order and argument.
//!
//! |z| <= 4: Maclaurin series in the even/odd basis.
//! |z| >= 14: large-|z| expansion, continued into the left half-plane by
//! the connection formulas.
//! In between: Taylor continuation of Weber's equation along the ray
//! through z, started from whichever end is stable for that direction.

use super::gamma::recip_gamma;
use super::is_finite;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

const R_SERIES: f64 = 4.0;
const R_ASYMP: f64 = 14.0;
pub const Z_MAX: f64 = 50.0;

const SQRT_PI: f64 = 1.772_453_850_905_516;
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// D_a(z).
pub fn weber_d(a: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(weber_d_pair(a, z)?.0)
}

/// (D_a(z), D_a'(z)).
pub fn weber_d_pair(a: Complex64, z: Complex64) -> Result<(Complex64, Complex64)> {
    if !is_finite(a) || !is_finite(z) {
        return Err(Error::NonFinite("weber_d"));
    }
    if z.norm() > Z_MAX {
        return Err(Error::OutOfValidatedRange(z.norm()));
    }
    let v = pair(a, z);
    if is_finite(v.0) && is_finite(v.1) {
        Ok(v)
    } else {
        Err(Error::NonFinite("weber_d"))
    }
}

fn pair(a: Complex64, z: Complex64) -> (Complex64, Complex64) {
    let r = z.norm();
    if r <= R_SERIES {
        return series_pair(a, z);
    }
    let th = z.arg();
    if th.abs() > FRAC_PI_2 {
        return connection_pair(a, z);
    }
    if r >= R_ASYMP {
        asymptotic_pair(a, z)
    } else if th.abs() < FRAC_PI_4 {
        let z0 = z * (R_ASYMP / r);
        let (d, dp) = asymptotic_pair(a, z0);
        continue_taylor(a, z0, d, dp, z)
    } else {
        let z0 = z * (R_SERIES / r);
        let (d, dp) = series_pair(a, z0);
        continue_taylor(a, z0, d, dp, z)
    }
}

/// Left half-plane via D_a(-z) and D_{-a-1}(-+iz).
fn connection_pair(a: Complex64, z: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    let s = if z.im >= 0.0 { 1.0 } else { -1.0 };
    // s = +1: D_a(z) = e^{i pi a} D_a(-z) + sqrt(2pi)/Gamma(-a) e^{i pi (a+1)/2} D_{-a-1}(-iz)
    // s = -1: the same with i -> -i
    let si = i * s;
    let (d1, d1p) = pair(a, -z);
    let (d2, d2p) = pair(-a - 1.0, -si * z);
    let c1 = (si * PI * a).exp();
    let c2 = SQRT_2PI * recip_gamma(-a) * (si * PI * (a + 1.0) / 2.0).exp();
    let d = c1 * d1 + c2 * d2;
    let dp = -c1 * d1p - si * c2 * d2p;
    (d, dp)
}

/// Kummer M(alpha, beta, x) by its power series.
fn kummer_m(alpha: Complex64, beta: f64, x: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let xn = x.norm();
    for n in 0..2000 {
        let nf = n as f64;
        term *= (alpha + nf) / (beta + nf) * x / (nf + 1.0);
        sum += term;
        if nf > xn && term.norm() <= 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum
}

fn series_value(a: Complex64, z: Complex64) -> Complex64 {
    let x = z * z / 2.0;
    let even = SQRT_PI * recip_gamma((1.0 - a) / 2.0) * kummer_m(-a / 2.0, 0.5, x);
    let odd = SQRT_2PI * z * recip_gamma(-a / 2.0) * kummer_m((1.0 - a) / 2.0, 1.5, x);
    (a * std::f64::consts::LN_2 / 2.0 - z * z / 4.0).exp() * (even - odd)
}

fn series_pair(a: Complex64, z: Complex64) -> (Complex64, Complex64) {
    let d = series_value(a, z);
    let d_up = series_value(a + 1.0, z);
    (d, z / 2.0 * d - d_up)
}

fn asymptotic_pair(a: Complex64, z: Complex64) -> (Complex64, Complex64) {
    let z2 = z * z;
    let mut t = Complex64::new(1.0, 0.0);
    let mut s = t;
    let mut ds = Complex64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    for n in 0..200 {
        let nf = n as f64;
        let next = -t * (a - 2.0 * nf) * (a - 2.0 * nf - 1.0) / (2.0 * (nf + 1.0) * z2);
        let m = next.norm();
        if m > prev {
            break;
        }
        t = next;
        prev = m;
        s += t;
        ds += t * (-2.0 * (nf + 1.0)) / z;
        if m <= 1e-18 * s.norm() {
            break;
        }
    }
    let pre = (a * z.ln() - z2 / 4.0).exp();
    let d = pre * s;
    let dp = d * (a / z - z / 2.0) + pre * ds;
    (d, dp)
}

/// Steps Weber's equation y'' = (z^2/4 - a - 1/2) y from z0 to z1 on a straight line.
fn continue_taylor(a: Complex64, z0: Complex64, mut y: Complex64, mut yp: Complex64, z1: Complex64) -> (Complex64, Complex64) {
    let span = z1 - z0;
    let zmax = z0.norm().max(z1.norm());
    let nsteps = ((span.norm() * (zmax / 2.0 + 1.0)) / 1.2).ceil().max(1.0) as usize;
    let h = span / nsteps as f64;
    let mut zc = z0;
    let mut c = vec![Complex64::new(0.0, 0.0); 128];
    for _ in 0..nsteps {
        let p0 = zc * zc / 4.0 - a - 0.5;
        let p1 = zc / 2.0;
        let p2 = 0.25;
        c[0] = y;
        c[1] = yp;
        let mut val = c[0] + c[1] * h;
        let mut der = c[1];
        let mut hp = h; // h^(n+1) for n+2 term uses h^(n+2)
        let mut small = 0;
        let mut n = 0usize;
        while n + 2 < c.len() {
            let mut rhs = p0 * c[n];
            if n >= 1 {
                rhs += p1 * c[n - 1];
            }
            if n >= 2 {
                rhs += p2 * c[n - 2];
            }
            let m = n + 2;
            c[m] = rhs / ((m * (m - 1)) as f64);
            // der gets m c_m h^{m-1}; val gets c_m h^m
            let dterm = c[m] * hp * (m as f64);
            hp *= h;
            let vterm = c[m] * hp;
            val += vterm;
            der += dterm;
            if vterm.norm() <= 1e-18 * val.norm() && dterm.norm() <= 1e-18 * der.norm() {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            n += 1;
        }
        y = val;
        yp = der;
        zc += h;
    }
    (y, yp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma::complex_gamma;
    use std::f64::consts::SQRT_2;

    const fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // mpmath.pcfd at 30 digits
    const REFERENCE: [(Complex64, Complex64, Complex64); 15] = [
        (c(0.0, 0.2), c(1.0, 1.0), c(0.8117317201870967, -0.36288899188140533)),
        (c(0.0, 0.11), c(SQRT_2, SQRT_2), c(0.5614138778667805, -0.7396577970006871)),
        (c(0.0, 0.3), c(-1.0606601717798212, -1.0606601717798212), c(1.4663429945430808, -1.3379523407515554)),
        (c(-1.0, -0.05), c(-0.49497474683058323, 0.49497474683058323), c(1.7513631813576707, -0.6584447675605352)),
        (c(-1.0, 0.45), c(4.242640687119285, -4.242640687119285), c(-0.09636613499818829, -0.21172948720278348)),
        (c(0.0, 0.2), c(-9.0, 0.0), c(-18906453.16712248, -30983881.555511955)),
        (c(0.0, 0.2), c(0.0, 9.0), c(411921122.6407598, 193012962.45331785)),
        (c(-1.3, 0.4), c(-8.81257977101627, 6.583193585143522), c(9344.313939229618, 24041.693245280945)),
        (c(0.0, 0.11), c(21.213203435596427, 21.213203435596427), c(0.001834739606521375, 0.9172871923334681)),
        (c(0.0, 0.11), c(-25.0, 0.0), c(-3.2606834606669845e+65, -7.365287403142094e+65)),
        (c(0.5, 0.0), c(-3.5, -12.0), c(-710987033649776.0, -45150312841605.33)),
        (c(2.0, 0.0), c(5.0, 0.0), c(0.04633089926946502, 0.0)),
        (c(0.0, 0.3), c(-14.142135623730951, -14.142135623730951), c(0.2501834045588298, 2.045243053928418)),
        (c(0.0, 0.3), c(13.9, 0.1), c(1.0489794263195124e-21, 1.0031574087296732e-22)),
        (c(-1.0, -0.3), c(0.0, 45.0), c(-2.354902267566439e+218, -1.077216149331838e+218)),
    ];

    #[test]
    fn matches_reference_values() {
        for (a, z, want) in REFERENCE {
            let got = weber_d(a, z).unwrap();
            let rel = (got - want).norm() / want.norm();
            assert!(rel < 1e-10, "a={a} z={z} got={got} want={want} rel={rel:e}");
        }
    }

    #[test]
    fn elementary_orders() {
        let z = c(2.0, 0.0);
        assert!((weber_d(c(0.0, 0.0), z).unwrap() - (-1.0f64).exp()).norm() < 1e-14);
        assert!((weber_d(c(1.0, 0.0), z).unwrap() - 2.0 * (-1.0f64).exp()).norm() < 1e-14);
        // D_2(z) = (z^2 - 1) e^{-z^2/4}, far out on the real axis
        let z = c(9.0, 0.0);
        let want = 80.0 * (-81.0f64 / 4.0).exp();
        assert!(((weber_d(c(2.0, 0.0), z).unwrap() - want) / want).norm() < 1e-11);
    }

    #[test]
    fn recurrence_holds() {
        let a = c(0.0, 0.2);
        for z in [c(1.0, 1.0), c(5.0, -2.0), c(-7.0, 7.5), c(16.0, 3.0), c(0.3, -11.0)] {
            let up = weber_d(a + 1.0, z).unwrap();
            let mid = weber_d(a, z).unwrap();
            let dn = weber_d(a - 1.0, z).unwrap();
            let res = (up - z * mid + a * dn).norm() / (up.norm() + (z * mid).norm());
            assert!(res < 1e-10, "z={z} res={res:e}");
        }
    }

    #[test]
    fn switchover_overlap() {
        let a = c(0.0, 0.3);
        for k in 0..16 {
            let th = -PI + (k as f64 + 0.5) * PI / 8.0;
            let u = Complex64::from_polar(1.0, th);
            // series against continuation from the far end at |z| = R_SERIES
            let zs = u * R_SERIES;
            let s = series_pair(a, zs).0;
            let far = u * R_ASYMP;
            if th.abs() < FRAC_PI_4 {
                let (d, dp) = asymptotic_pair(a, far);
                let cont = continue_taylor(a, far, d, dp, zs).0;
                assert!((s - cont).norm() / s.norm() < 1e-7, "theta={th} {s} {cont}");
            }
            // asymptotic against continuation from the series end at |z| = R_ASYMP
            if th.abs() < FRAC_PI_2 && th.abs() > FRAC_PI_4 {
                let (d, dp) = series_pair(a, zs);
                let stepped = continue_taylor(a, zs, d, dp, far).0;
                let asy = asymptotic_pair(a, far).0;
                assert!((stepped - asy).norm() / asy.norm() < 1e-7, "theta={th}");
            }
        }
    }

    #[test]
    fn derivative_consistent() {
        let a = c(-1.0, 0.11);
        for z in [c(0.5, 0.5), c(3.0, -5.0), c(-10.0, 2.0), c(20.0, 20.0)] {
            let h = 1e-6;
            let num = (weber_d(a, z + h).unwrap() - weber_d(a, z - h).unwrap()) / (2.0 * h);
            let dp = weber_d_pair(a, z).unwrap().1;
            assert!((num - dp).norm() / dp.norm() < 1e-7, "z={z}");
        }
    }

    #[test]
    fn wronskian_identity() {
        let e1 = Complex64::from_polar(1.0, FRAC_PI_4);
        let e2 = Complex64::from_polar(1.0, -3.0 * FRAC_PI_4);
        for &nu in &[0.05, 0.11, 0.3, 0.45] {
            let a = c(0.0, nu);
            let want = SQRT_2PI * e1 / complex_gamma(-a).unwrap();
            for &zeta in &[0.5, 1.0, 2.0, 7.0, 20.0] {
                let (f, fp) = weber_d_pair(a, e1 * zeta).unwrap();
                let (g, gp) = weber_d_pair(a, e2 * zeta).unwrap();
                let w = f * gp * e2 - fp * e1 * g;
                assert!((w - want).norm() / want.norm() < 1e-9, "nu={nu} zeta={zeta}");
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(weber_d(c(0.0, 0.1), c(51.0, 0.0)), Err(Error::OutOfValidatedRange(_))));
    }
}
