//! Contour-continuous logarithm of a function sampled along one half-line.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest principal-arg increment accepted between adjacent samples.
pub const MAX_ARG_STEP: f64 = 0.9 * PI;

/// Unwrapped arg of f on an ascending sample grid, anchored so that the
/// arg is the principal one at the far (infinite) end of the ray.
#[derive(Debug, Clone)]
pub struct BranchMap {
    s: Vec<f64>,
    arg: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    /// ray extends to -infinity; first sample is the anchor
    Left,
    /// ray extends to +infinity; last sample is the anchor
    Right,
}

impl BranchMap {
    pub fn from_values(s: &[f64], vals: &[Complex64], anchor: Anchor) -> Result<Self> {
        let n = s.len();
        let mut arg = vec![0.0; n];
        let order: Vec<usize> = match anchor {
            Anchor::Left => (0..n).collect(),
            Anchor::Right => (0..n).rev().collect(),
        };
        let mut prev = vals[order[0]].arg();
        arg[order[0]] = prev;
        for w in order.windows(2) {
            let p = vals[w[1]].arg();
            let mut d = p - prev.rem_euclid(2.0 * PI);
            d = (d + PI).rem_euclid(2.0 * PI) - PI;
            if d.abs() > MAX_ARG_STEP {
                return Err(Error::LogBranchJump(s[w[1]]));
            }
            prev += d;
            arg[w[1]] = prev;
        }
        Ok(BranchMap { s: s.to_vec(), arg })
    }

    pub fn build<F: Fn(f64) -> Result<Complex64>>(f: F, s: &[f64], anchor: Anchor) -> Result<Self> {
        let vals = s.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        Self::from_values(s, &vals, anchor)
    }

    fn reference_arg(&self, x: f64) -> f64 {
        let i = self.s.partition_point(|&p| p < x);
        if i == 0 {
            return self.arg[0];
        }
        if i >= self.s.len() {
            return *self.arg.last().unwrap();
        }
        let (s0, s1) = (self.s[i - 1], self.s[i]);
        let t = (x - s0) / (s1 - s0);
        self.arg[i - 1] * (1.0 - t) + self.arg[i] * t
    }

    /// log v on the continuous branch, v being the function value at x.
    pub fn log(&self, x: f64, v: Complex64) -> Complex64 {
        let r = self.reference_arg(x);
        let p = v.arg();
        let n = ((r - p) / (2.0 * PI)).round();
        Complex64::new(v.norm().ln(), p + 2.0 * PI * n)
    }

    pub fn arg_at_sample(&self, i: usize) -> f64 {
        self.arg[i]
    }

    pub fn samples(&self) -> &[f64] {
        &self.s
    }
}

/// Ascending sample grid on [lo, hi]: geometric up to 1, then uniform with step h, then geometric.
pub fn ray_grid(lo: f64, hi: f64, h: f64) -> Vec<f64> {
    let mut g = Vec::new();
    let mut x = lo;
    while x < 1.0f64.min(hi) {
        g.push(x);
        x *= 1.02;
    }
    let mid_end = hi.min(50.0);
    x = x.max(1.0f64.min(hi)).max(lo);
    while x < mid_end {
        g.push(x);
        x += h;
    }
    while x < hi {
        g.push(x);
        x *= 1.05;
    }
    g.push(hi);
    g
}
