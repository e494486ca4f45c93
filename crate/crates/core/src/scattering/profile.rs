use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Compactly supported deviation from the pure step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Perturbation {
    None,
    /// `A (1 + tanh(x/w)) / 2 - u0A(x)` on |x| <= N, zero outside.
    SmoothStep {
        width: f64,
    },
    /// `amp * exp(-(x - center)^2 / width^2)` on |x - center| <= 4 width, zero outside.
    Gaussian {
        amp: f64,
        center: f64,
        width: f64,
    },
    /// Linear interpolation of samples `values[j]` at `x0 + j * step`, zero outside.
    Sampled {
        x0: f64,
        step: f64,
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepProfile {
    pub a: f64,
    pub sigma: f64,
    pub support_n: f64,
    pub perturbation: Perturbation,
}

impl StepProfile {
    pub fn pure_step(a: f64) -> Self {
        StepProfile { a, sigma: 1.0, support_n: 1.0, perturbation: Perturbation::None }
    }

    pub fn smooth_step(a: f64, width: f64, support_n: f64) -> Self {
        StepProfile { a, sigma: 1.0, support_n, perturbation: Perturbation::SmoothStep { width } }
    }

    pub fn bump_step(a: f64, amp: f64, center: f64, width: f64) -> Self {
        let support_n = (center.abs() + 4.0 * width).max(1.0);
        StepProfile { a, sigma: 1.0, support_n, perturbation: Perturbation::Gaussian { amp, center, width } }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidProfile(m.to_string()));
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return bad("A must be finite and non-negative");
        }
        if self.sigma != 1.0 && self.sigma != -1.0 {
            return bad("sigma must be +1 or -1");
        }
        if !(self.support_n > 0.0 && self.support_n.is_finite()) {
            return bad("support N must be positive");
        }
        match &self.perturbation {
            Perturbation::None => {}
            Perturbation::SmoothStep { width } => {
                if !(*width > 0.0) {
                    return bad("smooth-step width must be positive");
                }
            }
            Perturbation::Gaussian { center, width, .. } => {
                if !(*width > 0.0) {
                    return bad("bump width must be positive");
                }
                if center.abs() + 4.0 * width > self.support_n + 1e-12 {
                    return bad("bump support exceeds N");
                }
            }
            Perturbation::Sampled { x0, step, values } => {
                if !(*step > 0.0) || values.is_empty() {
                    return bad("sampled perturbation needs a positive step and samples");
                }
                let x1 = x0 + step * (values.len() - 1) as f64;
                if x0.abs() > self.support_n + 1e-12 || x1.abs() > self.support_n + 1e-12 {
                    return bad("sampled perturbation exceeds N");
                }
            }
        }
        Ok(())
    }

    /// The pure step u0A(x).
    pub fn step(&self, x: f64) -> f64 {
        if x > 0.0 {
            self.a
        } else if x < 0.0 {
            0.0
        } else {
            0.5 * self.a
        }
    }

    pub fn perturbation_at(&self, x: f64) -> f64 {
        match &self.perturbation {
            Perturbation::None => 0.0,
            Perturbation::SmoothStep { width } => {
                if x.abs() > self.support_n {
                    0.0
                } else {
                    0.5 * self.a * (1.0 + (x / width).tanh()) - self.step(x)
                }
            }
            Perturbation::Gaussian { amp, center, width } => {
                let d = x - center;
                if d.abs() > 4.0 * width {
                    0.0
                } else {
                    amp * (-(d * d) / (width * width)).exp()
                }
            }
            Perturbation::Sampled { x0, step, values } => {
                let s = (x - x0) / step;
                let n = values.len();
                if s < 0.0 || s > (n - 1) as f64 {
                    return 0.0;
                }
                let j = (s.floor() as usize).min(n.saturating_sub(2));
                if n == 1 {
                    return values[0];
                }
                let f = s - j as f64;
                values[j] * (1.0 - f) + values[j + 1] * f
            }
        }
    }

    /// u0(x) = u0A(x) + p(x).
    pub fn u0(&self, x: f64) -> f64 {
        self.step(x) + self.perturbation_at(x)
    }

    /// Points where u0 may be non-smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        let n = self.support_n;
        let mut b = vec![0.0, -n, n];
        match &self.perturbation {
            Perturbation::Gaussian { center, width, .. } => {
                b.push(center - 4.0 * width);
                b.push(center + 4.0 * width);
            }
            Perturbation::Sampled { x0, step, values } => {
                for j in 0..values.len() {
                    b.push(x0 + step * j as f64);
                }
            }
            _ => {}
        }
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// Breakpoints of the potential matrix U(x), which involves u0(x) and u0(-x).
    pub fn potential_breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.breakpoints().into_iter().flat_map(|p| [p, -p]).collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }
}
