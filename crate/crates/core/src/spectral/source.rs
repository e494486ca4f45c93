//! Providers of a1, a2, b on the real line (and a1 in the upper half-plane).

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::scattering::{continue_a1, scattering_matrix, ScatterOptions, ScatteringSample, StepProfile};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub k: f64,
    pub a1: Complex64,
    pub a2: Complex64,
    pub b: Complex64,
}

impl SpectralPoint {
    pub fn r1(&self) -> Complex64 {
        self.b / self.a1
    }
    pub fn r2(&self) -> Complex64 {
        self.b / self.a2
    }
    pub fn one_plus_r1r2(&self) -> Complex64 {
        1.0 + self.r1() * self.r2()
    }
}

impl From<&ScatteringSample> for SpectralPoint {
    fn from(s: &ScatteringSample) -> Self {
        SpectralPoint { k: s.k, a1: s.a1, a2: s.a2, b: s.b }
    }
}

pub trait SpectralSource: Sync {
    fn amplitude(&self) -> f64;
    /// a1, a2, b at real k != 0.
    fn point(&self, k: f64) -> Result<SpectralPoint>;
}

/// a1 continued into the closed upper half-plane.
pub trait AnalyticA1: Sync {
    fn a1_upper(&self, k: Complex64) -> Result<Complex64>;
    /// First components of psi1^(1) and psi2^(2) at x = 0, when available.
    fn jost_pair_upper(&self, _k: Complex64) -> Result<Option<([Complex64; 2], [Complex64; 2])>> {
        Ok(None)
    }
}

/// Pure step: a1 = 1 + sigma A^2/(4k^2), a2 = 1, b = sigma A/(2ik).
#[derive(Debug, Clone, Copy)]
pub struct PureStepSpectrum {
    pub a: f64,
    pub sigma: f64,
}

impl PureStepSpectrum {
    pub fn new(a: f64) -> Self {
        PureStepSpectrum { a, sigma: 1.0 }
    }
}

impl SpectralSource for PureStepSpectrum {
    fn amplitude(&self) -> f64 {
        self.a
    }
    fn point(&self, k: f64) -> Result<SpectralPoint> {
        if k == 0.0 {
            return Err(Error::SingularAtOrigin);
        }
        let kc = Complex64::new(k, 0.0);
        Ok(SpectralPoint {
            k,
            a1: 1.0 + self.sigma * self.a * self.a / (4.0 * kc * kc),
            a2: Complex64::new(1.0, 0.0),
            b: self.sigma * self.a / (2.0 * Complex64::new(0.0, 1.0) * kc),
        })
    }
}

impl AnalyticA1 for PureStepSpectrum {
    fn a1_upper(&self, k: Complex64) -> Result<Complex64> {
        if k.norm() < 1e-12 {
            return Err(Error::SingularAtOrigin);
        }
        Ok(1.0 + self.sigma * self.a * self.a / (4.0 * k * k))
    }
    fn jost_pair_upper(&self, k: Complex64) -> Result<Option<([Complex64; 2], [Complex64; 2])>> {
        let e = self.a / (2.0 * Complex64::new(0.0, 1.0) * k);
        Ok(Some(([Complex64::new(1.0, 0.0), self.sigma * e], [e, Complex64::new(1.0, 0.0)])))
    }
}

/// Reflectionless one-soliton data: a1 = (k - iA/2)/k, a2 = k/(k - iA/2), b = 0.
#[derive(Debug, Clone, Copy)]
pub struct ReflectionlessSpectrum {
    pub a: f64,
}

impl SpectralSource for ReflectionlessSpectrum {
    fn amplitude(&self) -> f64 {
        self.a
    }
    fn point(&self, k: f64) -> Result<SpectralPoint> {
        if k == 0.0 {
            return Err(Error::SingularAtOrigin);
        }
        let kc = Complex64::new(k, 0.0);
        let p = kc - Complex64::new(0.0, self.a / 2.0);
        Ok(SpectralPoint { k, a1: p / kc, a2: kc / p, b: Complex64::new(0.0, 0.0) })
    }
}

impl AnalyticA1 for ReflectionlessSpectrum {
    fn a1_upper(&self, k: Complex64) -> Result<Complex64> {
        if k.norm() < 1e-12 {
            return Err(Error::SingularAtOrigin);
        }
        Ok((k - Complex64::new(0.0, self.a / 2.0)) / k)
    }
}

/// On-demand scattering of a profile (one pair of ODE solves per call).
#[derive(Debug, Clone)]
pub struct ProfileSpectrum {
    pub profile: StepProfile,
    pub opts: ScatterOptions,
}

impl ProfileSpectrum {
    pub fn new(profile: StepProfile) -> Self {
        ProfileSpectrum { profile, opts: ScatterOptions::default() }
    }
}

impl SpectralSource for ProfileSpectrum {
    fn amplitude(&self) -> f64 {
        self.profile.a
    }
    fn point(&self, k: f64) -> Result<SpectralPoint> {
        Ok((&scattering_matrix(&self.profile, k, &self.opts)?).into())
    }
}

impl AnalyticA1 for ProfileSpectrum {
    fn a1_upper(&self, k: Complex64) -> Result<Complex64> {
        continue_a1(&self.profile, k, &self.opts)
    }
    fn jost_pair_upper(&self, k: Complex64) -> Result<Option<([Complex64; 2], [Complex64; 2])>> {
        use crate::scattering::{jost_column_at, Jost};
        let u = jost_column_at(&self.profile, k, Jost::Psi1, 0, self.opts.x_eval, &self.opts.jost)?;
        let v = jost_column_at(&self.profile, k, Jost::Psi2, 1, self.opts.x_eval, &self.opts.jost)?;
        Ok(Some((u, v)))
    }
}

#[derive(Debug, Clone)]
struct Panel {
    hi: f64,
    nodes: Vec<f64>,
    vals: Vec<[Complex64; 3]>,
}

impl Panel {
    fn eval(&self, k: f64) -> [Complex64; 3] {
        // barycentric interpolation on Chebyshev-Lobatto nodes
        let n = self.nodes.len() - 1;
        let mut num = [Complex64::new(0.0, 0.0); 3];
        let mut den = 0.0;
        for (j, (&x, v)) in self.nodes.iter().zip(&self.vals).enumerate() {
            let d = k - x;
            if d == 0.0 {
                return *v;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                w *= 0.5;
            }
            let c = w / d;
            den += c;
            for q in 0..3 {
                num[q] += c * v[q];
            }
        }
        [num[0] / den, num[1] / den, num[2] / den]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TabulationOptions {
    pub k_min: f64,
    pub k_max: f64,
    /// geometric panel ratio on [k_min, 1]
    pub ratio: f64,
    /// uniform panel width on [1, k_max]
    pub width: f64,
    /// Chebyshev-Lobatto order per panel
    pub order: usize,
}

impl Default for TabulationOptions {
    fn default() -> Self {
        TabulationOptions { k_min: 1e-3, k_max: 50.0, ratio: 1.5, width: 1.0, order: 16 }
    }
}

/// Piecewise Chebyshev interpolant of another source on +-[k_min, k_max].
/// Outside: a1 ~ k^-2, a2 ~ const, b ~ k^-1 below k_min; a_j - 1 ~ k^-1, b ~ k^-1 above k_max.
#[derive(Debug, Clone)]
pub struct TabulatedSpectrum {
    a: f64,
    pos: Vec<Panel>,
    neg: Vec<Panel>,
    pub opts: TabulationOptions,
}

fn panel_edges(o: &TabulationOptions) -> Vec<f64> {
    let mut e = vec![o.k_min];
    let kb = 1.0f64.max(o.k_min);
    while *e.last().unwrap() < kb {
        let nx = (e.last().unwrap() * o.ratio).min(kb);
        e.push(nx);
    }
    let n_uni = ((o.k_max - kb) / o.width).ceil().max(0.0) as usize;
    for j in 1..=n_uni {
        e.push(kb + (o.k_max - kb) * j as f64 / n_uni as f64);
    }
    e
}

impl TabulatedSpectrum {
    pub fn build<S: SpectralSource + ?Sized>(src: &S, opts: TabulationOptions, exec: Execution) -> Result<Self> {
        let edges = panel_edges(&opts);
        let n = opts.order;
        let mut ks = Vec::new();
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            for j in 0..=n {
                let x = -(std::f64::consts::PI * j as f64 / n as f64).cos();
                ks.push(0.5 * (lo + hi) + 0.5 * (hi - lo) * x);
            }
        }
        let all: Vec<f64> = ks.iter().copied().chain(ks.iter().map(|k| -k)).collect();
        let pts = exec::try_map(exec, &all, |&k| src.point(k))?;
        let m = ks.len();
        let mk = |sign: f64, offset: usize| -> Vec<Panel> {
            edges
                .windows(2)
                .enumerate()
                .map(|(p, w)| {
                    let idx = offset + p * (n + 1);
                    let mut nodes: Vec<f64> = all[idx..idx + n + 1].to_vec();
                    let mut vals: Vec<[Complex64; 3]> = pts[idx..idx + n + 1].iter().map(|q| [q.a1, q.a2, q.b]).collect();
                    if sign < 0.0 {
                        nodes.reverse();
                        vals.reverse();
                    }
                    let hi = if sign > 0.0 { w[1] } else { -w[0] };
                    Panel { hi, nodes, vals }
                })
                .collect()
        };
        let pos = mk(1.0, 0);
        let mut neg = mk(-1.0, m);
        neg.reverse();
        Ok(TabulatedSpectrum { a: src.amplitude(), pos, neg, opts })
    }

    pub fn from_profile(profile: &StepProfile, scatter: ScatterOptions, opts: TabulationOptions, exec: Execution) -> Result<Self> {
        let src = ProfileSpectrum { profile: profile.clone(), opts: ScatterOptions { k_min: scatter.k_min.min(opts.k_min), ..scatter } };
        Self::build(&src, opts, exec)
    }

    pub fn node_count(&self) -> usize {
        2 * self.pos.len() * (self.opts.order + 1)
    }

    fn raw(&self, k: f64) -> [Complex64; 3] {
        let panels = if k > 0.0 { &self.pos } else { &self.neg };
        let ak = k.abs();
        let (kmin, kmax) = (self.opts.k_min, self.opts.k_max);
        if ak < kmin {
            let edge = self.raw(kmin * k.signum());
            let f = kmin / ak;
            return [edge[0] * f * f, edge[1], edge[2] * f];
        }
        if ak > kmax {
            let edge = self.raw(kmax * k.signum());
            let f = kmax / ak;
            return [1.0 + (edge[0] - 1.0) * f, 1.0 + (edge[1] - 1.0) * f, edge[2] * f];
        }
        // binary search over panels (ordered ascending in k)
        let i = panels.partition_point(|p| p.hi < k).min(panels.len() - 1);
        panels[i].eval(k)
    }
}

impl SpectralSource for TabulatedSpectrum {
    fn amplitude(&self) -> f64 {
        self.a
    }
    fn point(&self, k: f64) -> Result<SpectralPoint> {
        if k == 0.0 {
            return Err(Error::SingularAtOrigin);
        }
        let v = self.raw(k);
        Ok(SpectralPoint { k, a1: v[0], a2: v[1], b: v[2] })
    }
}
