//! Discrete spectrum, Case I/II classification and the delta function.

pub mod branch;
pub mod delta;
pub mod kappa;
pub mod source;

pub use branch::{Anchor, BranchMap};
pub use delta::{nu_at, DeltaCache, DeltaFunction, DeltaOptions};
pub use kappa::{
    classify_case, count_zeros_in_rectangle, extrapolate_to_zero, find_kappa_root, find_kappa_root_with, gamma0_factor, kappa_by_formula, Case, FormulaOptions,
    Gamma0, KappaFormula, KappaOptions, KappaRoot,
};
pub use source::{AnalyticA1, ProfileSpectrum, PureStepSpectrum, ReflectionlessSpectrum, SpectralPoint, SpectralSource, TabulatedSpectrum, TabulationOptions};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::scattering::{reflection_coefficients, KGrid, ReflectionSample, ScatterOptions, ScatteringSample, StepProfile};
use num_complex::Complex64;

/// The real-line data behind a SpectralData value.
#[derive(Debug, Clone)]
pub enum Spectrum {
    PureStep(PureStepSpectrum),
    Reflectionless(ReflectionlessSpectrum),
    Tabulated(Box<TabulatedSpectrum>),
}

impl SpectralSource for Spectrum {
    fn amplitude(&self) -> f64 {
        match self {
            Spectrum::PureStep(s) => s.amplitude(),
            Spectrum::Reflectionless(s) => s.amplitude(),
            Spectrum::Tabulated(s) => s.amplitude(),
        }
    }
    fn point(&self, k: f64) -> Result<SpectralPoint> {
        match self {
            Spectrum::PureStep(s) => s.point(k),
            Spectrum::Reflectionless(s) => s.point(k),
            Spectrum::Tabulated(s) => s.point(k),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralData {
    pub amplitude: f64,
    pub samples: Vec<ScatteringSample>,
    pub reflection: Vec<ReflectionSample>,
    pub kappa: f64,
    pub gamma0: f64,
    pub a1_prime_at_pole: Complex64,
    pub case: Case,
    /// Case II: lim k a1(k) at 0
    pub a11: Option<Complex64>,
    /// Case II
    pub a2_prime_0: Option<Complex64>,
    /// Case I
    pub a2_at_0: Option<Complex64>,
    pub b_at_0: Option<Complex64>,
    pub spectrum: Spectrum,
}

#[derive(Debug, Clone, Copy)]
pub struct SpectralBuildOptions {
    pub grid: KGrid,
    pub tabulation: TabulationOptions,
    pub scatter: ScatterOptions,
    pub kappa: KappaOptions,
    pub eps_case: f64,
    pub exec: Execution,
}

impl Default for SpectralBuildOptions {
    fn default() -> Self {
        SpectralBuildOptions {
            grid: KGrid::default(),
            tabulation: TabulationOptions::default(),
            scatter: ScatterOptions::default(),
            kappa: KappaOptions::default(),
            eps_case: 1e-3,
            exec: Execution::default(),
        }
    }
}

fn sample_from_point(p: &SpectralPoint, sigma: f64) -> ScatteringSample {
    ScatteringSample { k: p.k, s: [[p.a1, -sigma * p.b], [p.b, p.a2]], a1: p.a1, a2: p.a2, b: p.b }
}

fn sample_grid<S: SpectralSource + ?Sized>(src: &S, ks: &[f64]) -> Result<(Vec<ScatteringSample>, Vec<ReflectionSample>)> {
    let samples = ks.iter().map(|&k| src.point(k).map(|p| sample_from_point(&p, 1.0))).collect::<Result<Vec<_>>>()?;
    let refl = samples.iter().map(reflection_coefficients).collect::<Result<Vec<_>>>()?;
    Ok((samples, refl))
}

/// Extrapolated values at k = 0 from the three smallest positive grid points.
fn limits_at_zero(samples: &[ScatteringSample]) -> Result<(Complex64, Complex64, Complex64, Complex64)> {
    let mut pos: Vec<&ScatteringSample> = samples.iter().filter(|s| s.k > 0.0).collect();
    pos.sort_by(|a, b| a.k.partial_cmp(&b.k).unwrap());
    if pos.len() < 3 {
        return Err(Error::GridTooSmall(pos.len()));
    }
    let ex = |f: &dyn Fn(&ScatteringSample) -> Complex64| extrapolate_to_zero(&[(pos[0].k, f(pos[0])), (pos[1].k, f(pos[1])), (pos[2].k, f(pos[2]))]);
    Ok((ex(&|s| s.a2), ex(&|s| s.b), ex(&|s| s.k * s.a1), ex(&|s| s.a2 / s.k)))
}

impl SpectralData {
    /// Assemble from a real-line source plus the discrete data.
    pub fn assemble(spectrum: Spectrum, kappa: f64, gamma0: f64, a1_prime_at_pole: Complex64, opts: &SpectralBuildOptions) -> Result<Self> {
        let ks = opts.grid.points();
        let (samples, reflection) = sample_grid(&spectrum, &ks)?;
        let points: Vec<SpectralPoint> = samples.iter().map(SpectralPoint::from).collect();
        let case = classify_case(&points, opts.eps_case)?;
        let (a20, b0, a11, a2p) = limits_at_zero(&samples)?;
        let (a11, a2_prime_0, a2_at_0) = match case {
            Case::I => (None, None, Some(a20)),
            Case::II => (Some(a11), Some(a2p), None),
        };
        Ok(SpectralData {
            amplitude: spectrum.amplitude(),
            samples,
            reflection,
            kappa,
            gamma0,
            a1_prime_at_pole,
            case,
            a11,
            a2_prime_0,
            a2_at_0,
            b_at_0: Some(b0),
            spectrum,
        })
    }

    /// Closed-form pure-step data.
    pub fn pure_step(a: f64, opts: &SpectralBuildOptions) -> Result<Self> {
        let src = PureStepSpectrum::new(a);
        let kappa = a / 2.0;
        let k = Complex64::new(0.0, kappa);
        let a1_prime = -(a * a) / (2.0 * k * k * k);
        let g = gamma0_factor(&src, kappa)?;
        Self::assemble(Spectrum::PureStep(src), kappa, g.gamma0, a1_prime, opts)
    }

    /// Numerical data for a general profile: tabulated real-line data,
    /// kappa by root finding, gamma0 from the Jost columns.
    pub fn from_profile(profile: &StepProfile, opts: &SpectralBuildOptions) -> Result<Self> {
        profile.validate()?;
        let root = find_kappa_root(profile, &opts.kappa)?;
        let src = ProfileSpectrum { profile: profile.clone(), opts: kappa::tight_scatter_options() };
        let g = gamma0_factor(&src, root.kappa)?;
        let tab = TabulatedSpectrum::from_profile(profile, opts.scatter, opts.tabulation, opts.exec)?;
        Self::assemble(Spectrum::Tabulated(Box::new(tab)), root.kappa, g.gamma0, root.a1_prime, opts)
    }

    pub fn points(&self) -> Vec<SpectralPoint> {
        self.samples.iter().map(SpectralPoint::from).collect()
    }

    /// Violations of the stored invariants: |a1(i kappa)| is checked by the caller
    /// that owns an analytic a1; here gamma0^2 and the Case II product.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.gamma0 * self.gamma0 != 1.0 {
            v.push(format!("gamma0 = {} is not +-1", self.gamma0));
        }
        if let (Case::II, Some(a11), Some(a2p), Some(b0)) = (self.case, self.a11, self.a2_prime_0, self.b_at_0) {
            let r = (a11 * a2p - (1.0 - b0 * b0)).norm();
            if r > 1e-6 {
                v.push(format!("a11 a2'(0) - (1 - b(0)^2) = {r:.3e}"));
            }
        }
        v
    }
}
