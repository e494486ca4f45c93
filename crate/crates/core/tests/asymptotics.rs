use nmkdv_core::asymptotics::*;
use nmkdv_core::exec::Execution;
use nmkdv_core::numerics::recip_gamma;
use nmkdv_core::soliton::*;
use nmkdv_core::spectral::*;
use nmkdv_core::validation::loglog_slope;
use nmkdv_core::{Complex64, Error};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;
use std::sync::OnceLock;

fn opts() -> AsymOptions {
    AsymOptions::default()
}

fn fixture(gamma0: f64) -> SpectralData {
    soliton_spectral_fixture(2.0, gamma0, &SpectralBuildOptions::default()).unwrap()
}

fn pure_step() -> &'static (SpectralData, DeltaCache) {
    static S: OnceLock<(SpectralData, DeltaCache)> = OnceLock::new();
    S.get_or_init(|| {
        let sd = SpectralData::pure_step(2.0, &SpectralBuildOptions::default()).unwrap();
        let c = DeltaCache::build(&sd.spectrum, -1.0, sd.kappa, DeltaOptions::default()).unwrap();
        (sd, c)
    })
}

fn rng() -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(20261016)
}

#[test]
fn ri_examples() {
    let sd = fixture(-1.0);
    let r = evaluate_ri(2.0, 1.0, &sd, &opts()).unwrap();
    assert_eq!(r.sector, SectorTag::RIL);
    assert!((r.u_total - 2.0 / (1.0 + 4f64.exp())).abs() < 1e-15);
    assert!((r.u_total - 0.035972).abs() < 1e-6);
    let c = r.soliton.unwrap();
    assert!((c.c1 - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    let m = evaluate_ri(6.0, 1.0, &sd, &opts()).unwrap();
    assert_eq!(m.sector, SectorTag::RIM);
    assert_eq!(m.u_total, 2.0);
    let rr = evaluate_ri(24.0, 1.0, &sd, &opts()).unwrap();
    assert_eq!(rr.sector, SectorTag::RIR);
    // exponent -8 t kd (3 xi - kd^2) with kd = 1/2, xi = 2
    assert!(rr.error_order.text.contains(&format!("{:.6e}", -8.0 * 0.5 * (6.0 - 0.25))));
}

#[test]
fn solitonic_exactness() {
    let mut g = rng();
    for &gamma0 in &[-1.0, 1.0] {
        let sd = fixture(gamma0);
        let p = SolitonParams::new(2.0, gamma0).unwrap();
        let mut n = 0;
        while n < 1000 {
            let t = g.gen_range(0.01..3.0);
            let x = 12.0 * t * g.gen_range(0.001..0.33);
            let Ok(want) = one_soliton(&p, x, t) else { continue };
            let r = evaluate_ri(x, t, &sd, &opts()).unwrap();
            assert_eq!(r.sector, SectorTag::RIL);
            assert!((r.u_total - want).abs() <= 1e-12 * want.abs().max(1.0), "x={x} t={t}: {} vs {want}", r.u_total);
            n += 1;
        }
    }
}

#[test]
fn riii_examples_and_mirror() {
    let sd = fixture(-1.0);
    let r = evaluate_riii(-2.0, -1.0, &sd, &opts()).unwrap();
    assert_eq!(r.sector, SectorTag::RIIIR);
    assert!((r.soliton.unwrap().c2 - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
    assert!((r.u_total - 4.0 / (-2.0 * 4f64.exp() - 2.0)).abs() < 1e-15);
    assert!((r.u_total + 0.035972).abs() < 1e-6);
    let m = evaluate_riii(-6.0, -1.0, &sd, &opts()).unwrap();
    assert_eq!(m.sector, SectorTag::RIIIM);
    assert_eq!(m.u_total, 0.0);
    assert_eq!(evaluate_riii(-24.0, -1.0, &sd, &opts()).unwrap().sector, SectorTag::RIIIL);

    let p = SolitonParams::new(2.0, -1.0).unwrap();
    let mut g = rng();
    for _ in 0..1000 {
        let t = -g.gen_range(0.01..3.0);
        let x = 12.0 * t * g.gen_range(0.001..0.33);
        let u = evaluate_riii(x, t, &sd, &opts()).unwrap().u_total;
        let image = -evaluate_ri(-x, -t, &sd, &opts()).unwrap().u_total;
        assert!((u - image).abs() <= 1e-12);
        assert!((u + one_soliton(&p, -x, -t).unwrap()).abs() <= 1e-12);
        let literal = riii_r_literal_exponent(x, t, &sd, &opts()).unwrap();
        assert!((literal + one_soliton(&p, x, t).unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn wrong_sector_and_parameters() {
    let sd = fixture(-1.0);
    assert!(matches!(evaluate_ri(-2.0, 1.0, &sd, &opts()), Err(Error::WrongSector { .. })));
    assert!(matches!(evaluate_riii(2.0, 1.0, &sd, &opts()), Err(Error::WrongSector { .. })));
    let bad = AsymOptions { kappa_delta: Some(1.5), ..opts() };
    assert!(matches!(evaluate_ri(24.0, 1.0, &sd, &bad), Err(Error::InvalidParameter(_))));
    let (ps, c) = pure_step();
    assert!(matches!(evaluate_rii(12.0, -1.0, ps, c, &opts()), Err(Error::WrongSector { .. })));
    assert!(matches!(evaluate_rii(-24.0, 1.0, ps, c, &opts()), Err(Error::CacheMismatch { .. })));
    let bad = AsymOptions { alpha: Some(0.4), ..opts() };
    assert!(matches!(evaluate_rii(-12.0, 1.0, ps, c, &bad), Err(Error::InvalidParameter(_))));
    let mut wild = *c;
    wild.nu.im = 0.6;
    assert!(matches!(asym_params(-1.0, 1.0, ps, &wild, None), Err(Error::NuOutOfRange(_))));
    assert!(matches!(evaluate(4.0, 1.0, &sd, None, &opts()), Err(Error::WrongSector { .. })));
}

#[test]
fn singular_denominator() {
    // gamma0 = +1 and a1'(i) = -i A e / 2 give C1 = 1/e: the denominator vanishes on
    // -2x + 8t = 1, which crosses R_I_L at t = 1, x = 3.5
    let mut sd = fixture(1.0);
    sd.a1_prime_at_pole = Complex64::new(0.0, -2.0 * std::f64::consts::E / 2.0);
    let c = soliton_constants(&sd, None).unwrap();
    assert!((c.c1.re - (-1f64).exp()).abs() < 1e-15);
    assert!(matches!(evaluate_ri(3.5, 1.0, &sd, &opts()), Err(Error::SingularDenominator)));
    assert!(evaluate_ri(3.4, 1.0, &sd, &opts()).unwrap().u_total.is_finite());
}

#[test]
fn reflectionless_saddle_sectors() {
    let sd = fixture(-1.0);
    let c = DeltaCache::build(&sd.spectrum, -1.0, sd.kappa, DeltaOptions::default()).unwrap();
    let p = asym_params(-1.0, 1.0, &sd, &c, None).unwrap();
    assert!(p.degenerate);
    assert_eq!(p.nu, Complex64::new(0.0, 0.0));
    assert_eq!(p.beta, Complex64::new(0.0, 0.0));
    assert_eq!(p.gamma, Complex64::new(0.0, 0.0));
    let r = evaluate_rii(-12.0, 1.0, &sd, &c, &opts()).unwrap();
    assert_eq!(r.u_subleading, 0.0);
    assert_eq!(r.u_total, 0.0);
    let r = evaluate_riv(12.0, -1.0, &sd, &c, &opts()).unwrap();
    assert!((r.u_total - 2.0).abs() < 1e-12);
}

#[test]
fn pure_step_constants() {
    let (sd, c) = pure_step();
    let p = asym_params(-1.0, 1.0, sd, c, None).unwrap();
    assert!((p.nu.re - 0.110318).abs() < 1e-6);
    assert!((p.nu.re - 2f64.ln() / (2.0 * PI)).abs() < 1e-10);
    assert!((p.beta * p.gamma - p.nu).norm() < 1e-9);
    assert!((p.beta * p.gamma_printed + p.nu).norm() < 1e-9);
    assert!((p.phi0 - Complex64::new(0.0, 16.0)).norm() < 1e-15);
    assert_eq!(p.eta, 0.5);
    assert!((p.rho - 0.5 * 48f64.sqrt()).abs() < 1e-15);
    assert_eq!(p.tau, -12.0);
    assert_eq!(p.epsilon, 0.5);
    assert_eq!(p.alpha, 0.75);
    // q1 q2 = r1 r2 = e^{-2 pi nu} - 1
    assert!((p.q1 * p.q2 - ((-2.0 * PI * p.nu).exp() - 1.0)).norm() < 1e-9);
    // independent oracle for gamma: real nu, |Gamma(i nu)|^2 = pi / (nu sinh(pi nu))
    let nu = p.nu.re;
    let q2 = (2.0 * c.chi_at_minus_k0).exp() * c.r2_at_minus_k0 * Complex64::new(0.0, -2.0 * nu * 4f64.ln()).exp();
    let abs_gamma = (2.0 * PI).sqrt() * (-PI * nu / 2.0).exp() * (nu * (PI * nu).sinh() / PI).sqrt() / q2.norm();
    assert!((p.gamma.norm() - abs_gamma).abs() < 1e-10);
    let gamma_direct = -(2.0 * PI).sqrt() * Complex64::from_polar(1.0, -PI / 4.0) * (-PI * nu / 2.0).exp() * recip_gamma(Complex64::new(0.0, nu)) / q2;
    assert!((p.gamma - gamma_direct).norm() < 1e-12);
}

#[test]
fn rii_magnitude_and_invariants() {
    let (sd, c) = pure_step();
    let r = evaluate_rii(-12.0, 1.0, sd, c, &opts()).unwrap();
    assert_eq!(r.sector, SectorTag::RII);
    assert_eq!(r.u_leading, 0.0);
    assert_eq!(r.u_total, r.u_leading + r.u_subleading);
    let p = r.saddle.unwrap();
    let env = 4.0 * 0.5 * 12f64.powf(-0.5) * p.gamma.norm();
    assert!((r.subleading_envelope - env).abs() < 1e-13);
    assert!(r.u_subleading.abs() <= env * (1.0 + 1e-12));
    let w = p.gamma * Complex64::new(0.0, 16.0).exp() * Complex64::new(0.0, p.nu.re * 12f64.ln()).exp();
    assert!((r.u_subleading + env / p.gamma.norm() * w.re).abs() < 1e-13);
    assert!((r.error_order.exponent + 0.875).abs() < 1e-15);
}

#[test]
fn riv_branch_b_for_real_nu() {
    let (sd, c) = pure_step();
    let r = evaluate_riv(12.0, -1.0, sd, c, &opts()).unwrap();
    assert_eq!(r.riv_branch, Some(RivBranch::B));
    assert!((r.u_leading - 2.0).abs() < 1e-10);
    assert!(r.u_subleading != 0.0);
    assert_eq!(r.u_total, r.u_leading + r.u_subleading);
    // Im nu = 0: R3 = O(eps tau^{-(1+alpha)/2})
    assert!((r.error_order.exponent + 0.875).abs() < 1e-15);
}

#[test]
fn riv_branches_a_and_c() {
    let (sd, c) = pure_step();
    for (im, branch) in [(-0.3, RivBranch::A), (0.3, RivBranch::C), (0.1, RivBranch::B)] {
        let mut cc = *c;
        cc.nu.im = im;
        let r = evaluate_riv(12.0, -1.0, sd, &cc, &opts()).unwrap();
        assert_eq!(r.riv_branch, Some(branch), "Im nu = {im}");
        let p = r.saddle.unwrap();
        assert!((p.alpha - (0.5f64.max(2.0 * im.abs()) + 1.0) / 2.0).abs() < 1e-15);
    }
}

fn fit_slope(sd: &SpectralData, c: &DeltaCache, sign: f64) -> (f64, f64) {
    let ts: Vec<f64> = (0..=120).map(|i| 10f64.powf(2.0 + 4.0 * i as f64 / 120.0)).collect();
    let rs: Vec<AsymptoticResult> = ts.iter().map(|&t| evaluate(-12.0 * sign * t, sign * t, sd, Some(c), &opts()).unwrap()).collect();
    let env: Vec<f64> = rs.iter().map(|r| r.subleading_envelope).collect();
    let raw: Vec<f64> = rs.iter().map(|r| r.u_subleading.abs()).collect();
    (loglog_slope(&ts, &env), loglog_slope(&ts, &raw))
}

#[test]
fn subleading_decay_law() {
    let (sd, c) = pure_step();
    let (rii, _) = fit_slope(sd, c, 1.0);
    let (riv, _) = fit_slope(sd, c, -1.0);
    assert!((rii + 0.5).abs() <= 0.02, "R_II slope {rii}");
    assert!((riv + 0.5).abs() <= 0.02, "R_IV slope {riv}");
}

#[test]
fn riv_leading_approaches_a() {
    let (sd, _) = pure_step();
    let bump = SpectralData::from_profile(&nmkdv_core::scattering::StepProfile::bump_step(2.0, -0.8, -1.0, 0.4), &SpectralBuildOptions::default()).unwrap();
    for data in [sd, &bump] {
        let mut last = f64::INFINITY;
        for xi in [-1.0, -4.0, -16.0, -64.0, -100.0] {
            let c = DeltaCache::build(&data.spectrum, xi, data.kappa, DeltaOptions::default()).unwrap();
            let r = evaluate_riv(-12.0 * xi, -1.0, data, &c, &opts()).unwrap();
            let gap = (r.u_leading - data.amplitude).abs();
            assert!(gap <= last + 1e-12, "xi={xi}");
            last = gap;
            let rii = evaluate_rii(12.0 * xi, 1.0, data, &c, &opts()).unwrap();
            assert_eq!(rii.u_leading, 0.0);
        }
        assert!(last <= 1e-2 * data.amplitude);
    }
}

#[test]
fn sweep_rows() {
    let sd = fixture(-1.0);
    let pts = [(2.0, 1.0), (4.0, 1.0), (-12.0, 1.0), (12.0, -1.0), (-2.0, -1.0)];
    let recs = sweep(&pts, &sd, &opts(), DeltaOptions::default(), Execution::Sequential).unwrap();
    let par = sweep(&pts, &sd, &opts(), DeltaOptions::default(), Execution::Parallel).unwrap();
    assert_eq!(recs, par);
    assert_eq!(recs[1].sector, SectorTag::Boundary);
    assert_eq!(recs[1].csv_row(), "4.0,1.0,0.3333333333333333,Boundary,,,,");
    assert_eq!(recs[0].csv_row().split(',').count(), ASYM_CSV_HEADER.split(',').count());
    assert_eq!(recs[3].u_total, Some(2.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_saddles_are_stationary(xi in -10.0f64..-1e-3) {
        let (_, s) = phase_and_saddles(Complex64::new(0.0, 0.0), xi);
        for k in s {
            // theta'(k) = 12 k^2 + 12 xi
            let d = 12.0 * k * k + 12.0 * xi;
            prop_assert!(d.norm() < 1e-12 * xi.abs().max(1.0));
        }
    }

    #[test]
    fn prop_sector_partition(x in -50.0f64..50.0, t in -5.0f64..5.0, kappa in 0.1f64..3.0) {
        prop_assume!(t != 0.0);
        let tag = classify_sector(x, t, kappa).unwrap();
        let xi = x / (12.0 * t);
        let near = |v: f64| (xi - v).abs() <= BOUNDARY_TOL;
        let on_boundary = near(0.0) || (xi > 0.0 && (near(kappa * kappa / 3.0) || near(kappa * kappa)));
        let member = |s: SectorTag| -> bool {
            let (lo, hi) = (kappa * kappa / 3.0, kappa * kappa);
            match s {
                SectorTag::RII => x < 0.0 && t > 0.0,
                SectorTag::RIV => x > 0.0 && t < 0.0,
                SectorTag::RIL => x > 0.0 && t > 0.0 && xi < lo,
                SectorTag::RIM => x > 0.0 && t > 0.0 && xi > lo && xi < hi,
                SectorTag::RIR => x > 0.0 && t > 0.0 && xi > hi,
                SectorTag::RIIIR => x < 0.0 && t < 0.0 && xi < lo,
                SectorTag::RIIIM => x < 0.0 && t < 0.0 && xi > lo && xi < hi,
                SectorTag::RIIIL => x < 0.0 && t < 0.0 && xi > hi,
                SectorTag::Boundary => false,
            }
        };
        if on_boundary {
            prop_assert_eq!(tag, SectorTag::Boundary);
        } else {
            let hits: Vec<SectorTag> = SectorTag::REGIONS.iter().copied().filter(|&s| member(s)).collect();
            prop_assert_eq!(hits, vec![tag]);
        }
    }

    #[test]
    fn prop_ri_matches_soliton(a in 0.3f64..3.0, t in 0.01f64..2.0, f in 0.01f64..0.99) {
        let sd = soliton_spectral_fixture(a, -1.0, &SpectralBuildOptions::default()).unwrap();
        let kappa = a / 2.0;
        let x = 12.0 * t * f * kappa * kappa / 3.0;
        let p = SolitonParams::new(a, -1.0).unwrap();
        let r = evaluate_ri(x, t, &sd, &opts()).unwrap();
        prop_assert!((r.u_total - one_soliton(&p, x, t).unwrap()).abs() <= 1e-12);
        let m = evaluate_riii(-x, -t, &sd, &opts()).unwrap();
        prop_assert!((m.u_total + r.u_total).abs() <= 1e-12);
    }
}
