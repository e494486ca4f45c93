use nmkdv_core::scattering::*;
use nmkdv_core::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn background_examples() {
    let n = background_solution(2.0, 1.0, c(0.0, 1.0), 0.0, 0.0, BgSide::Plus).unwrap();
    assert!((n[0][1] - c(-1.0, 0.0)).norm() < 1e-15);
    let far = background_solution(1.0, 1.0, c(1e8, 0.0), 0.0, 0.0, BgSide::Minus).unwrap();
    assert!(far[1][0].norm() < 1e-8);
    assert_eq!(background_solution(1.0, 1.0, c(1e-13, 0.0), 0.0, 0.0, BgSide::Plus), Err(nmkdv_core::Error::SingularAtOrigin));
    // phase factors: columns scale by e^{-+(ikx + 4ik^3 t)}
    let k = c(0.7, 0.2);
    let m = background_solution(1.5, 1.0, k, 0.3, -0.2, BgSide::Minus).unwrap();
    let ph = c(0.0, 1.0) * k * 0.3 + c(0.0, 4.0) * k * k * k * (-0.2);
    assert!((m[0][0] - (-ph).exp()).norm() < 1e-14);
    assert!((m[1][1] - ph.exp()).norm() < 1e-14);
}

#[test]
fn pure_step_closed_form_example() {
    let s = scattering_matrix(&StepProfile::pure_step(2.0), 1.0, &ScatterOptions::default()).unwrap();
    let want = [[c(2.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(1.0, 0.0)]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((s.s[i][j] - want[i][j]).norm() < 1e-12, "S[{i}][{j}] = {}", s.s[i][j]);
        }
    }
    let r = reflection_coefficients(&s).unwrap();
    assert!((r.r1 - c(0.0, -0.5)).norm() < 1e-12);
    assert!((r.r2 - c(0.0, -1.0)).norm() < 1e-12);
}

#[test]
fn pure_step_matches_closed_form_on_grid() {
    let o = ScatterOptions::default();
    for a in [0.5, 1.0, 2.0, 4.0] {
        let p = StepProfile::pure_step(a);
        for j in 0..200 {
            let k = 0.05 + (20.0 - 0.05) * j as f64 / 199.0;
            let s = scattering_matrix(&p, k, &o).unwrap();
            let w = pure_step_sample(a, 1.0, k);
            for i in 0..2 {
                for l in 0..2 {
                    assert!(rel(s.s[i][l], w.s[i][l]) < 1e-8 || (s.s[i][l] - w.s[i][l]).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn zero_amplitude_is_identity() {
    let p = StepProfile::pure_step(0.0);
    let s = scattering_matrix(&p, 0.7, &ScatterOptions::default()).unwrap();
    assert!(norm_max(&[[s.s[0][0] - 1.0, s.s[0][1]], [s.s[1][0], s.s[1][1] - 1.0]]) < 1e-14);
    let xs = [-3.0, -0.5, 0.0, 2.0];
    let j = jost_solutions(&p, c(1.3, 0.0), &xs, &JostOptions::default()).unwrap();
    for n in 0..xs.len() {
        let (p1, p2) = j.matrices(n).unwrap();
        assert!(norm_max(&[[p1[0][0] - 1.0, p1[0][1]], [p1[1][0], p1[1][1] - 1.0]]) < 1e-14);
        assert!(norm_max(&[[p2[0][0] - 1.0, p2[0][1]], [p2[1][0], p2[1][1] - 1.0]]) < 1e-14);
    }
}

#[test]
fn pure_step_left_half_is_background() {
    let p = StepProfile::pure_step(1.5);
    let k = c(0.8, 0.0);
    let xs = [-5.0, -1.0, -0.25];
    let j = jost_solutions(&p, k, &xs, &JostOptions::default()).unwrap();
    let nm = n_matrix(1.5, 1.0, k, BgSide::Minus);
    for n in 0..xs.len() {
        let (p1, _) = j.matrices(n).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!((p1[a][b] - nm[a][b]).norm() < 1e-13);
            }
        }
    }
}

#[test]
fn unit_determinant_along_x() {
    let xs: Vec<f64> = (0..41).map(|i| -10.0 + 0.5 * i as f64).collect();
    for p in [StepProfile::bump_step(1.0, 0.5, 1.0, 0.5), StepProfile::smooth_step(1.0, 0.5, 10.0)] {
        let j = jost_solutions(&p, c(5.0, 0.0), &xs, &JostOptions::default()).unwrap();
        for n in 0..xs.len() {
            let (p1, p2) = j.matrices(n).unwrap();
            assert!((det(&p1) - 1.0).norm() < 1e-9);
            assert!((det(&p2) - 1.0).norm() < 1e-9);
        }
    }
}

#[test]
fn analytic_columns_only_off_axis() {
    let p = StepProfile::bump_step(1.0, 0.5, 1.0, 0.5);
    let j = jost_solutions(&p, c(0.3, 0.4), &[0.0], &JostOptions::default()).unwrap();
    assert!(j.psi1[0].is_some() && j.psi2[1].is_some());
    assert!(j.psi1[1].is_none() && j.psi2[0].is_none());
    let e = jost_column_at(&p, c(0.3, 0.4), Jost::Psi1, 1, 0.0, &JostOptions::default());
    assert!(matches!(e, Err(nmkdv_core::Error::NonAnalyticColumnRequest { .. })));
    let far = jost_column_at(&p, c(0.0, 30.0), Jost::Psi1, 0, 0.0, &JostOptions::default());
    assert!(matches!(far, Err(nmkdv_core::Error::OverflowGauge(_))));
}

#[test]
fn too_close_to_origin() {
    let r = scattering_matrix(&StepProfile::pure_step(1.0), 1e-4, &ScatterOptions::default());
    assert!(matches!(r, Err(nmkdv_core::Error::TooCloseToOrigin(_))));
}

#[test]
fn identities_pure_and_bump() {
    let grid = KGrid { n: 256, ..KGrid::default() }.points();
    let o = ScatterOptions::default();
    let exec = nmkdv_core::exec::Execution::Parallel;
    let pure = scatter_grid(&StepProfile::pure_step(2.0), &grid, &o, exec).unwrap();
    let rp = verify_scattering_identities(&pure, 1.0).unwrap();
    assert!(rp.max_violation() < 1e-8, "{rp:?}");
    let bump = scatter_grid(&StepProfile::bump_step(1.0, 0.5, 1.0, 0.5), &grid, &o, exec).unwrap();
    let rb = verify_scattering_identities(&bump, 1.0).unwrap();
    assert!(rb.max_violation() < 1e-6, "{rb:?}");
    // a_j -> 1 and b = O(1/k)
    assert!(rb.large_k_a_scaled < 5.0 && rb.large_k_b_scaled < 5.0, "{rb:?}");
    let mut asym = pure.clone();
    asym.pop();
    assert_eq!(verify_scattering_identities(&asym, 1.0), Err(nmkdv_core::Error::AsymmetricGrid));
}

#[test]
fn reflection_identity() {
    let p = StepProfile::bump_step(1.0, 0.5, 1.0, 0.5);
    let o = ScatterOptions::default();
    for j in 0..50 {
        let k = -5.0 + 10.0 * (j as f64 + 0.5) / 50.0;
        let s = scattering_matrix(&p, k, &o).unwrap();
        let r = reflection_coefficients(&s).unwrap();
        assert!((1.0 + r.r1 * r.r2 - 1.0 / (s.a1 * s.a2)).norm() < 1e-9);
    }
    let zero = ScatteringSample { k: 1.0, s: identity(), a1: c(1.0, 0.0), a2: c(1.0, 0.0), b: c(0.0, 0.0) };
    let r = reflection_coefficients(&zero).unwrap();
    assert_eq!((r.r1, r.r2), (c(0.0, 0.0), c(0.0, 0.0)));
    let bad = ScatteringSample { a1: c(0.0, 0.0), ..zero };
    assert!(matches!(reflection_coefficients(&bad), Err(nmkdv_core::Error::SpectralZeroOnRealAxis(_))));
}

#[test]
fn singular_structure_near_origin() {
    let o = ScatterOptions::default();
    for p in [StepProfile::smooth_step(1.0, 0.5, 10.0), StepProfile::bump_step(1.0, 0.5, 1.0, 0.5)] {
        let a2_0 = scattering_matrix(&p, 1e-3, &o).unwrap().a2;
        let s = scattering_matrix(&p, 1e-2, &o).unwrap();
        let want_a1 = p.a * p.a * a2_0 / 4.0;
        let want_b = p.a * a2_0 / 2.0;
        assert!(rel(s.a1 * 1e-4, want_a1) < 0.05);
        assert!(rel(c(0.0, 1e-2) * s.b, want_b) < 0.05);
    }
}

#[test]
fn grid_is_symmetric() {
    let g = KGrid::default().points();
    assert_eq!(g.len(), 2048);
    for j in 0..g.len() {
        assert_eq!(g[j], -g[g.len() - 1 - j]);
    }
    assert!(g.windows(2).all(|w| w[0] < w[1]));
    assert!((g[1024] - 1e-3).abs() < 1e-15 && (g[2047] - 50.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugation_symmetry(k in 0.05f64..20.0, amp in -0.8f64..0.8, x0 in -1.5f64..1.5) {
        let p = StepProfile::bump_step(1.0, amp, x0, 0.4);
        let o = ScatterOptions::default();
        let s = scattering_matrix(&p, k, &o).unwrap();
        let m = scattering_matrix(&p, -k, &o).unwrap();
        prop_assert!((s.b - m.b.conj()).norm() < 1e-8);
        prop_assert!((s.a1 - m.a1.conj()).norm() < 1e-8 * s.a1.norm().max(1.0));
        prop_assert!((det(&s.s) - 1.0).norm() < 1e-8);
        prop_assert!((s.a1 * s.a2 + s.b * s.b - 1.0).norm() < 1e-8 * (1.0 + s.a1.norm() * s.a2.norm()));
    }

    #[test]
    fn background_unit_determinant(re in -10.0f64..10.0, im in -10.0f64..10.0, a in 0.0f64..5.0) {
        prop_assume!(re.abs() + im.abs() > 1e-3);
        for side in [BgSide::Plus, BgSide::Minus] {
            let n = n_matrix(a, 1.0, c(re, im), side);
            prop_assert!((det(&n) - 1.0).norm() < 1e-15);
        }
    }
}
