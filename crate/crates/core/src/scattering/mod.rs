//! Direct scattering for step-like data: Jost solutions, the scattering
//! matrix S(k) and the reflection coefficients.

pub mod background;
pub mod data;
pub mod jost;
pub mod profile;

pub use background::{background_solution, n_matrix, BgSide};
pub use data::{
    continue_a1, continue_a2, pure_step_sample, reflection_coefficients, scatter_grid, scattering_matrix, spectral_csv_row, verify_scattering_identities,
    IdentityReport, KGrid, ReflectionSample, ScatterOptions, ScatteringSample, SPECTRAL_CSV_HEADER,
};
pub use jost::{jost_column, jost_column_at, jost_solutions, Jost, JostOptions, JostSamples};
pub use profile::{Perturbation, StepProfile};

use num_complex::Complex64;

pub type Mat2 = [[Complex64; 2]; 2];

pub fn det(m: &Mat2) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn inv(m: &Mat2) -> Mat2 {
    let d = det(m);
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

pub fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn identity() -> Mat2 {
    let o = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    [[o, z], [z, o]]
}

pub fn norm_max(m: &Mat2) -> f64 {
    m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}
