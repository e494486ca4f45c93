//! Special functions and quadrature kernels.

pub mod contour;
pub mod gamma;
pub mod ode;
pub mod quad;
pub mod weber;

pub use contour::{cauchy_contour_integral, principal_value_integral, ContourSegment, Side};
pub use gamma::{complex_gamma, ln_gamma, recip_gamma};
pub use quad::{integrate, QuadOptions};
pub use weber::{weber_d, weber_d_pair};

use num_complex::Complex64;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
