//! Direct scattering, spectral data and long-time asymptotics for the
//! focusing nonlocal (reverse space-time) MKdV equation
//!
//! ```text
//! u_t(x,t) + 6 u(x,t) u(-x,-t) u_x(x,t) + u_xxx(x,t) = 0
//! ```
//!
//! with step-like initial data `u(x,0) -> 0` as `x -> -inf` and `u(x,0) -> A`
//! as `x -> +inf`.

pub mod asymptotics;
pub mod error;
pub mod exec;
pub mod numerics;
pub mod scattering;
pub mod soliton;
pub mod spectral;
pub mod validation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
