//! Sector geometry, the long-time asymptotic formulas in every sector and the
//! parabolic cylinder model behind the saddle-point constants.

pub mod evaluate;
pub mod parametrix;
pub mod params;
pub mod sweep;

pub use evaluate::{
    evaluate, evaluate_ri, evaluate_rii, evaluate_riii, evaluate_riv, riii_r_literal_exponent, AsymOptions, AsymptoticResult, ErrorOrder, RivBranch,
};
pub use parametrix::{weber_wronskian, HalfPlane, ParametrixDiagnostics, ParametrixModel};
pub use params::{asym_params, soliton_constants, SaddleParams, SolitonConstants};
pub use sweep::{sweep, SweepRecord, ASYM_CSV_HEADER};

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Distance in xi below which a point counts as lying on a cone boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorTag {
    #[serde(rename = "R_I_L")]
    RIL,
    #[serde(rename = "R_I_M")]
    RIM,
    #[serde(rename = "R_I_R")]
    RIR,
    #[serde(rename = "R_II")]
    RII,
    #[serde(rename = "R_III_L")]
    RIIIL,
    #[serde(rename = "R_III_M")]
    RIIIM,
    #[serde(rename = "R_III_R")]
    RIIIR,
    #[serde(rename = "R_IV")]
    RIV,
    Boundary,
}

impl SectorTag {
    pub const REGIONS: [SectorTag; 8] =
        [SectorTag::RIL, SectorTag::RIM, SectorTag::RIR, SectorTag::RII, SectorTag::RIIIL, SectorTag::RIIIM, SectorTag::RIIIR, SectorTag::RIV];

    pub fn name(self) -> &'static str {
        match self {
            SectorTag::RIL => "R_I_L",
            SectorTag::RIM => "R_I_M",
            SectorTag::RIR => "R_I_R",
            SectorTag::RII => "R_II",
            SectorTag::RIIIL => "R_III_L",
            SectorTag::RIIIM => "R_III_M",
            SectorTag::RIIIR => "R_III_R",
            SectorTag::RIV => "R_IV",
            SectorTag::Boundary => "Boundary",
        }
    }

    pub fn is_region_i(self) -> bool {
        matches!(self, SectorTag::RIL | SectorTag::RIM | SectorTag::RIR)
    }

    pub fn is_region_iii(self) -> bool {
        matches!(self, SectorTag::RIIIL | SectorTag::RIIIM | SectorTag::RIIIR)
    }
}

impl fmt::Display for SectorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// theta(k, xi) = 4k^3 + 12 k xi and the saddle pair (+-sqrt(-xi) for xi < 0,
/// +-i sqrt(xi) for xi > 0).
pub fn phase_and_saddles(k: Complex64, xi: f64) -> (Complex64, [Complex64; 2]) {
    let theta = 4.0 * k * k * k + 12.0 * xi * k;
    let s = if xi < 0.0 { Complex64::new((-xi).sqrt(), 0.0) } else { Complex64::new(0.0, xi.sqrt()) };
    (theta, [s, -s])
}

/// The cone of (x, t) relative to xi = x/(12t) and the thresholds kappa^2/3, kappa^2.
pub fn classify_sector(x: f64, t: f64, kappa: f64) -> Result<SectorTag> {
    if t == 0.0 {
        return Err(Error::OnTimeAxis);
    }
    let xi = x / (12.0 * t);
    if xi.abs() <= BOUNDARY_TOL {
        return Ok(SectorTag::Boundary);
    }
    if xi < 0.0 {
        return Ok(if t > 0.0 { SectorTag::RII } else { SectorTag::RIV });
    }
    let (lo, hi) = (kappa * kappa / 3.0, kappa * kappa);
    if (xi - lo).abs() <= BOUNDARY_TOL || (xi - hi).abs() <= BOUNDARY_TOL {
        return Ok(SectorTag::Boundary);
    }
    let band = if xi < lo {
        0
    } else if xi < hi {
        1
    } else {
        2
    };
    Ok(match (t > 0.0, band) {
        (true, 0) => SectorTag::RIL,
        (true, 1) => SectorTag::RIM,
        (true, _) => SectorTag::RIR,
        (false, 0) => SectorTag::RIIIR,
        (false, 1) => SectorTag::RIIIM,
        (false, _) => SectorTag::RIIIL,
    })
}
