//! Evaluation over many (x, t) points with one delta cache per ray.

use super::evaluate::{evaluate, AsymOptions};
use super::{classify_sector, SectorTag};
use crate::error::Result;
use crate::exec::{self, Execution};
use crate::spectral::{DeltaCache, DeltaOptions, SpectralData};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const ASYM_CSV_HEADER: &str = "x,t,xi,sector,u_leading,u_subleading,u_total,error_order_exponent";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub x: f64,
    pub t: f64,
    pub xi: f64,
    pub sector: SectorTag,
    /// None on cone boundaries
    pub u_leading: Option<f64>,
    pub u_subleading: Option<f64>,
    pub u_total: Option<f64>,
    pub error_order_exponent: Option<f64>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

impl SweepRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{:?},{:?},{:?},{},{},{},{},{}",
            self.x,
            self.t,
            self.xi,
            self.sector,
            opt(self.u_leading),
            opt(self.u_subleading),
            opt(self.u_total),
            opt(self.error_order_exponent)
        )
    }
}

/// Evaluate every point; rays with xi < 0 share one delta cache, built once.
pub fn sweep(points: &[(f64, f64)], spectral: &SpectralData, opts: &AsymOptions, delta: DeltaOptions, ex: Execution) -> Result<Vec<SweepRecord>> {
    let mut rays: BTreeMap<u64, f64> = BTreeMap::new();
    for &(x, t) in points {
        let s = classify_sector(x, t, spectral.kappa)?;
        if matches!(s, SectorTag::RII | SectorTag::RIV) {
            let xi = x / (12.0 * t);
            rays.insert(xi.to_bits(), xi);
        }
    }
    let xis: Vec<f64> = rays.values().copied().collect();
    let caches = exec::try_map(ex, &xis, |&xi| DeltaCache::build(&spectral.spectrum, xi, spectral.kappa, delta))?;
    let by_xi: BTreeMap<u64, &DeltaCache> = xis.iter().zip(&caches).map(|(xi, c)| (xi.to_bits(), c)).collect();
    exec::try_map(ex, points, |&(x, t)| {
        let xi = x / (12.0 * t);
        let sector = classify_sector(x, t, spectral.kappa)?;
        if sector == SectorTag::Boundary {
            return Ok(SweepRecord { x, t, xi, sector, u_leading: None, u_subleading: None, u_total: None, error_order_exponent: None });
        }
        let r = evaluate(x, t, spectral, by_xi.get(&xi.to_bits()).copied(), opts)?;
        Ok(SweepRecord {
            x,
            t,
            xi,
            sector,
            u_leading: Some(r.u_leading),
            u_subleading: Some(r.u_subleading),
            u_total: Some(r.u_total),
            error_order_exponent: Some(r.error_order.exponent),
        })
    })
}
