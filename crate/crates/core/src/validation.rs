//! Residual of u_t + 6 sigma u(x,t) u(-x,-t) u_x + u_xxx = 0 and boundary
//! gaps for sampled fields on grids symmetric about the origin.

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use serde::{Deserialize, Serialize};
use std::fmt::Write;

/// Relative tolerance for the symmetry and uniform-spacing checks.
const GRID_TOL: f64 = 1e-9;
/// 5-point first derivative needs 2 neighbours, 7-point third derivative 3.
const BAND_T: usize = 2;
const BAND_X: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub x_values: Vec<f64>,
    pub t_values: Vec<f64>,
    /// u[i_t][i_x]
    pub u: Vec<Vec<f64>>,
}

/// n points (j - (n-1)/2) h, exactly symmetric.
pub fn symmetric_axis(half_extent: f64, h: f64) -> Vec<f64> {
    let m = (half_extent / h).round() as i64;
    (-m..=m).map(|j| j as f64 * h).collect()
}

fn check_axis(v: &[f64]) -> Result<f64> {
    let n = v.len();
    if n < 7 {
        return Err(Error::GridTooSmall(n));
    }
    let scale = v[n - 1].abs().max(v[0].abs());
    for i in 0..n {
        if (v[i] + v[n - 1 - i]).abs() > GRID_TOL * scale {
            return Err(Error::AsymmetricGrid);
        }
    }
    let h = (v[n - 1] - v[0]) / (n - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::ShapeMismatch("axis is not ascending".into()));
    }
    for w in v.windows(2) {
        if ((w[1] - w[0]) - h).abs() > GRID_TOL * h.max(scale * 1e-3) {
            return Err(Error::ShapeMismatch("axis spacing is not uniform".into()));
        }
    }
    Ok(h)
}

impl FieldGrid {
    pub fn new(x_values: Vec<f64>, t_values: Vec<f64>, u: Vec<Vec<f64>>) -> Result<Self> {
        if u.len() != t_values.len() || u.iter().any(|r| r.len() != x_values.len()) {
            return Err(Error::ShapeMismatch(format!("u is not {} x {}", t_values.len(), x_values.len())));
        }
        Ok(FieldGrid { x_values, t_values, u })
    }

    /// Samples f on the grid, rows in parallel.
    pub fn from_fn<F>(x_values: Vec<f64>, t_values: Vec<f64>, f: F, ex: Execution) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<f64> + Sync + Send,
    {
        let u = exec::try_map(ex, &t_values, |&t| x_values.iter().map(|&x| f(x, t)).collect::<Result<Vec<f64>>>())?;
        Self::new(x_values, t_values, u)
    }

    pub fn nx(&self) -> usize {
        self.x_values.len()
    }

    pub fn nt(&self) -> usize {
        self.t_values.len()
    }

    /// Checks symmetry and uniform spacing; returns (h_x, h_t).
    pub fn spacing(&self) -> Result<(f64, f64)> {
        Ok((check_axis(&self.x_values)?, check_axis(&self.t_values)?))
    }

    /// u(-x, -t) at the sample (i_t, i_x).
    pub fn mirror(&self, it: usize, ix: usize) -> f64 {
        self.u[self.nt() - 1 - it][self.nx() - 1 - ix]
    }

    /// The field (x, t) -> u(-x, -t) on the same grid.
    pub fn mirrored(&self) -> FieldGrid {
        let u = (0..self.nt()).map(|it| (0..self.nx()).map(|ix| self.mirror(it, ix)).collect()).collect();
        FieldGrid { x_values: self.x_values.clone(), t_values: self.t_values.clone(), u }
    }

    /// CSV: header `t\x,x_0,...`, then one row per t. Values use the shortest
    /// representation that parses back to the same f64.
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(self.nt() * self.nx() * 20);
        s.push_str("t\\x");
        for x in &self.x_values {
            s.push(',');
            let _ = write!(s, "{x:?}");
        }
        s.push('\n');
        for (t, row) in self.t_values.iter().zip(&self.u) {
            let _ = write!(s, "{t:?}");
            for v in row {
                s.push(',');
                let _ = write!(s, "{v:?}");
            }
            s.push('\n');
        }
        s
    }

    /// Parses `to_csv` output; lines starting with `#` are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty field grid".into()))?;
        let mut cols = header.split(',');
        if cols.next().map(str::trim) != Some("t\\x") {
            return Err(Error::Parse("field grid header must start with t\\x".into()));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        let x_values = cols.map(num).collect::<Result<Vec<f64>>>()?;
        let mut t_values = Vec::new();
        let mut u = Vec::new();
        for line in lines {
            let mut it = line.split(',');
            t_values.push(num(it.next().unwrap_or(""))?);
            u.push(it.map(num).collect::<Result<Vec<f64>>>()?);
        }
        Self::new(x_values, t_values, u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub max_abs: f64,
    pub rms: f64,
    pub argmax_x: f64,
    pub argmax_t: f64,
    pub count: usize,
}

fn residual_row(f: &FieldGrid, it: usize, hx: f64, ht: f64, sigma: f64) -> Vec<f64> {
    let nx = f.nx();
    let u = &f.u;
    (BAND_X..nx - BAND_X)
        .map(|ix| {
            let r = &u[it];
            let ut = (-u[it + 2][ix] + 8.0 * u[it + 1][ix] - 8.0 * u[it - 1][ix] + u[it - 2][ix]) / (12.0 * ht);
            let ux = (-r[ix + 2] + 8.0 * r[ix + 1] - 8.0 * r[ix - 1] + r[ix - 2]) / (12.0 * hx);
            let uxxx = (r[ix - 3] - 8.0 * r[ix - 2] + 13.0 * r[ix - 1] - 13.0 * r[ix + 1] + 8.0 * r[ix + 2] - r[ix + 3]) / (8.0 * hx * hx * hx);
            ut + 6.0 * sigma * r[ix] * f.mirror(it, ix) * ux + uxxx
        })
        .collect()
}

/// Residual on the interior (bands of 2 rows in t and 3 columns in x removed),
/// as a field on the interior axes, which are again symmetric.
pub fn pde_residual(field: &FieldGrid, sigma: f64, ex: Execution) -> Result<FieldGrid> {
    let (hx, ht) = field.spacing()?;
    let rows: Vec<usize> = (BAND_T..field.nt() - BAND_T).collect();
    let u = exec::map(ex, &rows, |&it| residual_row(field, it, hx, ht, sigma));
    Ok(FieldGrid { x_values: field.x_values[BAND_X..field.nx() - BAND_X].to_vec(), t_values: field.t_values[BAND_T..field.nt() - BAND_T].to_vec(), u })
}

pub fn residual_stats(residual: &FieldGrid) -> ResidualStats {
    let mut s = ResidualStats { max_abs: 0.0, rms: 0.0, argmax_x: f64::NAN, argmax_t: f64::NAN, count: 0 };
    let mut sq = 0.0;
    for (t, row) in residual.t_values.iter().zip(&residual.u) {
        for (x, v) in residual.x_values.iter().zip(row) {
            let a = v.abs();
            // NaN propagates into max_abs
            if a > s.max_abs || a.is_nan() {
                s.max_abs = a;
                s.argmax_x = *x;
                s.argmax_t = *t;
            }
            sq += v * v;
            s.count += 1;
        }
    }
    if s.count > 0 {
        s.rms = (sq / s.count as f64).sqrt();
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub h: f64,
    pub max_residual_h: f64,
    pub max_residual_half: f64,
    /// max_residual_h / max_residual_half; 16 for 4th-order stencils
    pub factor: f64,
}

/// Max residual of the sampled field f at spacing h and h/2 on [-L, L]^2.
pub fn residual_convergence<F>(f: F, half_extent: f64, h: f64, sigma: f64, ex: Execution) -> Result<Convergence>
where
    F: Fn(f64, f64) -> Result<f64> + Sync + Send,
{
    let at = |h: f64| -> Result<f64> {
        let ax = symmetric_axis(half_extent, h);
        let g = FieldGrid::from_fn(ax.clone(), ax, &f, ex)?;
        Ok(residual_stats(&pde_residual(&g, sigma, ex)?).max_abs)
    };
    let a = at(h)?;
    let b = at(h / 2.0)?;
    Ok(Convergence { h, max_residual_h: a, max_residual_half: b, factor: a / b })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    /// per t-row: max |u - A| over the rightmost 10% of columns
    pub right_gap: Vec<f64>,
    /// per t-row: max |u| over the leftmost 10% of columns
    pub left_gap: Vec<f64>,
    pub max_right_gap: f64,
    pub max_left_gap: f64,
    pub flagged: bool,
}

/// Gaps to the boundary values u -> A (x -> +inf) and u -> 0 (x -> -inf).
/// `tol` sets the flag threshold.
pub fn boundary_check(field: &FieldGrid, a: f64, tol: f64) -> Result<BoundaryReport> {
    let nx = field.nx();
    let need = 10.0 / a;
    let reach = field.x_values.first().map(|x| -x).unwrap_or(0.0).min(field.x_values.last().copied().unwrap_or(0.0));
    if reach < need {
        return Err(Error::GridTooNarrow(reach, need));
    }
    let band = (nx / 10).max(1);
    let mut right_gap = Vec::with_capacity(field.nt());
    let mut left_gap = Vec::with_capacity(field.nt());
    for row in &field.u {
        right_gap.push(row[nx - band..].iter().map(|v| (v - a).abs()).fold(0.0, f64::max));
        left_gap.push(row[..band].iter().map(|v| v.abs()).fold(0.0, f64::max));
    }
    let max_right_gap = right_gap.iter().copied().fold(0.0, f64::max);
    let max_left_gap = left_gap.iter().copied().fold(0.0, f64::max);
    Ok(BoundaryReport { right_gap, left_gap, max_right_gap, max_left_gap, flagged: max_right_gap > tol || max_left_gap > tol })
}

/// Least-squares slope of ln y against ln x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(v: f64, n: usize) -> FieldGrid {
        let ax = symmetric_axis(1.0, 2.0 / (n - 1) as f64);
        FieldGrid::from_fn(ax.clone(), ax, |_, _| Ok(v), Execution::Sequential).unwrap()
    }

    #[test]
    fn constants_have_zero_residual() {
        let r = pde_residual(&constant(0.0, 11), 1.0, Execution::Sequential).unwrap();
        assert_eq!(residual_stats(&r).max_abs, 0.0);
        let r = pde_residual(&constant(1.7, 11), 1.0, Execution::Sequential).unwrap();
        assert!(residual_stats(&r).max_abs < 1e-12);
    }

    #[test]
    fn stencils_are_exact_on_low_degree_polynomials() {
        // u = x^3 + t^4: mirror term 6 u(x,t) u(-x,-t) 3x^2
        let ax = symmetric_axis(1.0, 0.1);
        let g = FieldGrid::from_fn(ax.clone(), ax, |x, t| Ok(x.powi(3) + t.powi(4)), Execution::Sequential).unwrap();
        let r = pde_residual(&g, 1.0, Execution::Sequential).unwrap();
        for (it, t) in r.t_values.iter().enumerate() {
            for (ix, x) in r.x_values.iter().enumerate() {
                let u = x.powi(3) + t.powi(4);
                let m = -x.powi(3) + t.powi(4);
                let want = 4.0 * t.powi(3) + 6.0 * u * m * 3.0 * x * x + 6.0;
                assert!((r.u[it][ix] - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn grid_checks() {
        let g = constant(1.0, 5);
        assert!(matches!(pde_residual(&g, 1.0, Execution::Sequential), Err(Error::GridTooSmall(5))));
        let x = vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.5];
        let t = symmetric_axis(3.0, 1.0);
        let g = FieldGrid::new(x, t.clone(), vec![vec![0.0; 7]; 7]).unwrap();
        assert!(matches!(pde_residual(&g, 1.0, Execution::Sequential), Err(Error::AsymmetricGrid)));
        assert!(FieldGrid::new(t.clone(), t, vec![vec![0.0; 6]; 7]).is_err());
    }

    #[test]
    fn mirror_is_an_involution() {
        let ax = symmetric_axis(2.0, 0.5);
        let g = FieldGrid::from_fn(ax.clone(), ax, |x, t| Ok(x * 3.0 + t * t * 0.5 - x * t), Execution::Sequential).unwrap();
        assert_eq!(g.mirrored().mirrored(), g);
        assert_eq!(g.mirror(0, 0), g.u[g.nt() - 1][g.nx() - 1]);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let ax = symmetric_axis(1.0, 0.25);
        let g = FieldGrid::from_fn(ax.clone(), ax, |x, t| Ok((x + 0.1).exp() / 3.0 - t), Execution::Sequential).unwrap();
        let s = g.to_csv();
        let back = FieldGrid::from_csv(&s).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_csv(), s);
    }

    #[test]
    fn boundary_of_constant() {
        let ax = symmetric_axis(10.0, 0.5);
        let g = FieldGrid::from_fn(ax.clone(), ax, |_, _| Ok(2.0), Execution::Sequential).unwrap();
        let r = boundary_check(&g, 2.0, 1e-6).unwrap();
        assert_eq!(r.max_right_gap, 0.0);
        assert_eq!(r.max_left_gap, 2.0);
        assert!(r.flagged);
        assert!(matches!(boundary_check(&g, 0.5, 1e-6), Err(Error::GridTooNarrow(..))));
    }

    #[test]
    fn slope_of_power_law() {
        let xs: Vec<f64> = (0..20).map(|i| 10f64.powf(i as f64 / 5.0)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-0.5)).collect();
        assert!((loglog_slope(&xs, &ys) + 0.5).abs() < 1e-12);
    }
}
