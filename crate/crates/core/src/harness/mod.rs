//! Checks of modulus-of-continuity bounds against sampled data.
//!
//! Each check produces [`BoundReport`]s holding both sides of an
//! inequality. Absolute constants that are only known to exist enter as
//! explicit proxy arguments, and the empirical ratio is always reported so a
//! loose proxy cannot hide a failure.

mod derivative;
mod integral;
pub mod random;
pub(crate) mod riesz;

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridfn::{fmt_f64, Grid1D, GridFunction, GridFunctionND};
use crate::modulus::{modulus, modulus_nd};

pub use derivative::{check_derivative_bound, lower_bound_k_d, KdCurve, KdPoint};
pub use integral::{check_integral_bound, check_scaling, IntegralVariant};
pub use riesz::{
    check_gls_bounds, check_riesz_bound, kappa_psi, theta_psi, GlsBound, RieszVariant,
};

/// Slack allowed on `lhs / rhs <= 1` for floating-point noise.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// One inequality check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
    pub notes: String,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, params: BTreeMap<String, f64>, lhs: f64, rhs: f64, notes: impl Into<String>) -> Self {
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self {
            name: name.into(),
            params,
            lhs,
            rhs,
            ratio,
            pass: ratio <= 1.0 + BOUND_TOLERANCE,
            notes: notes.into(),
        }
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    /// The proxy constant that would make this report hold with equality,
    /// for a bound whose right side is proportional to `proxy`.
    pub fn calibrated_proxy(&self, proxy: f64) -> f64 {
        proxy * self.ratio
    }
}

pub(crate) fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// CSV columns of [`write_reports_csv`].
pub const REPORT_CSV_HEADER: [&str; 11] = ["name", "alpha", "p", "beta", "d", "h", "lambda", "lhs", "rhs", "ratio", "pass"];

/// Writes reports as CSV; parameters a report does not carry are left empty.
pub fn write_reports_csv<W: Write>(reports: &[BoundReport], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(REPORT_CSV_HEADER)?;
    for r in reports {
        let opt = |k: &str| r.param(k).map(fmt_f64).unwrap_or_default();
        wtr.write_record([
            r.name.clone(),
            opt("alpha"),
            opt("p"),
            opt("beta"),
            opt("d"),
            opt("h"),
            opt("lambda"),
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            fmt_f64(r.ratio),
            r.pass.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Least-squares fit of `ln omega` against `ln h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub h_range: (f64, f64),
}

/// Minimum number of points for [`fit_loglog`].
pub const MIN_FIT_POINTS: usize = 4;

pub fn fit_loglog(hs: &[f64], omegas: &[f64]) -> Result<ExponentFit> {
    if hs.len() != omegas.len() || hs.len() < MIN_FIT_POINTS {
        return Err(Error::DegenerateFit(format!("need at least {MIN_FIT_POINTS} (h, omega) pairs, got {}", hs.len())));
    }
    if let Some(i) = omegas.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(Error::DegenerateFit(format!("modulus {} at h = {} is not positive", omegas[i], hs[i])));
    }
    if hs.iter().any(|&h| !(h > 0.0)) {
        return Err(Error::DegenerateFit("h values must be positive".into()));
    }
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = omegas.iter().map(|w| w.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all h values coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    let lo = hs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = hs.iter().copied().fold(0.0, f64::max);
    Ok(ExponentFit { slope, intercept, r_squared, h_range: (lo, hi) })
}

/// Fitted exponent of `h -> omega(g, h)`.
pub fn estimate_exponent(g: &GridFunction, h_values: &[f64]) -> Result<ExponentFit> {
    let omegas = h_values.iter().map(|&h| modulus(g, h)).collect::<Result<Vec<_>>>()?;
    fit_loglog(h_values, &omegas)
}

pub fn estimate_exponent_nd(g: &GridFunctionND, h_values: &[f64]) -> Result<ExponentFit> {
    let omegas = h_values.iter().map(|&h| modulus_nd(g, h)).collect::<Result<Vec<_>>>()?;
    fit_loglog(h_values, &omegas)
}

/// `2^-k` for `k = k_hi down to k_lo` (increasing `h`).
pub fn dyadic(k_lo: i32, k_hi: i32) -> Vec<f64> {
    (k_lo..=k_hi).rev().map(|k| 2f64.powi(-k)).collect()
}

/// Snaps `h` down to a whole number of cells, keeping it positive.
pub(crate) fn snap(grid: &Grid1D, h: f64) -> f64 {
    grid.cells_within(h).max(1) as f64 * grid.step()
}

/// Grid-aligned, roughly geometric window sizes from one cell up to `h_max`,
/// `per_octave` per doubling.
pub(crate) fn aligned_ladder(grid: &Grid1D, h_max: f64, per_octave: usize) -> Vec<f64> {
    let max_cells = grid.cells_within(h_max).max(1);
    let mut cells: Vec<usize> = Vec::new();
    let mut k = 0usize;
    loop {
        let c = 2f64.powf(k as f64 / per_octave as f64).round() as usize;
        if c > max_cells {
            break;
        }
        if cells.last() != Some(&c) {
            cells.push(c);
        }
        k += 1;
    }
    if cells.last() != Some(&max_cells) {
        cells.push(max_cells);
    }
    cells.into_iter().map(|c| c as f64 * grid.step()).collect()
}
