use serde::Serialize;

use super::{aligned_ladder, params, snap, BoundReport};
use crate::error::{domain, Result};
use crate::fracops::{frac_derivative, FracOrder};
use crate::gridfn::{ClosedFormFunction, Grid1D, GridFunction};
use crate::modulus::{modulus, modulus_profile, omega_integral};
use crate::oracle::{derivative_ratio, DerivativeRatio};
use crate::specfun::gamma;

/// Profile points per doubling of `h` used for the modulus integral.
const PROFILE_PER_OCTAVE: usize = 8;

/// Checks `omega(D^alpha f, h) <= c_abs Gamma(1-alpha)/alpha int_0^h omega(f,t) t^(-1-alpha) dt`.
///
/// Each `h` is snapped down to a whole number of cells. Besides the bound,
/// every report carries `k_sample = lhs / integral` (derivative including
/// `1/Gamma(1-alpha)`) and `k_sample_unnormalized = Gamma(1-alpha) k_sample`.
pub fn check_derivative_bound(f: &GridFunction, alpha: f64, h_values: &[f64], c_abs: f64) -> Result<Vec<BoundReport>> {
    FracOrder::rl(alpha)?;
    if !(c_abs > 0.0 && c_abs.is_finite()) {
        return Err(domain!("absolute constant must be positive, got {c_abs}"));
    }
    if f.samples()[0] != 0.0 {
        return Err(domain!("derivative bound needs f(0) = 0, got {}", f.samples()[0]));
    }
    if h_values.is_empty() {
        return Err(domain!("no h values supplied"));
    }
    let grid = *f.grid();
    let mut hs: Vec<f64> = h_values.iter().map(|&h| snap(&grid, h)).collect();
    hs.sort_by(f64::total_cmp);
    hs.dedup();

    let h_max = *hs.last().unwrap();
    let mut ladder = aligned_ladder(&grid, h_max, PROFILE_PER_OCTAVE);
    ladder.extend_from_slice(&hs);
    let profile = modulus_profile(f, &ladder)?;
    let deriv = frac_derivative(f, alpha)?;
    let g1a = gamma(1.0 - alpha)?;
    let constant = c_abs * g1a / alpha;

    let mut out = Vec::with_capacity(hs.len());
    for &h in &hs {
        let lhs = modulus(&deriv, h)?;
        let integral = omega_integral(&profile, alpha, h)?;
        let mut ps = params(&[("alpha", alpha), ("h", h), ("c_abs", c_abs), ("integral", integral)]);
        if integral.is_infinite() {
            out.push(BoundReport::new("derivative-modulus", ps, lhs, f64::INFINITY, "skipped: modulus integral diverges"));
            continue;
        }
        let k = if integral > 0.0 { lhs / integral } else { 0.0 };
        ps.insert("k_sample".into(), k);
        ps.insert("k_sample_unnormalized".into(), k * g1a);
        out.push(BoundReport::new("derivative-modulus", ps, lhs, constant * integral, ""));
    }
    Ok(out)
}

/// Measured and closed-form derivative ratios for `g = x^beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KdPoint {
    pub beta: f64,
    /// Largest `k_sample` over the supplied `h` values.
    pub measured: f64,
    pub closed: DerivativeRatio,
    /// `measured / closed.normalized - 1`.
    pub rel_err: f64,
}

/// The curve `beta -> ratio` whose supremum bounds the optimal derivative
/// constant from below.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KdCurve {
    pub alpha: f64,
    pub points: Vec<KdPoint>,
    /// Exponent where the measured ratio is largest.
    pub sup_beta: f64,
    pub sup_measured: f64,
    pub gamma_one_minus_alpha: f64,
    /// Supremum of each closed-form reading over the grid.
    pub sup_normalized: f64,
    pub sup_unnormalized: f64,
    pub sup_squared_prefactor: f64,
    /// Whether the measured ratios increase with `beta`.
    pub increasing: bool,
}

pub fn lower_bound_k_d(alpha: f64, beta_grid: &[f64], n: usize, h_values: &[f64]) -> Result<KdCurve> {
    FracOrder::rl(alpha)?;
    if beta_grid.is_empty() {
        return Err(domain!("empty exponent grid"));
    }
    if let Some(b) = beta_grid.iter().find(|&&b| !(b > alpha && b <= 1.0)) {
        return Err(domain!("exponent {b} must lie in (alpha, 1] = ({alpha}, 1]"));
    }
    let mut betas = beta_grid.to_vec();
    betas.sort_by(f64::total_cmp);
    betas.dedup();
    let grid = Grid1D::new(0.0, 1.0, n)?;
    let mut points = Vec::with_capacity(betas.len());
    for &b in &betas {
        let g = ClosedFormFunction::Power { beta: b }.sample(grid)?;
        let reports = check_derivative_bound(&g, alpha, h_values, 1.0)?;
        let measured = reports.iter().filter_map(|r| r.param("k_sample")).fold(0.0, f64::max);
        let closed = derivative_ratio(alpha, b)?;
        points.push(KdPoint { beta: b, measured, closed, rel_err: measured / closed.normalized - 1.0 });
    }
    let best = points.iter().copied().fold(points[0], |m, p| if p.measured > m.measured { p } else { m });
    let sup = |f: fn(&DerivativeRatio) -> f64| points.iter().map(|p| f(&p.closed)).fold(0.0, f64::max);
    Ok(KdCurve {
        alpha,
        sup_beta: best.beta,
        sup_measured: best.measured,
        gamma_one_minus_alpha: gamma(1.0 - alpha)?,
        sup_normalized: sup(|c| c.normalized),
        sup_unnormalized: sup(|c| c.unnormalized),
        sup_squared_prefactor: sup(|c| c.squared_prefactor),
        increasing: points.windows(2).all(|w| w[0].measured < w[1].measured),
        points,
    })
}
