//! Scalar functionals: Lebesgue norms, the windowed mass `Delta_p`, the
//! constant `Z(alpha, p)`, the weighted mixed norm, the Young-Orlicz
//! function with its Luxemburg gauge, and the logarithmic `kappa` functional.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fracops::weighted_l1;
use crate::gridfn::{GridFunction, Sampled};

/// Distance from the pole `alpha p = 1` below which `z_constant` reports a range error.
pub const Z_POLE_GUARD: f64 = 1e-12;

/// Relative bracket width at which the Luxemburg bisection stops.
pub const LUXEMBURG_REL_WIDTH: f64 = 1e-10;

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(domain!("Lebesgue exponent must satisfy 1 <= p < inf, got {p}"));
    }
    Ok(())
}

fn check_riesz_alpha(alpha: f64, d: usize) -> Result<()> {
    if !(alpha > 0.0 && alpha < d as f64) {
        return Err(domain!("need 0 < alpha < {d}, got {alpha}"));
    }
    Ok(())
}

/// `(int |f|^p)^(1/p)` by the sample quadrature.
pub fn lp_norm<S: Sampled + ?Sized>(f: &S, p: f64) -> Result<f64> {
    check_p(p)?;
    let s: f64 = f.quad_nodes().iter().map(|q| q.weight * q.value.abs().powf(p)).sum();
    Ok(s.powf(1.0 / p))
}

/// `Z(alpha, p) = ((p - 1) / (alpha p - 1))^(1 - 1/p)`, defined for `p > 1/alpha`.
pub fn z_constant(alpha: f64, p: f64) -> Result<f64> {
    if !(alpha > 0.0 && p.is_finite() && alpha * p > 1.0) {
        return Err(domain!("Z(alpha, p) needs p > 1/alpha, got alpha = {alpha}, p = {p}"));
    }
    let gap = alpha * p - 1.0;
    if gap < Z_POLE_GUARD {
        return Err(Error::Range(format!("Z({alpha}, {p}) is too close to the pole p = 1/alpha")));
    }
    Ok(((p - 1.0) / gap).powf(1.0 - 1.0 / p))
}

/// `Delta_p(f, h)`: the largest `(int_I |f|^p)^(1/p)` over intervals `I` of
/// length at most `h` whose ends are grid points, with `f` zero to the left
/// of the grid. Intervals are taken unsigned, so `delta < 0` is `[x + delta, x]`.
pub fn delta_p(f: &GridFunction, h: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(h > 0.0) {
        return Err(domain!("Delta_p needs h > 0, got {h}"));
    }
    let prefix = lp_prefix(f, p);
    let m = f.grid().cells_within(h);
    Ok(max_window(&prefix, m).powf(1.0 / p))
}

/// Cumulative trapezoid integrals of `|f|^p`.
fn lp_prefix(f: &GridFunction, p: f64) -> Vec<f64> {
    let step = f.grid().step();
    let s = f.samples();
    let mut prefix = Vec::with_capacity(s.len());
    prefix.push(0.0);
    let mut acc = 0.0;
    for w in s.windows(2) {
        acc += 0.5 * (w[0].abs().powf(p) + w[1].abs().powf(p)) * step;
        prefix.push(acc);
    }
    prefix
}

fn max_window(prefix: &[f64], cells: usize) -> f64 {
    if cells == 0 {
        return 0.0;
    }
    let m = cells.min(prefix.len() - 1);
    (0..prefix.len() - m).map(|k| prefix[k + m] - prefix[k]).fold(0.0, f64::max)
}

/// `Delta_p(f, h)` for many `h`, sharing one prefix-sum pass.
pub fn delta_p_many(f: &GridFunction, hs: &[f64], p: f64) -> Result<Vec<f64>> {
    check_p(p)?;
    let prefix = lp_prefix(f, p);
    hs.iter()
        .map(|&h| {
            if !(h > 0.0) {
                return Err(domain!("Delta_p needs h > 0, got {h}"));
            }
            Ok(max_window(&prefix, f.grid().cells_within(h)).powf(1.0 / p))
        })
        .collect()
}

/// `|f|_{alpha,d,p} = max{ int (1+|y|)^(alpha-d) |f|, |f|_p }`.
pub fn weighted_norm<S: Sampled + ?Sized>(f: &S, alpha: f64, p: f64) -> Result<f64> {
    let d = f.dim();
    check_riesz_alpha(alpha, d)?;
    if !(p > d as f64 / alpha) {
        return Err(domain!("weighted norm needs p > d/alpha = {}, got {p}", d as f64 / alpha));
    }
    Ok(weighted_l1(f, alpha).max(lp_norm(f, p)?))
}

/// Parameters of the Young-Orlicz function `Phi_{p,gamma}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrliczParams {
    p: f64,
    gamma: f64,
}

impl OrliczParams {
    pub fn new(p: f64, gamma: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(domain!("Orlicz exponent must exceed 1, got {p}"));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(domain!("Orlicz log power must be positive, got {gamma}"));
        }
        Ok(Self { p, gamma })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// `Phi_{p,gamma}(u)`: `|u|^p (ln|u|)^gamma` for `|u| > e`, `e^(p-2) u^2` otherwise.
pub fn young_orlicz(u: f64, params: OrliczParams) -> f64 {
    let a = u.abs();
    if a > E {
        a.powf(params.p) * a.ln().powf(params.gamma)
    } else {
        (params.p - 2.0).exp() * a * a
    }
}

fn orlicz_modular(values: &[(f64, f64)], lambda: f64, params: OrliczParams) -> f64 {
    values.iter().map(|&(w, v)| w * young_orlicz(v / lambda, params)).sum()
}

/// Luxemburg norm `inf{ lambda > 0 : int Phi(f / lambda) <= 1 }` by bisection.
pub fn luxemburg_norm<S: Sampled + ?Sized>(f: &S, params: OrliczParams) -> Result<f64> {
    let values: Vec<(f64, f64)> = f
        .quad_nodes()
        .iter()
        .filter(|q| q.value != 0.0 && q.weight > 0.0)
        .map(|q| (q.weight, q.value))
        .collect();
    if values.is_empty() {
        return Ok(0.0);
    }
    let modular = |lambda: f64| orlicz_modular(&values, lambda, params);
    let start = values.iter().fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
    let (mut lo, mut hi) = (start, start);
    if modular(start) > 1.0 {
        while modular(hi) > 1.0 {
            lo = hi;
            hi *= 2.0;
        }
    } else {
        while modular(lo) <= 1.0 {
            hi = lo;
            lo *= 0.5;
        }
    }
    // modular(lo) > 1 >= modular(hi)
    while hi - lo > LUXEMBURG_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if modular(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// `||f||_{L(Phi)} + int (1+|y|)^(alpha-d) |f|`.
pub fn orlicz_weighted_norm<S: Sampled + ?Sized>(f: &S, alpha: f64, params: OrliczParams) -> Result<f64> {
    check_riesz_alpha(alpha, f.dim())?;
    Ok(luxemburg_norm(f, params)? + weighted_l1(f, alpha))
}

/// `ln_+ z = max(1, ln z)`, with `ln_+ 0 = 1`.
pub fn ln_plus(z: f64) -> f64 {
    if z > E {
        z.ln()
    } else {
        1.0
    }
}

/// `kappa(p) = max{ int (1+|y|)^(alpha-d) |f|, kappa_0(p) }` with
/// `kappa_0(p)^p = int |f|^p (ln_+ |f|)^(gamma p)`.
pub fn kappa<S: Sampled + ?Sized>(f: &S, p: f64, alpha: f64, gamma: f64) -> Result<f64> {
    check_p(p)?;
    check_riesz_alpha(alpha, f.dim())?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(domain!("kappa needs gamma >= 0, got {gamma}"));
    }
    let s: f64 = f
        .quad_nodes()
        .iter()
        .map(|q| {
            let a = q.value.abs();
            q.weight * a.powf(p) * ln_plus(a).powf(gamma * p)
        })
        .sum();
    Ok(weighted_l1(f, alpha).max(s.powf(1.0 / p)))
}
