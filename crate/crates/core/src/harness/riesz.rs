use serde::{Deserialize, Serialize};

use super::{params, snap, BoundReport};
use crate::error::{domain, Result};
use crate::fracops::{riesz_potential, FracOrder};
use crate::gls::{fundamental_function, nu_builder, PsiFunction};
use crate::gridfn::GridFunctionND;
use crate::modulus::modulus_nd;
use crate::norms::{kappa, orlicz_weighted_norm, weighted_norm, OrliczParams};

/// Which norm of `f` controls the Riesz modulus bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RieszVariant {
    /// `|f|_{alpha,d,p}`.
    Lebesgue,
    /// Weighted Orlicz norm with log power `gamma`, with an extra
    /// `|ln h|^(gamma/p)` factor; needs `h < 1/e`.
    Orlicz { gamma: f64 },
}

fn sorted_windows(f: &GridFunctionND, h_values: &[f64]) -> Vec<f64> {
    let mut hs: Vec<f64> = h_values.iter().map(|&h| snap(&f.axes()[0], h)).collect();
    hs.sort_by(f64::total_cmp);
    hs.dedup();
    hs
}

fn check_log_range(hs: &[f64]) -> Result<()> {
    match hs.iter().find(|&&h| !(h < (-1.0f64).exp())) {
        Some(h) => Err(domain!("log-modulated bounds need h < 1/e, got {h}")),
        None => Ok(()),
    }
}

/// Checks `omega(R_alpha f, h) <= C ((p-1)/(alpha p - d))^(1-1/p) h^(alpha-d/p) N`
/// with `N` the weighted Lebesgue or Orlicz norm.
///
/// Each report carries `k_sample = lhs / (bracket h^(alpha-d/p) N)`, the
/// constant the data would require.
pub fn check_riesz_bound(
    f: &GridFunctionND,
    alpha: f64,
    p: f64,
    h_values: &[f64],
    c_proxy: f64,
    variant: RieszVariant,
) -> Result<Vec<BoundReport>> {
    let d = f.dim() as f64;
    FracOrder::riesz(alpha, f.dim())?;
    if !(p > d / alpha) {
        return Err(domain!("Riesz bound needs p > d/alpha = {}, got {p}", d / alpha));
    }
    let potential = riesz_potential(f, alpha)?;
    riesz_bound_on(f, &potential, alpha, p, h_values, c_proxy, variant)
}

pub(crate) fn riesz_bound_on(
    f: &GridFunctionND,
    potential: &GridFunctionND,
    alpha: f64,
    p: f64,
    h_values: &[f64],
    c_proxy: f64,
    variant: RieszVariant,
) -> Result<Vec<BoundReport>> {
    let d = f.dim() as f64;
    if !(p > d / alpha) {
        return Err(domain!("Riesz bound needs p > d/alpha = {}, got {p}", d / alpha));
    }
    if !(c_proxy > 0.0 && c_proxy.is_finite()) {
        return Err(domain!("proxy constant must be positive, got {c_proxy}"));
    }
    let hs = sorted_windows(f, h_values);
    let bracket = ((p - 1.0) / (alpha * p - d)).powf(1.0 - 1.0 / p);
    let (name, norm, gamma) = match variant {
        RieszVariant::Lebesgue => ("riesz-modulus-lebesgue", weighted_norm(f, alpha, p)?, 0.0),
        RieszVariant::Orlicz { gamma } => {
            check_log_range(&hs)?;
            ("riesz-modulus-orlicz", orlicz_weighted_norm(f, alpha, OrliczParams::new(p, gamma)?)?, gamma)
        }
    };
    let mut out = Vec::with_capacity(hs.len());
    for &h in &hs {
        let lhs = modulus_nd(potential, h)?;
        let scale = bracket * h.powf(alpha - d / p) * h.ln().abs().powf(gamma / p) * norm;
        let k = if scale > 0.0 { lhs / scale } else { 0.0 };
        let mut ps = params(&[("alpha", alpha), ("p", p), ("d", d), ("h", h), ("c_proxy", c_proxy), ("norm", norm)]);
        ps.insert("k_sample".into(), k);
        if gamma > 0.0 {
            ps.insert("gamma".into(), gamma);
        }
        out.push(BoundReport::new(name, ps, lhs, c_proxy * scale, ""));
    }
    Ok(out)
}

/// Grand Lebesgue forms of the Riesz modulus bound.
#[derive(Debug, Clone, PartialEq)]
pub enum GlsBound {
    /// `omega <= delta^alpha / phi(nu, delta^d)`, `nu` built from `psi`.
    Lebesgue { psi: PsiFunction, k_r: f64 },
    /// `omega <= h^alpha / phi(zeta, h^d |ln h|^(-gamma))`, `zeta` built
    /// from the Orlicz tabulation `theta`.
    Orlicz { theta: PsiFunction, k_r: f64, gamma: f64 },
    /// `omega <= C h^alpha |ln h|^(-gamma1) / phi(kappa, h^d |ln h|^(-gamma0))`.
    LogLebesgue { kappa: PsiFunction, c: f64, gamma0: f64, gamma1: f64 },
}

pub fn check_gls_bounds(
    f: &GridFunctionND,
    alpha: f64,
    h_values: &[f64],
    bound: &GlsBound,
    p_grid: &[f64],
) -> Result<Vec<BoundReport>> {
    FracOrder::riesz(alpha, f.dim())?;
    let potential = riesz_potential(f, alpha)?;
    gls_bounds_on(f, &potential, alpha, h_values, bound, p_grid)
}

pub(crate) fn gls_bounds_on(
    f: &GridFunctionND,
    potential: &GridFunctionND,
    alpha: f64,
    h_values: &[f64],
    bound: &GlsBound,
    p_grid: &[f64],
) -> Result<Vec<BoundReport>> {
    let d = f.dim();
    let df = d as f64;
    let hs = sorted_windows(f, h_values);
    let (name, psi, numer_c, g0, g1) = match bound {
        GlsBound::Lebesgue { psi, k_r } => ("gls-lebesgue", nu_builder(psi, alpha, d, *k_r)?, 1.0, 0.0, 0.0),
        GlsBound::Orlicz { theta, k_r, gamma } => {
            check_log_range(&hs)?;
            ("gls-orlicz", nu_builder(theta, alpha, d, *k_r)?, 1.0, *gamma, 0.0)
        }
        GlsBound::LogLebesgue { kappa, c, gamma0, gamma1 } => {
            check_log_range(&hs)?;
            if !(*c > 0.0 && c.is_finite()) {
                return Err(domain!("proxy constant must be positive, got {c}"));
            }
            if kappa.support().0 < df / alpha {
                return Err(domain!("kappa support must lie inside (d/alpha, inf)"));
            }
            ("gls-log-lebesgue", kappa.clone(), *c, *gamma0, *gamma1)
        }
    };
    let mut out = Vec::with_capacity(hs.len());
    for &h in &hs {
        let lhs = modulus_nd(potential, h)?;
        let log_h = h.ln().abs();
        let arg = h.powf(df) * if g0 > 0.0 { log_h.powf(-g0) } else { 1.0 };
        let phi = fundamental_function(&psi, arg, p_grid)?;
        let numer = numer_c * h.powf(alpha) * if g1 > 0.0 { log_h.powf(-g1) } else { 1.0 };
        let rhs = if phi.value > 0.0 { numer / phi.value } else { f64::INFINITY };
        let mut ps = params(&[("alpha", alpha), ("d", df), ("h", h), ("phi", phi.value), ("p_spacing", phi.max_spacing)]);
        if let Some(p) = phi.arg_p {
            ps.insert("arg_p".into(), p);
        }
        out.push(BoundReport::new(name, ps, lhs, rhs, "sup over a finite exponent grid"));
    }
    Ok(out)
}

fn tabulate(lower: f64, p_grid: &[f64], term: impl Fn(f64) -> Result<f64>) -> Result<PsiFunction> {
    if let Some(&p) = p_grid.iter().find(|&&p| !(p > lower)) {
        return Err(domain!("exponent {p} must exceed d/alpha = {lower}"));
    }
    let values = p_grid.iter().map(|&p| term(p)).collect::<Result<Vec<_>>>()?;
    PsiFunction::tabulated(lower.max(1.0), f64::INFINITY, p_grid.to_vec(), values)
}

/// `theta(p)`: weighted Orlicz norm of `f` with log power `gamma`, tabulated on `p_grid`.
pub fn theta_psi(f: &GridFunctionND, alpha: f64, gamma: f64, p_grid: &[f64]) -> Result<PsiFunction> {
    FracOrder::riesz(alpha, f.dim())?;
    tabulate(f.dim() as f64 / alpha, p_grid, |p| orlicz_weighted_norm(f, alpha, OrliczParams::new(p, gamma)?))
}

/// `kappa(p)` of `f` with log power `gamma`, tabulated on `p_grid`.
pub fn kappa_psi(f: &GridFunctionND, alpha: f64, gamma: f64, p_grid: &[f64]) -> Result<PsiFunction> {
    FracOrder::riesz(alpha, f.dim())?;
    tabulate(f.dim() as f64 / alpha, p_grid, |p| kappa(f, p, alpha, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gls::{default_p_grid, psi_from_function};
    use crate::gridfn::{ClosedFormFunction, Grid1D};
    use crate::harness::dyadic;

    fn indicator() -> GridFunctionND {
        let grid = Grid1D::with_cells(-2.0, 2.0, 2048).unwrap();
        ClosedFormFunction::Indicator { c: -1.0, d: 1.0 }.sample(grid).unwrap().into()
    }

    #[test]
    fn zero_function_trivial() {
        let g: GridFunctionND = crate::gridfn::GridFunction::zeros(Grid1D::new(-1.0, 1.0, 129).unwrap()).into();
        let r = check_riesz_bound(&g, 0.75, 2.0, &dyadic(2, 5), 1.0, RieszVariant::Lebesgue).unwrap();
        assert!(r.iter().all(|r| r.pass && r.lhs == 0.0));
        assert!(check_riesz_bound(&g, 0.75, 1.2, &[0.25], 1.0, RieszVariant::Lebesgue).is_err());
    }

    #[test]
    fn degenerate_psi_collapses_to_lebesgue_form() {
        let f = indicator();
        let alpha = 0.75;
        let r = 2.0;
        let hs = dyadic(3, 8);
        let lebesgue = check_riesz_bound(&f, alpha, r, &hs, 1.0, RieszVariant::Lebesgue).unwrap();
        let w = weighted_norm(&f, alpha, r).unwrap();
        let psi = PsiFunction::degenerate(4.0 / 3.0, f64::INFINITY, r, w).unwrap();
        let grid = default_p_grid(4.0 / 3.0, f64::INFINITY, 16);
        let gls = check_gls_bounds(&f, alpha, &hs, &GlsBound::Lebesgue { psi, k_r: 1.0 }, &grid).unwrap();
        for (a, b) in lebesgue.iter().zip(&gls) {
            assert!((a.rhs / b.rhs - 1.0).abs() < 1e-12, "{} vs {}", a.rhs, b.rhs);
            assert_eq!(a.lhs, b.lhs);
        }
    }

    #[test]
    fn gls_ratio_bounded_for_indicator() {
        let f = indicator();
        let alpha = 0.75;
        let grid = default_p_grid(4.0 / 3.0, f64::INFINITY, 32);
        let psi = psi_from_function(&f, alpha, &grid).unwrap();
        let r = check_gls_bounds(&f, alpha, &dyadic(3, 9), &GlsBound::Lebesgue { psi, k_r: 1.0 }, &grid).unwrap();
        let hi = r.iter().map(|r| r.ratio).fold(0.0, f64::max);
        let lo = r.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        assert!(hi / lo < 1.25, "{lo} .. {hi}");
    }

    #[test]
    fn log_variants_need_small_h() {
        let f = indicator();
        let grid = default_p_grid(4.0 / 3.0, f64::INFINITY, 8);
        let theta = theta_psi(&f, 0.75, 1.0, &grid).unwrap();
        let b = GlsBound::Orlicz { theta, k_r: 1.0, gamma: 1.0 };
        assert!(check_gls_bounds(&f, 0.75, &[0.5], &b, &grid).is_err());
        let r = check_gls_bounds(&f, 0.75, &dyadic(3, 6), &b, &grid).unwrap();
        assert!(r.iter().all(|r| r.rhs.is_finite() && r.rhs > 0.0));
        let kap = kappa_psi(&f, 0.75, 0.5, &grid).unwrap();
        let b = GlsBound::LogLebesgue { kappa: kap, c: 1.0, gamma0: 0.5, gamma1: 0.5 };
        let r = check_gls_bounds(&f, 0.75, &dyadic(3, 6), &b, &grid).unwrap();
        assert_eq!(r.len(), 4);
        let r = check_riesz_bound(&f, 0.75, 2.0, &dyadic(3, 6), 1.0, RieszVariant::Orlicz { gamma: 1.0 }).unwrap();
        assert!(r.iter().all(|r| r.param("k_sample").unwrap() > 0.0));
    }
}
