//! Independent reference computations used to check the numerical routines.
//!
//! Nothing here shares code with the production paths it checks: the
//! modulus is a quadratic pair scan, Riesz images of indicators and the
//! fractional-derivative ratios of power functions are closed forms.

use crate::error::Result;
use crate::specfun::{beta, gamma};

/// `max |s[i] - s[j]|` over all pairs with `|x_i - x_j| <= h`, by direct scan.
pub fn modulus_pair_scan(samples: &[f64], step: f64, h: f64) -> f64 {
    let mut best = 0.0f64;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            if (j - i) as f64 * step > h * (1.0 + 1e-12) {
                break;
            }
            best = best.max((samples[i] - samples[j]).abs());
        }
    }
    best
}

/// `int_c^d |x - y|^(alpha - 1) dy`, the one-dimensional Riesz potential of
/// the indicator of `[c, d]`.
pub fn riesz_indicator_1d(x: f64, c: f64, d: f64, alpha: f64) -> f64 {
    let prim = |u: f64| u.signum() * u.abs().powf(alpha) / alpha;
    // antiderivative in y of |x - y|^(alpha-1) is -prim(x - y)
    prim(x - c) - prim(x - d)
}

/// Ratios `omega(D^alpha g, h) / int_0^h omega(g, t) t^(-1-alpha) dt` for
/// `g = x^beta`, under the readings of the derivative normalisation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DerivativeRatio {
    /// `(1 + beta - alpha)(beta - alpha) B(beta + 1, 1 - alpha)`: the ratio
    /// for the derivative without the `1/Gamma(1-alpha)` factor, as a Beta
    /// expression.
    pub beta_form: f64,
    /// `Gamma(1-alpha) Gamma(1+beta) / Gamma(beta-alpha)`: the same quantity
    /// after Gamma recursion.
    pub unnormalized: f64,
    /// `Gamma(1+beta) / Gamma(beta-alpha)`: ratio for the derivative
    /// including the `1/Gamma(1-alpha)` factor.
    pub normalized: f64,
    /// `Gamma(1-alpha)^2 Gamma(1+beta) / Gamma(beta-alpha)`: the squared
    /// prefactor variant.
    pub squared_prefactor: f64,
}

pub fn derivative_ratio(alpha: f64, beta_exp: f64) -> Result<DerivativeRatio> {
    let g1a = gamma(1.0 - alpha)?;
    let core = gamma(1.0 + beta_exp)? / gamma(beta_exp - alpha)?;
    Ok(DerivativeRatio {
        beta_form: (1.0 + beta_exp - alpha) * (beta_exp - alpha) * beta(beta_exp + 1.0, 1.0 - alpha)?,
        unnormalized: g1a * core,
        normalized: core,
        squared_prefactor: g1a * g1a * core,
    })
}
