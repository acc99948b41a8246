//! Grand Lebesgue space norms and fundamental functions.
//!
//! The supremum over `p` in both the norm and the fundamental function is
//! taken over a finite grid of exponents, so every value returned here is a
//! lower bound of the true supremum. The largest gap in the grid is
//! reported alongside.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::gridfn::Sampled;
use crate::norms::{lp_norm, weighted_norm};

/// Number of exponents in [`default_p_grid`].
pub const DEFAULT_P_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Constant(f64),
    /// Finite only at `p = r`.
    Degenerate { r: f64, value: f64 },
    /// Linear interpolation, flat beyond the tabulated range.
    Tabulated { p_grid: Vec<f64>, values: Vec<f64> },
    /// `base(p) * k_r * ((p - 1) / (alpha p - d))^(1 - 1/p)`.
    Scaled { base: Box<PsiFunction>, alpha: f64, d: f64, k_r: f64 },
}

/// A psi-function: continuous and bounded away from zero on its open
/// support `(A, B)`, infinite outside.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiFunction {
    lower: f64,
    upper: f64,
    shape: Shape,
}

/// JSON form `{A, B, p_grid, values}`; `B = null` encodes `B = inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiTable {
    #[serde(rename = "A")]
    pub lower: f64,
    #[serde(rename = "B")]
    pub upper: Option<f64>,
    pub p_grid: Vec<f64>,
    pub values: Vec<f64>,
}

fn check_support(lower: f64, upper: f64) -> Result<()> {
    if !(lower >= 1.0 && lower < upper && lower.is_finite()) || upper.is_nan() {
        return Err(Error::Construction(format!("psi support must satisfy 1 <= A < B <= inf, got ({lower}, {upper})")));
    }
    Ok(())
}

impl PsiFunction {
    pub fn constant(lower: f64, upper: f64, c: f64) -> Result<Self> {
        check_support(lower, upper)?;
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Construction(format!("constant psi must be positive, got {c}")));
        }
        Ok(Self { lower, upper, shape: Shape::Constant(c) })
    }

    /// `psi_(r)`: equal to `value` at `p = r` and infinite elsewhere.
    pub fn degenerate(lower: f64, upper: f64, r: f64, value: f64) -> Result<Self> {
        check_support(lower, upper)?;
        if !(r > lower && r < upper) {
            return Err(Error::Construction(format!("r = {r} outside ({lower}, {upper})")));
        }
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Construction(format!("degenerate psi value must be positive, got {value}")));
        }
        Ok(Self { lower, upper, shape: Shape::Degenerate { r, value } })
    }

    pub fn tabulated(lower: f64, upper: f64, p_grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_support(lower, upper)?;
        if p_grid.is_empty() || p_grid.len() != values.len() {
            return Err(Error::Construction("psi table needs matching non-empty columns".into()));
        }
        if p_grid.windows(2).any(|w| w[0] >= w[1]) || p_grid.iter().any(|&p| !(p > lower && p < upper)) {
            return Err(Error::Construction("psi grid must be increasing and inside the support".into()));
        }
        if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::Construction("psi values must be finite with positive infimum".into()));
        }
        Ok(Self { lower, upper, shape: Shape::Tabulated { p_grid, values } })
    }

    pub fn from_table(t: PsiTable) -> Result<Self> {
        Self::tabulated(t.lower, t.upper.unwrap_or(f64::INFINITY), t.p_grid, t.values)
    }

    /// Tabulates this function on `p_grid`.
    pub fn to_table(&self, p_grid: &[f64]) -> Result<PsiTable> {
        self.check_grid(p_grid)?;
        Ok(PsiTable {
            lower: self.lower,
            upper: self.upper.is_finite().then_some(self.upper),
            p_grid: p_grid.to_vec(),
            values: p_grid.iter().map(|&p| self.eval(p)).collect(),
        })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    /// Exponents where the function is finite although they may be absent
    /// from a caller's grid.
    fn atoms(&self) -> Option<f64> {
        match &self.shape {
            Shape::Degenerate { r, .. } => Some(*r),
            Shape::Scaled { base, .. } => base.atoms(),
            _ => None,
        }
    }

    pub fn eval(&self, p: f64) -> f64 {
        if !(p > self.lower && p < self.upper) {
            return f64::INFINITY;
        }
        match &self.shape {
            Shape::Constant(c) => *c,
            Shape::Degenerate { r, value } => {
                if p == *r {
                    *value
                } else {
                    f64::INFINITY
                }
            }
            Shape::Tabulated { p_grid, values } => {
                let k = p_grid.partition_point(|&q| q < p);
                if k == 0 {
                    values[0]
                } else if k == p_grid.len() {
                    values[k - 1]
                } else if p_grid[k] == p {
                    values[k]
                } else {
                    let t = (p - p_grid[k - 1]) / (p_grid[k] - p_grid[k - 1]);
                    values[k - 1] + t * (values[k] - values[k - 1])
                }
            }
            Shape::Scaled { base, alpha, d, k_r } => {
                base.eval(p) * k_r * ((p - 1.0) / (alpha * p - d)).powf(1.0 - 1.0 / p)
            }
        }
    }

    fn check_grid(&self, p_grid: &[f64]) -> Result<()> {
        if p_grid.is_empty() {
            return Err(domain!("exponent grid is empty"));
        }
        if let Some(&p) = p_grid.iter().find(|&&p| !(p > self.lower && p < self.upper)) {
            return Err(domain!("exponent {p} lies outside the support ({}, {})", self.lower, self.upper));
        }
        Ok(())
    }

    /// The grid itself plus any atom of the function.
    fn sup_points(&self, p_grid: &[f64]) -> Vec<f64> {
        let mut pts = p_grid.to_vec();
        if let Some(r) = self.atoms() {
            if !pts.contains(&r) {
                pts.push(r);
            }
        }
        pts.sort_by(f64::total_cmp);
        pts
    }
}

/// A supremum evaluated on a finite exponent grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSup {
    /// Lower bound of the supremum.
    pub value: f64,
    /// Exponent attaining `value`; `None` when every term vanished.
    pub arg_p: Option<f64>,
    /// Largest gap between consecutive grid exponents.
    pub max_spacing: f64,
}

fn grid_sup(points: &[f64], term: impl Fn(f64) -> Result<f64>) -> Result<GridSup> {
    let mut best = GridSup { value: 0.0, arg_p: None, max_spacing: 0.0 };
    for &p in points {
        let v = term(p)?;
        if v > best.value || best.arg_p.is_none() && v > 0.0 {
            best.value = v;
            best.arg_p = Some(p);
        }
    }
    best.max_spacing = points.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    Ok(best)
}

/// `||f||_{G(psi)} = sup_p |f|_p / psi(p)` over `p_grid`.
pub fn gls_norm<S: Sampled + ?Sized>(f: &S, psi: &PsiFunction, p_grid: &[f64]) -> Result<GridSup> {
    psi.check_grid(p_grid)?;
    grid_sup(&psi.sup_points(p_grid), |p| {
        let w = psi.eval(p);
        if w.is_infinite() {
            Ok(0.0)
        } else {
            Ok(lp_norm(f, p)? / w)
        }
    })
}

/// `phi(G(psi), delta) = sup_p delta^(1/p) / psi(p)` over `p_grid`.
pub fn fundamental_function(psi: &PsiFunction, delta: f64, p_grid: &[f64]) -> Result<GridSup> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(domain!("fundamental function needs delta > 0, got {delta}"));
    }
    psi.check_grid(p_grid)?;
    grid_sup(&psi.sup_points(p_grid), |p| Ok(delta.powf(1.0 / p) / psi.eval(p)))
}

/// `psi(p) = |f|_{alpha,d,p}` tabulated on `p_grid`, support `(d/alpha, inf)`.
pub fn psi_from_function<S: Sampled + ?Sized>(f: &S, alpha: f64, p_grid: &[f64]) -> Result<PsiFunction> {
    let d = f.dim() as f64;
    if !(alpha > 0.0 && alpha < d) {
        return Err(domain!("need 0 < alpha < {d}, got {alpha}"));
    }
    let lower = d / alpha;
    if let Some(&p) = p_grid.iter().find(|&&p| !(p > lower)) {
        return Err(domain!("exponent {p} must exceed d/alpha = {lower}"));
    }
    let values = p_grid.iter().map(|&p| weighted_norm(f, alpha, p)).collect::<Result<Vec<_>>>()?;
    PsiFunction::tabulated(lower.max(1.0), f64::INFINITY, p_grid.to_vec(), values)
}

/// `nu(p) = psi(p) * K_R * ((p - 1) / (alpha p - d))^(1 - 1/p)`.
///
/// `k_r_proxy` stands in for the optimal Riesz constant `K_R(alpha, p)`,
/// which is only known up to dimension-dependent factors.
pub fn nu_builder(psi: &PsiFunction, alpha: f64, d: usize, k_r_proxy: f64) -> Result<PsiFunction> {
    let df = d as f64;
    if !(alpha > 0.0 && alpha < df) {
        return Err(domain!("need 0 < alpha < {d}, got {alpha}"));
    }
    if !(k_r_proxy > 0.0 && k_r_proxy.is_finite()) {
        return Err(domain!("K_R proxy must be positive, got {k_r_proxy}"));
    }
    if psi.lower < df / alpha {
        return Err(domain!("psi support ({}, {}) must lie inside (d/alpha, inf) = ({}, inf)", psi.lower, psi.upper, df / alpha));
    }
    Ok(PsiFunction {
        lower: psi.lower,
        upper: psi.upper,
        shape: Shape::Scaled { base: Box::new(psi.clone()), alpha, d: df, k_r: k_r_proxy },
    })
}

/// `count` log-spaced exponents strictly inside `(lower, upper)`. An
/// infinite `upper` is replaced by `max(64 lower, lower + 32)`.
pub fn default_p_grid(lower: f64, upper: f64, count: usize) -> Vec<f64> {
    let hi_end = if upper.is_finite() { upper } else { (64.0 * lower).max(lower + 32.0) };
    let lo = lower + 1e-3 * (hi_end - lower);
    let hi = hi_end - 1e-3 * (hi_end - lower);
    if count <= 1 {
        return vec![(lo * hi).sqrt()];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..count).map(|k| (l0 + (l1 - l0) * k as f64 / (count - 1) as f64).exp()).collect()
}
