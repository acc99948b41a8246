//! Riemann-Liouville fractional integral and derivative, and the Riesz
//! potential in one and two dimensions.
//!
//! All one-dimensional operators use product integration: the sampled
//! function is replaced by its piecewise-linear interpolant and the kernel
//! `(x - t)^(mu - 1)` is integrated exactly against each linear panel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::gridfn::{ClosedFormFunction, Grid1D, GridFunction, GridFunctionND, Sampled};
use crate::specfun::{beta, gamma};

/// Order of a fractional operator.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct FracOrder(f64);

impl FracOrder {
    /// Order of a one-dimensional Riemann-Liouville operator, `0 < alpha < 1`.
    pub fn rl(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(domain!("Riemann-Liouville order must lie in (0, 1), got {alpha}"));
        }
        Ok(Self(alpha))
    }

    /// Order of a Riesz potential in dimension `d`, `0 < alpha < d`.
    pub fn riesz(alpha: f64, d: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < d as f64) {
            return Err(domain!("Riesz order must lie in (0, {d}), got {alpha}"));
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Offsets at and above this use the binomial series for the panel weights.
const SERIES_FROM: usize = 32;
const SERIES_TERMS: usize = 14;

/// Exact integrals of `u^(mu-1)` against the two hat functions of the unit
/// panel `[k-1, k]`, for `k = 1..=max_k`.
///
/// `near[k-1]` weights the panel end at distance `k - 1` from the
/// evaluation point and `far[k-1]` the end at distance `k`.
#[derive(Debug, Clone)]
pub(crate) struct PanelWeights {
    pub near: Vec<f64>,
    pub far: Vec<f64>,
}

impl PanelWeights {
    pub fn new(mu: f64, max_k: usize) -> Self {
        let mut near = Vec::with_capacity(max_k);
        let mut far = Vec::with_capacity(max_k);
        let mut binom = [0.0; SERIES_TERMS];
        binom[0] = 1.0;
        for j in 1..SERIES_TERMS {
            binom[j] = binom[j - 1] * (mu - 1.0 - (j - 1) as f64) / j as f64;
        }
        for k in 1..=max_k {
            if k < SERIES_FROM {
                let kf = k as f64;
                let km = kf - 1.0;
                let a = (kf.powf(mu) - km.powf(mu)) / mu;
                let b = (kf.powf(mu + 1.0) - km.powf(mu + 1.0)) / (mu + 1.0);
                near.push(kf * a - b);
                far.push(b - km * a);
            } else {
                // u = m + v, v in [0, 1]: expand (1 + v/m)^(mu-1) binomially
                let m = (k - 1) as f64;
                let inv = 1.0 / m;
                let mut s_far = 0.0;
                let mut s_near = 0.0;
                let mut r = 1.0;
                for (j, c) in binom.iter().enumerate() {
                    let jf = j as f64;
                    s_far += c * r / (jf + 2.0);
                    s_near += c * r / ((jf + 1.0) * (jf + 2.0));
                    r *= inv;
                }
                let scale = m.powf(mu - 1.0);
                near.push(scale * s_near);
                far.push(scale * s_far);
            }
        }
        Self { near, far }
    }
}

/// `int_0^{x_i} f(t) (x_i - t)^(mu-1) dt` for every node, without the Gamma factor.
fn left_convolution(f: &GridFunction, mu: f64) -> Vec<f64> {
    let n = f.len();
    let h = f.grid().step();
    let w = PanelWeights::new(mu, n - 1);
    let s = f.samples();
    let scale = h.powf(mu);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for k in 1..=i {
                acc += w.far[k - 1] * s[i - k] + w.near[k - 1] * s[i - k + 1];
            }
            scale * acc
        })
        .collect()
}

fn check_origin(grid: &Grid1D) -> Result<()> {
    if grid.a() != 0.0 {
        return Err(domain!("operator needs a grid starting at 0, got a = {}", grid.a()));
    }
    Ok(())
}

/// Riemann-Liouville fractional integral `I^alpha f` on the grid of `f`.
pub fn frac_integral(f: &GridFunction, alpha: f64) -> Result<GridFunction> {
    let alpha = FracOrder::rl(alpha)?.value();
    check_origin(f.grid())?;
    let g = gamma(alpha)?;
    let out = left_convolution(f, alpha).into_iter().map(|v| v / g).collect();
    GridFunction::new(*f.grid(), out)
}

/// Riemann-Liouville fractional derivative
/// `D^alpha f = (1/Gamma(1-alpha)) d/dx int_0^x f(t) (x-t)^(-alpha) dt`.
///
/// The inner integral uses the same product integration as
/// [`frac_integral`]; the outer derivative is a central difference, second
/// order one-sided at the right end. The value at `x = 0` is set to 0.
pub fn frac_derivative(f: &GridFunction, alpha: f64) -> Result<GridFunction> {
    let alpha = FracOrder::rl(alpha)?.value();
    check_origin(f.grid())?;
    let n = f.len();
    if n < 3 {
        return Err(domain!("fractional derivative needs at least 3 grid points"));
    }
    let h = f.grid().step();
    let j = left_convolution(f, 1.0 - alpha);
    let g = gamma(1.0 - alpha)?;
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (j[i + 1] - j[i - 1]) / (2.0 * h) / g;
    }
    out[n - 1] = (3.0 * j[n - 1] - 4.0 * j[n - 2] + j[n - 3]) / (2.0 * h) / g;
    GridFunction::new(*f.grid(), out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Integral,
    Derivative,
}

/// `coefficient * x^exponent` on `(0, upper)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerImage {
    pub coefficient: f64,
    pub exponent: f64,
    /// Right end of the interval where the formula holds; `None` for all `x > 0`.
    pub upper: Option<f64>,
}

impl PowerImage {
    /// Value at `x`, or `None` where the closed form does not apply.
    pub fn eval(&self, x: f64) -> Option<f64> {
        if x <= 0.0 {
            return None;
        }
        match self.upper {
            Some(u) if x >= u => None,
            _ => Some(self.coefficient * x.powf(self.exponent)),
        }
    }
}

/// Exact fractional image of a closed-form test function.
pub fn frac_image_exact(f: &ClosedFormFunction, alpha: f64, which: Transform) -> Result<PowerImage> {
    let alpha = FracOrder::rl(alpha)?.value();
    f.validate()?;
    match (*f, which) {
        (ClosedFormFunction::Power { beta: b }, Transform::Integral) => Ok(PowerImage {
            coefficient: gamma(b + 1.0)? / gamma(alpha + b + 1.0)?,
            exponent: alpha + b,
            upper: None,
        }),
        (ClosedFormFunction::Power { beta: b }, Transform::Derivative) => {
            if b <= alpha {
                return Err(domain!("derivative of x^{b} needs beta > alpha = {alpha}"));
            }
            Ok(PowerImage {
                coefficient: gamma(b + 1.0)? / gamma(b - alpha + 1.0)?,
                exponent: b - alpha,
                upper: None,
            })
        }
        (ClosedFormFunction::Constant { c }, Transform::Integral) => Ok(PowerImage {
            coefficient: c / gamma(alpha + 1.0)?,
            exponent: alpha,
            upper: None,
        }),
        (ClosedFormFunction::Constant { c }, Transform::Derivative) => Ok(PowerImage {
            coefficient: c / gamma(1.0 - alpha)?,
            exponent: -alpha,
            upper: None,
        }),
        (ClosedFormFunction::SingularPower { beta: b }, Transform::Integral) => Ok(PowerImage {
            coefficient: beta(1.0 - b, alpha)? / gamma(alpha)?,
            exponent: alpha - b,
            upper: Some(1.0),
        }),
        (ClosedFormFunction::SingularPower { beta: b }, Transform::Derivative) => {
            if alpha + b >= 1.0 {
                return Err(domain!("derivative of x^-{b} needs alpha + beta < 1"));
            }
            Ok(PowerImage {
                coefficient: gamma(1.0 - b)? / gamma(1.0 - b - alpha)?,
                exponent: -alpha - b,
                upper: Some(1.0),
            })
        }
        (ClosedFormFunction::Indicator { .. }, _) => {
            Err(domain!("no closed-form fractional image for an indicator"))
        }
    }
}

/// Riesz potential `R_alpha f (x) = int f(y) |x - y|^(alpha - d) dy` at every
/// sample point, with `f` continued by zero outside its box.
pub fn riesz_potential(f: &GridFunctionND, alpha: f64) -> Result<GridFunctionND> {
    let d = f.dim();
    let alpha = FracOrder::riesz(alpha, d)?.value();
    match f.axes() {
        [g] => {
            let out = riesz_1d(*g, f.samples(), alpha);
            GridFunctionND::new(vec![*g], out)
        }
        [gx, gy] => {
            let out = riesz_2d(*gx, *gy, f.samples(), alpha);
            GridFunctionND::new(vec![*gx, *gy], out)
        }
        _ => unreachable!("dimension checked at construction"),
    }
}

fn riesz_1d(g: Grid1D, s: &[f64], alpha: f64) -> Vec<f64> {
    let n = s.len();
    let w = PanelWeights::new(alpha, n - 1);
    let scale = g.step().powf(alpha);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for k in 1..=i {
                acc += w.far[k - 1] * s[i - k] + w.near[k - 1] * s[i - k + 1];
            }
            for k in 1..n - i {
                acc += w.far[k - 1] * s[i + k] + w.near[k - 1] * s[i + k - 1];
            }
            scale * acc
        })
        .collect()
}

/// `int` of `|y|^(alpha-2)` over the rectangle `[-hx/2, hx/2] x [-hy/2, hy/2]`.
pub(crate) fn singular_cell_integral(hx: f64, hy: f64, alpha: f64) -> f64 {
    // each quadrant splits along its diagonal into two right triangles
    let a = 0.5 * hx;
    let b = 0.5 * hy;
    4.0 * (triangle_integral(a, b, alpha) + triangle_integral(b, a, alpha))
}

/// Polar integral of `r^(alpha-2)` over the triangle with legs `a` (along
/// the axis) and `b`: `a^alpha / alpha * int_0^{atan(b/a)} sec^alpha`.
fn triangle_integral(a: f64, b: f64, alpha: f64) -> f64 {
    let theta = (b / a).atan();
    let m = 512;
    let dt = theta / m as f64;
    let f = |t: f64| t.cos().powf(-alpha);
    let mut s = f(0.0) + f(theta);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * dt);
    }
    a.powf(alpha) / alpha * s * dt / 3.0
}

fn riesz_2d(gx: Grid1D, gy: Grid1D, s: &[f64], alpha: f64) -> Vec<f64> {
    let (nx, ny) = (gx.n(), gy.n());
    let (hx, hy) = (gx.step(), gy.step());
    let cell = hx * hy;
    let e = 0.5 * (alpha - 2.0);
    let mut kernel = vec![0.0; nx * ny];
    for di in 0..nx {
        for dj in 0..ny {
            if di + dj > 0 {
                let r2 = (di as f64 * hx).powi(2) + (dj as f64 * hy).powi(2);
                kernel[di * ny + dj] = r2.powf(e) * cell;
            }
        }
    }
    let self_weight = singular_cell_integral(hx, hy, alpha);
    (0..nx * ny)
        .into_par_iter()
        .map(|p| {
            let (i, j) = (p / ny, p % ny);
            let mut acc = 0.0;
            for i2 in 0..nx {
                let row = i.abs_diff(i2) * ny;
                let base = i2 * ny;
                for j2 in 0..ny {
                    acc += s[base + j2] * kernel[row + j.abs_diff(j2)];
                }
            }
            acc + s[p] * self_weight
        })
        .collect()
}

/// Result of the existence test `int (1 + |y|)^(alpha - d) |f(y)| dy < inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExistenceCheck {
    pub finite_value: f64,
    pub ok: bool,
}

/// `int (1 + |y|)^(alpha - d) |f(y)| dy` by quadrature over the sample box.
pub(crate) fn weighted_l1<S: Sampled + ?Sized>(f: &S, alpha: f64) -> f64 {
    let e = alpha - f.dim() as f64;
    f.quad_nodes()
        .iter()
        .map(|q| q.weight * (1.0 + q.radius).powf(e) * q.value.abs())
        .sum()
}

pub fn riesz_existence_check(f: &GridFunctionND, alpha: f64) -> Result<ExistenceCheck> {
    let alpha = FracOrder::riesz(alpha, f.dim())?.value();
    let v = weighted_l1(f, alpha);
    Ok(ExistenceCheck { finite_value: v, ok: v.is_finite() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridfn::sample;
    use std::f64::consts::PI;

    fn unit(n: usize) -> Grid1D {
        Grid1D::new(0.0, 1.0, n).unwrap()
    }

    /// Panel weights by composite Simpson on each panel, an independent route.
    fn simpson_weights(mu: f64, k: usize) -> (f64, f64) {
        let m = 20_000;
        let (lo, hi) = ((k - 1) as f64, k as f64);
        let dx = (hi - lo) / m as f64;
        let mut near = 0.0;
        let mut far = 0.0;
        for i in 0..=m {
            let u = lo + i as f64 * dx;
            let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let ker = u.powf(mu - 1.0);
            near += w * ker * (hi - u);
            far += w * ker * (u - lo);
        }
        (near * dx / 3.0, far * dx / 3.0)
    }

    #[test]
    fn panel_weights_match_quadrature() {
        for mu in [0.25, 0.5, 0.75] {
            let w = PanelWeights::new(mu, 5000);
            for k in [2usize, 10, 31, 32, 33, 100, 4999] {
                let (near, far) = simpson_weights(mu, k);
                assert!(((w.near[k - 1] - near) / near).abs() < 1e-9, "mu={mu} k={k}");
                assert!(((w.far[k - 1] - far) / far).abs() < 1e-9, "mu={mu} k={k}");
            }
            // first panel has an integrable singularity: near = 1/mu - 1/(mu+1), far = 1/(mu+1)
            assert!((w.near[0] - (1.0 / mu - 1.0 / (mu + 1.0))).abs() < 1e-14);
            assert!((w.far[0] - 1.0 / (mu + 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn integral_of_constant() {
        let g = unit(513);
        let one = sample(&ClosedFormFunction::Constant { c: 1.0 }, g).unwrap();
        for alpha in [0.25, 0.5, 0.75] {
            let r = frac_integral(&one, alpha).unwrap();
            assert_eq!(r.samples()[0], 0.0);
            let c = 1.0 / gamma(alpha + 1.0).unwrap();
            for (x, v) in g.points().zip(r.samples()).skip(1) {
                assert!(((v - c * x.powf(alpha)) / v).abs() < 1e-10, "alpha={alpha} x={x}");
            }
        }
        let zero = GridFunction::zeros(g);
        assert!(frac_integral(&zero, 0.5).unwrap().samples().iter().all(|&v| v == 0.0));
        assert!(frac_derivative(&zero, 0.5).unwrap().samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn domain_errors() {
        let f = GridFunction::zeros(unit(9));
        assert!(frac_integral(&f, 1.0).is_err());
        assert!(frac_integral(&f, 0.0).is_err());
        assert!(frac_derivative(&f, -0.5).is_err());
        let shifted = GridFunction::zeros(Grid1D::new(0.5, 1.0, 9).unwrap());
        assert!(frac_integral(&shifted, 0.5).is_err());
        let nd: GridFunctionND = f.into();
        assert!(riesz_potential(&nd, 1.0).is_err());
        assert!(riesz_potential(&nd, 0.0).is_err());
    }

    #[test]
    fn singular_power_integral_is_power_law() {
        let g = unit(4097);
        let f = sample(&ClosedFormFunction::SingularPower { beta: 0.25 }, g).unwrap();
        let r = frac_integral(&f, 0.75).unwrap();
        let exact = frac_image_exact(&ClosedFormFunction::SingularPower { beta: 0.25 }, 0.75, Transform::Integral)
            .unwrap();
        for i in [1024usize, 2048, 3000] {
            let x = g.point(i);
            let e = exact.eval(x).unwrap();
            assert!(((r.samples()[i] - e) / e).abs() < 5e-3);
        }
    }

    #[test]
    fn derivative_of_identity() {
        let g = unit(4096);
        let f = sample(&ClosedFormFunction::Power { beta: 1.0 }, g).unwrap();
        let d = frac_derivative(&f, 0.5).unwrap();
        for (x, v) in g.points().zip(d.samples()) {
            if x >= 0.1 {
                let e = 2.0 * (x / PI).sqrt();
                assert!(((v - e) / e).abs() < 1e-3, "x={x}");
            }
        }
        assert_eq!(d.samples()[0], 0.0);
    }

    #[test]
    fn exact_images() {
        let img = frac_image_exact(&ClosedFormFunction::Power { beta: 0.5 }, 0.5, Transform::Integral).unwrap();
        assert!((img.coefficient - PI.sqrt() / 2.0).abs() < 1e-14);
        assert_eq!(img.exponent, 1.0);
        let img = frac_image_exact(&ClosedFormFunction::Constant { c: 1.0 }, 0.3, Transform::Derivative).unwrap();
        assert!((img.coefficient - 1.0 / gamma(0.7).unwrap()).abs() < 1e-14);
        assert_eq!(img.exponent, -0.3);
        let img = frac_image_exact(&ClosedFormFunction::Power { beta: 1.0 }, 0.5, Transform::Derivative).unwrap();
        assert!((img.coefficient - 2.0 / PI.sqrt()).abs() < 1e-14);
        assert!((img.exponent - 0.5).abs() < 1e-15);
        assert!(frac_image_exact(&ClosedFormFunction::Power { beta: 0.4 }, 0.5, Transform::Derivative).is_err());
        assert!(frac_image_exact(&ClosedFormFunction::Indicator { c: 0.0, d: 1.0 }, 0.5, Transform::Integral).is_err());
        let s = frac_image_exact(&ClosedFormFunction::SingularPower { beta: 0.25 }, 0.5, Transform::Integral).unwrap();
        assert_eq!(s.eval(1.5), None);
        assert!(s.eval(0.5).is_some());
    }

    #[test]
    fn riesz_1d_indicator_at_centre() {
        let g = Grid1D::new(-1.0, 1.0, 2001).unwrap();
        let f: GridFunctionND = sample(&ClosedFormFunction::Indicator { c: -1.0, d: 1.0 }, g).unwrap().into();
        let r = riesz_potential(&f, 0.5).unwrap();
        assert!((r.samples()[1000] - 4.0).abs() < 1e-10);
        // ((1+x)^a + (1-x)^a)/a everywhere inside
        for (k, v) in r.samples().iter().enumerate() {
            let x = g.point(k);
            let e = ((1.0 + x).powf(0.5) + (1.0 - x).powf(0.5)) / 0.5;
            assert!((v - e).abs() < 1e-10);
        }
    }

    #[test]
    fn riesz_1d_preserves_parity() {
        let g = Grid1D::new(-2.0, 2.0, 401).unwrap();
        let f: GridFunctionND = GridFunction::from_fn(g, |x| (-x * x).exp() * x.cos()).unwrap().into();
        let r = riesz_potential(&f, 0.7).unwrap();
        let s = r.samples();
        for k in 0..s.len() / 2 {
            assert!((s[k] - s[s.len() - 1 - k]).abs() < 1e-12 * s[k].abs().max(1.0));
        }
    }

    #[test]
    fn singular_cell_matches_disc_bounds() {
        // the square cell lies between the inscribed and circumscribed discs
        let alpha = 0.8;
        let h = 0.1;
        let s = singular_cell_integral(h, h, alpha);
        let disc = |r: f64| 2.0 * PI * r.powf(alpha) / alpha;
        assert!(s > disc(h / 2.0) && s < disc(h / 2.0 * 2f64.sqrt()));
        // homogeneity of degree alpha
        let s2 = singular_cell_integral(2.0 * h, 2.0 * h, alpha);
        assert!((s2 / s - 2f64.powf(alpha)).abs() < 1e-12);
        // alpha = 1 has the elementary value 4 h asinh(1)
        let s1 = singular_cell_integral(h, h, 1.0);
        assert!((s1 - 4.0 * h * 1f64.asinh()).abs() < 1e-12);
    }

    #[test]
    fn riesz_2d_radial_oracle() {
        // f = 1{|y| <= 1}: R f(0) = 2 pi / alpha
        let n = 81;
        let g = Grid1D::new(-1.2, 1.2, n).unwrap();
        let f = GridFunctionND::from_fn_2d(g, g, |x, y| if x.hypot(y) <= 1.0 { 1.0 } else { 0.0 }).unwrap();
        let alpha = 1.0;
        let r = riesz_potential(&f, alpha).unwrap();
        let centre = r.samples()[(n / 2) * n + n / 2];
        let exact = 2.0 * PI / alpha;
        assert!(((centre - exact) / exact).abs() < 0.03, "{centre} vs {exact}");
        let ex = riesz_existence_check(&f, alpha).unwrap();
        assert!(ex.ok && ex.finite_value > 0.0);
    }

    #[test]
    fn existence_examples() {
        let g = unit(2049);
        let zero: GridFunctionND = GridFunction::zeros(g).into();
        assert_eq!(riesz_existence_check(&zero, 0.5).unwrap(), ExistenceCheck { finite_value: 0.0, ok: true });
        let ind: GridFunctionND = sample(&ClosedFormFunction::Indicator { c: 0.0, d: 1.0 }, g).unwrap().into();
        let ex = riesz_existence_check(&ind, 0.5).unwrap();
        assert!(ex.ok);
        assert!((ex.finite_value - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-7);
    }

    #[test]
    fn linearity() {
        let g = unit(301);
        let f = GridFunction::from_fn(g, |x| (3.0 * x).sin()).unwrap();
        let h = GridFunction::from_fn(g, |x| x * x - 0.3 * x).unwrap();
        let (a, b) = (1.7, -0.4);
        let lhs = frac_integral(&f.combine(a, &h, b).unwrap(), 0.6).unwrap();
        let rhs = frac_integral(&f, 0.6).unwrap().combine(a, &frac_integral(&h, 0.6).unwrap(), b).unwrap();
        for (u, v) in lhs.samples().iter().zip(rhs.samples()) {
            assert!((u - v).abs() <= 1e-12 * u.abs().max(1e-3));
        }
    }
}
