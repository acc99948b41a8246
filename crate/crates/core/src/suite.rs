//! The acceptance suite: one check per criterion, each returning a
//! [`CriterionResult`] with the measured quantities behind its verdict.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::fracops::{frac_derivative, frac_image_exact, frac_integral, riesz_potential, Transform};
use crate::gls::{default_p_grid, fundamental_function, gls_norm, psi_from_function, PsiFunction, DEFAULT_P_POINTS};
use crate::gridfn::{ClosedFormFunction, Grid1D, GridFunction, GridFunctionND, Sampled};
use crate::harness::random::{piecewise_linear, smooth_vanishing_at_zero, white_noise};
use crate::harness::riesz::{gls_bounds_on, riesz_bound_on};
use crate::harness::{
    check_derivative_bound, check_integral_bound, check_scaling, dyadic, estimate_exponent, fit_loglog,
    lower_bound_k_d, GlsBound, IntegralVariant, RieszVariant,
};
use crate::modulus::modulus;
use crate::norms::{lp_norm, luxemburg_norm, young_orlicz, OrliczParams};
use crate::oracle::modulus_pair_scan;

/// Version of the serialized [`SuiteReport`] layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Number of criteria run by [`run_all`].
pub const CRITERIA: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Seed for every randomized check.
    pub seed: u64,
    /// Grid cells for checks that do not fix their own grid.
    pub n: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 1, n: 2048 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
    /// Wall-clock seconds; kept out of serialized output so that reports
    /// are reproducible.
    #[serde(skip)]
    pub elapsed_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub config: SuiteConfig,
    pub pass: bool,
    pub criteria: Vec<CriterionResult>,
}

struct Outcome {
    pass: bool,
    detail: String,
    metrics: BTreeMap<String, f64>,
}

impl Outcome {
    fn new() -> Self {
        Self { pass: true, detail: String::new(), metrics: BTreeMap::new() }
    }

    fn metric(&mut self, key: impl Into<String>, v: f64) {
        self.metrics.insert(key.into(), v);
    }

    /// Records a sub-check; failures are listed in `detail`.
    fn require(&mut self, ok: bool, what: impl AsRef<str>) {
        if !ok {
            self.pass = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(what.as_ref());
        }
    }
}

fn rng_for(cfg: &SuiteConfig, id: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(id as u64))
}

pub fn criterion_name(id: u32) -> &'static str {
    match id {
        1 => "power-law integral oracle",
        2 => "derivative oracle and Abel inversion",
        3 => "modulus engine",
        4 => "sharpness of the integral exponent",
        5 => "dilation exactness",
        6 => "upper bounds hold",
        7 => "derivative constant curve",
        8 => "Riesz exponent and ratio stability",
        9 => "Grand Lebesgue machinery",
        10 => "Orlicz function and Luxemburg norm",
        _ => "unknown",
    }
}

/// Runs one criterion by number.
pub fn run_criterion(id: u32, cfg: &SuiteConfig) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut out = match id {
        1 => power_law_oracle()?,
        2 => derivative_oracle(cfg)?,
        3 => modulus_engine(cfg)?,
        4 => integral_sharpness()?,
        5 => dilation_exactness(cfg)?,
        6 => upper_bounds(cfg)?,
        7 => derivative_constant_curve()?,
        8 => riesz_exponent()?,
        9 => gls_machinery(cfg)?,
        10 => orlicz(cfg)?,
        _ => return Err(domain!("no criterion numbered {id}")),
    };
    let elapsed = start.elapsed().as_secs_f64();
    if id == 1 {
        out.require(elapsed < POWER_LAW_TIME_LIMIT, format!("took {elapsed:.1} s"));
    }
    if out.detail.is_empty() {
        out.detail = "ok".into();
    }
    Ok(CriterionResult {
        id,
        name: criterion_name(id).into(),
        pass: out.pass,
        detail: out.detail,
        metrics: out.metrics,
        elapsed_secs: elapsed,
    })
}

pub fn run_all(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let criteria = (1..=CRITERIA).map(|id| run_criterion(id, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport { schema: SCHEMA_VERSION, config: *cfg, pass: criteria.iter().all(|c| c.pass), criteria })
}

fn max_rel_err(num: &GridFunction, exact: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    num.grid()
        .points()
        .zip(num.samples())
        .filter(|(x, _)| *x >= lo && *x <= hi)
        .map(|(x, v)| {
            let e = exact(x);
            (v - e).abs() / e.abs()
        })
        .fold(0.0, f64::max)
}

const POWER_LAW_TIME_LIMIT: f64 = 10.0;
/// Errors below this are rounding noise and carry no convergence order.
const ROUNDING_FLOOR: f64 = 1e-12;

fn power_law_oracle() -> Result<Outcome> {
    let sizes = [256usize, 512, 1024, 2048, 4096];
    let mut out = Outcome::new();
    for alpha in [0.25, 0.5, 0.75] {
        for b in [0.5, 1.0] {
            let f = ClosedFormFunction::Power { beta: b };
            let image = frac_image_exact(&f, alpha, Transform::Integral)?;
            let mut errs = Vec::with_capacity(sizes.len());
            for &n in &sizes {
                let g = frac_integral(&f.sample(Grid1D::new(0.0, 1.0, n)?)?, alpha)?;
                errs.push(max_rel_err(&g, |x| image.eval(x).unwrap_or(f64::NAN), 0.05, 1.0));
            }
            let tag = format!("a{alpha}_b{b}");
            let last = *errs.last().unwrap();
            out.metric(format!("{tag}_err"), last);
            out.require(last <= 1e-3, format!("{tag}: error {last:e} at n = 4096"));
            let want = 2.0 - alpha - 0.3;
            if errs.iter().all(|&e| e <= ROUNDING_FLOOR) {
                // the piecewise-linear interpolant of x is x itself
                out.metric(format!("{tag}_order"), f64::INFINITY);
            } else {
                let inv: Vec<f64> = sizes.iter().map(|&n| 1.0 / n as f64).collect();
                let order = fit_loglog(&inv, &errs)?.slope;
                out.metric(format!("{tag}_order"), order);
                out.require(order >= want, format!("{tag}: order {order:.3} < {want}"));
            }
        }
    }
    Ok(out)
}

fn derivative_oracle(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut out = Outcome::new();
    let grid = Grid1D::new(0.0, 1.0, 4096)?;
    let d = frac_derivative(&ClosedFormFunction::Power { beta: 1.0 }.sample(grid)?, 0.5)?;
    let err = max_rel_err(&d, |x| 2.0 * (x / PI).sqrt(), 0.1, 1.0);
    out.metric("identity_rel_err", err);
    out.require(err <= 1e-3, format!("derivative of x: relative error {err:e}"));

    let mut rng = rng_for(cfg, 2);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let alpha = [0.25, 0.5, 0.75][k % 3];
        let f = smooth_vanishing_at_zero(grid, &mut rng)?;
        let back = frac_derivative(&frac_integral(&f, alpha)?, alpha)?;
        let e = grid
            .points()
            .zip(back.samples().iter().zip(f.samples()))
            .filter(|(x, _)| (0.1..=0.9).contains(x))
            .map(|(_, (a, b))| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(e);
    }
    out.metric("abel_sup_err", worst);
    out.require(worst <= 5e-3, format!("Abel inversion: sup error {worst:e}"));
    Ok(out)
}

fn modulus_engine(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut out = Outcome::new();
    let mut rng = rng_for(cfg, 3);
    let mut mismatches = 0usize;
    for _ in 0..200 {
        let n = rng.gen_range(2..=512);
        let grid = Grid1D::new(0.0, 1.0, n)?;
        let f = white_noise(grid, 1.0, &mut rng)?;
        // keep h away from whole cell counts, where the two scans use different tolerances
        let h = (rng.gen_range(0..n) as f64 + rng.gen_range(0.1..0.9)) * grid.step();
        if modulus(&f, h)? != modulus_pair_scan(f.samples(), grid.step(), h) {
            mismatches += 1;
        }
    }
    out.metric("pair_scan_mismatches", mismatches as f64);
    out.require(mismatches == 0, format!("{mismatches} of 200 differ from the pair scan"));

    let grid = Grid1D::new(0.0, 1.0, 1000)?;
    let mut worst = 0.0f64;
    for b in [0.25, 0.5, 0.75, 1.0] {
        let f = ClosedFormFunction::Power { beta: b }.sample(grid)?;
        let cell = grid.step().powf(b);
        for h in [0.01, 0.03125, 0.1, 0.3, 0.77] {
            let gap = (modulus(&f, h)? - h.powf(b)).abs();
            worst = worst.max(gap / cell);
            out.require(gap <= cell, format!("omega(x^{b}, {h}) off by {gap:e}"));
        }
    }
    out.metric("power_gap_in_cells", worst);
    Ok(out)
}

fn integral_sharpness() -> Result<Outcome> {
    let mut out = Outcome::new();
    let grid = Grid1D::with_cells(0.0, 1.0, 1 << 13)?;
    let hs = dyadic(3, 10);
    for alpha in [0.4, 0.6, 0.75] {
        for b in [0.1, 0.25] {
            let f = ClosedFormFunction::SingularPower { beta: b }.sample(grid)?;
            let fit = estimate_exponent(&frac_integral(&f, alpha)?, &hs)?;
            let tag = format!("a{alpha}_b{b}");
            out.metric(format!("{tag}_slope"), fit.slope);
            let want = alpha - b;
            out.require((fit.slope - want).abs() <= 0.05, format!("{tag}: slope {:.4} vs {want}", fit.slope));
        }
    }
    Ok(out)
}

fn dilation_exactness(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut out = Outcome::new();
    let grid = Grid1D::with_cells(0.0, 2.0, 2 * cfg.n.max(64))?;
    let rho = GridFunction::from_fn(grid, |x| if x <= 1.0 { x } else { 0.0 })?;
    for p in [2.0, 4.0] {
        let r = check_scaling(&rho, 0.5, 2.0, p)?;
        out.metric(format!("p{p}_discrepancy"), r.param("discrepancy").unwrap_or(f64::NAN));
        out.metric(format!("p{p}_norm_rel_err"), r.param("norm_rel_err").unwrap_or(f64::NAN));
        out.require(r.pass, format!("p = {p}: {} exceeds {}", r.lhs, r.rhs));
    }
    Ok(out)
}

fn upper_bounds(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut out = Outcome::new();
    let mut rng = rng_for(cfg, 6);
    let grid = Grid1D::with_cells(0.0, 1.0, cfg.n.max(64))?;
    let (alpha, p) = (0.75, 2.0);
    let hs = dyadic(0, 8);
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for _ in 0..100 {
        let knots = rng.gen_range(2..=16);
        let f = piecewise_linear(grid, knots, &mut rng)?;
        let norm = lp_norm(&f, p)?;
        let f = f.scale(1.0 / norm)?;
        for r in check_integral_bound(&f, alpha, p, &hs, IntegralVariant::GlobalLp)? {
            worst = worst.max(r.ratio);
            failures += usize::from(!r.pass);
        }
    }
    out.metric("integral_worst_ratio", worst);
    out.require(failures == 0, format!("{failures} integral-bound reports exceed their bound"));

    // derivative bound: calibrate the absolute constant on one member
    let grid = Grid1D::with_cells(0.0, 1.0, 4096)?;
    let hs = dyadic(1, 6);
    let member = |a: f64, b: f64, c: f64| -> Result<Vec<crate::harness::BoundReport>> {
        check_derivative_bound(&ClosedFormFunction::Power { beta: b }.sample(grid)?, a, &hs, c)
    };
    let c_cal = member(0.5, 0.75, 1.0)?.iter().map(|r| r.calibrated_proxy(1.0)).fold(0.0, f64::max);
    out.metric("derivative_c_calibrated", c_cal);
    let mut worst = 0.0f64;
    for a in [0.25, 0.5, 0.75] {
        for b in [0.6, 0.75, 0.8, 0.9, 1.0] {
            if b <= a {
                continue;
            }
            let ratio = member(a, b, c_cal)?.iter().map(|r| r.ratio).fold(0.0, f64::max);
            out.metric(format!("derivative_a{a}_b{b}_ratio"), ratio);
            worst = worst.max(ratio);
            out.require(ratio <= 1.0 + crate::harness::BOUND_TOLERANCE, format!("derivative bound a={a} b={b}: ratio {ratio:.3}"));
        }
    }
    out.metric("derivative_worst_ratio", worst);
    Ok(out)
}

fn derivative_constant_curve() -> Result<Outcome> {
    let mut out = Outcome::new();
    let alpha = 0.5;
    let curve = lower_bound_k_d(alpha, &[0.6, 0.8, 1.0], 4096, &dyadic(2, 4))?;
    for pt in &curve.points {
        let tag = format!("b{}", pt.beta);
        out.metric(format!("{tag}_measured"), pt.measured);
        out.metric(format!("{tag}_closed"), pt.closed.normalized);
        out.require(pt.rel_err.abs() <= 0.02, format!("{tag}: measured {:.5} vs {:.5}", pt.measured, pt.closed.normalized));
    }
    out.metric("sup_beta", curve.sup_beta);
    out.metric("gamma_one_minus_alpha", curve.gamma_one_minus_alpha);
    out.metric("sup_normalized", curve.sup_normalized);
    out.metric("sup_unnormalized", curve.sup_unnormalized);
    out.metric("sup_squared_prefactor", curve.sup_squared_prefactor);
    out.require(curve.increasing, "measured curve not increasing in beta");
    out.require(curve.sup_beta == 1.0, format!("sup at beta = {}", curve.sup_beta));
    Ok(out)
}

/// `1{[-1,1]}` on `[-2, 2]` with the given number of cells.
fn centred_indicator(cells: usize) -> Result<GridFunctionND> {
    let grid = Grid1D::with_cells(-2.0, 2.0, cells)?;
    Ok(ClosedFormFunction::Indicator { c: -1.0, d: 1.0 }.sample(grid)?.into())
}

/// Largest allowed spread `max/min - 1` of the Riesz ratio across `h`.
const RATIO_SPREAD: f64 = 0.2;

fn riesz_exponent() -> Result<Outcome> {
    let mut out = Outcome::new();
    let alpha = 0.75;
    let f = centred_indicator(1 << 14)?;
    let potential = riesz_potential(&f, alpha)?;
    let hs = dyadic(3, 10);
    for p in [2.0, 4.0] {
        let reports = riesz_bound_on(&f, &potential, alpha, p, &hs, 1.0, RieszVariant::Lebesgue)?;
        let h: Vec<f64> = reports.iter().map(|r| r.param("h").unwrap_or(f64::NAN)).collect();
        let w: Vec<f64> = reports.iter().map(|r| r.lhs).collect();
        let fit = fit_loglog(&h, &w)?;
        let want = alpha - 1.0 / p - 0.05;
        out.metric(format!("p{p}_slope"), fit.slope);
        out.require(fit.slope >= want, format!("p = {p}: slope {:.4} < {want}", fit.slope));
        let k: Vec<f64> = reports.iter().filter_map(|r| r.param("k_sample")).collect();
        let (lo, hi) = (k.iter().copied().fold(f64::INFINITY, f64::min), k.iter().copied().fold(0.0, f64::max));
        out.metric(format!("p{p}_ratio_min"), lo);
        out.metric(format!("p{p}_ratio_max"), hi);
        out.require(hi / lo - 1.0 < RATIO_SPREAD, format!("p = {p}: ratio spans {lo:.4} .. {hi:.4}"));
    }
    Ok(out)
}

fn gls_machinery(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut out = Outcome::new();
    let mut rng = rng_for(cfg, 9);
    let grid = Grid1D::with_cells(-1.0, 1.0, cfg.n.max(64))?;
    let p_grid = default_p_grid(1.0, f64::INFINITY, DEFAULT_P_POINTS);
    let mut exact = true;
    for r in [1.5, 2.0, 3.5, 7.0] {
        let f = white_noise(grid, 2.0, &mut rng)?;
        let psi = PsiFunction::degenerate(1.0, f64::INFINITY, r, 1.0)?;
        exact &= gls_norm(&f, &psi, &p_grid)?.value == lp_norm(&f, r)?;
        for delta in [1e-3, 0.1, 0.5, 2.0] {
            exact &= fundamental_function(&psi, delta, &p_grid)?.value == delta.powf(1.0 / r);
        }
    }
    out.require(exact, "degenerate psi does not reproduce the Lebesgue quantities exactly");

    let alpha = 0.75;
    let f = centred_indicator(1 << 13)?;
    let potential = riesz_potential(&f, alpha)?;
    let p_grid = default_p_grid(1.0 / alpha, f64::INFINITY, DEFAULT_P_POINTS);
    let psi = psi_from_function(&f, alpha, &p_grid)?;
    let hs = dyadic(3, 10);
    let raw = gls_bounds_on(&f, &potential, alpha, &hs, &GlsBound::Lebesgue { psi: psi.clone(), k_r: 1.0 }, &p_grid)?;
    // reports are sorted by increasing h: calibrate at the largest
    let k_r = raw.last().unwrap().calibrated_proxy(1.0);
    out.metric("k_r_calibrated", k_r);
    let calibrated = gls_bounds_on(&f, &potential, alpha, &hs, &GlsBound::Lebesgue { psi, k_r }, &p_grid)?;
    for r in &calibrated[..calibrated.len() - 1] {
        let h = r.param("h").unwrap_or(f64::NAN);
        out.metric(format!("ratio_h{h}"), r.ratio);
        out.require(r.pass, format!("h = {h}: ratio {:.4}", r.ratio));
    }
    Ok(out)
}

fn orlicz(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut out = Outcome::new();
    let settings = [(1.5, 2.0), (2.0, 1.0), (3.0, 0.5), (4.0, 3.0)];
    let mut worst_jump = 0.0f64;
    for &(p, g) in &settings {
        let params = OrliczParams::new(p, g)?;
        let inner = young_orlicz(E, params);
        let outer = E.powf(p) * E.ln().powf(g);
        let next = young_orlicz(E * (1.0 + f64::EPSILON), params);
        worst_jump = worst_jump.max(((outer - inner) / inner).abs()).max(((next - inner) / inner).abs());
    }
    out.metric("continuity_rel_gap", worst_jump);
    out.require(worst_jump <= 1e-12, format!("jump {worst_jump:e} at |u| = e"));

    let mut rng = rng_for(cfg, 10);
    let grid = Grid1D::new(0.0, 1.0, 257)?;
    let mut worst = 0.0f64;
    for k in 0..50 {
        let (p, g) = settings[k % settings.len()];
        let params = OrliczParams::new(p, g)?;
        let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
        let f = if k % 2 == 0 {
            white_noise(grid, scale, &mut rng)?
        } else {
            piecewise_linear(grid, 6, &mut rng)?.scale(scale)?
        };
        let lambda = luxemburg_norm(&f, params)?;
        let modular: f64 = f.quad_nodes().iter().map(|q| q.weight * young_orlicz(q.value / lambda, params)).sum();
        worst = worst.max((modular - 1.0).abs());
    }
    out.metric("normalization_worst_gap", worst);
    out.require(worst <= 1e-6, format!("normalized modular off by {worst:e}"));
    Ok(out)
}
