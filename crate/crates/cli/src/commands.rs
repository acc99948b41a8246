use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use fracmod::gls::DEFAULT_P_POINTS;
use fracmod::harness::{self, BoundReport, GlsBound, IntegralVariant, RieszVariant};
use fracmod::suite::{self, SuiteConfig, SuiteReport};
use fracmod::{ClosedFormFunction, Grid1D, GridFunction, GridFunctionND};

use crate::config::{Format, RunConfig, SweepKind};
use crate::error::{AtTuple, CliError};
use crate::output::{envelope, json_bytes, rows_csv};

/// Rendered output and whether every check in it passed.
pub struct Artifact {
    pub bytes: Vec<u8>,
    pub pass: bool,
}

impl Artifact {
    fn ok(bytes: Vec<u8>) -> Self {
        Self { bytes, pass: true }
    }
}

fn sorted(list: &[f64]) -> Vec<f64> {
    let mut v = list.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// `[-2, 2]` in one dimension, or its square in two, sampled from `f`
/// (a product `f(x) f(y)` in two dimensions).
fn symmetric_domain(f: &ClosedFormFunction, cfg: &RunConfig) -> Result<GridFunctionND, CliError> {
    let at = [("d", cfg.d as f64), ("n", cfg.n as f64)];
    let axis = Grid1D::with_cells(-2.0, 2.0, cfg.n).at(&at)?;
    if cfg.d == 1 {
        Ok(f.sample(axis).at(&at)?.into())
    } else {
        GridFunctionND::from_fn_2d(axis, axis, |x, y| f.eval(x) * f.eval(y)).at(&at)
    }
}

fn unit_interval(f: &ClosedFormFunction, cfg: &RunConfig) -> Result<GridFunction, CliError> {
    let at = [("n", cfg.n as f64)];
    f.sample(Grid1D::with_cells(0.0, 1.0, cfg.n).at(&at)?).at(&at)
}

fn reports_artifact(cfg: &RunConfig, kind: &str, reports: Vec<BoundReport>) -> Result<Artifact, CliError> {
    let pass = reports.iter().all(|r| r.pass);
    let bytes = match cfg.format {
        Format::Json => json_bytes(&envelope("sweep", json!({ "cmd": kind, "config": to_value(cfg), "rows": reports })))?,
        Format::Csv => {
            let mut buf = Vec::new();
            harness::write_reports_csv(&reports, &mut buf).at(&[])?;
            buf
        }
    };
    Ok(Artifact { bytes, pass })
}

fn rows_artifact(cfg: &RunConfig, kind: &str, rows: Vec<Value>) -> Result<Artifact, CliError> {
    let bytes = match cfg.format {
        Format::Json => json_bytes(&envelope("sweep", json!({ "cmd": kind, "config": to_value(cfg), "rows": rows })))?,
        Format::Csv => rows_csv(&rows)?,
    };
    Ok(Artifact::ok(bytes))
}

/// Runs `job` over every tuple in parallel, keeping tuple order.
fn par_flat<T: Sync, R: Send>(
    tuples: &[T],
    job: impl Fn(&T) -> Result<Vec<R>, CliError> + Sync,
) -> Result<Vec<R>, CliError> {
    let parts: Vec<Result<Vec<R>, CliError>> = tuples.par_iter().map(&job).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn pairs(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

pub fn verify(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let report = suite::run_all(&SuiteConfig { seed: cfg.seed, n: cfg.n }).at(&[("seed", cfg.seed as f64), ("n", cfg.n as f64)])?;
    for c in &report.criteria {
        eprintln!("criterion {:>2} {:<40} {}", c.id, c.name, if c.pass { "PASS" } else { "FAIL" });
    }
    let bytes = match cfg.format {
        Format::Json => json_bytes(&report)?,
        Format::Csv => suite_csv(&report)?,
    };
    Ok(Artifact { bytes, pass: report.pass })
}

fn suite_csv(report: &SuiteReport) -> Result<Vec<u8>, CliError> {
    let rows: Vec<Value> = report
        .criteria
        .iter()
        .map(|c| json!({ "id": c.id, "name": c.name, "pass": c.pass, "detail": c.detail }))
        .collect();
    rows_csv(&rows)
}

pub fn sweep(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let kind = cfg.cmd.ok_or_else(|| CliError::Usage("sweep needs --cmd".into()))?;
    let alphas = sorted(cfg.require("alpha", &cfg.alpha)?);
    let hs = cfg.windows(1.0 / cfg.n as f64);
    match kind {
        SweepKind::Sharpness => {
            let betas = sorted(cfg.require("beta", &cfg.beta)?);
            let rows = par_flat(&pairs(&alphas, &betas), |&(a, b)| {
                let at = [("alpha", a), ("beta", b)];
                let f = unit_interval(&ClosedFormFunction::SingularPower { beta: b }, cfg)?;
                let g = fracmod::frac_integral(&f, a).at(&at)?;
                let fit = harness::estimate_exponent(&g, &hs).at(&at)?;
                Ok(vec![json!({
                    "alpha": a, "beta": b, "expected": a - b, "slope": fit.slope,
                    "intercept": fit.intercept, "r_squared": fit.r_squared,
                    "h_lo": fit.h_range.0, "h_hi": fit.h_range.1,
                })])
            })?;
            rows_artifact(cfg, "sharpness", rows)
        }
        SweepKind::Derivative => {
            let betas = sorted(cfg.require("beta", &cfg.beta)?);
            let c = cfg.proxy_or("c", 1.0);
            let reports = par_flat(&pairs(&alphas, &betas), |&(a, b)| {
                let at = [("alpha", a), ("beta", b)];
                let f = unit_interval(&ClosedFormFunction::Power { beta: b }, cfg)?;
                let mut rs = harness::check_derivative_bound(&f, a, &hs, c).at(&at)?;
                rs.iter_mut().for_each(|r| {
                    r.params.insert("beta".into(), b);
                });
                Ok(rs)
            })?;
            reports_artifact(cfg, "derivative", reports)
        }
        SweepKind::Integral => {
            let ps = sorted(cfg.require("p", &cfg.p)?);
            let variant = match cfg.variant.as_deref().unwrap_or("global") {
                "global" => IntegralVariant::GlobalLp,
                "local" => IntegralVariant::LocalDelta,
                v => return Err(CliError::Usage(format!("--variant for integral is local or global, got {v:?}"))),
            };
            let f = unit_interval(&cfg.function_or("singular:0.25")?, cfg)?;
            let reports = par_flat(&pairs(&alphas, &ps), |&(a, p)| {
                harness::check_integral_bound(&f, a, p, &hs, variant).at(&[("alpha", a), ("p", p)])
            })?;
            reports_artifact(cfg, "integral", reports)
        }
        SweepKind::Riesz => {
            let ps = sorted(cfg.require("p", &cfg.p)?);
            let variant = match cfg.variant.as_deref().unwrap_or("lebesgue") {
                "lebesgue" => RieszVariant::Lebesgue,
                "orlicz" => RieszVariant::Orlicz { gamma: cfg.proxy_or("gamma", 1.0) },
                v => return Err(CliError::Usage(format!("--variant for riesz is lebesgue or orlicz, got {v:?}"))),
            };
            let f = symmetric_domain(&cfg.function_or("indicator:-1:1")?, cfg)?;
            let hs = cfg.windows(f.axes()[0].step());
            let c = cfg.proxy_or("c", 1.0);
            let reports = par_flat(&pairs(&alphas, &ps), |&(a, p)| {
                harness::check_riesz_bound(&f, a, p, &hs, c, variant).at(&[("alpha", a), ("p", p), ("d", cfg.d as f64)])
            })?;
            reports_artifact(cfg, "riesz", reports)
        }
        SweepKind::Scaling => {
            let lambdas = sorted(cfg.require("lambda", &cfg.lambda)?);
            let ps = sorted(cfg.require("p", &cfg.p)?);
            let shape = cfg.function_or("power:1")?;
            let at = [("n", cfg.n as f64)];
            // the test function restricted to (0, 1], on [0, 2]
            let rho = GridFunction::from_fn(Grid1D::with_cells(0.0, 2.0, cfg.n).at(&at)?, |x| if x <= 1.0 { shape.eval(x) } else { 0.0 })
                .at(&at)?;
            let tuples: Vec<(f64, f64, f64)> =
                pairs(&alphas, &lambdas).into_iter().flat_map(|(a, l)| ps.iter().map(move |&p| (a, l, p))).collect();
            let reports = par_flat(&tuples, |&(a, l, p)| {
                Ok(vec![harness::check_scaling(&rho, a, l, p).at(&[("alpha", a), ("lambda", l), ("p", p)])?])
            })?;
            reports_artifact(cfg, "scaling", reports)
        }
        SweepKind::Kd => {
            let betas = sorted(cfg.require("beta", &cfg.beta)?);
            let curves = par_flat(&alphas, |&a| {
                let grid: Vec<f64> = betas.iter().copied().filter(|&b| b > a && b <= 1.0).collect();
                Ok(vec![harness::lower_bound_k_d(a, &grid, cfg.n, &hs).at(&[("alpha", a)])?])
            })?;
            let rows: Vec<Value> = curves
                .iter()
                .flat_map(|c| {
                    c.points.iter().map(move |p| {
                        json!({
                            "alpha": c.alpha, "beta": p.beta, "measured": p.measured,
                            "normalized": p.closed.normalized, "unnormalized": p.closed.unnormalized,
                            "squared_prefactor": p.closed.squared_prefactor, "rel_err": p.rel_err,
                        })
                    })
                })
                .collect();
            match cfg.format {
                Format::Json => Ok(Artifact::ok(json_bytes(&envelope(
                    "sweep",
                    json!({ "cmd": "kd", "config": to_value(cfg), "curves": curves, "rows": rows }),
                ))?)),
                Format::Csv => Ok(Artifact::ok(rows_csv(&rows)?)),
            }
        }
        SweepKind::Gls => {
            let f = symmetric_domain(&cfg.function_or("indicator:-1:1")?, cfg)?;
            let hs = cfg.windows(f.axes()[0].step());
            let k_r = cfg.proxy_or("k_r", 1.0);
            let reports = par_flat(&alphas, |&a| {
                let at = [("alpha", a), ("d", cfg.d as f64)];
                let p_grid = fracmod::default_p_grid(cfg.d as f64 / a, f64::INFINITY, DEFAULT_P_POINTS);
                let psi = fracmod::psi_from_function(&f, a, &p_grid).at(&at)?;
                harness::check_gls_bounds(&f, a, &hs, &GlsBound::Lebesgue { psi, k_r }, &p_grid).at(&at)
            })?;
            reports_artifact(cfg, "gls", reports)
        }
    }
}

fn grid_function_artifact(cfg: &RunConfig, command: &str, g: &GridFunction) -> Result<Artifact, CliError> {
    let bytes = match cfg.format {
        Format::Json => json_bytes(&envelope(command, json!({ "config": to_value(cfg), "function": g })))?,
        Format::Csv => {
            let mut buf = Vec::new();
            g.write_csv(&mut buf).at(&[])?;
            buf
        }
    };
    Ok(Artifact::ok(bytes))
}

pub fn fracint(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let a = cfg.single("alpha", &cfg.alpha)?;
    let f = unit_interval(&cfg.function_or("power:0.5")?, cfg)?;
    let g = fracmod::frac_integral(&f, a).at(&[("alpha", a)])?;
    grid_function_artifact(cfg, "fracint", &g)
}

pub fn fracder(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let a = cfg.single("alpha", &cfg.alpha)?;
    let f = unit_interval(&cfg.function_or("power:1")?, cfg)?;
    let g = fracmod::frac_derivative(&f, a).at(&[("alpha", a)])?;
    grid_function_artifact(cfg, "fracder", &g)
}

pub fn riesz(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let a = cfg.single("alpha", &cfg.alpha)?;
    let f = symmetric_domain(&cfg.function_or("indicator:-1:1")?, cfg)?;
    let g = fracmod::riesz_potential(&f, a).at(&[("alpha", a), ("d", cfg.d as f64)])?;
    let bytes = match cfg.format {
        Format::Json => json_bytes(&envelope("riesz", json!({ "config": to_value(cfg), "function": g })))?,
        Format::Csv => {
            let mut buf = Vec::new();
            g.write_csv(&mut buf).at(&[])?;
            buf
        }
    };
    Ok(Artifact::ok(bytes))
}

pub fn modulus(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let f = unit_interval(&cfg.function_or("power:0.5")?, cfg)?;
    let profile = fracmod::modulus_profile(&f, &cfg.windows(f.grid().step())).at(&[("n", cfg.n as f64)])?;
    let bytes = match cfg.format {
        Format::Json => json_bytes(&envelope("modulus", json!({ "config": to_value(cfg), "profile": profile })))?,
        Format::Csv => {
            let mut buf = Vec::new();
            profile.write_csv(&mut buf).at(&[])?;
            buf
        }
    };
    Ok(Artifact::ok(bytes))
}

/// Re-renders a stored JSON run in the requested format.
pub fn report(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let path = cfg.input.as_deref().ok_or_else(|| CliError::Usage("report needs --input".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let doc: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{} is not JSON: {e}", path.display())))?;
    if doc.get("schema").and_then(Value::as_u64) != Some(crate::output::SCHEMA as u64) {
        return Err(CliError::Usage(format!("{} lacks \"schema\": {}", path.display(), crate::output::SCHEMA)));
    }
    if cfg.format == Format::Json {
        return Ok(Artifact::ok(json_bytes(&doc)?));
    }
    if let Ok(suite) = serde_json::from_value::<SuiteReport>(doc.clone()) {
        return Ok(Artifact { pass: suite.pass, bytes: suite_csv(&suite)? });
    }
    let rows = doc.get("rows").and_then(Value::as_array).cloned().unwrap_or_default();
    if let Ok(reports) = serde_json::from_value::<Vec<BoundReport>>(Value::Array(rows.clone())) {
        if !reports.is_empty() {
            let mut buf = Vec::new();
            harness::write_reports_csv(&reports, &mut buf).at(&[])?;
            return Ok(Artifact { pass: reports.iter().all(|r| r.pass), bytes: buf });
        }
    }
    if let Some(g) = doc.get("function") {
        if let Ok(g) = serde_json::from_value::<GridFunction>(g.clone()) {
            let mut buf = Vec::new();
            g.write_csv(&mut buf).at(&[])?;
            return Ok(Artifact::ok(buf));
        }
    }
    if let Some(p) = doc.get("profile") {
        if let Ok(p) = serde_json::from_value::<fracmod::ModulusProfile>(p.clone()) {
            let mut buf = Vec::new();
            p.write_csv(&mut buf).at(&[])?;
            return Ok(Artifact::ok(buf));
        }
    }
    Ok(Artifact::ok(rows_csv(&rows)?))
}
