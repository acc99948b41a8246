//! Uniformly sampled functions and the closed-form test families.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tolerance (in units of grid cells) under which a coordinate is treated as
/// sitting exactly on a grid point.
pub(crate) const ALIGN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct GridSpec {
    a: f64,
    b: f64,
    n: usize,
}

/// Uniform grid `x_i = a + i * step`, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct Grid1D {
    a: f64,
    b: f64,
    n: usize,
    step: f64,
}

impl TryFrom<GridSpec> for Grid1D {
    type Error = Error;

    fn try_from(s: GridSpec) -> Result<Self> {
        Grid1D::new(s.a, s.b, s.n)
    }
}

impl From<Grid1D> for GridSpec {
    fn from(g: Grid1D) -> Self {
        GridSpec { a: g.a, b: g.b, n: g.n }
    }
}

impl Grid1D {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Construction(format!("grid needs finite a < b, got [{a}, {b}]")));
        }
        if n < 2 {
            return Err(Error::Construction(format!("grid needs n >= 2 points, got {n}")));
        }
        let step = (b - a) / (n - 1) as f64;
        Ok(Self { a, b, n, step })
    }

    /// Grid on `[a, b]` whose step is exactly `(b - a) / cells`.
    pub fn with_cells(a: f64, b: f64, cells: usize) -> Result<Self> {
        Self::new(a, b, cells + 1)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.b
        } else {
            self.a + i as f64 * self.step
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    /// Fractional index of `x`, i.e. `(x - a) / step`.
    pub fn position(&self, x: f64) -> f64 {
        (x - self.a) / self.step
    }

    /// Index of the grid point at `x` if `x` lies on the grid.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let t = self.position(x);
        let r = t.round();
        if (t - r).abs() <= ALIGN_TOL && r >= 0.0 && (r as usize) < self.n {
            Some(r as usize)
        } else {
            None
        }
    }

    /// Number of whole cells fitting in a length `h`, up to alignment slack.
    pub fn cells_within(&self, h: f64) -> usize {
        let t = h / self.step;
        let w = (t + ALIGN_TOL).floor();
        if w <= 0.0 {
            0
        } else {
            (w as usize).min(self.n - 1)
        }
    }
}

/// Real function sampled on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridFunctionRepr")]
pub struct GridFunction {
    grid: Grid1D,
    samples: Vec<f64>,
}

#[derive(Deserialize)]
struct GridFunctionRepr {
    grid: Grid1D,
    samples: Vec<f64>,
}

impl TryFrom<GridFunctionRepr> for GridFunction {
    type Error = Error;

    fn try_from(r: GridFunctionRepr) -> Result<Self> {
        GridFunction::new(r.grid, r.samples)
    }
}

impl GridFunction {
    pub fn new(grid: Grid1D, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.n {
            return Err(Error::Construction(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.n
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Construction(format!("sample {i} is not finite")));
        }
        Ok(Self { grid, samples })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect())
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self { grid, samples: vec![0.0; grid.n] }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.samples.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        self.map(|v| c * v)
    }

    /// Pointwise linear combination `c1 * self + c2 * other` on a shared grid.
    pub fn combine(&self, c1: f64, other: &GridFunction, c2: f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(domain!("cannot combine functions on different grids"));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&u, &v)| c1 * u + c2 * v)
            .collect();
        Self::new(self.grid, samples)
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Piecewise-linear interpolant, zero outside `[a, b]`.
    pub fn eval(&self, x: f64) -> f64 {
        if x.is_nan() || x < self.grid.a || x > self.grid.b {
            return 0.0;
        }
        let t = self.grid.position(x);
        let r = t.round();
        if (t - r).abs() <= ALIGN_TOL {
            return self.samples[(r as usize).min(self.grid.n - 1)];
        }
        let i = (t.floor() as usize).min(self.grid.n - 2);
        let w = t - i as f64;
        (1.0 - w) * self.samples[i] + w * self.samples[i + 1]
    }

    /// Evaluator on all of R that continues the samples by zero.
    pub fn zero_extend(&self) -> ZeroExtended<'_> {
        ZeroExtended { f: self }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["x", "value"])?;
        for (x, v) in self.grid.points().zip(&self.samples) {
            wtr.write_record([fmt_f64(x), fmt_f64(*v)])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Reads a `x,value` table; the abscissae must form a uniform grid.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["x", "value"] {
            return Err(Error::Format(format!("expected header x,value, got {headers:?}")));
        }
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("bad number {s:?}: {e}")))
            };
            xs.push(parse(&rec[0])?);
            vs.push(parse(&rec[1])?);
        }
        if xs.len() < 2 {
            return Err(Error::Format("need at least two rows".into()));
        }
        let grid = Grid1D::new(xs[0], xs[xs.len() - 1], xs.len())?;
        for (i, &x) in xs.iter().enumerate() {
            if (grid.position(x) - i as f64).abs() > 1e-6 {
                return Err(Error::Format(format!("row {i}: x = {x} is not on a uniform grid")));
            }
        }
        Self::new(grid, vs)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

/// Borrowed view of a [`GridFunction`] as a function on R.
#[derive(Debug, Clone, Copy)]
pub struct ZeroExtended<'a> {
    f: &'a GridFunction,
}

impl ZeroExtended<'_> {
    pub fn eval(&self, x: f64) -> f64 {
        self.f.eval(x)
    }
}

/// Sampled function on a one- or two-dimensional box, stored row-major
/// (the last axis varies fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridFunctionNDRepr")]
pub struct GridFunctionND {
    axes: Vec<Grid1D>,
    samples: Vec<f64>,
}

#[derive(Deserialize)]
struct GridFunctionNDRepr {
    axes: Vec<Grid1D>,
    samples: Vec<f64>,
}

impl TryFrom<GridFunctionNDRepr> for GridFunctionND {
    type Error = Error;

    fn try_from(r: GridFunctionNDRepr) -> Result<Self> {
        GridFunctionND::new(r.axes, r.samples)
    }
}

impl GridFunctionND {
    pub fn new(axes: Vec<Grid1D>, samples: Vec<f64>) -> Result<Self> {
        if !(1..=2).contains(&axes.len()) {
            return Err(Error::Construction(format!("dimension must be 1 or 2, got {}", axes.len())));
        }
        let total: usize = axes.iter().map(|g| g.n).product();
        if samples.len() != total {
            return Err(Error::Construction(format!(
                "{} samples for a box of {total} points",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Construction(format!("sample {i} is not finite")));
        }
        Ok(Self { axes, samples })
    }

    pub fn from_fn_2d(x: Grid1D, y: Grid1D, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut samples = Vec::with_capacity(x.n * y.n);
        for xi in x.points() {
            for yj in y.points() {
                samples.push(f(xi, yj));
            }
        }
        Self::new(vec![x, y], samples)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Grid1D] {
        &self.axes
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Coordinates of the sample at flat index `k`.
    pub fn coords(&self, k: usize) -> [f64; 2] {
        match self.axes.as_slice() {
            [x] => [x.point(k), 0.0],
            [x, y] => [x.point(k / y.n), y.point(k % y.n)],
            _ => unreachable!("dimension checked at construction"),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.axes.clone(), self.samples.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        self.map(|v| c * v)
    }

    /// The one-dimensional view, if `dim() == 1`.
    pub fn as_1d(&self) -> Option<GridFunction> {
        match self.axes.as_slice() {
            [g] => Some(GridFunction { grid: *g, samples: self.samples.clone() }),
            _ => None,
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        match self.dim() {
            1 => wtr.write_record(["x", "value"])?,
            _ => wtr.write_record(["x", "y", "value"])?,
        }
        for (k, v) in self.samples.iter().enumerate() {
            let [x, y] = self.coords(k);
            if self.dim() == 1 {
                wtr.write_record([fmt_f64(x), fmt_f64(*v)])?;
            } else {
                wtr.write_record([fmt_f64(x), fmt_f64(y), fmt_f64(*v)])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

impl From<GridFunction> for GridFunctionND {
    fn from(f: GridFunction) -> Self {
        Self { axes: vec![f.grid], samples: f.samples }
    }
}

/// One quadrature node: weight, distance of the node from the origin, and
/// the sample value there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadNode {
    pub weight: f64,
    pub radius: f64,
    pub value: f64,
}

/// Sampled functions that can be integrated over their support.
///
/// One-dimensional data uses the trapezoid rule. Two-dimensional data uses
/// the midpoint rule with each sample at the centre of a `hx * hy` cell.
pub trait Sampled {
    fn dim(&self) -> usize;
    fn quad_nodes(&self) -> Vec<QuadNode>;
}

fn trapezoid_nodes(grid: &Grid1D, samples: &[f64]) -> Vec<QuadNode> {
    let last = grid.n - 1;
    samples
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let w = if i == 0 || i == last { 0.5 * grid.step } else { grid.step };
            QuadNode { weight: w, radius: grid.point(i).abs(), value }
        })
        .collect()
}

impl Sampled for GridFunction {
    fn dim(&self) -> usize {
        1
    }

    fn quad_nodes(&self) -> Vec<QuadNode> {
        trapezoid_nodes(&self.grid, &self.samples)
    }
}

impl Sampled for GridFunctionND {
    fn dim(&self) -> usize {
        self.axes.len()
    }

    fn quad_nodes(&self) -> Vec<QuadNode> {
        match self.axes.as_slice() {
            [g] => trapezoid_nodes(g, &self.samples),
            [gx, gy] => {
                let w = gx.step * gy.step;
                self.samples
                    .iter()
                    .enumerate()
                    .map(|(k, &value)| {
                        let [x, y] = self.coords(k);
                        QuadNode { weight: w, radius: x.hypot(y), value }
                    })
                    .collect()
            }
            _ => unreachable!("dimension checked at construction"),
        }
    }
}

/// Test functions with known fractional images.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedFormFunction {
    /// `x^beta` for `x > 0`, zero for `x <= 0`.
    Power { beta: f64 },
    /// `x^(-beta)` on `(0, 1)`, zero elsewhere (including `x = 0`).
    SingularPower { beta: f64 },
    /// Indicator of `[c, d]`. The endpoints carry value 1 so that a grid
    /// spanning exactly `[c, d]` integrates the indicator without loss.
    Indicator { c: f64, d: f64 },
    Constant { c: f64 },
}

impl ClosedFormFunction {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Power { beta } if !(beta > 0.0 && beta.is_finite()) => {
                Err(domain!("power exponent must be positive, got {beta}"))
            }
            Self::SingularPower { beta } if !(beta > 0.0 && beta < 1.0) => {
                Err(domain!("singular power exponent must lie in (0, 1), got {beta}"))
            }
            Self::Indicator { c, d } if !(c < d && c.is_finite() && d.is_finite()) => {
                Err(domain!("indicator needs c < d, got ({c}, {d})"))
            }
            Self::Constant { c } if !c.is_finite() => Err(domain!("constant must be finite")),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::Power { beta } => {
                if x > 0.0 {
                    x.powf(beta)
                } else {
                    0.0
                }
            }
            Self::SingularPower { beta } => {
                if x > 0.0 && x < 1.0 {
                    x.powf(-beta)
                } else {
                    0.0
                }
            }
            Self::Indicator { c, d } => {
                if x >= c && x <= d {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Constant { c } => c,
        }
    }

    pub fn sample(&self, grid: Grid1D) -> Result<GridFunction> {
        sample(self, grid)
    }
}

impl fmt::Display for ClosedFormFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power { beta } => write!(f, "power:{beta}"),
            Self::SingularPower { beta } => write!(f, "singular:{beta}"),
            Self::Indicator { c, d } => write!(f, "indicator:{c}:{d}"),
            Self::Constant { c } => write!(f, "const:{c}"),
        }
    }
}

impl FromStr for ClosedFormFunction {
    type Err = Error;

    /// Parses `power:B`, `singular:B`, `indicator:C:D` or `const:C`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Format(format!("bad number {t:?} in {s:?}")))
        };
        let f = match parts.as_slice() {
            ["power", b] => Self::Power { beta: num(b)? },
            ["singular", b] => Self::SingularPower { beta: num(b)? },
            ["indicator", c, d] => Self::Indicator { c: num(c)?, d: num(d)? },
            ["const", c] => Self::Constant { c: num(c)? },
            _ => return Err(Error::Format(format!("unknown function spec {s:?}"))),
        };
        f.validate()?;
        Ok(f)
    }
}

/// Samples a closed-form function on a grid.
pub fn sample(f: &ClosedFormFunction, grid: Grid1D) -> Result<GridFunction> {
    f.validate()?;
    let mut samples = Vec::with_capacity(grid.n);
    for x in grid.points() {
        let v = f.eval(x);
        if !v.is_finite() {
            return Err(Error::Sampling(format!("{f} is not finite at x = {x}")));
        }
        samples.push(v);
    }
    GridFunction::new(grid, samples)
}

/// Dilation `T_lambda f (x) = f(lambda x)` on the grid `(a/lambda, b/lambda, n)`.
///
/// On this grid every node maps onto a node of the source grid, so the
/// result is exact.
pub fn dilate(f: &GridFunction, lambda: f64) -> Result<GridFunction> {
    check_lambda(lambda)?;
    let g = f.grid;
    let target = Grid1D::new(g.a / lambda, g.b / lambda, g.n)?;
    // node i of the target maps onto node i of the source
    GridFunction::new(target, f.samples.clone())
}

/// Dilation evaluated on an arbitrary target grid. Nodes whose image
/// `lambda * x` hits a source node copy that sample; the rest interpolate
/// linearly, with zero outside the source interval.
pub fn dilate_onto(f: &GridFunction, lambda: f64, target: Grid1D) -> Result<GridFunction> {
    check_lambda(lambda)?;
    let samples = (0..target.n)
        .map(|i| {
            let y = lambda * target.point(i);
            match f.grid.index_of(y) {
                Some(j) => f.samples[j],
                None => f.eval(y),
            }
        })
        .collect();
    GridFunction::new(target, samples)
}

/// Whether every node of `target` maps onto a node of `source` under `x -> lambda x`.
pub fn dilation_aligned(source: &Grid1D, lambda: f64, target: &Grid1D) -> bool {
    (0..target.n).all(|i| {
        let y = lambda * target.point(i);
        y < source.a || y > source.b || source.index_of(y).is_some()
    })
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(domain!("dilation factor must be positive, got {lambda}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(n: usize) -> Grid1D {
        Grid1D::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn grid_invariants() {
        let g = Grid1D::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.step(), 0.5);
        assert_eq!(g.points().collect::<Vec<_>>(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(Grid1D::new(1.0, 1.0, 5).is_err());
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
        assert_eq!(g.index_of(0.5), Some(3));
        assert_eq!(g.index_of(0.3), None);
        assert_eq!(g.cells_within(1.0), 2);
        assert_eq!(g.cells_within(0.49), 0);
    }

    #[test]
    fn sampling_examples() {
        let f = sample(&ClosedFormFunction::Power { beta: 1.0 }, unit(3)).unwrap();
        assert_eq!(f.samples(), &[0.0, 0.5, 1.0]);
        let c = sample(&ClosedFormFunction::Constant { c: 3.0 }, unit(7)).unwrap();
        assert!(c.samples().iter().all(|&v| v == 3.0));
        let s = ClosedFormFunction::SingularPower { beta: 0.5 };
        assert_eq!(s.eval(0.25), 2.0);
        let sg = sample(&s, unit(5)).unwrap();
        assert_eq!(sg.samples()[0], 0.0);
        assert_eq!(sg.samples()[1], 2.0);
        assert_eq!(sg.samples()[4], 0.0);
    }

    #[test]
    fn sampling_is_exact() {
        let g = unit(1001);
        let f = sample(&ClosedFormFunction::Power { beta: 0.37 }, g).unwrap();
        for (x, v) in g.points().zip(f.samples()) {
            assert_eq!(*v, if x > 0.0 { x.powf(0.37) } else { 0.0 });
        }
    }

    #[test]
    fn invalid_closed_forms() {
        assert!(ClosedFormFunction::Power { beta: 0.0 }.validate().is_err());
        assert!(ClosedFormFunction::SingularPower { beta: 1.0 }.validate().is_err());
        assert!(ClosedFormFunction::Indicator { c: 1.0, d: 0.0 }.validate().is_err());
        assert!("power:0.5".parse::<ClosedFormFunction>().is_ok());
        assert!("singular:2".parse::<ClosedFormFunction>().is_err());
        assert!("bogus:1".parse::<ClosedFormFunction>().is_err());
        assert_eq!(
            "indicator:-1:1".parse::<ClosedFormFunction>().unwrap(),
            ClosedFormFunction::Indicator { c: -1.0, d: 1.0 }
        );
    }

    #[test]
    fn zero_extension() {
        let f = GridFunction::new(unit(3), vec![1.0, 3.0, 2.0]).unwrap();
        let z = f.zero_extend();
        assert_eq!(z.eval(-1.0), 0.0);
        assert_eq!(z.eval(1.5), 0.0);
        assert_eq!(z.eval(0.5), 3.0);
        assert_eq!(z.eval(0.25), 2.0);
        assert_eq!(z.eval(0.75), 2.5);
    }

    #[test]
    fn dilation_examples() {
        let g = unit(65);
        let f = sample(&ClosedFormFunction::Power { beta: 0.5 }, g).unwrap();
        assert_eq!(dilate(&f, 1.0).unwrap(), f);
        let d = dilate(&f, 2.0).unwrap();
        assert_eq!(d.grid().b(), 0.5);
        for (x, v) in d.grid().points().zip(d.samples()) {
            assert!((v - 2f64.sqrt() * x.sqrt()).abs() < 1e-14);
        }
        // on the source grid itself, T_2 f samples every second node and is zero past b/2
        let same = dilate_onto(&f, 2.0, g).unwrap();
        assert!(dilation_aligned(&g, 2.0, &g));
        assert_eq!(same.samples()[16], f.samples()[32]);
        assert_eq!(same.samples()[40], 0.0);
        assert!(!dilation_aligned(&g, 1.3, &g));
    }

    #[test]
    fn csv_and_json_round_trip() {
        let f = GridFunction::new(Grid1D::new(-0.5, 0.5, 4).unwrap(), vec![0.1, -2.0, 3.5, 1e-20]).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,value\n"));
        let back = GridFunction::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.samples(), f.samples());
        assert!((back.grid().b() - 0.5).abs() < 1e-15);

        let js = f.to_json().unwrap();
        assert!(js.contains("\"grid\":{\"a\":-0.5,\"b\":0.5,\"n\":4}"));
        assert_eq!(GridFunction::from_json(&js).unwrap(), f);
        assert!(GridFunction::from_json(r#"{"grid":{"a":0,"b":1,"n":3},"samples":[1,2]}"#).is_err());
    }

    proptest! {
        #[test]
        fn dilation_round_trip(lambda in 0.1f64..10.0, seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = Grid1D::new(0.0, 2.0, 33).unwrap();
            let f = GridFunction::new(g, (0..33).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
            let back = dilate(&dilate(&f, lambda).unwrap(), 1.0 / lambda).unwrap();
            for (u, v) in back.samples().iter().zip(f.samples()) {
                prop_assert!((u - v).abs() <= 1e-12);
            }
        }
    }
}
