//! Seeded random test functions.

use rand::Rng;

use crate::error::Result;
use crate::gridfn::{Grid1D, GridFunction};

/// Piecewise-linear function through `knots` equispaced values drawn from
/// `[-1, 1]`, sampled on `grid`.
pub fn piecewise_linear<R: Rng>(grid: Grid1D, knots: usize, rng: &mut R) -> Result<GridFunction> {
    let knots = knots.max(2);
    let values: Vec<f64> = (0..knots).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let span = grid.b() - grid.a();
    GridFunction::from_fn(grid, |x| {
        let t = (x - grid.a()) / span * (knots - 1) as f64;
        let i = (t.floor() as usize).min(knots - 2);
        let w = t - i as f64;
        (1.0 - w) * values[i] + w * values[i + 1]
    })
}

/// Smooth function with `f(0) = 0`: a short random sine series plus a
/// quadratic term.
pub fn smooth_vanishing_at_zero<R: Rng>(grid: Grid1D, rng: &mut R) -> Result<GridFunction> {
    let amps: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let freqs: Vec<f64> = (0..4).map(|_| rng.gen_range(0.5..4.0)).collect();
    let quad = rng.gen_range(-1.0..1.0);
    GridFunction::from_fn(grid, |x| {
        amps.iter().zip(&freqs).map(|(a, k)| a * (k * x).sin()).sum::<f64>() + quad * x * x
    })
}

/// Samples drawn independently from `[-scale, scale]`.
pub fn white_noise<R: Rng>(grid: Grid1D, scale: f64, rng: &mut R) -> Result<GridFunction> {
    GridFunction::new(grid, (0..grid.n()).map(|_| rng.gen_range(-scale..scale)).collect())
}
