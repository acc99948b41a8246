//! Modulus of continuity on grids.

use std::collections::VecDeque;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::gridfn::{fmt_f64, GridFunction, GridFunctionND};

/// Largest `max - min` over all runs of `w + 1` consecutive samples, i.e. the
/// largest `|s[i] - s[j]|` with `|i - j| <= w`.
///
/// One pass with a decreasing deque for the window maximum and an increasing
/// one for the window minimum.
pub(crate) fn window_oscillation(s: &[f64], w: usize) -> f64 {
    if w == 0 || s.len() < 2 {
        return 0.0;
    }
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut best = 0.0f64;
    for (i, &v) in s.iter().enumerate() {
        while maxq.back().is_some_and(|&j| s[j] <= v) {
            maxq.pop_back();
        }
        maxq.push_back(i);
        while minq.back().is_some_and(|&j| s[j] >= v) {
            minq.pop_back();
        }
        minq.push_back(i);
        let start = i.saturating_sub(w);
        while maxq.front().is_some_and(|&j| j < start) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&j| j < start) {
            minq.pop_front();
        }
        let spread = s[maxq[0]] - s[minq[0]];
        best = best.max(spread);
    }
    best
}

fn check_h(h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(domain!("modulus needs h > 0, got {h}"));
    }
    Ok(())
}

/// `omega(f, h) = sup |f(x) - f(y)|` over grid pairs with `|x - y| <= h`.
pub fn modulus(f: &GridFunction, h: f64) -> Result<f64> {
    check_h(h)?;
    let w = f.grid().cells_within(h);
    Ok(window_oscillation(f.samples(), w))
}

/// Modulus of a one- or two-dimensional sampled function. In two
/// dimensions every lattice offset of Euclidean length at most `h` is scanned.
pub fn modulus_nd(f: &GridFunctionND, h: f64) -> Result<f64> {
    check_h(h)?;
    if let Some(f1) = f.as_1d() {
        return modulus(&f1, h);
    }
    let [gx, gy] = [f.axes()[0], f.axes()[1]];
    let (nx, ny) = (gx.n(), gy.n());
    let s = f.samples();
    let wx = gx.cells_within(h);
    let mut best = 0.0f64;
    for di in 0..=wx {
        let rest = h * h - (di as f64 * gx.step()).powi(2);
        let wy = if rest > 0.0 { gy.cells_within(rest.sqrt()) } else { 0 };
        for dj in -(wy as isize)..=(wy as isize) {
            // half of the offsets suffice by symmetry
            if di == 0 && dj <= 0 {
                continue;
            }
            for i in 0..nx - di {
                for j in 0..ny {
                    let j2 = j as isize + dj;
                    if j2 < 0 || j2 >= ny as isize {
                        continue;
                    }
                    let d = (s[i * ny + j] - s[(i + di) * ny + j2 as usize]).abs();
                    best = best.max(d);
                }
            }
        }
    }
    Ok(best)
}

/// Sampled modulus of continuity `h -> omega(f, h)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusProfile {
    pub h_values: Vec<f64>,
    pub omega_values: Vec<f64>,
}

impl ModulusProfile {
    pub fn new(h_values: Vec<f64>, omega_values: Vec<f64>) -> Result<Self> {
        if h_values.len() != omega_values.len() {
            return Err(Error::Construction("profile columns differ in length".into()));
        }
        if h_values.windows(2).any(|w| w[0] >= w[1]) || h_values.iter().any(|&h| !(h > 0.0)) {
            return Err(Error::Construction("profile h values must be positive and increasing".into()));
        }
        if omega_values.iter().any(|&w| !(w >= 0.0)) || omega_values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Construction("profile omega values must be non-negative and nondecreasing".into()));
        }
        Ok(Self { h_values, omega_values })
    }

    pub fn len(&self) -> usize {
        self.h_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h_values.is_empty()
    }

    /// Interpolated value at `t` inside the profile range (log-log between
    /// positive neighbours, linear otherwise).
    pub fn value_at(&self, t: f64) -> Option<f64> {
        let hs = &self.h_values;
        let ws = &self.omega_values;
        let k = hs.partition_point(|&x| x < t);
        if k < hs.len() && hs[k] == t {
            return Some(ws[k]);
        }
        if k == 0 || k == hs.len() {
            return None;
        }
        let (t0, t1, w0, w1) = (hs[k - 1], hs[k], ws[k - 1], ws[k]);
        if w0 > 0.0 && w1 > 0.0 {
            let s = (t / t0).ln() / (t1 / t0).ln();
            Some((w0.ln() + s * (w1.ln() - w0.ln())).exp())
        } else {
            Some(w0 + (w1 - w0) * (t - t0) / (t1 - t0))
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["h", "omega"])?;
        for (h, o) in self.h_values.iter().zip(&self.omega_values) {
            wtr.write_record([fmt_f64(*h), fmt_f64(*o)])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["h", "omega"] {
            return Err(Error::Format(format!("expected header h,omega, got {headers:?}")));
        }
        let (mut hs, mut ws) = (Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec?;
            let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Format(e.to_string()));
            hs.push(num(&rec[0])?);
            ws.push(num(&rec[1])?);
        }
        Self::new(hs, ws)
    }
}

/// Modulus at each `h` (sorted, duplicates dropped), made nondecreasing.
pub fn modulus_profile(f: &GridFunction, h_values: &[f64]) -> Result<ModulusProfile> {
    let mut hs: Vec<f64> = h_values.to_vec();
    for &h in &hs {
        check_h(h)?;
    }
    hs.sort_by(f64::total_cmp);
    hs.dedup();
    let mut omega = Vec::with_capacity(hs.len());
    let mut running = 0.0f64;
    for &h in &hs {
        running = running.max(modulus(f, h)?);
        omega.push(running);
    }
    ModulusProfile::new(hs, omega)
}

/// `int_0^h omega(t) t^(-1-alpha) dt` from a sampled profile.
///
/// Over the profile range the integrand is integrated by the trapezoid rule
/// in `ln t`. Below the smallest profile point `omega` is extended as the
/// power law `C t^kappa` through the two smallest points; if `kappa <= alpha`
/// the tail diverges and `+inf` is returned.
pub fn omega_integral(profile: &ModulusProfile, alpha: f64, h: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain!("omega_integral needs alpha in (0, 1), got {alpha}"));
    }
    check_h(h)?;
    if profile.len() < 2 {
        return Err(domain!("omega_integral needs a profile of at least two points"));
    }
    let hs = &profile.h_values;
    let ws = &profile.omega_values;
    if h > hs[hs.len() - 1] * (1.0 + 1e-12) {
        return Err(domain!("h = {h} lies beyond the profile range"));
    }
    if ws.iter().all(|&w| w == 0.0) {
        return Ok(0.0);
    }

    let (t1, t2, w1, w2) = (hs[0], hs[1], ws[0], ws[1]);
    let tail_end = t1.min(h);
    let tail = if w1 == 0.0 {
        0.0
    } else {
        let kappa = (w2 / w1).ln() / (t2 / t1).ln();
        if kappa <= alpha {
            return Ok(f64::INFINITY);
        }
        // C t^kappa with C = w1 / t1^kappa, integrated over (0, tail_end)
        w1 * t1.powf(-kappa) * tail_end.powf(kappa - alpha) / (kappa - alpha)
    };
    if h <= t1 {
        return Ok(tail);
    }

    let mut pts: Vec<(f64, f64)> = hs.iter().zip(ws).take_while(|(&t, _)| t <= h).map(|(&t, &w)| (t, w)).collect();
    if pts.last().map(|p| p.0) != Some(h) {
        let wh = profile.value_at(h).unwrap_or(ws[ws.len() - 1]);
        pts.push((h, wh));
    }
    let g = |t: f64, w: f64| w * t.powf(-alpha);
    let body: f64 = pts
        .windows(2)
        .map(|p| {
            let (ta, wa) = p[0];
            let (tb, wb) = p[1];
            0.5 * (g(ta, wa) + g(tb, wb)) * (tb / ta).ln()
        })
        .sum();
    Ok(tail + body)
}
