//! Orbit-distance statistics: `ξ(n, t)` and finite-horizon lower and upper
//! distribution functions.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pwl::PwlMap;
use crate::rational::Rat;

use super::trajectory::trajectory;
use super::ChaosConfig;

/// Lower and upper distribution functions on a grid of thresholds `t`:
/// the minimum and maximum of `ξ(n, t)/n` over `n` in a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistFns {
    pub t_grid: Vec<f64>,
    pub f_lower: Vec<f64>,
    pub f_upper: Vec<f64>,
    pub horizon: usize,
    pub window: (usize, usize),
}

impl DistFns {
    /// Bounds, ordering, monotonicity and boundary values.
    pub fn check_invariants(&self, diameter: f64) -> bool {
        let n = self.t_grid.len();
        let bounded = (0..n).all(|i| {
            0.0 <= self.f_lower[i] && self.f_lower[i] <= self.f_upper[i] && self.f_upper[i] <= 1.0
        });
        let monotone = (1..n).all(|i| {
            self.f_lower[i - 1] <= self.f_lower[i] && self.f_upper[i - 1] <= self.f_upper[i]
        });
        let boundary = (0..n).all(|i| {
            let t = self.t_grid[i];
            (t > 0.0 || (self.f_lower[i] == 0.0 && self.f_upper[i] == 0.0))
                && (t <= diameter || (self.f_lower[i] == 1.0 && self.f_upper[i] == 1.0))
        });
        bounded && monotone && boundary
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,F_lower,F_upper\n");
        for i in 0..self.t_grid.len() {
            let _ = writeln!(s, "{},{},{}", self.t_grid[i], self.f_lower[i], self.f_upper[i]);
        }
        s
    }
}

/// `#{i < n : d_i < t}`.
pub fn xi(distances: &[f64], n: usize, t: f64) -> usize {
    distances[..n].iter().filter(|&&d| d < t).count()
}

/// `points` thresholds from 0 to just above the diameter.
pub fn default_t_grid(diameter: f64, points: usize) -> Vec<f64> {
    let top = diameter * 1.01;
    let m = points.max(2);
    (0..m).map(|j| top * j as f64 / (m - 1) as f64).collect()
}

/// Distribution functions of a distance sequence over `n ∈ [start, end]`.
pub fn dist_fns_from_distances(distances: &[f64], t_grid: &[f64], start: usize, end: usize) -> DistFns {
    let start = start.max(1);
    let end = end.min(distances.len()).max(start);
    let mut f_lower = Vec::with_capacity(t_grid.len());
    let mut f_upper = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let mut count = 0usize;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for n in 1..=end {
            if distances[n - 1] < t {
                count += 1;
            }
            if n >= start {
                let r = count as f64 / n as f64;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        f_lower.push(lo);
        f_upper.push(hi);
    }
    DistFns {
        t_grid: t_grid.to_vec(),
        f_lower,
        f_upper,
        horizon: distances.len(),
        window: (start, end),
    }
}

/// Tail window `[⌈(1 − fraction)·H⌉, H]`.
pub fn tail_window(horizon: usize, fraction: f64) -> (usize, usize) {
    let start = ((1.0 - fraction) * horizon as f64).ceil() as usize;
    (start.max(1), horizon)
}

pub fn pair_distances(f: &PwlMap, x: &Rat, y: &Rat, horizon: usize, precision_bits: u32) -> Result<Vec<f64>> {
    let tx = trajectory(f, x, horizon, precision_bits)?;
    let ty = trajectory(f, y, horizon, precision_bits)?;
    let mut d = tx.distances(&ty);
    d.truncate(horizon);
    Ok(d)
}

/// Distribution functions of the pair `(x, y)` over the default tail window.
pub fn dist_fns(f: &PwlMap, x: &Rat, y: &Rat, horizon: usize, t_grid: &[f64]) -> Result<DistFns> {
    dist_fns_with(f, x, y, horizon, t_grid, &ChaosConfig::default())
}

pub fn dist_fns_with(
    f: &PwlMap,
    x: &Rat,
    y: &Rat,
    horizon: usize,
    t_grid: &[f64],
    cfg: &ChaosConfig,
) -> Result<DistFns> {
    if horizon < 100 {
        return Err(Error::InvalidParameter("horizon must be at least 100".into()));
    }
    let d = pair_distances(f, x, y, horizon, cfg.precision_bits)?;
    let (start, end) = tail_window(horizon, cfg.tail_fraction);
    Ok(dist_fns_from_distances(&d, t_grid, start, end))
}
