//! Grid estimates of separated-set growth. These are heuristics: a uniform
//! float grid and greedy selection give no rigorous bound.

use crate::pwl::{FloatMap, PwlMap};
use crate::rational::Rat;

/// Orbit samples `f^t(x)` at the requested times for each grid point.
pub(crate) fn grid_orbits(f: &FloatMap, times: &[usize], grid: usize) -> Vec<Vec<f64>> {
    let (lo, hi) = (f.lo(), f.hi());
    let last = times.last().copied().unwrap_or(0);
    (0..grid)
        .map(|i| {
            let mut x = if grid == 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (grid - 1) as f64
            };
            let mut out = Vec::with_capacity(times.len());
            let mut next = 0;
            for t in 0..=last {
                while next < times.len() && times[next] == t {
                    out.push(x);
                    next += 1;
                }
                x = f.eval(x);
            }
            out
        })
        .collect()
}

/// Size of a greedy subset whose members are pairwise separated by more
/// than `eps` at some sampled time.
pub(crate) fn greedy_separated(orbits: &[Vec<f64>], eps: f64) -> usize {
    let mut chosen: Vec<&Vec<f64>> = Vec::new();
    for o in orbits {
        let separated = chosen
            .iter()
            .all(|c| c.iter().zip(o).any(|(a, b)| (a - b).abs() > eps));
        if separated {
            chosen.push(o);
        }
    }
    chosen.len()
}

/// `(1/n) log s` for a greedy `(n, ε)`-separated subset of a uniform grid of
/// `grid` points.
pub fn bowen_estimate(f: &PwlMap, n: usize, eps: &Rat, grid: usize) -> f64 {
    if n == 0 || grid == 0 {
        return 0.0;
    }
    let times: Vec<usize> = (0..n).collect();
    let orbits = grid_orbits(&f.to_float(), &times, grid);
    (greedy_separated(&orbits, eps.to_f64()) as f64).ln() / n as f64
}
