//! Nested cycles of intervals along an orbit, as found in maps whose periods
//! are all powers of two.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pwl::PwlMap;
use crate::rational::{IntervalQ, Rat};

use super::dist::tail_window;
use super::trajectory::{trajectory, DEFAULT_PRECISION_BITS};

/// Hulls `L, f(L), …, f^{p−1}(L)` with `f^p(L) ⊆ L`, pairwise disjoint;
/// `intervals[0]` is the rightmost hull.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolenoidCycle {
    pub level: u32,
    pub period: usize,
    pub intervals: Vec<IntervalQ>,
    /// Every hull is a single point: the cycle is a periodic orbit, listed
    /// once with its own least period.
    pub degenerate: bool,
}

const CLOSURE_ROUNDS: usize = 256;

/// Scan levels `k = 0..=k_max` and return the verified cycles up to the
/// first level whose hull cycle overlaps itself.
pub fn solenoid_scan(f: &PwlMap, x: &Rat, k_max: u32, horizon: usize) -> Result<Vec<SolenoidCycle>> {
    if k_max > 20 {
        return Err(Error::InvalidParameter("level above 20".into()));
    }
    let orbit = trajectory(f, x, horizon, DEFAULT_PRECISION_BITS)?;
    if !orbit.is_exact() {
        return Err(Error::PrecisionExhausted { step: horizon });
    }
    let (start, end) = tail_window(horizon, 0.2);
    let mut out = Vec::new();
    for k in 0..=k_max {
        let p = 1usize << k;
        let seeds: Vec<Rat> = (start..=end).step_by(p).map(|i| orbit.value(i)).collect();
        let Some(hull) = invariant_hull(f, &seeds, p)? else {
            break;
        };
        let mut cycle = vec![hull];
        for _ in 1..p {
            let next = f.image(cycle.last().expect("nonempty"))?;
            cycle.push(next);
        }
        let degenerate = cycle.iter().all(IntervalQ::is_degenerate);
        if degenerate {
            let mut pts: Vec<IntervalQ> = Vec::new();
            for c in cycle {
                if pts.contains(&c) {
                    break;
                }
                pts.push(c);
            }
            rotate_rightmost(&mut pts);
            out.push(SolenoidCycle {
                level: k,
                period: pts.len(),
                intervals: pts,
                degenerate: true,
            });
            continue;
        }
        let disjoint = (0..p).all(|i| (i + 1..p).all(|j| cycle[i].is_disjoint(&cycle[j])));
        if !disjoint {
            break;
        }
        rotate_rightmost(&mut cycle);
        out.push(SolenoidCycle {
            level: k,
            period: p,
            intervals: cycle,
            degenerate: false,
        });
    }
    Ok(out)
}

/// Smallest interval containing the seeds that `f^p` maps into itself,
/// grown by repeated hulls with the image; `None` if it does not settle.
fn invariant_hull(f: &PwlMap, seeds: &[Rat], p: usize) -> Result<Option<IntervalQ>> {
    let lo = seeds.iter().min().ok_or(Error::TooFewPoints)?.clone();
    let hi = seeds.iter().max().expect("nonempty").clone();
    let mut hull = IntervalQ::new(lo, hi)?;
    for _ in 0..CLOSURE_ROUNDS {
        let mut img = hull.clone();
        for _ in 0..p {
            img = f.image(&img)?;
        }
        if hull.contains_interval(&img) {
            return Ok(Some(hull));
        }
        hull = hull.hull(&img);
    }
    Ok(None)
}

fn rotate_rightmost(cycle: &mut [IntervalQ]) {
    if let Some(i) = (0..cycle.len()).max_by(|&a, &b| cycle[a].hi().cmp(cycle[b].hi())) {
        cycle.rotate_left(i);
    }
}
