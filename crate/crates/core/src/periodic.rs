//! Periodic points, the Sharkovsky order and type inference.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pwl::{Budget, PwlMap};
use crate::rational::{IntervalQ, Rat};

/// Solutions of `g(x) = x`: isolated points and maximal diagonal segments.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FixedSet {
    pub isolated: Vec<Rat>,
    pub segments: Vec<IntervalQ>,
}

impl FixedSet {
    pub fn contains(&self, x: &Rat) -> bool {
        self.isolated.binary_search(x).is_ok() || self.segments.iter().any(|s| s.contains(x))
    }
}

/// Exact fixed-point census of `g`, piece by piece.
pub fn fixed_sets(g: &PwlMap) -> FixedSet {
    let xs = g.xs();
    let ys = g.ys();
    let mut isolated = Vec::new();
    let mut segments: Vec<IntervalQ> = Vec::new();
    for i in 0..g.num_pieces() {
        let d0 = &ys[i] - &xs[i];
        let d1 = &ys[i + 1] - &xs[i + 1];
        if d0.is_zero() && d1.is_zero() {
            match segments.last_mut() {
                Some(s) if s.hi() == &xs[i] => {
                    *s = IntervalQ::spanning(s.lo().clone(), xs[i + 1].clone());
                }
                _ => segments.push(IntervalQ::spanning(xs[i].clone(), xs[i + 1].clone())),
            }
            continue;
        }
        if d0.is_zero() {
            isolated.push(xs[i].clone());
        } else if d0.signum() * d1.signum() < 0 {
            let x = &xs[i] + &(&d0 * (&xs[i + 1] - &xs[i]) / (&d0 - &d1));
            isolated.push(x);
        }
    }
    let last = xs.len() - 1;
    if xs[last] == ys[last] {
        isolated.push(xs[last].clone());
    }
    isolated.sort();
    isolated.dedup();
    isolated.retain(|x| !segments.iter().any(|s| s.contains(x)));
    FixedSet { isolated, segments }
}

/// A periodic orbit: its points in increasing order and the permutation
/// `sigma` with `f(points[i]) = points[sigma[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    points: Vec<Rat>,
    sigma: Vec<usize>,
}

impl PeriodicOrbit {
    /// The orbit of `x` under `f`, which must return to `x` within
    /// `max_period` steps.
    pub fn of_point(f: &PwlMap, x: &Rat, max_period: usize) -> Result<Self> {
        let mut traj = vec![x.clone()];
        let mut y = f.eval(x)?;
        while &y != x {
            if traj.len() >= max_period {
                return Err(Error::BadOrbit(format!(
                    "{x} does not return within {max_period} steps"
                )));
            }
            traj.push(y.clone());
            y = f.eval(&y)?;
        }
        let mut points = traj.clone();
        points.sort();
        let index = |v: &Rat| points.binary_search(v).expect("orbit point");
        let p = traj.len();
        let mut sigma = vec![0; p];
        for i in 0..p {
            sigma[index(&traj[i])] = index(&traj[(i + 1) % p]);
        }
        Ok(PeriodicOrbit { points, sigma })
    }

    /// An orbit given combinatorially; `sigma` must be a single cycle.
    pub fn from_parts(points: Vec<Rat>, sigma: Vec<usize>) -> Result<Self> {
        let p = points.len();
        if p == 0 || sigma.len() != p {
            return Err(Error::BadOrbit("points and permutation differ in length".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadOrbit("points are not strictly increasing".into()));
        }
        let mut seen = vec![false; p];
        let mut i = 0;
        for _ in 0..p {
            if i >= p || seen[i] {
                return Err(Error::BadOrbit("permutation is not a single cycle".into()));
            }
            seen[i] = true;
            i = sigma[i];
        }
        if i != 0 {
            return Err(Error::BadOrbit("permutation is not a single cycle".into()));
        }
        Ok(PeriodicOrbit { points, sigma })
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn period(&self) -> usize {
        self.points.len()
    }

    /// Orbit points in dynamical order starting from `points[start]`.
    pub fn trajectory_indices(&self, start: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.period());
        let mut i = start;
        for _ in 0..self.period() {
            out.push(i);
            i = self.sigma[i];
        }
        out
    }

    /// Re-checks `f(points[i]) = points[sigma[i]]` exactly.
    pub fn verify(&self, f: &PwlMap) -> bool {
        self.points
            .iter()
            .zip(&self.sigma)
            .all(|(x, &j)| f.eval(x).map(|y| y == self.points[j]).unwrap_or(false))
    }
}

/// Periodic structure of `P_n(f)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicPoints {
    pub orbits: Vec<PeriodicOrbit>,
    /// Diagonal segments of `f^n`; least periods inside them are not resolved.
    pub segments: Vec<IntervalQ>,
    pub segment_ambiguity: bool,
}

/// Least `j ≥ 1` with `f^j(x) = x`, searching up to `bound`.
pub fn least_period(f: &PwlMap, x: &Rat, bound: usize) -> Option<usize> {
    let mut y = f.eval(x).ok()?;
    for j in 1..=bound {
        if &y == x {
            return Some(j);
        }
        y = f.eval_in_domain(&y);
    }
    None
}

/// All isolated points of `P_n(f)`, grouped into orbits sorted by their
/// smallest point.
pub fn periodic_points(f: &PwlMap, n: usize, budget: &Budget) -> Result<PeriodicPoints> {
    let g = f.iterate(n, budget)?;
    let fs = fixed_sets(&g);
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for x in &fs.isolated {
        if seen.contains(x) {
            continue;
        }
        let orbit = PeriodicOrbit::of_point(f, x, n)?;
        seen.extend(orbit.points().iter().cloned());
        orbits.push(orbit);
    }
    orbits.sort_by(|a, b| a.points()[0].cmp(&b.points()[0]));
    Ok(PeriodicPoints {
        orbits,
        segment_ambiguity: !fs.segments.is_empty(),
        segments: fs.segments,
    })
}

/// Witnesses of each realized least period: for every period `k ≤ bound`,
/// the smallest exact point found with that least period.
pub fn period_witnesses(f: &PwlMap, bound: usize, budget: &Budget) -> Result<BTreeMap<usize, Rat>> {
    let mut found: BTreeMap<usize, Rat> = BTreeMap::new();
    for (k, g) in f.iterates(budget).take(bound).enumerate() {
        let k = k + 1;
        let g = g?;
        let fs = fixed_sets(&g);
        let candidates = fs
            .isolated
            .iter()
            .chain(fs.segments.iter().flat_map(|s| [s.lo(), s.hi()]));
        for x in candidates {
            if least_period(f, x, k) == Some(k) {
                found.entry(k).or_insert_with(|| x.clone());
                break;
            }
        }
    }
    Ok(found)
}

/// Least periods `≤ bound` realized by exactly computed periodic points.
pub fn periods_up_to(f: &PwlMap, bound: usize, budget: &Budget) -> Result<BTreeSet<usize>> {
    Ok(period_witnesses(f, bound, budget)?.into_keys().collect())
}

fn sharkovsky_key(n: u64) -> (u8, i64, u64) {
    assert!(n >= 1, "Sharkovsky order is defined on positive integers");
    let a = n.trailing_zeros();
    let q = n >> a;
    if q > 1 {
        (0, a as i64, q)
    } else {
        (1, -(a as i64), 0)
    }
}

/// Position comparison in the order 3 ◁ 5 ◁ 7 ◁ … ◁ 2·3 ◁ … ◁ 4 ◁ 2 ◁ 1.
pub fn sharkovsky_cmp(m: u64, n: u64) -> Ordering {
    sharkovsky_key(m).cmp(&sharkovsky_key(n))
}

/// `m ⊴ n`: a period `m` forces period `n`.
pub fn sharkovsky_leq(m: u64, n: u64) -> bool {
    sharkovsky_cmp(m, n) != Ordering::Greater
}

/// `{m ≤ bound : n ⊴ m}`.
pub fn sharkovsky_forced(n: u64, bound: u64) -> BTreeSet<u64> {
    (1..=bound).filter(|&m| sharkovsky_leq(n, m)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SharkovskyType {
    Finite(u64),
    /// Every period found up to the bound is a power of two, and the next
    /// power of two beyond the largest one found exceeds the bound.
    TwoInfinityCandidate(u64),
}

/// Type verdict from the periods realized up to `bound`.
pub fn infer_type(f: &PwlMap, bound: usize, budget: &Budget) -> Result<SharkovskyType> {
    let periods = periods_up_to(f, bound, budget)?;
    Ok(type_from_periods(&periods, bound as u64))
}

pub fn type_from_periods(periods: &BTreeSet<usize>, bound: u64) -> SharkovskyType {
    let Some(min) = periods
        .iter()
        .map(|&p| p as u64)
        .min_by(|&a, &b| sharkovsky_cmp(a, b))
    else {
        return SharkovskyType::TwoInfinityCandidate(bound);
    };
    if !min.is_power_of_two() || 2 * min <= bound {
        SharkovskyType::Finite(min)
    } else {
        SharkovskyType::TwoInfinityCandidate(bound)
    }
}

/// Period of a period-`n` point under `f^k`.
pub fn period_under_power(n: u64, k: u64) -> u64 {
    n / n.gcd(&k)
}

/// Smallest odd `p ∈ [3, horizon]` with `f^p(x) ≤ x < f(x)` or
/// `f^p(x) ≥ x > f(x)`; such a pattern forces a point of period `p`.
pub fn odd_period_witness(f: &PwlMap, x: &Rat, horizon: usize) -> Option<usize> {
    let x1 = f.eval(x).ok()?;
    if &x1 == x {
        return None;
    }
    let up = &x1 > x;
    let mut y = x1;
    for p in 2..=horizon {
        y = f.eval_in_domain(&y);
        if p % 2 == 1 && ((up && &y <= x) || (!up && &y >= x)) {
            return Some(p);
        }
    }
    None
}
