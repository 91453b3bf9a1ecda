//! Rigorous entropy bounds (natural logarithms) and their witnesses.

mod bowen;
mod horseshoe;
mod spectral;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use bowen::bowen_estimate;
pub(crate) use bowen::{greedy_separated, grid_orbits};
pub use horseshoe::{
    horseshoe_search, shift_intervals, strict_horseshoe_search, Horseshoe, ShiftIntervals,
};
pub use spectral::{charpoly, irreducible_blocks, spectral_radius};

use crate::error::{Error, Result};
use crate::markov::build_orbit_graph;
use crate::periodic::periodic_points;
use crate::pwl::{Budget, PwlMap};
use crate::rational::Rat;

pub const SPECTRAL_TOL: f64 = 1e-10;
pub const LAMBDA_TOL: f64 = 1e-12;
pub const REPORT_TOL: f64 = 1e-9;

/// Largest set size tried when merging orbits into one invariant set.
const MAX_UNION_POINTS: usize = 512;
/// Steps allowed for a breakpoint orbit to become periodic.
const BREAKPOINT_ORBIT_STEPS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LowerWitness {
    /// Connect-the-dots matrix of a periodic orbit.
    Orbit { period: usize, point: Rat },
    /// Connect-the-dots matrix of a finite invariant set.
    InvariantSet { points: Vec<Rat> },
    /// A horseshoe for an iterate.
    Horseshoe { power: usize },
    /// Period forcing: any map with this period has at least this entropy.
    Period { period: usize },
    Trivial,
}

impl fmt::Display for LowerWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LowerWitness::Orbit { period, point } => {
                write!(f, "periodic orbit of period {period} through {point}")
            }
            LowerWitness::InvariantSet { points } => {
                write!(f, "finite invariant set of {} points", points.len())
            }
            LowerWitness::Horseshoe { power } => write!(f, "horseshoe for iterate {power}"),
            LowerWitness::Period { period } => write!(f, "forced by period {period}"),
            LowerWitness::Trivial => write!(f, "trivial"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum UpperWitness {
    LapCount { n: usize, laps: usize },
    Lipschitz { slope: Rat },
    /// Exact value for a map monotone between points of an invariant set.
    Markov { points: usize },
}

impl fmt::Display for UpperWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperWitness::LapCount { n, laps } => write!(f, "lap count c_{n} = {laps}"),
            UpperWitness::Lipschitz { slope } => write!(f, "Lipschitz constant {slope}"),
            UpperWitness::Markov { points } => {
                write!(f, "monotone on the intervals of a {points}-point invariant set")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyBounds {
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: LowerWitness,
    pub upper_witness: UpperWitness,
}

fn log_radius(rho: f64) -> f64 {
    if rho > 1.0 {
        rho.ln()
    } else {
        0.0
    }
}

/// `max(0, log λ(M(f_P)))` for `f` monotone on every `P`-interval.
pub fn entropy_markov(f: &PwlMap, p: &[Rat]) -> Result<f64> {
    let g = build_orbit_graph(f, p)?;
    if let Some(i) = g.intervals.iter().position(|j| !f.is_monotone_on(j)) {
        return Err(Error::NotPMonotone(i));
    }
    Ok(log_radius(spectral_radius(&g.ctd_matrix, SPECTRAL_TOL)?))
}

/// `max(0, log λ(M(f_P)))` without the monotonicity requirement: a lower
/// bound for any finite invariant `P`.
pub fn entropy_connect_the_dots(f: &PwlMap, p: &[Rat]) -> Result<f64> {
    let g = build_orbit_graph(f, p)?;
    Ok(log_radius(spectral_radius(&g.ctd_matrix, SPECTRAL_TOL)?))
}

/// `(1/n) log c_n`.
pub fn entropy_upper_lap(f: &PwlMap, n: usize, budget: &Budget) -> Result<f64> {
    let laps = f.lap_count(n, budget)?;
    Ok((laps as f64).ln() / n as f64)
}

/// `log max(1, max |slope|)`.
pub fn entropy_upper_lipschitz(f: &PwlMap) -> f64 {
    let s = f.max_abs_slope().to_f64();
    if s > 1.0 {
        s.ln()
    } else {
        0.0
    }
}

fn lambda_poly(q: u32, x: f64) -> f64 {
    x.powi(q as i32 - 2) * (x * x - 2.0) - 1.0
}

/// Bracket `[lo, hi]` of width below `tol` around the positive root of
/// `X^q − 2X^{q−2} − 1`, with the polynomial negative at `lo` and positive
/// at `hi`.
pub fn lambda_q_bracket(q: u32, tol: f64) -> Result<(f64, f64)> {
    if q < 3 || q % 2 == 0 {
        return Err(Error::NotOdd(q as i64));
    }
    let s = std::f64::consts::SQRT_2;
    let mut lo = s;
    let mut hi = s + s.powi(-(q as i32 + 1)) + tol;
    if !(lambda_poly(q, lo) < 0.0 && lambda_poly(q, hi) > 0.0) {
        return Err(Error::NonConvergence(format!("no sign change for q = {q}")));
    }
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lambda_poly(q, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// The positive root `λ_q` of `X^q − 2X^{q−2} − 1`, within `tol`.
pub fn lambda_q(q: u32, tol: f64) -> Result<f64> {
    let (lo, hi) = lambda_q_bracket(q, tol)?;
    Ok(0.5 * (lo + hi))
}

/// Entropy forced by one period `2^d·q`: `log λ_q / 2^d`, or 0 for powers of two.
pub fn type_entropy_bound(period: u64) -> f64 {
    if period == 0 {
        return 0.0;
    }
    let d = period.trailing_zeros();
    let q = period >> d;
    if q == 1 {
        return 0.0;
    }
    let l = lambda_q(q as u32, LAMBDA_TOL).expect("odd q >= 3");
    l.ln() / (1u64 << d) as f64
}

/// Forward orbits of all breakpoints, if each becomes periodic quickly
/// and the union stays small.
pub fn breakpoint_orbit_set(f: &PwlMap) -> Option<Vec<Rat>> {
    let mut set = BTreeSet::new();
    for x in f.xs() {
        let mut y = x.clone();
        let mut closed = false;
        for _ in 0..BREAKPOINT_ORBIT_STEPS {
            if !set.insert(y.clone()) {
                closed = true;
                break;
            }
            if set.len() > MAX_UNION_POINTS {
                return None;
            }
            y = f.eval_in_domain(&y);
        }
        if !closed {
            return None;
        }
    }
    Some(set.into_iter().collect())
}

/// Best connect-the-dots lower bound over periodic orbits of period `≤ n`,
/// their union, and the breakpoint orbit set when it is finite.
pub fn entropy_lower_sup(f: &PwlMap, n: usize, budget: &Budget) -> Result<(f64, LowerWitness)> {
    let mut best = (0.0, LowerWitness::Trivial);
    let mut consider = |value: f64, witness: LowerWitness| {
        if value > best.0 + 1e-15 {
            best = (value, witness);
        }
    };
    let mut union = BTreeSet::new();
    for k in 1..=n {
        let pp = periodic_points(f, k, budget)?;
        for o in pp.orbits.iter().filter(|o| o.period() == k && k >= 2) {
            let h = entropy_connect_the_dots(f, o.points())?;
            consider(
                h,
                LowerWitness::Orbit {
                    period: k,
                    point: o.points()[0].clone(),
                },
            );
        }
        for o in &pp.orbits {
            union.extend(o.points().iter().cloned());
        }
    }
    if union.len() >= 2 && union.len() <= MAX_UNION_POINTS {
        let pts: Vec<Rat> = union.into_iter().collect();
        consider(
            entropy_connect_the_dots(f, &pts)?,
            LowerWitness::InvariantSet { points: pts },
        );
    }
    if let Some(pts) = breakpoint_orbit_set(f) {
        if pts.len() >= 2 {
            consider(
                entropy_connect_the_dots(f, &pts)?,
                LowerWitness::InvariantSet { points: pts },
            );
        }
    }
    Ok(best)
}
