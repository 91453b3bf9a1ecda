//! Li–Yorke pair statistics over a tail window.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pwl::PwlMap;
use crate::rational::Rat;

use super::dist::{pair_distances, tail_window};
use super::ChaosConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyPair {
    pub x: Rat,
    pub y: Rat,
    /// Maximum distance over the tail window.
    pub limsup: f64,
    /// Minimum distance over the tail window.
    pub liminf: f64,
    pub candidate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyScan {
    pub horizon: usize,
    pub delta: f64,
    pub delta_low: f64,
    pub pairs: Vec<LyPair>,
    pub fraction: f64,
}

pub fn ly_pair_scan(f: &PwlMap, seeds: &[(Rat, Rat)], horizon: usize, delta: f64) -> Result<LyScan> {
    ly_pair_scan_with(f, seeds, horizon, delta, &ChaosConfig::default())
}

/// A pair is a candidate when its tail distances reach `delta` and come
/// within `delta_low`.
pub fn ly_pair_scan_with(
    f: &PwlMap,
    seeds: &[(Rat, Rat)],
    horizon: usize,
    delta: f64,
    cfg: &ChaosConfig,
) -> Result<LyScan> {
    let (start, end) = tail_window(horizon, cfg.tail_fraction);
    let mut pairs = Vec::with_capacity(seeds.len());
    for (x, y) in seeds {
        let d = pair_distances(f, x, y, horizon + 1, cfg.precision_bits)?;
        let tail = &d[start.min(end)..=end];
        let limsup = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let liminf = tail.iter().copied().fold(f64::INFINITY, f64::min);
        pairs.push(LyPair {
            x: x.clone(),
            y: y.clone(),
            limsup,
            liminf,
            candidate: limsup >= delta && liminf <= cfg.delta_low,
        });
    }
    let hits = pairs.iter().filter(|p| p.candidate).count();
    let fraction = if pairs.is_empty() { 0.0 } else { hits as f64 / pairs.len() as f64 };
    Ok(LyScan {
        horizon,
        delta,
        delta_low: cfg.delta_low,
        pairs,
        fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::seeds::random_seed_pairs;
    use crate::families::tent;
    use crate::pwl::PwlMap;
    use crate::rational::{iv, q};

    #[test]
    fn fixed_points_are_not_a_candidate() {
        let scan = ly_pair_scan(&tent(2).unwrap(), &[(q(0, 1), q(2, 3))], 1000, 0.25).unwrap();
        assert!(!scan.pairs[0].candidate);
        assert!((scan.pairs[0].liminf - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn identity_has_no_candidates() {
        let id = PwlMap::identity(iv(q(0, 1), q(1, 1)));
        let seeds = random_seed_pairs(id.domain(), 20, 1);
        assert_eq!(ly_pair_scan(&id, &seeds, 1000, 0.25).unwrap().fraction, 0.0);
    }
}
