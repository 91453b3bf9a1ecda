//! Sequence-entropy estimates along a chosen time sequence.

use serde::{Deserialize, Serialize};

use crate::entropy::{greedy_separated, grid_orbits};
use crate::error::{Error, Result};
use crate::pwl::PwlMap;
use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeqEntropyEstimate {
    pub value: f64,
    pub separated: usize,
    /// Always set: a greedy grid subset bounds nothing rigorously.
    pub heuristic: bool,
}

/// `(1/n) log s` where `s` is the size of a greedy subset of a uniform grid
/// whose orbits, sampled at the first `n` times of `times`, are pairwise
/// more than `eps` apart at some sampled time.
pub fn seq_entropy_estimate(
    f: &PwlMap,
    times: &[usize],
    n: usize,
    eps: &Rat,
    grid: usize,
) -> Result<SeqEntropyEstimate> {
    if times.len() < n {
        return Err(Error::InvalidParameter("time sequence shorter than n".into()));
    }
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("time sequence must be strictly increasing".into()));
    }
    if n == 0 || grid == 0 {
        return Ok(SeqEntropyEstimate {
            value: 0.0,
            separated: grid.min(1),
            heuristic: true,
        });
    }
    let orbits = grid_orbits(&f.to_float(), &times[..n], grid);
    let separated = greedy_separated(&orbits, eps.to_f64());
    Ok(SeqEntropyEstimate {
        value: (separated as f64).ln() / n as f64,
        separated,
        heuristic: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::bowen_estimate;
    use crate::families::tent;
    use crate::rational::{iv, q};

    #[test]
    fn consecutive_times_agree_with_bowen() {
        let t2 = tent(2).unwrap();
        let times: Vec<usize> = (0..10).collect();
        let est = seq_entropy_estimate(&t2, &times, 10, &q(1, 64), 1024).unwrap();
        assert!((est.value - bowen_estimate(&t2, 10, &q(1, 64), 1024)).abs() < 1e-15);
        assert!(est.heuristic);
    }

    #[test]
    fn identity_decays() {
        let id = PwlMap::identity(iv(q(0, 1), q(1, 1)));
        let times: Vec<usize> = (0..40).map(|k| k * k).collect();
        let a = seq_entropy_estimate(&id, &times, 10, &q(1, 64), 512).unwrap().value;
        let b = seq_entropy_estimate(&id, &times, 40, &q(1, 64), 512).unwrap().value;
        assert!(b < a && b < 0.15);
    }

    #[test]
    fn rejects_bad_sequences() {
        let t2 = tent(2).unwrap();
        assert!(seq_entropy_estimate(&t2, &[0, 2, 2], 3, &q(1, 8), 16).is_err());
        assert!(seq_entropy_estimate(&t2, &[0, 1], 3, &q(1, 8), 16).is_err());
    }
}
