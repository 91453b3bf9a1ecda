//! Orbits at controlled precision.
//!
//! Three regimes, chosen automatically:
//! * lattice: every slope is an integer, so the orbit stays on `(1/L)ℤ` for
//!   the common denominator `L` of the seed and all intercepts; numerators
//!   are iterated as big integers;
//! * exact: rational iteration while denominators stay within the precision;
//! * rounded: once denominators outgrow the precision, values are rounded to
//!   multiples of `2^{−precision}` and a forward error bound is propagated
//!   with the local Lipschitz constant over the error ball.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::pwl::PwlMap;
use crate::rational::{ratio_to_f64, Rat};

#[derive(Debug, Clone)]
enum Store {
    Lattice { den: BigInt, nums: Vec<BigInt> },
    Exact(Vec<Rat>),
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    seed: Rat,
    store: Store,
    precision_bits: u32,
    /// `log2` of the absolute error bound, plus `precision_bits`;
    /// `-inf` when every stored value is exact.
    error_bound_log2: f64,
}

/// Integer-slope lattice description of a map for a given seed.
struct Lattice {
    den: BigInt,
    thresholds: Vec<BigInt>,
    slopes: Vec<i64>,
    offsets: Vec<BigInt>,
}

impl Lattice {
    fn new(f: &PwlMap, seed: &Rat) -> Option<Lattice> {
        let slopes = f.slopes();
        if !slopes.iter().all(Rat::is_integer) {
            return None;
        }
        let intercepts: Vec<Rat> = (0..f.num_pieces())
            .map(|i| &f.ys()[i] - &(&slopes[i] * &f.xs()[i]))
            .collect();
        let mut den = seed.denom().clone();
        for c in &intercepts {
            den = den.lcm(c.denom());
        }
        let slopes_i: Option<Vec<i64>> = slopes.iter().map(|s| s.numer().to_i64()).collect();
        let offsets = intercepts
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        // k/L ≥ x_i  ⟺  k ≥ ceil(x_i L)
        let thresholds = f.xs()[1..f.xs().len() - 1]
            .iter()
            .map(|x| {
                let n = x.numer() * &den;
                n.div_ceil(x.denom())
            })
            .collect();
        Some(Lattice {
            den,
            thresholds,
            slopes: slopes_i?,
            offsets,
        })
    }

    fn step(&self, k: &BigInt) -> BigInt {
        let piece = self.thresholds.partition_point(|t| t <= k);
        k * self.slopes[piece] + &self.offsets[piece]
    }
}

pub const DEFAULT_PRECISION_BITS: u32 = 256;

impl Trajectory {
    pub fn seed(&self) -> &Rat {
        &self.seed
    }

    /// Number of stored values (`n + 1`).
    pub fn len(&self) -> usize {
        match &self.store {
            Store::Lattice { nums, .. } => nums.len(),
            Store::Exact(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn error_bound_log2(&self) -> f64 {
        self.error_bound_log2
    }

    /// Absolute bound on `|f^i(x) − stored_i|` over all `i`.
    pub fn error_bound(&self) -> f64 {
        (self.error_bound_log2 - self.precision_bits as f64).exp2()
    }

    pub fn is_exact(&self) -> bool {
        self.error_bound_log2 == f64::NEG_INFINITY
    }

    pub fn is_lattice(&self) -> bool {
        matches!(self.store, Store::Lattice { .. })
    }

    pub fn value(&self, i: usize) -> Rat {
        match &self.store {
            Store::Lattice { den, nums } => Rat::from_bigints(nums[i].clone(), den.clone()),
            Store::Exact(v) => v[i].clone(),
        }
    }

    pub fn value_f64(&self, i: usize) -> f64 {
        match &self.store {
            Store::Lattice { den, nums } => ratio_to_f64(&nums[i], den),
            Store::Exact(v) => v[i].to_f64(),
        }
    }

    pub fn values_f64(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value_f64(i)).collect()
    }

    /// `|f^i(x) − f^i(y)|` as floats over the common length.
    pub fn distances(&self, other: &Trajectory) -> Vec<f64> {
        let n = self.len().min(other.len());
        match (&self.store, &other.store) {
            (Store::Lattice { den: a, nums: xs }, Store::Lattice { den: b, nums: ys }) if a == b => {
                (0..n).map(|i| ratio_to_f64(&(&xs[i] - &ys[i]), a).abs()).collect()
            }
            (Store::Exact(xs), Store::Exact(ys)) => {
                (0..n).map(|i| (&xs[i] - &ys[i]).abs().to_f64()).collect()
            }
            _ => (0..n)
                .map(|i| (self.value_f64(i) - other.value_f64(i)).abs())
                .collect(),
        }
    }
}

/// `n + 1` values `x, f(x), …, f^n(x)` with a certified error bound.
pub fn trajectory(f: &PwlMap, x: &Rat, n: usize, precision_bits: u32) -> Result<Trajectory> {
    if precision_bits < 64 {
        return Err(Error::InvalidParameter("precision must be at least 64 bits".into()));
    }
    if !f.domain().contains(x) {
        return Err(Error::OutOfDomain(x.to_string()));
    }
    if let Some(lat) = Lattice::new(f, x) {
        let mut k = x.numer() * (&lat.den / x.denom());
        let mut nums = Vec::with_capacity(n + 1);
        nums.push(k.clone());
        for _ in 0..n {
            k = lat.step(&k);
            nums.push(k.clone());
        }
        return Ok(Trajectory {
            seed: x.clone(),
            store: Store::Lattice { den: lat.den, nums },
            precision_bits,
            error_bound_log2: f64::NEG_INFINITY,
        });
    }
    rational_trajectory(f, x, n, precision_bits)
}

fn rational_trajectory(f: &PwlMap, x: &Rat, n: usize, prec: u32) -> Result<Trajectory> {
    let limit = f.domain().len().to_f64() * 2f64.powi(-16);
    let xs_f: Vec<f64> = f.xs().iter().map(Rat::to_f64).collect();
    let slopes: Vec<f64> = f.slopes().iter().map(|s| s.abs().to_f64()).collect();
    let unit = 2f64.powi(-(prec as i32) - 1);
    let mut values = Vec::with_capacity(n + 1);
    let mut cur = x.clone();
    let mut err = 0.0f64;
    let mut max_err = 0.0f64;
    values.push(cur.clone());
    for step in 1..=n {
        let rounded = err > 0.0;
        let lip = if rounded { local_lipschitz(&xs_f, &slopes, cur.to_f64(), err) } else { 0.0 };
        let mut next = f.eval_in_domain(&cur);
        let mut next_err = lip * err * (1.0 + 1e-12);
        if next.den_bits() > u64::from(prec) {
            next = next.round_dyadic(prec);
            next_err += unit;
        }
        if next_err > limit {
            return Err(Error::PrecisionExhausted { step });
        }
        err = next_err;
        max_err = max_err.max(err);
        cur = next;
        values.push(cur.clone());
    }
    Ok(Trajectory {
        seed: x.clone(),
        store: Store::Exact(values),
        precision_bits: prec,
        error_bound_log2: if max_err.is_zero() {
            f64::NEG_INFINITY
        } else {
            max_err.log2() + prec as f64
        },
    })
}

/// Largest `|slope|` over pieces meeting the closed ball around `x`, widened
/// by float resolution so the answer is conservative.
fn local_lipschitz(xs: &[f64], slopes: &[f64], x: f64, err: f64) -> f64 {
    let pad = err + 4.0 * f64::EPSILON * x.abs().max(1.0);
    let (lo, hi) = (x - pad, x + pad);
    (0..slopes.len())
        .filter(|&i| xs[i] <= hi && xs[i + 1] >= lo)
        .map(|i| slopes[i])
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{delahaye, tent};
    use crate::rational::q;

    #[test]
    fn fixed_point_is_constant() {
        let t = trajectory(&tent(2).unwrap(), &q(2, 3), 5, 128).unwrap();
        assert!(t.is_lattice() && t.is_exact());
        assert!((0..=5).all(|i| t.value(i) == q(2, 3)));
    }

    #[test]
    fn delahaye_orbit_hits_the_block_ends() {
        let t = trajectory(&delahaye(8).unwrap(), &Rat::zero(), 7, 256).unwrap();
        assert!(!t.is_lattice());
        assert_eq!(t.value(7), q(26, 27));
        assert!(t.is_exact());
    }

    #[test]
    fn odd_denominators_survive_doubling() {
        let x = Rat::from_bigints(BigInt::from(1), BigInt::from((1u64 << 20) + 1));
        let t = trajectory(&tent(2).unwrap(), &x, 60, 256).unwrap();
        assert!(t.is_exact());
        // independent exact replay
        let f = tent(2).unwrap();
        let mut y = x.clone();
        for i in 0..=60 {
            assert_eq!(t.value(i), y);
            y = f.eval(&y).unwrap();
        }
        assert!(t.value(60) != Rat::zero());
    }

    #[test]
    fn rounded_mode_is_certified() {
        // slopes 1/2 and -3/2: denominators grow, forcing rounding, while
        // the dynamics contract on average
        let f = PwlMap::new(
            crate::rational::iv(q(0, 1), q(1, 1)),
            vec![(q(0, 1), q(1, 2)), (q(1, 2), q(3, 4)), (q(1, 1), q(0, 1))],
        )
        .unwrap();
        let x = q(1, 7);
        let coarse = trajectory(&f, &x, 300, 64).unwrap();
        assert!(!coarse.is_exact());
        let fine = trajectory(&f, &x, 300, 512).unwrap();
        for i in 0..=300 {
            let d = (&coarse.value(i) - &fine.value(i)).abs().to_f64();
            assert!(d <= coarse.error_bound() + fine.error_bound(), "step {i}");
        }
    }

    #[test]
    fn expanding_rounding_exhausts() {
        // slope 3/2 everywhere on a lap: errors grow geometrically
        let f = PwlMap::new(
            crate::rational::iv(q(0, 1), q(1, 1)),
            vec![(q(0, 1), q(0, 1)), (q(2, 3), q(1, 1)), (q(1, 1), q(1, 2))],
        )
        .unwrap();
        let r = trajectory(&f, &q(1, 5), 5000, 64);
        assert!(matches!(r, Err(Error::PrecisionExhausted { .. })));
    }
}
