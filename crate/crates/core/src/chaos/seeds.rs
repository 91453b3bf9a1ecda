//! Deterministic random seeds with odd prime denominators near `2^31`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_bigint::BigInt;

use crate::rational::{IntervalQ, Rat};

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    };
    // deterministic for n < 3.4e14
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below `2^31`.
pub fn primes_below_2_31(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << 31) - 1;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

/// `count` pairs of points `k/p` in the interval, each with its own odd
/// prime denominator `p`, drawn from a seeded generator.
pub fn random_seed_pairs(domain: &IntervalQ, count: usize, seed: u64) -> Vec<(Rat, Rat)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = primes_below_2_31(2 * count);
    let lo = domain.lo().to_f64();
    let len = domain.len();
    let mut point = |p: u64| {
        let k: u64 = rng.gen_range(1..p);
        let frac = Rat::from_bigints(BigInt::from(k), BigInt::from(p));
        let x = domain.lo() + &(&len * &frac);
        debug_assert!(x.to_f64() >= lo);
        x
    };
    (0..count)
        .map(|i| (point(primes[2 * i]), point(primes[2 * i + 1])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{iv, q};

    #[test]
    fn primes_are_prime() {
        let ps = primes_below_2_31(5);
        assert_eq!(ps[0], 2_147_483_647);
        for p in ps {
            let r = (p as f64).sqrt() as u64 + 1;
            assert!((3..=r).step_by(2).all(|d| p % d != 0));
        }
        assert!(!is_prime(2_147_483_649));
    }

    #[test]
    fn seeds_are_deterministic_and_odd() {
        let a = random_seed_pairs(&iv(q(0, 1), q(1, 1)), 10, 7);
        let b = random_seed_pairs(&iv(q(0, 1), q(1, 1)), 10, 7);
        assert_eq!(a, b);
        for (x, y) in &a {
            assert!(x.denom().bit(0) && y.denom().bit(0));
            assert!(x.denom() != y.denom());
        }
    }
}
