//! Exact rational scalars and closed rational intervals.
//!
//! [`Rat`] wraps an arbitrary-precision rational kept in lowest terms with a
//! positive denominator. It is the coordinate type of every exact computation
//! in the crate. Textual form is `p/q` (or `p` when `q = 1`), never decimal.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rat(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rat(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    /// Bit length of the denominator.
    pub fn den_bits(&self) -> u64 {
        self.0.denom().bits()
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(self.0.numer(), self.0.denom())
    }

    pub fn min_ref<'a>(&'a self, other: &'a Rat) -> &'a Rat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max_ref<'a>(&'a self, other: &'a Rat) -> &'a Rat {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn midpoint(&self, other: &Rat) -> Rat {
        (self + other) / Rat::from_int(2)
    }

    /// Nearest multiple of `2^-bits` (ties away from zero).
    pub fn round_dyadic(&self, bits: u32) -> Rat {
        let scale = BigInt::one() << bits;
        let scaled = self.0.numer() * &scale;
        let den = self.0.denom();
        let twice = (&scaled << 1u32) + den;
        let q = twice.div_floor(&(den << 1u32));
        Rat::from_bigints(q, scale)
    }
}

/// Converts `num / den` to the nearest-ish `f64` even when both exceed the
/// `f64` range.
pub(crate) fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits().max(num.bits()).saturating_sub(1000);
    let (n, d) = if shift > 0 {
        (num >> shift, den >> shift)
    } else {
        (num.clone(), den.clone())
    };
    if d.is_zero() {
        return if num.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    let nf = n.to_f64().unwrap_or(f64::NAN);
    let df = d.to_f64().unwrap_or(f64::NAN);
    if nf.is_finite() && df.is_finite() {
        return nf / df;
    }
    // still too wide: keep the top 64 bits of each
    let nb = n.bits();
    let db = d.bits();
    let ns = nb.saturating_sub(64);
    let ds = db.saturating_sub(64);
    let nt = (&n >> ns).to_f64().unwrap_or(0.0);
    let dt = (&d >> ds).to_f64().unwrap_or(1.0);
    nt / dt * 2f64.powi(ns as i32 - ds as i32)
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational of the form p/q: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rat::from_bigints(n, d))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

/// Closed interval `[lo, hi]` with rational endpoints; `lo = hi` is allowed.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntervalQ {
    lo: Rat,
    hi: Rat,
}

impl IntervalQ {
    pub fn new(lo: Rat, hi: Rat) -> Result<Self> {
        if lo > hi {
            return Err(Error::IntervalOrder {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(IntervalQ { lo, hi })
    }

    /// `⟨a, b⟩`: the interval between two points in either order.
    pub fn spanning(a: Rat, b: Rat) -> Self {
        if a <= b {
            IntervalQ { lo: a, hi: b }
        } else {
            IntervalQ { lo: b, hi: a }
        }
    }

    pub fn point(x: Rat) -> Self {
        IntervalQ { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn len(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &IntervalQ) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(&self, other: &IntervalQ) -> IntervalQ {
        IntervalQ {
            lo: self.lo.min_ref(&other.lo).clone(),
            hi: self.hi.max_ref(&other.hi).clone(),
        }
    }

    pub fn intersection(&self, other: &IntervalQ) -> Option<IntervalQ> {
        let lo = self.lo.max_ref(&other.lo);
        let hi = self.hi.min_ref(&other.hi);
        (lo <= hi).then(|| IntervalQ {
            lo: lo.clone(),
            hi: hi.clone(),
        })
    }

    /// True when the two intervals share more than a single point.
    pub fn overlaps_interior(&self, other: &IntervalQ) -> bool {
        self.lo.max_ref(&other.lo) < self.hi.min_ref(&other.hi)
    }

    pub fn is_disjoint(&self, other: &IntervalQ) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn midpoint(&self) -> Rat {
        self.lo.midpoint(&self.hi)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }
}

impl fmt::Display for IntervalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for IntervalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialOrd for IntervalQ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntervalQ {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.lo, &self.hi).cmp(&(&other.lo, &other.hi))
    }
}

/// Shorthand used throughout tests and constructors: `q(1, 2)` is `1/2`.
pub fn q(numer: i64, denom: i64) -> Rat {
    Rat::new(numer, denom)
}

/// Shorthand for a closed interval with small rational endpoints.
pub fn iv(lo: Rat, hi: Rat) -> IntervalQ {
    IntervalQ::new(lo, hi).expect("interval endpoints out of order")
}
