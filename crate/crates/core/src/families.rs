//! Exact constructors for the standard example maps and a textual catalog.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::pwl::PwlMap;
use crate::rational::{iv, q, IntervalQ, Rat};

/// The sawtooth of slope `±p` on `[0,1]`, with `T_p(k/p) = k mod 2`.
pub fn tent(p: u32) -> Result<PwlMap> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("tent slope {p} must be >= 2")));
    }
    let nodes = (0..=p as i64)
        .map(|k| (q(k, p as i64), q(k % 2, 1)))
        .collect();
    PwlMap::new(iv(q(0, 1), q(1, 1)), nodes)
}

/// The odd-type map on `[0, 2n]` for `p = 2n + 1`, linear between
/// `(0,2n), (n−1,n+1), (n,n−1), (2n−1,0), (2n,n)`.
pub fn stefan_map(p: i64) -> Result<PwlMap> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::NotOdd(p));
    }
    let n = (p - 1) / 2;
    let k = |v: i64| Rat::from_int(v);
    let nodes = vec![
        (k(0), k(2 * n)),
        (k(n - 1), k(n + 1)),
        (k(n), k(n - 1)),
        (k(2 * n - 1), k(0)),
        (k(2 * n), k(n)),
    ];
    PwlMap::from_nodes_dedup(iv(k(0), k(2 * n)), nodes)
}

/// The map `S` on `[−1, 1]`: `2x+2`, then `−2x`, then `−x`.
pub fn s_map() -> PwlMap {
    PwlMap::new(
        iv(q(-1, 1), q(1, 1)),
        vec![
            (q(-1, 1), q(0, 1)),
            (q(-1, 2), q(1, 1)),
            (q(0, 1), q(0, 1)),
            (q(1, 1), q(-1, 1)),
        ],
    )
    .expect("valid nodes")
}

/// A map `g` on `[0, 2b+δ]` with `g² = f` on `[0, b]`: `g = f + b + δ` on
/// `[0,b]`, linear on `[b, b+δ]`, and `g(x) = x − b − δ` on `[b+δ, 2b+δ]`.
///
/// `delta` defaults to `b`. A zero gap is only continuous when
/// `f(b) + b = 0`, which no self-map of `[0,b]` satisfies, so it is rejected.
pub fn square_root(f: &PwlMap, delta: Option<Rat>) -> Result<PwlMap> {
    let dom = f.domain();
    if !dom.lo().is_zero() {
        return Err(Error::IllFormed(format!(
            "square root needs a domain [0, b], got {dom}"
        )));
    }
    let b = dom.hi().clone();
    let delta = delta.unwrap_or_else(|| b.clone());
    if delta.is_negative() {
        return Err(Error::IllFormed("negative gap".into()));
    }
    let shift = &b + &delta;
    if delta.is_zero() {
        let fb = f.eval(&b)?;
        if !(&fb + &b).is_zero() {
            return Err(Error::IllFormed(format!(
                "zero gap needs f(b) + b = 0, but f(b) = {fb}"
            )));
        }
    }
    let mut nodes: Vec<(Rat, Rat)> = f
        .nodes()
        .map(|(x, y)| (x.clone(), y + &shift))
        .collect();
    nodes.push((shift.clone(), Rat::zero()));
    nodes.push((&shift + &b, b.clone()));
    PwlMap::from_nodes_dedup(iv(Rat::zero(), &shift + &b), nodes)
}

/// A map of Sharkovsky type `n = 2^d·q`: `d` square roots of the constant
/// map `0` on `[0,1]` when `q = 1`, otherwise of [`stefan_map`]`(q)`.
pub fn type_map(n: u64) -> Result<PwlMap> {
    if n == 0 {
        return Err(Error::InvalidParameter("type must be positive".into()));
    }
    let d = n.trailing_zeros();
    let odd = n >> d;
    let mut g = if odd == 1 {
        PwlMap::constant(iv(q(0, 1), q(1, 1)), Rat::zero())?
    } else {
        stefan_map(odd as i64)?
    };
    for _ in 0..d {
        g = square_root(&g, None)?;
    }
    Ok(g)
}

fn pow3(n: u32) -> Rat {
    Rat::from_bigints(BigInt::from(3u32).pow(n), BigInt::one())
}

fn inv_pow3(n: u32) -> Rat {
    pow3(n).recip()
}

fn depth_check(name: &str, depth: u32) -> Result<()> {
    if depth < 2 {
        return Err(Error::DepthRequired(name.into()));
    }
    Ok(())
}

/// Type-2^∞ map on `[0,1]`: the type-`2^n` map conjugated into the block
/// `[1 − 3^{−n}, 1 − 2·3^{−n−1}]` for `n = 0..=depth`, linear between blocks,
/// closed linearly to `f(1) = 1`.
pub fn type_2inf(depth: u32) -> Result<PwlMap> {
    depth_check("type2inf", depth)?;
    let mut nodes: Vec<(Rat, Rat)> = Vec::new();
    for n in 0..=depth {
        let lo = Rat::one() - inv_pow3(n);
        let hi = Rat::one() - q(2, 1) * inv_pow3(n + 1);
        let block = type_map(1u64 << n)?.rescale(&iv(lo, hi))?;
        nodes.extend(block.nodes().map(|(x, y)| (x.clone(), y.clone())));
    }
    nodes.push((Rat::one(), Rat::one()));
    PwlMap::new(iv(q(0, 1), q(1, 1)), nodes)
}

/// Zero-entropy map of type 2^∞ with `f^{2^n − 1}(0) = 1 − 3^{−n}`:
/// `f(0) = 2/3`, `f(1 − 2·3^{−n}) = 3^{1−n}`, `f(1 − 3^{−n}) = 2·3^{−n−1}`
/// for `n = 1..=depth`, closed linearly to `f(1) = 0`.
pub fn delahaye(depth: u32) -> Result<PwlMap> {
    depth_check("delahaye", depth)?;
    let mut nodes = vec![(q(0, 1), q(2, 3))];
    for n in 1..=depth {
        nodes.push((Rat::one() - q(2, 1) * inv_pow3(n), inv_pow3(n - 1)));
        nodes.push((Rat::one() - inv_pow3(n), q(2, 1) * inv_pow3(n + 1)));
    }
    nodes.push((Rat::one(), Rat::zero()));
    PwlMap::new(iv(q(0, 1), q(1, 1)), nodes)
}

/// Slope-±4 map with fixed points `a_n = 1 − 3^{−n}`, peaks `f(b_n) = 1` at
/// `b_n = 1 − 1/(4·3^{n−1})` and `f(c_n) = a_n` at `c_n = 1 − 1/(2·3^n)`,
/// for `n < depth`; identity on `[a_depth, 1]`.
pub fn mizera(depth: u32) -> Result<PwlMap> {
    depth_check("mizera", depth)?;
    let mut nodes = Vec::new();
    for n in 0..depth {
        let a = Rat::one() - inv_pow3(n);
        let b = Rat::one() - q(3, 4) * inv_pow3(n);
        let c = Rat::one() - q(1, 2) * inv_pow3(n);
        nodes.push((a.clone(), a.clone()));
        nodes.push((b, Rat::one()));
        nodes.push((c, a));
    }
    let a = Rat::one() - inv_pow3(depth);
    nodes.push((a.clone(), a));
    nodes.push((Rat::one(), Rat::one()));
    PwlMap::new(iv(q(0, 1), q(1, 1)), nodes)
}

/// `min(T_2(x), λ)` for `λ ∈ [0,1]`.
pub fn truncated_tent(lambda: &Rat) -> Result<PwlMap> {
    if lambda.is_negative() || lambda > &Rat::one() {
        return Err(Error::InvalidParameter(format!("λ = {lambda} outside [0,1]")));
    }
    let half = lambda * &q(1, 2);
    let nodes = vec![
        (q(0, 1), q(0, 1)),
        (half.clone(), lambda.clone()),
        (Rat::one() - &half, lambda.clone()),
        (q(1, 1), q(0, 1)),
    ];
    PwlMap::from_nodes_dedup(iv(q(0, 1), q(1, 1)), nodes)
}

/// A catalog entry, written `tent:p`, `stefan:p`, `sqrt:<inner>`, `type:n`,
/// `type2inf:depth`, `delahaye:depth`, `mizera:depth`, `smap`, `ttent:p/q`
/// or `identity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Tent(u32),
    Stefan(i64),
    Sqrt(Box<Family>),
    Type(u64),
    TypeTwoInf(u32),
    Delahaye(u32),
    Mizera(u32),
    SMap,
    TruncatedTent(Rat),
    Identity,
}

pub const CATALOG: &[(&str, &str)] = &[
    ("tent:p", "sawtooth of slope ±p on [0,1] (p >= 2)"),
    ("stefan:p", "odd-type map on [0, p-1] (p odd >= 3)"),
    ("sqrt:<inner>", "square root of another catalog map (g² = f on the first third)"),
    ("type:n", "map of Sharkovsky type n built by repeated square roots"),
    ("type2inf:depth", "type 2^∞ map with blocks 0..=depth (depth >= 2)"),
    ("delahaye:depth", "zero-entropy type 2^∞ map with an infinite ω-limit set (depth >= 2)"),
    ("mizera:depth", "slope ±4 map with a tower of invariant intervals (depth >= 2)"),
    ("smap", "map on [-1,1] that swaps its halves: transitive, not mixing"),
    ("ttent:p/q", "truncated tent min(T_2(x), λ) with λ in [0,1]"),
    ("identity", "identity on [0,1]"),
];

impl Family {
    pub fn build(&self) -> Result<PwlMap> {
        match self {
            Family::Tent(p) => tent(*p),
            Family::Stefan(p) => stefan_map(*p),
            Family::Sqrt(inner) => {
                let f = inner.build()?;
                let dom = f.domain();
                let f = if dom.lo().is_zero() {
                    f
                } else {
                    f.rescale(&IntervalQ::spanning(Rat::zero(), dom.len()))?
                };
                square_root(&f, None)
            }
            Family::Type(n) => type_map(*n),
            Family::TypeTwoInf(d) => type_2inf(*d),
            Family::Delahaye(d) => delahaye(*d),
            Family::Mizera(d) => mizera(*d),
            Family::SMap => Ok(s_map()),
            Family::TruncatedTent(l) => truncated_tent(l),
            Family::Identity => Ok(PwlMap::identity(iv(q(0, 1), q(1, 1)))),
        }
    }
}

fn parse_param<T: FromStr>(name: &str, arg: Option<&str>) -> Result<T> {
    let arg = arg.ok_or_else(|| Error::Parse(format!("{name} needs a parameter")))?;
    arg.parse()
        .map_err(|_| Error::Parse(format!("bad parameter {arg:?} for {name}")))
}

fn parse_depth(name: &str, arg: Option<&str>) -> Result<u32> {
    let Some(arg) = arg else {
        return Err(Error::DepthRequired(name.into()));
    };
    let d: u32 = parse_param(name, Some(arg))?;
    depth_check(name, d)?;
    Ok(d)
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        Ok(match name {
            "tent" => Family::Tent(parse_param(name, arg)?),
            "stefan" => Family::Stefan(parse_param(name, arg)?),
            "sqrt" => Family::Sqrt(Box::new(
                arg.ok_or_else(|| Error::Parse("sqrt needs an inner map".into()))?
                    .parse()?,
            )),
            "type" => Family::Type(parse_param(name, arg)?),
            "type2inf" => Family::TypeTwoInf(parse_depth(name, arg)?),
            "delahaye" => Family::Delahaye(parse_depth(name, arg)?),
            "mizera" => Family::Mizera(parse_depth(name, arg)?),
            "smap" if arg.is_none() => Family::SMap,
            "ttent" => Family::TruncatedTent(parse_param(name, arg)?),
            "identity" if arg.is_none() => Family::Identity,
            _ => return Err(Error::Parse(format!("unknown catalog id {s:?}"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Tent(p) => write!(f, "tent:{p}"),
            Family::Stefan(p) => write!(f, "stefan:{p}"),
            Family::Sqrt(inner) => write!(f, "sqrt:{inner}"),
            Family::Type(n) => write!(f, "type:{n}"),
            Family::TypeTwoInf(d) => write!(f, "type2inf:{d}"),
            Family::Delahaye(d) => write!(f, "delahaye:{d}"),
            Family::Mizera(d) => write!(f, "mizera:{d}"),
            Family::SMap => write!(f, "smap"),
            Family::TruncatedTent(l) => write!(f, "ttent:{l}"),
            Family::Identity => write!(f, "identity"),
        }
    }
}

/// Builds a catalog map from its textual id.
pub fn catalog(id: &str) -> Result<PwlMap> {
    id.parse::<Family>()?.build()
}
