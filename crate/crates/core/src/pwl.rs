//! Continuous piecewise-linear self-maps of a compact rational interval.
//!
//! A [`PwlMap`] is the linear interpolant of finitely many nodes
//! `(x_0, y_0), …, (x_m, y_m)` with `x_0 = lo`, `x_m = hi` and every `y_i`
//! in `[lo, hi]`. All operations are exact. Collinear interior nodes are
//! removed on construction, so after composition the number of pieces of a
//! map with no constant or repeated-slope runs equals its lap number.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{IntervalQ, Rat};

/// Limits on exact composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_pieces: usize,
    pub max_den_bits: u64,
}

pub const BUDGET_ENV: &str = "CHAOSKIT_BUDGET_PIECES";

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pieces: 2_000_000,
            max_den_bits: 4096,
        }
    }
}

impl Budget {
    /// Default budget with the piece cap overridden by `CHAOSKIT_BUDGET_PIECES`
    /// when that variable holds a positive integer.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(n) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            b.max_pieces = n;
        }
        b
    }

    fn check(&self, xs: &[Rat]) -> Result<()> {
        let pieces = xs.len().saturating_sub(1);
        if pieces > self.max_pieces {
            return Err(Error::PieceBudgetExceeded {
                pieces,
                budget: self.max_pieces,
            });
        }
        if let Some(bits) = xs.iter().map(Rat::den_bits).max() {
            if bits > self.max_den_bits {
                return Err(Error::DenominatorBudgetExceeded {
                    bits,
                    budget: self.max_den_bits,
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PwlMap {
    domain: IntervalQ,
    xs: Vec<Rat>,
    ys: Vec<Rat>,
}

impl PwlMap {
    /// Validates and canonicalizes a node list.
    pub fn new(domain: IntervalQ, nodes: Vec<(Rat, Rat)>) -> Result<Self> {
        if domain.is_degenerate() {
            return Err(Error::Degenerate);
        }
        if nodes.len() < 2 {
            return Err(Error::SpanMismatch);
        }
        for (i, w) in nodes.windows(2).enumerate() {
            if w[0].0 >= w[1].0 {
                return Err(Error::NodeOrder { index: i + 1 });
            }
        }
        if &nodes[0].0 != domain.lo() || &nodes[nodes.len() - 1].0 != domain.hi() {
            return Err(Error::SpanMismatch);
        }
        for (i, (_, y)) in nodes.iter().enumerate() {
            if !domain.contains(y) {
                return Err(Error::NotSelfMap {
                    index: i,
                    value: y.to_string(),
                });
            }
        }
        let (xs, ys): (Vec<_>, Vec<_>) = nodes.into_iter().unzip();
        let (xs, ys) = canonicalize(xs, ys);
        Ok(PwlMap { domain, xs, ys })
    }

    /// Like [`PwlMap::new`] but merges repeated nodes (same `x`, same `y`),
    /// which the family constructors produce at degenerate parameters.
    pub fn from_nodes_dedup(domain: IntervalQ, nodes: Vec<(Rat, Rat)>) -> Result<Self> {
        let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(nodes.len());
        for (i, (x, y)) in nodes.into_iter().enumerate() {
            if let Some((px, py)) = out.last() {
                if *px == x {
                    if *py != y {
                        return Err(Error::NodeOrder { index: i });
                    }
                    continue;
                }
            }
            out.push((x, y));
        }
        PwlMap::new(domain, out)
    }

    pub fn identity(domain: IntervalQ) -> Self {
        let xs = vec![domain.lo().clone(), domain.hi().clone()];
        PwlMap {
            ys: xs.clone(),
            xs,
            domain,
        }
    }

    pub fn constant(domain: IntervalQ, value: Rat) -> Result<Self> {
        let nodes = vec![
            (domain.lo().clone(), value.clone()),
            (domain.hi().clone(), value),
        ];
        PwlMap::new(domain, nodes)
    }

    pub fn domain(&self) -> &IntervalQ {
        &self.domain
    }

    pub fn xs(&self) -> &[Rat] {
        &self.xs
    }

    pub fn ys(&self) -> &[Rat] {
        &self.ys
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&Rat, &Rat)> {
        self.xs.iter().zip(self.ys.iter())
    }

    pub fn num_pieces(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn slope(&self, piece: usize) -> Rat {
        (&self.ys[piece + 1] - &self.ys[piece]) / (&self.xs[piece + 1] - &self.xs[piece])
    }

    pub fn slopes(&self) -> Vec<Rat> {
        (0..self.num_pieces()).map(|i| self.slope(i)).collect()
    }

    pub fn piece_interval(&self, piece: usize) -> IntervalQ {
        IntervalQ::spanning(self.xs[piece].clone(), self.xs[piece + 1].clone())
    }

    pub fn max_abs_slope(&self) -> Rat {
        self.slopes()
            .into_iter()
            .map(|s| s.abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }

    /// Index `i` of a piece `[x_i, x_{i+1}]` containing `x` (assumed in domain).
    pub fn piece_of(&self, x: &Rat) -> usize {
        let i = self.xs.partition_point(|b| b <= x);
        i.saturating_sub(1).min(self.num_pieces() - 1)
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        if !self.domain.contains(x) {
            return Err(Error::OutOfDomain(x.to_string()));
        }
        Ok(self.eval_in_domain(x))
    }

    pub(crate) fn eval_in_domain(&self, x: &Rat) -> Rat {
        let i = self.piece_of(x);
        interp(&self.xs[i], &self.ys[i], &self.xs[i + 1], &self.ys[i + 1], x)
    }

    /// Exact image of a subinterval.
    pub fn image(&self, j: &IntervalQ) -> Result<IntervalQ> {
        if !self.domain.contains_interval(j) {
            return Err(Error::OutOfDomain(j.to_string()));
        }
        let a = self.eval_in_domain(j.lo());
        let b = self.eval_in_domain(j.hi());
        let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
        let start = self.xs.partition_point(|x| x <= j.lo());
        for k in start..self.xs.len() {
            if &self.xs[k] >= j.hi() {
                break;
            }
            let y = &self.ys[k];
            if y < &lo {
                lo = y.clone();
            }
            if y > &hi {
                hi = y.clone();
            }
        }
        Ok(IntervalQ::new(lo, hi).expect("min <= max"))
    }

    pub fn full_image(&self) -> IntervalQ {
        self.image(&self.domain.clone()).expect("domain is in domain")
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PwlMap, budget: &Budget) -> Result<PwlMap> {
        if !self.domain.contains_interval(&inner.full_image()) {
            return Err(Error::DomainMismatch);
        }
        let (xs, ys) = compose_nodes(self, &inner.xs, &inner.ys, budget)?;
        budget.check(&xs)?;
        Ok(PwlMap {
            domain: inner.domain.clone(),
            xs,
            ys,
        })
    }

    /// `f^n` for `n >= 1`.
    pub fn iterate(&self, n: usize, budget: &Budget) -> Result<PwlMap> {
        if n == 0 {
            return Err(Error::InvalidParameter("iterate needs n >= 1".into()));
        }
        let mut g = self.clone();
        for _ in 1..n {
            g = self.compose(&g, budget)?;
        }
        Ok(g)
    }

    /// Successive iterates `f, f^2, f^3, …`, each built from the previous one.
    pub fn iterates<'a>(&'a self, budget: &'a Budget) -> Iterates<'a> {
        Iterates {
            base: self,
            current: None,
            budget,
        }
    }

    /// Number of maximal monotone laps; every constant piece is its own lap.
    pub fn laps(&self) -> usize {
        let mut laps = 0;
        let mut prev = None;
        for i in 0..self.num_pieces() {
            let s = self.slope(i).signum();
            if s == 0 || prev != Some(s) {
                laps += 1;
            }
            prev = Some(s);
        }
        laps
    }

    /// Lap number `c_n` of `f^n`.
    pub fn lap_count(&self, n: usize, budget: &Budget) -> Result<usize> {
        Ok(self.iterate(n, budget)?.laps())
    }

    /// Non-strictly monotone on `j` (constant stretches allowed).
    pub fn is_monotone_on(&self, j: &IntervalQ) -> bool {
        let mut seen = 0;
        for i in 0..self.num_pieces() {
            let piece = self.piece_interval(i);
            if !piece.overlaps_interior(j) {
                continue;
            }
            let s = self.slope(i).signum();
            if s == 0 {
                continue;
            }
            if seen == 0 {
                seen = s;
            } else if seen != s {
                return false;
            }
        }
        true
    }

    /// Maximal number of closed subintervals of `j` with disjoint interiors
    /// whose images each contain `k`.
    pub fn covers_count(&self, j: &IntervalQ, k: &IntervalQ) -> Result<usize> {
        if j.is_degenerate() || k.is_degenerate() {
            return Err(Error::Degenerate);
        }
        if !self.domain.contains_interval(j) {
            return Err(Error::OutOfDomain(j.to_string()));
        }
        let (xs, ys) = restrict_nodes(&self.xs, &self.ys, j.lo(), j.hi());
        let (a, b) = (k.lo(), k.hi());
        let mut count = 0;
        let mut run_min = ys[0].clone();
        let mut run_max = ys[0].clone();
        let mut i = 0;
        let mut start = xs[0].clone();
        let mut y_start = ys[0].clone();
        while i + 1 < xs.len() {
            let (x1, y1) = (&xs[i + 1], &ys[i + 1]);
            // earliest point in [start, x1] where both targets have been reached
            let reach = |target: &Rat, have: bool| -> Option<Rat> {
                if have {
                    return Some(start.clone());
                }
                let lo = y_start.min_ref(y1);
                let hi = y_start.max_ref(y1);
                if lo <= target && target <= hi && y_start != *y1 {
                    Some(interp(&y_start, &start, y1, x1, target))
                } else {
                    None
                }
            };
            let t_lo = reach(a, run_min <= *a);
            let t_hi = reach(b, run_max >= *b);
            match (t_lo, t_hi) {
                (Some(tl), Some(th)) => {
                    let t = tl.max_ref(&th).clone();
                    count += 1;
                    y_start = interp(&start, &y_start, x1, y1, &t);
                    start = t;
                    run_min = y_start.clone();
                    run_max = y_start.clone();
                    if start == *x1 {
                        i += 1;
                    }
                }
                _ => {
                    if y1 < &run_min {
                        run_min = y1.clone();
                    }
                    if y1 > &run_max {
                        run_max = y1.clone();
                    }
                    start = x1.clone();
                    y_start = y1.clone();
                    i += 1;
                }
            }
        }
        Ok(count)
    }

    /// A closed `K ⊆ J_0` with `f^i(K) ⊆ J_i` and `f^n(K) = J_n`.
    pub fn follow_chain(&self, chain: &[IntervalQ]) -> Result<IntervalQ> {
        Ok(ChainRefiner::run(self, chain)?.k)
    }

    /// A point `x ∈ J_0` with `f^n(x) = x` and `f^i(x) ∈ J_i`, for a chain
    /// whose last link contains the first.
    pub fn chain_fixed_point(&self, chain: &[IntervalQ]) -> Result<Rat> {
        let r = ChainRefiner::run(self, chain)?;
        let first = chain.first().ok_or(Error::TooFewPoints)?;
        let last = chain.last().expect("nonempty");
        if !last.contains_interval(first) {
            return Err(Error::NestingFails);
        }
        Ok(r.fixed_point().expect("K maps over itself, so a fixed point exists"))
    }

    /// The map restricted to an invariant subinterval.
    pub fn restrict(&self, sub: &IntervalQ) -> Result<PwlMap> {
        if sub.is_degenerate() {
            return Err(Error::Degenerate);
        }
        if !sub.contains_interval(&self.image(sub)?) {
            return Err(Error::NotInvariant(sub.to_string()));
        }
        let (xs, ys) = restrict_nodes(&self.xs, &self.ys, sub.lo(), sub.hi());
        let (xs, ys) = canonicalize(xs, ys);
        Ok(PwlMap {
            domain: sub.clone(),
            xs,
            ys,
        })
    }

    /// Conjugate by the increasing affine bijection from the domain onto
    /// `target`.
    pub fn rescale(&self, target: &IntervalQ) -> Result<PwlMap> {
        if target.is_degenerate() {
            return Err(Error::Degenerate);
        }
        let ratio = target.len() / self.domain.len();
        let phi = |v: &Rat| target.lo() + &((v - self.domain.lo()) * &ratio);
        Ok(PwlMap {
            domain: target.clone(),
            xs: self.xs.iter().map(phi).collect(),
            ys: self.ys.iter().map(phi).collect(),
        })
    }

    pub fn to_spec(&self) -> MapSpec {
        MapSpec {
            domain: [self.domain.lo().clone(), self.domain.hi().clone()],
            nodes: self.nodes().map(|(x, y)| [x.clone(), y.clone()]).collect(),
        }
    }

    pub fn from_spec(spec: &MapSpec) -> Result<PwlMap> {
        let domain = IntervalQ::new(spec.domain[0].clone(), spec.domain[1].clone())?;
        let nodes = spec
            .nodes
            .iter()
            .map(|[x, y]| (x.clone(), y.clone()))
            .collect();
        PwlMap::new(domain, nodes)
    }

    /// Canonical JSON text of the map spec.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("spec serializes")
    }

    pub fn from_json(text: &str) -> Result<PwlMap> {
        let spec: MapSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        PwlMap::from_spec(&spec)
    }

    pub fn to_float(&self) -> FloatMap {
        FloatMap {
            xs: self.xs.iter().map(Rat::to_f64).collect(),
            ys: self.ys.iter().map(Rat::to_f64).collect(),
        }
    }
}

impl fmt::Debug for PwlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PwlMap(")?;
        for (i, (x, y)) in self.nodes().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        write!(f, ")")
    }
}

/// On-disk form: `{"domain": ["p/q","r/s"], "nodes": [["x","y"], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSpec {
    pub domain: [Rat; 2],
    pub nodes: Vec<[Rat; 2]>,
}

pub struct Iterates<'a> {
    base: &'a PwlMap,
    current: Option<PwlMap>,
    budget: &'a Budget,
}

impl Iterator for Iterates<'_> {
    type Item = Result<PwlMap>;

    fn next(&mut self) -> Option<Self::Item> {
        let next = match &self.current {
            None => Ok(self.base.clone()),
            Some(g) => self.base.compose(g, self.budget),
        };
        match next {
            Ok(g) => {
                self.current = Some(g.clone());
                Some(Ok(g))
            }
            Err(e) => Some(Err(e)),
        }
    }
}

/// Floating-point copy of a map for heuristic grid statistics.
#[derive(Debug, Clone)]
pub struct FloatMap {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl FloatMap {
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let x = x.clamp(self.xs[0], self.xs[n - 1]);
        let i = self.xs.partition_point(|b| *b <= x).saturating_sub(1).min(n - 2);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn lo(&self) -> f64 {
        self.xs[0]
    }

    pub fn hi(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }
}

/// Value at `x` of the line through `(x0, y0)` and `(x1, y1)`.
pub(crate) fn interp(x0: &Rat, y0: &Rat, x1: &Rat, y1: &Rat, x: &Rat) -> Rat {
    if x == x0 {
        return y0.clone();
    }
    if x == x1 {
        return y1.clone();
    }
    y0 + &((y1 - y0) * (x - x0) / (x1 - x0))
}

/// Removes interior nodes that are collinear with their neighbours.
pub(crate) fn canonicalize(xs: Vec<Rat>, ys: Vec<Rat>) -> (Vec<Rat>, Vec<Rat>) {
    let mut ox: Vec<Rat> = Vec::with_capacity(xs.len());
    let mut oy: Vec<Rat> = Vec::with_capacity(ys.len());
    for (x, y) in xs.into_iter().zip(ys) {
        if let (Some(px), Some(_)) = (ox.last(), oy.last()) {
            if *px == x {
                continue;
            }
        }
        while ox.len() >= 2 {
            let n = ox.len();
            let (ax, ay) = (&ox[n - 2], &oy[n - 2]);
            let (bx, by) = (&ox[n - 1], &oy[n - 1]);
            let lhs = (by - ay) * (&x - bx);
            let rhs = (&y - by) * (bx - ax);
            if lhs == rhs {
                ox.pop();
                oy.pop();
            } else {
                break;
            }
        }
        ox.push(x);
        oy.push(y);
    }
    (ox, oy)
}

/// Nodes of the restriction of an interpolant to `[lo, hi]`.
pub(crate) fn restrict_nodes(xs: &[Rat], ys: &[Rat], lo: &Rat, hi: &Rat) -> (Vec<Rat>, Vec<Rat>) {
    let eval = |x: &Rat| {
        let i = xs.partition_point(|b| b <= x).saturating_sub(1).min(xs.len() - 2);
        interp(&xs[i], &ys[i], &xs[i + 1], &ys[i + 1], x)
    };
    let mut ox = vec![lo.clone()];
    let mut oy = vec![eval(lo)];
    if lo == hi {
        return (ox, oy);
    }
    let start = xs.partition_point(|x| x <= lo);
    for k in start..xs.len() {
        if &xs[k] >= hi {
            break;
        }
        ox.push(xs[k].clone());
        oy.push(ys[k].clone());
    }
    ox.push(hi.clone());
    oy.push(eval(hi));
    (ox, oy)
}

/// Nodes of `outer ∘ h` where `h` interpolates `(xs, ys)`; values of `h` must
/// lie in the outer domain.
pub(crate) fn compose_nodes(
    outer: &PwlMap,
    xs: &[Rat],
    ys: &[Rat],
    budget: &Budget,
) -> Result<(Vec<Rat>, Vec<Rat>)> {
    let mut ox = Vec::with_capacity(xs.len() * 2);
    let mut oy = Vec::with_capacity(xs.len() * 2);
    let raw_cap = budget.max_pieces.saturating_mul(4).max(16);
    for i in 0..xs.len() {
        ox.push(xs[i].clone());
        oy.push(outer.eval_in_domain(&ys[i]));
        if i + 1 == xs.len() {
            break;
        }
        let (x0, y0, x1, y1) = (&xs[i], &ys[i], &xs[i + 1], &ys[i + 1]);
        if y0 == y1 {
            continue;
        }
        let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
        let a = outer.xs.partition_point(|b| b <= lo);
        let b = outer.xs.partition_point(|b| b < hi);
        if a >= b {
            continue;
        }
        let dx_dy = (x1 - x0) / (y1 - y0);
        let mut push = |k: usize| {
            let bp = &outer.xs[k];
            ox.push(x0 + &((bp - y0) * &dx_dy));
            oy.push(outer.ys[k].clone());
        };
        if y0 < y1 {
            (a..b).for_each(&mut push);
        } else {
            (a..b).rev().for_each(&mut push);
        }
        if ox.len() > raw_cap {
            return Err(Error::PieceBudgetExceeded {
                pieces: ox.len(),
                budget: budget.max_pieces,
            });
        }
    }
    Ok(canonicalize(ox, oy))
}

/// Incremental state of the chain-of-intervals construction: an interval
/// `K ⊆ J_0` together with `f^k` restricted to `K`, which maps `K` onto the
/// current last link `J_k`, endpoints onto endpoints.
#[derive(Clone, Debug)]
pub struct ChainRefiner<'a> {
    map: &'a PwlMap,
    k: IntervalQ,
    link: IntervalQ,
    steps: usize,
    hx: Vec<Rat>,
    hy: Vec<Rat>,
}

impl<'a> ChainRefiner<'a> {
    pub fn start(map: &'a PwlMap, first: &IntervalQ) -> Result<Self> {
        if !map.domain.contains_interval(first) {
            return Err(Error::OutOfDomain(first.to_string()));
        }
        let ends = vec![first.lo().clone(), first.hi().clone()];
        Ok(ChainRefiner {
            map,
            k: first.clone(),
            link: first.clone(),
            steps: 0,
            hy: ends.clone(),
            hx: ends,
        })
    }

    pub fn run(map: &'a PwlMap, chain: &[IntervalQ]) -> Result<Self> {
        let first = chain.first().ok_or(Error::TooFewPoints)?;
        let mut r = ChainRefiner::start(map, first)?;
        for next in &chain[1..] {
            r = r.extend(next)?;
        }
        Ok(r)
    }

    pub fn interval(&self) -> &IntervalQ {
        &self.k
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Appends a link covered by the current one.
    pub fn extend(&self, next: &IntervalQ) -> Result<Self> {
        let covered = self.map.image(&self.link)?;
        if !covered.contains_interval(next) {
            return Err(Error::NotAChain { index: self.steps });
        }
        let unbounded = Budget {
            max_pieces: usize::MAX / 8,
            max_den_bits: u64::MAX,
        };
        let (gx, gy) = compose_nodes(self.map, &self.hx, &self.hy, &unbounded)?;
        let (a, b) = (next.lo(), next.hi());
        let lo = &gx[0];
        let option_a = first_hit(&gx, &gy, lo, a).and_then(|x| {
            let y1 = first_hit(&gx, &gy, &x, b)?;
            let x1 = last_hit(&gx, &gy, &y1, a)?;
            Some(IntervalQ::spanning(x1, y1))
        });
        let option_b = first_hit(&gx, &gy, lo, b).and_then(|y| {
            let x1 = first_hit(&gx, &gy, &y, a)?;
            let y1 = last_hit(&gx, &gy, &x1, b)?;
            Some(IntervalQ::spanning(y1, x1))
        });
        let k = match (option_a, option_b) {
            (Some(p), Some(q)) => p.min(q),
            (Some(p), None) | (None, Some(p)) => p,
            (None, None) => return Err(Error::NotAChain { index: self.steps }),
        };
        let (hx, hy) = restrict_nodes(&gx, &gy, k.lo(), k.hi());
        let (hx, hy) = canonicalize(hx, hy);
        Ok(ChainRefiner {
            map: self.map,
            k,
            link: next.clone(),
            steps: self.steps + 1,
            hx,
            hy,
        })
    }

    /// Leftmost `x ∈ K` with `f^k(x) = x`, if any.
    pub fn fixed_point(&self) -> Option<Rat> {
        if self.hx.len() == 1 {
            return (self.hx[0] == self.hy[0]).then(|| self.hx[0].clone());
        }
        for i in 0..self.hx.len() - 1 {
            let (x0, y0, x1, y1) = (&self.hx[i], &self.hy[i], &self.hx[i + 1], &self.hy[i + 1]);
            let d0 = y0 - x0;
            let d1 = y1 - x1;
            if d0.is_zero() {
                return Some(x0.clone());
            }
            if d0.signum() * d1.signum() <= 0 {
                return Some(x0 + &(&d0 * (x1 - x0) / (&d0 - &d1)));
            }
        }
        None
    }
}

fn first_hit(xs: &[Rat], ys: &[Rat], from: &Rat, target: &Rat) -> Option<Rat> {
    let mut i = xs.partition_point(|b| b <= from).saturating_sub(1);
    let mut x0 = from.clone();
    let mut y0 = if xs.len() == 1 {
        ys[0].clone()
    } else {
        let j = i.min(xs.len() - 2);
        interp(&xs[j], &ys[j], &xs[j + 1], &ys[j + 1], from)
    };
    if &y0 == target {
        return Some(x0);
    }
    while i + 1 < xs.len() {
        let (x1, y1) = (&xs[i + 1], &ys[i + 1]);
        if x1 > &x0 && y0.min_ref(y1) <= target && target <= y0.max_ref(y1) {
            return Some(interp(&y0, &x0, y1, x1, target));
        }
        x0 = x1.clone();
        y0 = y1.clone();
        i += 1;
    }
    None
}

fn last_hit(xs: &[Rat], ys: &[Rat], upto: &Rat, target: &Rat) -> Option<Rat> {
    let n = xs.len();
    let mut i = xs.partition_point(|b| b < upto).min(n - 1);
    let mut x1 = upto.clone();
    let mut y1 = if n == 1 {
        ys[0].clone()
    } else {
        let j = i.saturating_sub(1).min(n - 2);
        interp(&xs[j], &ys[j], &xs[j + 1], &ys[j + 1], upto)
    };
    if &y1 == target {
        return Some(x1);
    }
    while i > 0 {
        let (x0, y0) = (&xs[i - 1], &ys[i - 1]);
        if x0 < &x1 && y0.min_ref(&y1) <= target && target <= y0.max_ref(&y1) {
            return Some(interp(&y1, &x1, y0, x0, target));
        }
        x1 = x0.clone();
        y1 = y0.clone();
        i -= 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{iv, q};

    fn unit() -> IntervalQ {
        iv(q(0, 1), q(1, 1))
    }

    fn tent() -> PwlMap {
        PwlMap::new(
            unit(),
            vec![(q(0, 1), q(0, 1)), (q(1, 2), q(1, 1)), (q(1, 1), q(0, 1))],
        )
        .unwrap()
    }

    #[test]
    fn construction_errors() {
        let e = PwlMap::new(unit(), vec![(q(0, 1), q(0, 1)), (q(1, 2), q(2, 1)), (q(1, 1), q(0, 1))]);
        assert!(matches!(e, Err(Error::NotSelfMap { index: 1, .. })));
        let e = PwlMap::new(unit(), vec![(q(0, 1), q(0, 1)), (q(0, 1), q(1, 1)), (q(1, 1), q(0, 1))]);
        assert!(matches!(e, Err(Error::NodeOrder { .. })));
        let e = PwlMap::new(unit(), vec![(q(0, 1), q(0, 1)), (q(1, 2), q(1, 1))]);
        assert_eq!(e, Err(Error::SpanMismatch));
    }

    #[test]
    fn collinear_nodes_are_merged() {
        let f = PwlMap::new(
            unit(),
            vec![(q(0, 1), q(0, 1)), (q(1, 3), q(1, 3)), (q(1, 1), q(1, 1))],
        )
        .unwrap();
        assert_eq!(f, PwlMap::identity(unit()));
    }

    #[test]
    fn eval_and_image() {
        let t = tent();
        assert_eq!(t.eval(&q(1, 2)).unwrap(), q(1, 1));
        assert_eq!(t.eval(&q(2, 3)).unwrap(), q(2, 3));
        assert!(matches!(t.eval(&q(3, 2)), Err(Error::OutOfDomain(_))));
        assert_eq!(t.image(&iv(q(0, 1), q(1, 4))).unwrap(), iv(q(0, 1), q(1, 2)));
        assert_eq!(t.image(&iv(q(1, 4), q(3, 4))).unwrap(), iv(q(1, 2), q(1, 1)));
        assert_eq!(t.image(&unit()).unwrap(), unit());
    }

    #[test]
    fn tent_square_nodes() {
        let t2 = tent().compose(&tent(), &Budget::default()).unwrap();
        let expect: Vec<Rat> = vec![q(0, 1), q(1, 4), q(1, 2), q(3, 4), q(1, 1)];
        assert_eq!(t2.xs(), &expect[..]);
        assert_eq!(t2.ys(), &[q(0, 1), q(1, 1), q(0, 1), q(1, 1), q(0, 1)][..]);
        assert_eq!(t2.laps(), 4);
    }

    #[test]
    fn budget_is_enforced() {
        let small = Budget {
            max_pieces: 10,
            max_den_bits: 4096,
        };
        assert!(matches!(
            tent().iterate(5, &small),
            Err(Error::PieceBudgetExceeded { .. })
        ));
        let narrow = Budget {
            max_pieces: 1 << 20,
            max_den_bits: 3,
        };
        assert!(matches!(
            tent().iterate(5, &narrow),
            Err(Error::DenominatorBudgetExceeded { .. })
        ));
    }

    #[test]
    fn covering_counts() {
        let t = tent();
        assert_eq!(t.covers_count(&unit(), &unit()).unwrap(), 2);
        assert_eq!(t.covers_count(&iv(q(0, 1), q(1, 2)), &unit()).unwrap(), 1);
        let id = PwlMap::identity(unit());
        assert_eq!(id.covers_count(&unit(), &iv(q(0, 1), q(1, 2))).unwrap(), 1);
        assert_eq!(
            id.covers_count(&iv(q(0, 1), q(1, 2)), &iv(q(3, 4), q(1, 1))).unwrap(),
            0
        );
        assert_eq!(
            t.covers_count(&iv(q(1, 4), q(1, 4)), &unit()),
            Err(Error::Degenerate)
        );
        // the image touches [1/2, 1] at an endpoint only: not counted
        assert_eq!(
            t.covers_count(&iv(q(0, 1), q(1, 4)), &iv(q(1, 2), q(1, 1))).unwrap(),
            0
        );
    }

    #[test]
    fn chains() {
        let t = tent();
        let l = iv(q(0, 1), q(1, 2));
        let r = iv(q(1, 2), q(1, 1));
        assert_eq!(t.follow_chain(&[l.clone(), l.clone()]).unwrap(), iv(q(0, 1), q(1, 4)));
        assert_eq!(t.follow_chain(&[r.clone(), l.clone()]).unwrap(), iv(q(3, 4), q(1, 1)));
        assert_eq!(t.follow_chain(&[r.clone()]).unwrap(), r);
        assert_eq!(t.chain_fixed_point(&[r.clone(), r.clone()]).unwrap(), q(2, 3));
        assert_eq!(
            t.chain_fixed_point(&[l.clone(), r.clone(), l.clone()]).unwrap(),
            q(2, 5)
        );
        assert_eq!(
            t.chain_fixed_point(&[l.clone(), r.clone()]),
            Err(Error::NestingFails)
        );
        let tiny = iv(q(0, 1), q(1, 8));
        assert_eq!(
            t.follow_chain(&[tiny, r]),
            Err(Error::NotAChain { index: 0 })
        );
    }

    #[test]
    fn identity_chain_fixed_point() {
        let id = PwlMap::identity(unit());
        let x = id.chain_fixed_point(&[unit()]).unwrap();
        assert_eq!(id.eval(&x).unwrap(), x);
        let x = id.chain_fixed_point(&[unit(), unit()]).unwrap();
        assert_eq!(id.eval(&x).unwrap(), x);
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let text = r#"{"domain":["0","2/2"],"nodes":[["0","0"],["2/4","1"],["1","0"]]}"#;
        let f = PwlMap::from_json(text).unwrap();
        assert_eq!(f, tent());
        let canon = f.to_json();
        assert_eq!(canon, r#"{"domain":["0","1"],"nodes":[["0","0"],["1/2","1"],["1","0"]]}"#);
        assert_eq!(PwlMap::from_json(&canon).unwrap().to_json(), canon);
    }

    #[test]
    fn restrict_and_rescale() {
        let t = tent();
        let r = t.rescale(&iv(q(2, 1), q(4, 1))).unwrap();
        assert_eq!(r.eval(&q(3, 1)).unwrap(), q(4, 1));
        assert!(t.restrict(&iv(q(0, 1), q(1, 2))).is_err());
        let c = PwlMap::constant(unit(), q(1, 3)).unwrap();
        let rc = c.restrict(&iv(q(1, 4), q(1, 2))).unwrap();
        assert_eq!(rc.num_pieces(), 1);
    }

    #[test]
    fn lap_conventions() {
        // increasing, flat, increasing: three laps
        let f = PwlMap::new(
            unit(),
            vec![(q(0, 1), q(0, 1)), (q(1, 3), q(1, 2)), (q(2, 3), q(1, 2)), (q(1, 1), q(1, 1))],
        )
        .unwrap();
        assert_eq!(f.laps(), 3);
        // increasing with a slope change is one lap
        let g = PwlMap::new(unit(), vec![(q(0, 1), q(0, 1)), (q(1, 2), q(1, 4)), (q(1, 1), q(1, 1))]).unwrap();
        assert_eq!(g.laps(), 1);
    }
}
