//! Horseshoes for iterates and their nested shift intervals.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pwl::{Budget, ChainRefiner, PwlMap};
use crate::rational::{IntervalQ, Rat};

/// Two non-degenerate intervals with disjoint interiors, each mapped by
/// `f^power` over both. `strict` records that they are disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Horseshoe {
    pub j: IntervalQ,
    pub k: IntervalQ,
    pub power: usize,
    pub strict: bool,
}

impl Horseshoe {
    /// Exact re-verification against `f`.
    pub fn verify(&self, f: &PwlMap, budget: &Budget) -> Result<bool> {
        if self.j.is_degenerate() || self.k.is_degenerate() || self.j.overlaps_interior(&self.k) {
            return Ok(false);
        }
        let g = f.iterate(self.power, budget)?;
        let hull = self.j.hull(&self.k);
        Ok(g.image(&self.j)?.contains_interval(&hull)
            && g.image(&self.k)?.contains_interval(&hull)
            && self.strict == self.j.is_disjoint(&self.k))
    }

    pub fn legs(&self) -> [&IntervalQ; 2] {
        [&self.j, &self.k]
    }
}

/// Candidate endpoints: breakpoints of `g` plus `depth − 1` rounds of
/// midpoint refinement.
fn candidate_points(g: &PwlMap, depth: usize) -> Vec<Rat> {
    let mut pts: Vec<Rat> = g.xs().to_vec();
    for _ in 1..depth {
        let mut next = Vec::with_capacity(pts.len() * 2);
        for w in pts.windows(2) {
            next.push(w[0].clone());
            next.push(w[0].midpoint(&w[1]));
        }
        next.push(pts[pts.len() - 1].clone());
        pts = next;
    }
    pts
}

/// Lexicographically first `(a, b, c, d)` with `J = [p_a, p_b]`,
/// `K = [p_c, p_d]`, `b ≤ c` (`b < c` when strict) and `g(J), g(K) ⊇
/// [p_a, p_d]`.
///
/// Images of `[p_a, p_b]` are hulls of the images of consecutive candidate
/// cells, so covering is monotone in each endpoint. For each `(a, d)` this
/// gives a least admissible `b` and a greatest admissible `c`, both found by
/// binary search; the first `b` is then the least of those, `c` is as small
/// as the gap allows, and `d` is the first right end compatible with both.
fn search(g: &PwlMap, power: usize, depth: usize, strict_only: bool) -> Result<Option<Horseshoe>> {
    let pts = candidate_points(g, depth);
    let m = pts.len();
    if m < 2 {
        return Ok(None);
    }
    let cells: Vec<IntervalQ> = pts
        .windows(2)
        .map(|w| g.image(&IntervalQ::spanning(w[0].clone(), w[1].clone())))
        .collect::<Result<_>>()?;
    // suffix[d][c] = image of [p_c, p_d] for c < d
    let suffix: Vec<Vec<IntervalQ>> = (0..m)
        .map(|d| {
            let mut col: Vec<IntervalQ> = Vec::with_capacity(d);
            for c in (0..d).rev() {
                let next = match col.last() {
                    Some(h) => h.hull(&cells[c]),
                    None => cells[c].clone(),
                };
                col.push(next);
            }
            col.reverse();
            col
        })
        .collect();
    let gap = usize::from(strict_only);
    for a in 0..m {
        // prefix[k] = image of [p_a, p_{a+1+k}]
        let mut prefix: Vec<IntervalQ> = Vec::with_capacity(m - a - 1);
        for cell in &cells[a..] {
            let next = match prefix.last() {
                Some(h) => h.hull(cell),
                None => cell.clone(),
            };
            prefix.push(next);
        }
        let covers = |img: &IntervalQ, d: usize| img.lo() <= &pts[a] && img.hi() >= &pts[d];
        // (d, least b, greatest c) for every feasible right end d
        let mut feasible: Vec<(usize, usize, usize)> = Vec::new();
        for d in a + 1..m {
            let k = prefix.partition_point(|img| !covers(img, d));
            if k == prefix.len() {
                continue;
            }
            let b = a + 1 + k;
            let col = &suffix[d];
            let c_count = col[a..].partition_point(|img| covers(img, d));
            if c_count == 0 {
                continue;
            }
            let c = a + c_count - 1;
            if b + gap <= c {
                feasible.push((d, b, c));
            }
        }
        let Some(b) = feasible.iter().map(|&(_, b, _)| b).min() else {
            continue;
        };
        let c = b + gap;
        let d = feasible
            .iter()
            .filter(|&&(d, bd, cd)| bd <= b && cd >= c && d > c)
            .map(|&(d, _, _)| d)
            .min()
            .expect("the right end attaining the least b qualifies");
        return Ok(Some(Horseshoe {
            j: IntervalQ::spanning(pts[a].clone(), pts[b].clone()),
            k: IntervalQ::spanning(pts[c].clone(), pts[d].clone()),
            power,
            strict: c > b,
        }));
    }
    Ok(None)
}

/// The lexicographically first horseshoe for `f^n` whose endpoints are
/// breakpoints of `f^n` or their dyadic refinements at the given depth.
/// `None` means only "not found at this depth".
pub fn horseshoe_search(f: &PwlMap, n: usize, depth: usize, budget: &Budget) -> Result<Option<Horseshoe>> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be >= 1".into()));
    }
    let g = f.iterate(n, budget)?;
    search(&g, n, depth, false)
}

/// The first strict horseshoe over powers `1..=max_power`.
pub fn strict_horseshoe_search(
    f: &PwlMap,
    max_power: usize,
    depth: usize,
    budget: &Budget,
) -> Result<Option<Horseshoe>> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be >= 1".into()));
    }
    for (i, g) in f.iterates(budget).take(max_power).enumerate() {
        if let Some(h) = search(&g?, i + 1, depth, true)? {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Intervals `J_w` for binary words `w` of length `1..=depth`: `J_w` is the
/// chain interval of the legs `w_0, w_1, …` under `g = f^power`, so that
/// `g^i(J_w)` lies in leg `w_i`, `g^{|w|−1}(J_w)` equals the last leg and
/// `J_{wa} ⊆ J_w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftIntervals {
    pub power: usize,
    pub intervals: BTreeMap<Vec<u8>, IntervalQ>,
}

impl ShiftIntervals {
    pub fn get(&self, word: &[u8]) -> Option<&IntervalQ> {
        self.intervals.get(word)
    }

    pub fn words_of_len(&self, len: usize) -> impl Iterator<Item = (&Vec<u8>, &IntervalQ)> {
        self.intervals.iter().filter(move |(w, _)| w.len() == len)
    }

    /// Exact check of nesting `J_{wa} ⊆ J_w` and pairwise disjoint interiors
    /// (disjointness when `strict`) among words of equal length.
    pub fn verify_structure(&self, strict: bool) -> bool {
        let nested = self.intervals.iter().all(|(w, j)| {
            w.len() == 1 || self.intervals.get(&w[..w.len() - 1]).is_some_and(|p| p.contains_interval(j))
        });
        let lens: BTreeSet<usize> = self.intervals.keys().map(Vec::len).collect();
        let separated = lens.into_iter().all(|len| {
            let mut level: Vec<&IntervalQ> = self.words_of_len(len).map(|(_, j)| j).collect();
            level.sort();
            level.windows(2).all(|w| {
                if strict {
                    w[0].is_disjoint(w[1])
                } else {
                    !w[0].overlaps_interior(w[1])
                }
            })
        });
        nested && separated
    }
}

pub fn shift_intervals(f: &PwlMap, h: &Horseshoe, depth: usize, budget: &Budget) -> Result<ShiftIntervals> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be >= 1".into()));
    }
    let g = f.iterate(h.power, budget)?;
    let legs = [h.j.clone(), h.k.clone()];
    let mut intervals = BTreeMap::new();
    let mut frontier: Vec<(Vec<u8>, ChainRefiner<'_>)> = Vec::new();
    for (a, leg) in legs.iter().enumerate() {
        let r = ChainRefiner::start(&g, leg)?;
        intervals.insert(vec![a as u8], r.interval().clone());
        frontier.push((vec![a as u8], r));
    }
    for _ in 1..depth {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (w, r) in &frontier {
            for (a, leg) in legs.iter().enumerate() {
                let child = r.extend(leg)?;
                let mut cw = w.clone();
                cw.push(a as u8);
                intervals.insert(cw.clone(), child.interval().clone());
                next.push((cw, child));
            }
        }
        frontier = next;
    }
    Ok(ShiftIntervals {
        power: h.power,
        intervals,
    })
}
