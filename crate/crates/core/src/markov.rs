//! Covering graphs of finite invariant sets, connect-the-dots maps, cycles
//! and path counts.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::periodic::PeriodicOrbit;
use crate::pwl::PwlMap;
use crate::rational::{IntervalQ, Rat};

/// Square matrix of arrow counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AdjMatrix {
    rows: Vec<Vec<u64>>,
}

impl AdjMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("adjacency matrix must be square and non-empty".into()));
        }
        Ok(AdjMatrix { rows })
    }

    pub fn zeros(n: usize) -> Self {
        AdjMatrix {
            rows: vec![vec![0; n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = AdjMatrix::zeros(n);
        for i in 0..n {
            m.rows[i][i] = 1;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn checked_mul(&self, other: &AdjMatrix) -> Result<AdjMatrix> {
        let n = self.size();
        let mut out = AdjMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.rows[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let prod = a.checked_mul(other.rows[k][j]).ok_or(Error::CountOverflow)?;
                    out.rows[i][j] = out.rows[i][j]
                        .checked_add(prod)
                        .ok_or(Error::CountOverflow)?;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> u64 {
        (0..self.size()).map(|i| self.rows[i][i]).sum()
    }

    /// Entrywise `self ≥ other`.
    pub fn dominates(&self, other: &AdjMatrix) -> bool {
        self.size() == other.size()
            && self
                .rows
                .iter()
                .flatten()
                .zip(other.rows.iter().flatten())
                .all(|(a, b)| a >= b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.rows).expect("matrix serializes")
    }

    /// DOT digraph with one edge per nonzero entry, labelled by multiplicity
    /// when it exceeds one.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph {name} {{\n");
        for i in 0..self.size() {
            let _ = writeln!(s, "  I{} [label=\"I{}\"];", i + 1, i + 1);
        }
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                match m {
                    0 => {}
                    1 => {
                        let _ = writeln!(s, "  I{} -> I{};", i + 1, j + 1);
                    }
                    _ => {
                        let _ = writeln!(s, "  I{} -> I{} [label=\"{m}\"];", i + 1, j + 1);
                    }
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// `M^n`, the number of paths of length `n` between each pair of vertices.
pub fn path_count(m: &AdjMatrix, n: u32) -> Result<AdjMatrix> {
    if n == 0 {
        return Ok(AdjMatrix::identity(m.size()));
    }
    let mut result: Option<AdjMatrix> = None;
    let mut base = m.clone();
    let mut e = n;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.checked_mul(&base)?,
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.checked_mul(&base)?;
    }
    Ok(result.expect("n >= 1"))
}

/// Covering data of a finite invariant set `P` and its `P`-intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitGraph {
    pub p_points: Vec<Rat>,
    pub intervals: Vec<IntervalQ>,
    /// `M(f|P)`: true covering multiplicities.
    pub full_matrix: AdjMatrix,
    /// `M(f_P)`: arrows from endpoint images only.
    pub ctd_matrix: AdjMatrix,
    pub p_monotone: bool,
}

fn check_invariant(f: &PwlMap, p: &[Rat]) -> Result<Vec<Rat>> {
    if p.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    if p.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadOrbit("points must be strictly increasing".into()));
    }
    let mut images = Vec::with_capacity(p.len());
    for x in p {
        let y = f.eval(x)?;
        if p.binary_search(&y).is_err() {
            return Err(Error::NotInvariant(x.to_string()));
        }
        images.push(y);
    }
    Ok(images)
}

fn p_intervals(p: &[Rat]) -> Vec<IntervalQ> {
    p.windows(2)
        .map(|w| IntervalQ::spanning(w[0].clone(), w[1].clone()))
        .collect()
}

pub fn build_orbit_graph(f: &PwlMap, p: &[Rat]) -> Result<OrbitGraph> {
    let images = check_invariant(f, p)?;
    let intervals = p_intervals(p);
    let k = intervals.len();
    let mut full = AdjMatrix::zeros(k);
    let mut ctd = AdjMatrix::zeros(k);
    for i in 0..k {
        let hull = IntervalQ::spanning(images[i].clone(), images[i + 1].clone());
        for j in 0..k {
            full.rows[i][j] = f.covers_count(&intervals[i], &intervals[j])? as u64;
            if !hull.is_degenerate() && hull.contains_interval(&intervals[j]) {
                ctd.rows[i][j] = 1;
            }
        }
    }
    let p_monotone = intervals.iter().all(|j| f.is_monotone_on(j));
    Ok(OrbitGraph {
        p_points: p.to_vec(),
        intervals,
        full_matrix: full,
        ctd_matrix: ctd,
        p_monotone,
    })
}

/// The `P`-linear map agreeing with `f` on `P`, on `[min P, max P]`.
pub fn connect_the_dots(f: &PwlMap, p: &[Rat]) -> Result<PwlMap> {
    let images = check_invariant(f, p)?;
    let domain = IntervalQ::spanning(p[0].clone(), p[p.len() - 1].clone());
    PwlMap::new(domain, p.iter().cloned().zip(images).collect())
}

/// The fundamental cycle of an orbit, as 0-based `P`-interval indices
/// `J_0, …, J_{p−1}` (the arrow `J_{p−1} → J_0` closes it). Starts from
/// `J_0 = I_1` and the leftmost point `c`; `J_k` is the `P`-interval inside
/// the hull of the images of `J_{k−1}`'s endpoints that has `f^k(c)` as an
/// endpoint.
pub fn fundamental_cycle(orbit: &PeriodicOrbit) -> Result<Vec<usize>> {
    let p = orbit.period();
    if p < 2 {
        return Err(Error::BadOrbit("fundamental cycles need period >= 2".into()));
    }
    let sigma = orbit.sigma();
    let mut cycle = vec![0usize];
    let mut c = 0usize;
    for _ in 1..p {
        let j = *cycle.last().expect("nonempty");
        let (a, b) = (sigma[j], sigma[j + 1]);
        let (lo, hi) = (a.min(b), a.max(b));
        c = sigma[c];
        let next = if c == lo {
            lo
        } else if c == hi {
            hi - 1
        } else {
            return Err(Error::BadOrbit("orbit point is not an endpoint of the image".into()));
        };
        cycle.push(next);
    }
    Ok(cycle)
}

/// Lengths `n ≤ bound` of primitive cycles (closed arrow paths that are not
/// a repetition of a shorter one), counted through
/// `Σ_{d | n} μ(n/d) tr(M^d)`.
pub fn primitive_cycle_lengths(m: &AdjMatrix, bound: usize) -> Result<BTreeSet<usize>> {
    const LIMIT: usize = 20;
    if bound > LIMIT {
        return Err(Error::BoundTooLarge { bound, limit: LIMIT });
    }
    let n = m.size();
    let big: Vec<Vec<i128>> = m
        .rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut power = big.clone();
    let mut traces = vec![0i128; bound + 1];
    for d in 1..=bound {
        if d > 1 {
            let mut next = vec![vec![0i128; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if power[i][k] == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let prod = power[i][k]
                            .checked_mul(big[k][j])
                            .ok_or(Error::CountOverflow)?;
                        next[i][j] = next[i][j].checked_add(prod).ok_or(Error::CountOverflow)?;
                    }
                }
            }
            power = next;
        }
        traces[d] = (0..n).map(|i| power[i][i]).sum();
    }
    let mut out = BTreeSet::new();
    for len in 1..=bound {
        let mut total = 0i128;
        for d in (1..=len).filter(|d| len % d == 0) {
            total += mobius(len / d) as i128 * traces[d];
        }
        if total > 0 {
            out.insert(len);
        }
    }
    Ok(out)
}

fn mobius(mut n: usize) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// All primitive vertex cycles of length `len` in the support graph of `m`,
/// each written from its lexicographically least rotation.
pub fn enumerate_primitive_cycles(m: &AdjMatrix, len: usize) -> Vec<Vec<usize>> {
    fn dfs(m: &AdjMatrix, len: usize, path: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        let last = *path.last().expect("nonempty");
        if path.len() == len {
            if m.get(last, path[0]) > 0 && is_canonical_primitive(path) {
                out.insert(path.clone());
            }
            return;
        }
        for next in 0..m.size() {
            // rotations starting at their least vertex suffice
            if next >= path[0] && m.get(last, next) > 0 {
                path.push(next);
                dfs(m, len, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    if len == 0 {
        return Vec::new();
    }
    for start in 0..m.size() {
        let mut path = vec![start];
        dfs(m, len, &mut path, &mut out);
    }
    out.into_iter().collect()
}

fn is_canonical_primitive(word: &[usize]) -> bool {
    let n = word.len();
    (1..n).all(|r| {
        let rotated: Vec<usize> = word[r..].iter().chain(&word[..r]).copied().collect();
        rotated.as_slice() > word
    })
}

/// Whether the orbit is spatially ordered as
/// `f^{p−1}(c) < f^{p−3}(c) < … < c < f(c) < f^3(c) < … < f^{p−2}(c)` or the
/// mirror image, with `c` the median point.
pub fn is_stefan_orbit(orbit: &PeriodicOrbit) -> Result<bool> {
    let p = orbit.period();
    if p < 3 || p % 2 == 0 {
        return Err(Error::NotOddPeriod(p));
    }
    let traj = orbit.trajectory_indices((p - 1) / 2);
    let mut expected: Vec<usize> = (1..=(p - 1) / 2).rev().map(|k| 2 * k).collect();
    expected.push(0);
    expected.extend((0..(p - 1) / 2).map(|k| 2 * k + 1));
    let forward = expected.iter().enumerate().all(|(pos, &e)| traj[e] == pos);
    let mirror = expected
        .iter()
        .enumerate()
        .all(|(pos, &e)| traj[e] == p - 1 - pos);
    Ok(forward || mirror)
}
