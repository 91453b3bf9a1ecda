//! Perron roots of nonnegative integer matrices.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::markov::AdjMatrix;

const MAX_ITERATIONS: usize = 2_000_000;
const CHARPOLY_MAX_SIZE: usize = 8;

/// Spectral radius `λ(M)` within `tol`.
///
/// The support graph is split into strongly connected components; the
/// radius is the maximum over the irreducible diagonal blocks. Each block
/// `B` is handled by power iteration on the primitive matrix `B + I`,
/// stopped once the Collatz–Wielandt bracket is narrower than `tol`. Blocks
/// of size at most 8 are cross-checked against the largest real root of the
/// exact characteristic polynomial.
pub fn spectral_radius(m: &AdjMatrix, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let mut best = 0.0f64;
    for block in irreducible_blocks(m) {
        let (lo, hi) = block_bracket(m, &block, tol)?;
        let mut rho = 0.5 * (lo + hi);
        if block.len() <= CHARPOLY_MAX_SIZE {
            let poly = charpoly(m, &block);
            let root = largest_root_near(&poly, lo, hi, tol).ok_or_else(|| {
                Error::NonConvergence("characteristic polynomial has no root in the bracket".into())
            })?;
            if (root - rho).abs() > 2.0 * tol {
                return Err(Error::NonConvergence(format!(
                    "power iteration {rho} disagrees with characteristic root {root}"
                )));
            }
            rho = root;
        }
        best = best.max(rho);
    }
    Ok(best)
}

/// Vertex sets of strongly connected components that carry at least one
/// arrow (nontrivial irreducible blocks), in a deterministic order.
pub fn irreducible_blocks(m: &AdjMatrix) -> Vec<Vec<usize>> {
    let n = m.size();
    let mut g = DiGraph::<(), ()>::with_capacity(n, n * n);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if m.get(i, j) > 0 {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            v.sort_unstable();
            v
        })
        .filter(|c| c.len() > 1 || m.get(c[0], c[0]) > 0)
        .collect();
    blocks.sort();
    blocks
}

fn block_bracket(m: &AdjMatrix, block: &[usize], tol: f64) -> Result<(f64, f64)> {
    let k = block.len();
    let b: Vec<Vec<f64>> = block
        .iter()
        .map(|&i| block.iter().map(|&j| m.get(i, j) as f64).collect())
        .collect();
    let mut v = vec![1.0f64; k];
    for _ in 0..MAX_ITERATIONS {
        let w: Vec<f64> = (0..k)
            .map(|i| v[i] + (0..k).map(|j| b[i][j] * v[j]).sum::<f64>())
            .collect();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..k {
            let r = w[i] / v[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let norm = w.iter().cloned().fold(0.0, f64::max);
        v = w.into_iter().map(|x| x / norm).collect();
        if hi - lo < tol {
            return Ok((lo - 1.0, hi - 1.0));
        }
    }
    Err(Error::NonConvergence(format!(
        "no {tol} bracket after {MAX_ITERATIONS} iterations"
    )))
}

/// Integer characteristic polynomial `det(xI − B)` of a diagonal block,
/// coefficients from degree 0 upwards, by the Faddeev–LeVerrier recursion.
pub fn charpoly(m: &AdjMatrix, block: &[usize]) -> Vec<i128> {
    let n = block.len();
    let a: Vec<Vec<i128>> = block
        .iter()
        .map(|&i| block.iter().map(|&j| m.get(i, j) as i128).collect())
        .collect();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut mk = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|l| a[i][l] * mk[l][j]).sum();
            }
            next[i][i] += coeffs[n - k + 1];
        }
        mk = next;
        // c_{n-k} = -tr(A M_k) / k
        let tr: i128 = (0..n)
            .map(|i| (0..n).map(|l| a[i][l] * mk[l][i]).sum::<i128>())
            .sum();
        coeffs[n - k] = -tr / k as i128;
    }
    coeffs
}

fn horner(poly: &[i128], x: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
}

/// Bisection for the root of the monic `poly` near the bracket
/// `[lo, hi]`, widening by `tol` on each side.
fn largest_root_near(poly: &[i128], lo: f64, hi: f64, tol: f64) -> Option<f64> {
    let mut a = lo - tol;
    let mut b = hi + tol;
    let (pa, pb) = (horner(poly, a), horner(poly, b));
    if pa == 0.0 {
        return Some(a);
    }
    if pb == 0.0 {
        return Some(b);
    }
    if pa.signum() == pb.signum() {
        return None;
    }
    let sa = pa.signum();
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let pm = horner(poly, mid);
        if pm == 0.0 {
            return Some(mid);
        }
        if pm.signum() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> AdjMatrix {
        AdjMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    // independent oracle: bisection on an explicit polynomial
    fn bisect(p: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if p(mid) > 0.0 {
                b = mid;
            } else {
                a = mid;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn known_radii() {
        let tol = 1e-10;
        assert!((spectral_radius(&m(&[&[1, 1], &[1, 1]]), tol).unwrap() - 2.0).abs() < tol);
        let phi = bisect(|x| x * x - x - 1.0, 1.0, 2.0);
        assert!((spectral_radius(&m(&[&[1, 1], &[1, 0]]), tol).unwrap() - phi).abs() < tol);
        let perm = m(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0]]);
        assert!((spectral_radius(&perm, tol).unwrap() - 1.0).abs() < tol);
        assert_eq!(spectral_radius(&m(&[&[0, 1], &[0, 0]]), tol).unwrap(), 0.0);
    }

    #[test]
    fn reducible_takes_block_maximum() {
        // block {0,1} has radius phi, block {2} radius 3, arrow between them
        let g = m(&[&[1, 1, 1], &[1, 0, 0], &[0, 0, 3]]);
        assert!((spectral_radius(&g, 1e-10).unwrap() - 3.0).abs() < 1e-10);
        assert_eq!(irreducible_blocks(&g), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn charpoly_of_small_matrices() {
        let g = m(&[&[1, 1], &[1, 0]]);
        assert_eq!(charpoly(&g, &[0, 1]), vec![-1, -1, 1]);
        let h = m(&[&[2, 1, 0], &[0, 1, 1], &[1, 0, 0]]);
        // det(xI - H) = x^3 - 3x^2 + 2x - 1
        assert_eq!(charpoly(&h, &[0, 1, 2]), vec![-1, 2, -3, 1]);
    }

    #[test]
    fn large_block_without_cross_check() {
        // a 12-cycle with one chord: radius is the root of x^12 = x^5 + 1... checked
        // against the polynomial directly
        let n = 12;
        let mut rows = vec![vec![0u64; n]; n];
        for i in 0..n {
            rows[i][(i + 1) % n] = 1;
        }
        rows[6][0] = 1;
        let g = AdjMatrix::new(rows).unwrap();
        let rho = spectral_radius(&g, 1e-10).unwrap();
        // cycles of length 12 and 7 through vertex 0: x^12 = x^5 + 1
        let oracle = bisect(|x| x.powi(12) - x.powi(5) - 1.0, 1.0, 2.0);
        assert!((rho - oracle).abs() < 1e-9, "{rho} vs {oracle}");
    }
}
