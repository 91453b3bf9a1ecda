//! Distributional-chaos classification from sampled pairs.
//!
//! Two kinds of pairs are sampled: random points with large odd prime
//! denominators, and coded pairs built from a strict horseshoe of some
//! iterate `g = f^r`. A coded pair consists of two periodic points of `g`
//! whose itineraries first sit in opposite legs for a stretch and then agree
//! on a long shared random word, so the pair is far apart early on and
//! exponentially close for the rest of the horizon. The far stretch pins
//! `F` near zero at the start of the window while the close stretch pushes
//! `F*` towards one by its end.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{strict_horseshoe_search, Horseshoe};
use crate::error::{Error, Result};
use crate::pwl::{Budget, PwlMap};
use crate::rational::{IntervalQ, Rat};

use super::dist::{default_t_grid, dist_fns_from_distances, pair_distances, DistFns};
use super::evidence::{Certificate, EvidenceKind, EvidenceVerdict};
use super::seeds::random_seed_pairs;
use super::ChaosConfig;

/// How a sampled pair was produced; enough to rebuild it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PairOrigin {
    Random { x: Rat, y: Rat },
    Coded {
        power: usize,
        legs: [IntervalQ; 2],
        /// Number of leading symbols on which the two itineraries differ.
        prefix: usize,
        /// Shared itinerary after the prefix, one hex digit per 4 symbols.
        word_hex: String,
        word_len: usize,
    },
}

/// Distribution-function statistics of one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub origin: PairOrigin,
    pub kind: EvidenceKind,
    /// Threshold at which `F` is smallest relative to `F*`.
    pub t_star: f64,
    pub f_lower_at_t_star: f64,
    pub f_upper_at_t_star: f64,
    /// `F*` at the smallest positive threshold.
    pub f_upper_min: f64,
    pub invariants_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcResult {
    pub verdict: EvidenceVerdict,
    pub pairs: Vec<PairReport>,
    /// Pairs abandoned because the precision budget ran out.
    pub skipped: usize,
    pub invariants_ok: bool,
}

pub fn dc_classify(f: &PwlMap, samples: usize, horizon: usize) -> Result<DcResult> {
    dc_classify_with(f, samples, horizon, &ChaosConfig::default())
}

/// Classify `samples` random pairs and, when `f` has a strict horseshoe
/// among its first iterates, `samples` coded pairs.
pub fn dc_classify_with(f: &PwlMap, samples: usize, horizon: usize, cfg: &ChaosConfig) -> Result<DcResult> {
    if horizon < 100 {
        return Err(Error::InvalidParameter("horizon must be at least 100".into()));
    }
    let budget = Budget::from_env();
    let diameter = f.domain().len().to_f64();
    let grid = default_t_grid(diameter, cfg.t_grid_points);
    let start = ((cfg.dc_window_start * horizon as f64).ceil() as usize).max(1);

    let mut origins: Vec<PairOrigin> = random_seed_pairs(f.domain(), samples, cfg.seed)
        .into_iter()
        .map(|(x, y)| PairOrigin::Random { x, y })
        .collect();
    // a failed or over-budget search only means no coded pairs
    let found = strict_horseshoe_search(f, cfg.horseshoe_max_power, 1, &budget)
        .ok()
        .flatten()
        .map(|h| match f.iterate(h.power, &budget) {
            Ok(g) => affine_legs(&g, &h).unwrap_or(h),
            Err(_) => h,
        });
    if let Some(h) = found {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xc0de);
        let word_len = (horizon + 64).div_ceil(h.power) + 1;
        let prefix = horizon.div_ceil(30 * h.power).max(1);
        for _ in 0..samples {
            let word: Vec<u8> = (0..word_len).map(|_| rng.gen_range(0..2u8)).collect();
            origins.push(PairOrigin::Coded {
                power: h.power,
                legs: [h.j.clone(), h.k.clone()],
                prefix,
                word_hex: encode_word(&word),
                word_len,
            });
        }
    }

    let reports: Vec<Option<PairReport>> = origins
        .into_par_iter()
        .map(|origin| -> Result<Option<PairReport>> {
            let (x, y) = match pair_points(f, &origin) {
                Ok(p) => p,
                Err(Error::PieceBudgetExceeded { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let d = match pair_distances(f, &x, &y, horizon, cfg.precision_bits) {
                Ok(d) => d,
                Err(Error::PrecisionExhausted { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let fns = dist_fns_from_distances(&d, &grid, start, horizon);
            Ok(Some(classify_pair(origin, &fns, diameter, cfg)))
        })
        .collect::<Result<_>>()?;

    let skipped = reports.iter().filter(|r| r.is_none()).count();
    let pairs: Vec<PairReport> = reports.into_iter().flatten().collect();
    let invariants_ok = pairs.iter().all(|p| p.invariants_ok);
    // strongest kind; ties go to the earliest pair
    let best = pairs
        .iter()
        .enumerate()
        .max_by_key(|(i, p)| (p.kind, std::cmp::Reverse(*i)))
        .map(|(_, p)| p.clone());
    let verdict = match best {
        Some(p) if p.kind != EvidenceKind::None => EvidenceVerdict {
            kind: p.kind,
            scale: Rat::zero(),
            horizon,
            certificate: Certificate::Pair(Box::new(p)),
        },
        _ => EvidenceVerdict {
            kind: EvidenceKind::None,
            scale: Rat::zero(),
            horizon,
            certificate: Certificate::None,
        },
    };
    Ok(DcResult {
        verdict,
        pairs,
        skipped,
        invariants_ok,
    })
}

/// Read the thresholds off one pair's distribution functions.
pub fn classify_pair(origin: PairOrigin, fns: &DistFns, diameter: f64, cfg: &ChaosConfig) -> PairReport {
    let positive: Vec<usize> = (0..fns.t_grid.len())
        .filter(|&i| fns.t_grid[i] > 0.0 && fns.t_grid[i] <= diameter)
        .collect();
    let f_upper_min = positive.first().map_or(1.0, |&i| fns.f_upper[i]);
    let upper_one = positive.iter().all(|&i| fns.f_upper[i] > cfg.dc_one);
    let lower_zero = positive.iter().any(|&i| fns.f_lower[i] < cfg.dc_zero);
    let gap = positive
        .iter()
        .any(|&i| fns.f_lower[i] < fns.f_upper[i] - cfg.dc_gap);
    let kind = if upper_one && lower_zero {
        EvidenceKind::DC1
    } else if upper_one && gap {
        EvidenceKind::DC2
    } else if gap {
        EvidenceKind::DC3
    } else {
        EvidenceKind::None
    };
    let star = positive
        .iter()
        .copied()
        .max_by(|&a, &b| {
            let ga = fns.f_upper[a] - fns.f_lower[a];
            let gb = fns.f_upper[b] - fns.f_lower[b];
            ga.total_cmp(&gb).then(b.cmp(&a))
        })
        .unwrap_or(0);
    PairReport {
        origin,
        kind,
        t_star: fns.t_grid.get(star).copied().unwrap_or(0.0),
        f_lower_at_t_star: fns.f_lower.get(star).copied().unwrap_or(0.0),
        f_upper_at_t_star: fns.f_upper.get(star).copied().unwrap_or(0.0),
        f_upper_min,
        invariants_ok: fns.check_invariants(diameter),
    }
}

fn encode_word(word: &[u8]) -> String {
    word.chunks(4)
        .map(|c| {
            let v = c.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << i));
            char::from_digit(v, 16).expect("nibble")
        })
        .collect()
}

fn decode_word(hex: &str, len: usize) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(len);
    for c in hex.chars() {
        let v = c
            .to_digit(16)
            .ok_or_else(|| Error::Parse(format!("bad word digit {c:?}")))?;
        for i in 0..4 {
            if out.len() < len {
                out.push(((v >> i) & 1) as u8);
            }
        }
    }
    if out.len() != len {
        return Err(Error::Parse("word shorter than its length".into()));
    }
    Ok(out)
}

/// The two seed points described by an origin.
pub fn pair_points(f: &PwlMap, origin: &PairOrigin) -> Result<(Rat, Rat)> {
    match origin {
        PairOrigin::Random { x, y } => Ok((x.clone(), y.clone())),
        PairOrigin::Coded {
            power,
            legs,
            prefix,
            word_hex,
            word_len,
        } => {
            let word = decode_word(word_hex, *word_len)?;
            let g = f.iterate(*power, &Budget::from_env())?;
            let h = Horseshoe {
                j: legs[0].clone(),
                k: legs[1].clone(),
                power: *power,
                strict: true,
            };
            let code = |lead: u8| {
                let mut w = vec![lead; *prefix];
                w.extend_from_slice(&word);
                w
            };
            Ok((coded_point(&g, &h, &code(0))?, coded_point(&g, &h, &code(1))?))
        }
    }
}

/// The periodic point of `g` whose itinerary through the horseshoe legs
/// repeats `word`.
pub fn coded_point(g: &PwlMap, h: &Horseshoe, word: &[u8]) -> Result<Rat> {
    let legs = h.legs();
    let branches: Option<Vec<(Rat, Rat)>> = legs.iter().map(|leg| affine_branch(g, leg)).collect();
    match branches {
        Some(b) => {
            let x = affine_cycle_point(&b, word);
            if !legs[usize::from(word[0])].contains(&x) {
                return Err(Error::NotAChain { index: 0 });
            }
            Ok(x)
        }
        None => {
            let mut chain: Vec<IntervalQ> = word.iter().map(|&s| legs[usize::from(s)].clone()).collect();
            chain.push(legs[usize::from(word[0])].clone());
            g.chain_fixed_point(&chain)
        }
    }
}

/// Shrink each leg to a piece of `g` whose image still covers both legs, so
/// coded points can be solved in closed form.
fn affine_legs(g: &PwlMap, h: &Horseshoe) -> Option<Horseshoe> {
    let span = h.j.hull(&h.k);
    let shrink = |leg: &IntervalQ| -> Option<IntervalQ> {
        (0..g.num_pieces()).find_map(|i| {
            let sub = leg.intersection(&g.piece_interval(i))?;
            let covers = !sub.is_degenerate() && g.image(&sub).ok()?.contains_interval(&span);
            covers.then_some(sub)
        })
    };
    Some(Horseshoe {
        j: shrink(&h.j)?,
        k: shrink(&h.k)?,
        power: h.power,
        strict: h.strict,
    })
}

/// `(slope, intercept)` of `g` on the leg when `g` is affine there.
fn affine_branch(g: &PwlMap, leg: &IntervalQ) -> Option<(Rat, Rat)> {
    let i = g.piece_of(leg.lo());
    if leg.hi() > &g.xs()[i + 1] {
        return None;
    }
    let s = g.slope(i);
    let c = &g.ys()[i] - &(&s * &g.xs()[i]);
    Some((s, c))
}

/// Fixed point of the composed affine branches `x ↦ A x + B`, kept over a
/// shared denominator so no intermediate reduction is needed.
fn affine_cycle_point(branches: &[(Rat, Rat)], word: &[u8]) -> Rat {
    let mut an = BigInt::from(1);
    let mut bn = BigInt::from(0);
    let mut den = BigInt::from(1);
    for &sym in word {
        let (s, c) = &branches[usize::from(sym)];
        // A' = s A, B' = s B + c over denominator sd·cd·den
        let scale = s.numer() * c.denom();
        bn = &bn * &scale + c.numer() * s.denom() * &den;
        an = &an * &scale;
        den = &den * s.denom() * c.denom();
    }
    Rat::from_bigints(bn, &den - &an)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::trajectory::trajectory;
    use crate::families::tent;
    use crate::rational::{iv, q};

    #[test]
    fn words_round_trip() {
        let w: Vec<u8> = (0..37).map(|i| ((i * 7) % 3 % 2) as u8).collect();
        assert_eq!(decode_word(&encode_word(&w), w.len()).unwrap(), w);
    }

    #[test]
    fn affine_cycle_matches_chain_refinement() {
        let t2 = tent(2).unwrap();
        let g = t2.iterate(2, &Budget::default()).unwrap();
        let h = Horseshoe {
            j: iv(q(0, 1), q(1, 4)),
            k: iv(q(1, 2), q(3, 4)),
            power: 2,
            strict: true,
        };
        let word = [0u8, 1, 1, 0, 1, 0, 0, 0, 1];
        let x = coded_point(&g, &h, &word).unwrap();
        let mut chain: Vec<IntervalQ> = word.iter().map(|&s| h.legs()[usize::from(s)].clone()).collect();
        chain.push(h.j.clone());
        assert_eq!(x, g.chain_fixed_point(&chain).unwrap());
        let orbit = trajectory(&g, &x, word.len(), 256).unwrap();
        assert_eq!(orbit.value(word.len()), x);
        for (i, &s) in word.iter().enumerate() {
            assert!(h.legs()[usize::from(s)].contains(&orbit.value(i)));
        }
        assert!(x.denom().bit(0));
    }

    #[test]
    fn identity_is_not_distributionally_chaotic() {
        let id = PwlMap::identity(iv(q(0, 1), q(1, 1)));
        let r = dc_classify(&id, 10, 1000).unwrap();
        assert_eq!(r.verdict.kind, EvidenceKind::None);
        assert!(r.invariants_ok);
    }

    #[test]
    fn tent_pairs_at_a_short_horizon() {
        let r = dc_classify(&tent(2).unwrap(), 4, 2000).unwrap();
        assert_eq!(r.verdict.kind, EvidenceKind::DC1);
        assert!(r.invariants_ok);
        assert_eq!(r.skipped, 0);
    }
}
