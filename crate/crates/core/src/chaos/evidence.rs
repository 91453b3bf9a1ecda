//! Finite-horizon interval-image evidence for mixing, sensitivity and
//! transitivity. Images are exact; only the quantifiers are truncated.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pwl::PwlMap;
use crate::rational::{IntervalQ, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EvidenceKind {
    None,
    MixingEvidence,
    SensitivityEvidence,
    TransitivityEvidence,
    DevaneyEvidence,
    DC3,
    DC2,
    DC1,
}

/// Re-checkable support for a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Certificate {
    /// For each tested interval, the iterate index that settles it.
    Intervals(Vec<(IntervalQ, usize)>),
    /// A tested interval (and, for transitivity, a target) that never
    /// satisfied the condition within the horizon.
    Counterexample {
        interval: IntervalQ,
        target: Option<IntervalQ>,
    },
    /// A pair of seeds and its distribution-function statistics.
    Pair(Box<super::dc::PairReport>),
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceVerdict {
    pub kind: EvidenceKind,
    pub scale: Rat,
    pub horizon: usize,
    pub certificate: Certificate,
}

impl EvidenceVerdict {
    pub fn is_positive(&self) -> bool {
        self.kind != EvidenceKind::None
    }
}

/// The `2^k` closed dyadic subintervals of the domain.
pub fn dyadic_intervals(domain: &IntervalQ, scale_k: u32) -> Vec<IntervalQ> {
    let parts = 1i64 << scale_k;
    let len = domain.len();
    (0..parts)
        .map(|i| {
            let a = domain.lo() + &(&len * &Rat::new(i, parts));
            let b = domain.lo() + &(&len * &Rat::new(i + 1, parts));
            IntervalQ::spanning(a, b)
        })
        .collect()
}

/// `J, f(J), …, f^n(J)`.
pub fn image_orbit(f: &PwlMap, j: &IntervalQ, n: usize) -> Result<Vec<IntervalQ>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(j.clone());
    for _ in 0..n {
        let next = f.image(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

fn scale_of(domain: &IntervalQ, scale_k: u32) -> Rat {
    domain.len() * Rat::new(1, 1i64 << scale_k)
}

/// Positive iff every dyadic `J` at scale `2^{−k}` has some `n ≤ N` with
/// `f^m(J) ⊇ [a+ε, b−ε]` for all `m ∈ [n, N]`.
pub fn mixing_evidence(f: &PwlMap, eps: &Rat, scale_k: u32, horizon: usize) -> Result<EvidenceVerdict> {
    let dom = f.domain();
    let target = IntervalQ::spanning(dom.lo() + eps, dom.hi() - eps);
    let mut witnesses = Vec::new();
    for j in dyadic_intervals(dom, scale_k) {
        let orbit = image_orbit(f, &j, horizon)?;
        let settled = orbit
            .iter()
            .rposition(|im| !im.contains_interval(&target))
            .map_or(Some(0), |last_fail| (last_fail < horizon).then_some(last_fail + 1));
        match settled {
            Some(n) => witnesses.push((j, n)),
            None => {
                return Ok(EvidenceVerdict {
                    kind: EvidenceKind::None,
                    scale: scale_of(dom, scale_k),
                    horizon,
                    certificate: Certificate::Counterexample {
                        interval: j,
                        target: Some(target),
                    },
                })
            }
        }
    }
    Ok(EvidenceVerdict {
        kind: EvidenceKind::MixingEvidence,
        scale: scale_of(dom, scale_k),
        horizon,
        certificate: Certificate::Intervals(witnesses),
    })
}

/// Positive iff every dyadic `V` at scale `2^{−k}` has `diam f^n(V) ≥ δ` for
/// some `n ≤ N`.
pub fn sensitivity_evidence(f: &PwlMap, delta: &Rat, scale_k: u32, horizon: usize) -> Result<EvidenceVerdict> {
    let dom = f.domain();
    let mut witnesses = Vec::new();
    for v in dyadic_intervals(dom, scale_k) {
        let orbit = image_orbit(f, &v, horizon)?;
        match orbit.iter().position(|im| &im.len() >= delta) {
            Some(n) => witnesses.push((v, n)),
            None => {
                return Ok(EvidenceVerdict {
                    kind: EvidenceKind::None,
                    scale: scale_of(dom, scale_k),
                    horizon,
                    certificate: Certificate::Counterexample {
                        interval: v,
                        target: None,
                    },
                })
            }
        }
    }
    Ok(EvidenceVerdict {
        kind: EvidenceKind::SensitivityEvidence,
        scale: scale_of(dom, scale_k),
        horizon,
        certificate: Certificate::Intervals(witnesses),
    })
}

/// Positive iff for all dyadic `J, K` at scale `2^{−k}` some `f^n(J)` with
/// `1 ≤ n ≤ N` meets the interior of `K`. The certificate lists, for each
/// `J`, the largest index needed over all targets.
pub fn transitivity_evidence(f: &PwlMap, scale_k: u32, horizon: usize) -> Result<EvidenceVerdict> {
    let dom = f.domain();
    let parts = dyadic_intervals(dom, scale_k);
    let mut witnesses = Vec::new();
    for j in &parts {
        let orbit = image_orbit(f, j, horizon)?;
        let mut worst = 0;
        for k in &parts {
            match (1..=horizon).find(|&n| orbit[n].overlaps_interior(k)) {
                Some(n) => worst = worst.max(n),
                None => {
                    return Ok(EvidenceVerdict {
                        kind: EvidenceKind::None,
                        scale: scale_of(dom, scale_k),
                        horizon,
                        certificate: Certificate::Counterexample {
                            interval: j.clone(),
                            target: Some(k.clone()),
                        },
                    })
                }
            }
        }
        witnesses.push((j.clone(), worst));
    }
    Ok(EvidenceVerdict {
        kind: EvidenceKind::TransitivityEvidence,
        scale: scale_of(dom, scale_k),
        horizon,
        certificate: Certificate::Intervals(witnesses),
    })
}

/// For interval maps Devaney chaos is equivalent to transitivity, so the
/// verdict is the transitivity evidence relabelled.
pub fn devaney_verdict(f: &PwlMap, scale_k: u32, horizon: usize) -> Result<EvidenceVerdict> {
    let mut v = transitivity_evidence(f, scale_k, horizon)?;
    if v.is_positive() {
        v.kind = EvidenceKind::DevaneyEvidence;
    }
    Ok(v)
}
