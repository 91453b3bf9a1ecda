//! Finite-horizon chaos diagnostics. Every verdict here is evidence drawn
//! from a truncated time range, never a proof about infinite time.

pub mod dc;
pub mod dist;
pub mod evidence;
pub mod ly;
pub mod seeds;
pub mod seqent;
pub mod solenoid;
pub mod trajectory;

use serde::{Deserialize, Serialize};

pub use dc::{dc_classify, dc_classify_with, DcResult, PairOrigin, PairReport};
pub use dist::{default_t_grid, dist_fns, dist_fns_with, xi, DistFns};
pub use evidence::{
    devaney_verdict, mixing_evidence, sensitivity_evidence, transitivity_evidence, Certificate,
    EvidenceKind, EvidenceVerdict,
};
pub use ly::{ly_pair_scan, ly_pair_scan_with, LyPair, LyScan};
pub use seeds::random_seed_pairs;
pub use seqent::{seq_entropy_estimate, SeqEntropyEstimate};
pub use solenoid::{solenoid_scan, SolenoidCycle};
pub use trajectory::{trajectory, Trajectory, DEFAULT_PRECISION_BITS};

/// Thresholds and windows shared by the statistical diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaosConfig {
    /// Fraction of the horizon used as the tail window for limsup/liminf
    /// proxies.
    pub tail_fraction: f64,
    /// A pair counts as proximal when its tail minimum distance is at most
    /// this.
    pub delta_low: f64,
    /// `F < dc_zero` is read as `F = 0`.
    pub dc_zero: f64,
    /// `F* > dc_one` is read as `F* = 1`.
    pub dc_one: f64,
    /// `F < F* − dc_gap` is read as `F < F*`.
    pub dc_gap: f64,
    /// Start of the classification window as a fraction of the horizon.
    /// Distribution functions need a long window: a tail of fixed relative
    /// length cannot move `ξ(n, t)/n` by more than that fraction.
    pub dc_window_start: f64,
    pub t_grid_points: usize,
    pub precision_bits: u32,
    pub seed: u64,
    /// Largest power searched for a strict horseshoe when building coded
    /// pairs.
    pub horseshoe_max_power: usize,
}

impl Default for ChaosConfig {
    fn default() -> Self {
        ChaosConfig {
            tail_fraction: 0.2,
            delta_low: 2f64.powi(-10),
            dc_zero: 0.05,
            dc_one: 0.95,
            dc_gap: 0.1,
            dc_window_start: 1.0 / 40.0,
            t_grid_points: 101,
            precision_bits: DEFAULT_PRECISION_BITS,
            seed: 0x5eed_cafe,
            horseshoe_max_power: 4,
        }
    }
}
