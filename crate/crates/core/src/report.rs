//! The analysis pipeline and its JSON report.
//!
//! Each section of the report is computed independently and carries its own
//! status, so an exhausted budget in one stage leaves the others intact.
//! Output is deterministic for a fixed configuration: floats are rounded to
//! 15 significant digits, rationals are `p/q` strings, and timing is only
//! recorded on request.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::chaos::{
    dc_classify_with, devaney_verdict, ly_pair_scan_with, mixing_evidence, random_seed_pairs,
    sensitivity_evidence, solenoid_scan, ChaosConfig, EvidenceKind, EvidenceVerdict,
};
use crate::entropy::{
    bowen_estimate, breakpoint_orbit_set, entropy_lower_sup, entropy_markov,
    entropy_upper_lipschitz, strict_horseshoe_search, type_entropy_bound, EntropyBounds,
    LowerWitness, UpperWitness,
};
use crate::error::{Error, Result};
use crate::families::catalog;
use crate::periodic::{period_witnesses, sharkovsky_forced, type_from_periods, SharkovskyType};
use crate::pwl::{Budget, PwlMap};
use crate::rational::{IntervalQ, Rat};

pub const SCHEMA: &str = "chaoskit-report/1";

/// Knobs of the pipeline. Scales are dyadic exponents; `eps` and `delta`
/// are fractions of the domain length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub period_bound: usize,
    pub entropy_lap_n: usize,
    /// Largest period whose orbits feed the entropy lower bound.
    pub entropy_orbit_n: usize,
    pub horseshoe_power: usize,
    pub horseshoe_depth: usize,
    pub mixing_eps: Rat,
    pub mixing_scale: u32,
    pub sensitivity_delta: Rat,
    pub sensitivity_scale: u32,
    pub transitivity_scale: u32,
    pub evidence_horizon: usize,
    pub ly_pairs: usize,
    pub ly_horizon: usize,
    pub dc_samples: usize,
    pub dc_horizon: usize,
    pub solenoid_levels: u32,
    pub solenoid_horizon: usize,
    pub bowen_n: usize,
    pub bowen_grid: usize,
    pub precision_bits: u32,
    pub seed: u64,
    pub budget: Budget,
    pub timing: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            period_bound: 16,
            entropy_lap_n: 12,
            entropy_orbit_n: 6,
            horseshoe_power: 4,
            horseshoe_depth: 2,
            mixing_eps: Rat::new(1, 32),
            mixing_scale: 5,
            sensitivity_delta: Rat::new(1, 4),
            sensitivity_scale: 6,
            transitivity_scale: 4,
            evidence_horizon: 20,
            ly_pairs: 100,
            ly_horizon: 10_000,
            dc_samples: 50,
            dc_horizon: 10_000,
            solenoid_levels: 4,
            solenoid_horizon: 4096,
            bowen_n: 10,
            bowen_grid: 1024,
            precision_bits: 256,
            seed: ChaosConfig::default().seed,
            budget: Budget::from_env(),
            timing: false,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("period bound", self.period_bound),
            ("lap n", self.entropy_lap_n),
            ("orbit n", self.entropy_orbit_n),
            ("horseshoe power", self.horseshoe_power),
            ("horseshoe depth", self.horseshoe_depth),
            ("evidence horizon", self.evidence_horizon),
            ("bowen n", self.bowen_n),
            ("bowen grid", self.bowen_grid),
            ("solenoid horizon", self.solenoid_horizon),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidParameter(format!("{name} must be positive")));
        }
        if self.ly_horizon < 100 || self.dc_horizon < 100 {
            return Err(Error::InvalidParameter("statistical horizons must be at least 100".into()));
        }
        if self.precision_bits < 64 {
            return Err(Error::InvalidParameter("precision must be at least 64 bits".into()));
        }
        if self.budget.max_pieces < 16 || self.budget.max_den_bits < 64 {
            return Err(Error::InvalidParameter("budget below the usable minimum".into()));
        }
        if !self.mixing_eps.is_positive() || !self.sensitivity_delta.is_positive() {
            return Err(Error::InvalidParameter("eps and delta must be positive".into()));
        }
        Ok(())
    }

    fn chaos(&self) -> ChaosConfig {
        ChaosConfig {
            precision_bits: self.precision_bits,
            seed: self.seed,
            horseshoe_max_power: self.horseshoe_power,
            ..ChaosConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    BudgetExceeded,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section<T> {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub result: Option<T>,
}

impl<T> Section<T> {
    fn from_result(r: Result<T>) -> Section<T> {
        match r {
            Ok(v) => Section {
                status: Status::Ok,
                detail: None,
                result: Some(v),
            },
            Err(e) => Section {
                status: if is_budget_error(&e) { Status::BudgetExceeded } else { Status::Failed },
                detail: Some(e.to_string()),
                result: None,
            },
        }
    }
}

fn is_budget_error(e: &Error) -> bool {
    matches!(
        e,
        Error::PieceBudgetExceeded { .. }
            | Error::DenominatorBudgetExceeded { .. }
            | Error::PrecisionExhausted { .. }
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapInfo {
    pub id: String,
    pub sha256: String,
    pub domain: [Rat; 2],
    pub pieces: usize,
    pub spec: crate::pwl::MapSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodsSection {
    pub bound: usize,
    pub found: BTreeSet<usize>,
    /// A point of each least period found.
    pub witnesses: BTreeMap<usize, Rat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeSection {
    pub verdict: SharkovskyType,
    /// Periods up to the bound that the verdict forces.
    pub forced: BTreeSet<u64>,
    pub forced_tail_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropySection {
    pub bounds: EntropyBounds,
    pub lower_witness_text: String,
    pub upper_witness_text: String,
    pub bowen_estimate: f64,
    pub bowen_heuristic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorseshoeSection {
    pub power: usize,
    pub j: IntervalQ,
    pub k: IntervalQ,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LySection {
    pub pairs: usize,
    pub candidates: usize,
    pub fraction: f64,
    pub delta: f64,
    pub heuristic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcSection {
    pub kind: EvidenceKind,
    pub pairs: usize,
    pub skipped: usize,
    pub counts: BTreeMap<String, usize>,
    pub invariants_ok: bool,
    pub verdict: EvidenceVerdict,
    /// DC1 or DC2 evidence without a positive entropy lower bound is only
    /// finite-horizon evidence and is marked as such.
    pub zero_entropy_flag: bool,
    pub heuristic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolenoidSummary {
    pub level: u32,
    pub period: usize,
    pub degenerate: bool,
    pub hull: IntervalQ,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceSection {
    pub mixing: Section<EvidenceVerdict>,
    pub sensitivity: Section<EvidenceVerdict>,
    pub devaney: Section<EvidenceVerdict>,
    pub li_yorke: Section<LySection>,
    pub distributional: Section<DcSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Consistency {
    pub lower_le_upper: bool,
    pub forced_tail_consistent: bool,
    pub dc_entropy_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaosReport {
    pub schema: String,
    pub map: MapInfo,
    pub config: AnalysisConfig,
    pub periods: Section<PeriodsSection>,
    pub sharkovsky_type: Section<TypeSection>,
    pub entropy: Section<EntropySection>,
    pub horseshoe: Section<Option<HorseshoeSection>>,
    pub evidence: EvidenceSection,
    pub solenoid: Section<Vec<SolenoidSummary>>,
    pub consistency: Consistency,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, f64>>,
}

impl ChaosReport {
    /// Some section ran out of budget.
    pub fn budget_exceeded(&self) -> bool {
        let statuses = [
            self.periods.status,
            self.sharkovsky_type.status,
            self.entropy.status,
            self.horseshoe.status,
            self.evidence.mixing.status,
            self.evidence.sensitivity.status,
            self.evidence.devaney.status,
            self.evidence.li_yorke.status,
            self.evidence.distributional.status,
            self.solenoid.status,
        ];
        statuses.contains(&Status::BudgetExceeded)
    }

    /// Pretty JSON with floats rounded to 15 significant digits.
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        round_floats(&mut v);
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            let r: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
            if let Some(m) = serde_json::Number::from_f64(r) {
                *n = m;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// A catalog id, a path to a JSON map spec, or inline spec JSON.
pub fn load_map(source: &str) -> Result<(String, PwlMap)> {
    let trimmed = source.trim();
    if trimmed.starts_with('{') {
        return Ok(("inline".into(), PwlMap::from_json(trimmed)?));
    }
    match catalog(trimmed) {
        Ok(f) => Ok((trimmed.to_string(), f)),
        Err(catalog_err) => match std::fs::read_to_string(trimmed) {
            Ok(text) => Ok((trimmed.to_string(), PwlMap::from_json(&text)?)),
            Err(_) => Err(catalog_err),
        },
    }
}

pub fn map_hash(f: &PwlMap) -> String {
    hex::encode(Sha256::digest(f.to_json().as_bytes()))
}

fn timed<T>(log: &mut BTreeMap<String, f64>, name: &str, run: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = run();
    log.insert(name.to_string(), t.elapsed().as_secs_f64() * 1e3);
    out
}

pub fn analyze(source: &str, config: &AnalysisConfig) -> Result<ChaosReport> {
    config.validate()?;
    let (id, f) = load_map(source)?;
    Ok(analyze_map(&id, &f, config))
}

/// Run every stage on `f`. Stage failures are recorded in their sections.
pub fn analyze_map(id: &str, f: &PwlMap, config: &AnalysisConfig) -> ChaosReport {
    let budget = config.budget;
    let cfg = config.chaos();
    let len = f.domain().len();
    let mut timing = BTreeMap::new();

    let periods = Section::from_result(timed(&mut timing, "periods", || {
        let witnesses = period_witnesses(f, config.period_bound, &budget)?;
        Ok(PeriodsSection {
            bound: config.period_bound,
            found: witnesses.keys().copied().collect(),
            witnesses,
        })
    }));

    let sharkovsky_type = Section::from_result(match &periods.result {
        Some(p) => {
            let verdict = type_from_periods(&p.found, p.bound as u64);
            let forced = match verdict {
                SharkovskyType::Finite(m) => sharkovsky_forced(m, p.bound as u64),
                SharkovskyType::TwoInfinityCandidate(_) => {
                    p.found.iter().map(|&m| m as u64).collect()
                }
            };
            let found: BTreeSet<u64> = p.found.iter().map(|&m| m as u64).collect();
            Ok(TypeSection {
                forced_tail_consistent: forced == found,
                verdict,
                forced,
            })
        }
        None => Err(Error::IllFormed("period scan unavailable".into())),
    });

    let horseshoe = Section::from_result(timed(&mut timing, "horseshoe", || {
        Ok(
            strict_horseshoe_search(f, config.horseshoe_power, config.horseshoe_depth, &budget)?.map(|h| {
                HorseshoeSection {
                    power: h.power,
                    j: h.j,
                    k: h.k,
                    strict: h.strict,
                }
            }),
        )
    }));

    let entropy = Section::from_result(timed(&mut timing, "entropy", || {
        entropy_section(f, config, &periods, &horseshoe)
    }));

    let mixing = Section::from_result(timed(&mut timing, "mixing", || {
        mixing_evidence(f, &(&config.mixing_eps * &len), config.mixing_scale, config.evidence_horizon)
    }));
    let sensitivity = Section::from_result(timed(&mut timing, "sensitivity", || {
        sensitivity_evidence(
            f,
            &(&config.sensitivity_delta * &len),
            config.sensitivity_scale,
            config.evidence_horizon,
        )
    }));
    let devaney = Section::from_result(timed(&mut timing, "devaney", || {
        devaney_verdict(f, config.transitivity_scale, config.evidence_horizon)
    }));

    let li_yorke = Section::from_result(timed(&mut timing, "li_yorke", || {
        let seeds = random_seed_pairs(f.domain(), config.ly_pairs, config.seed);
        let delta = len.to_f64() / 4.0;
        let scan = ly_pair_scan_with(f, &seeds, config.ly_horizon, delta, &cfg)?;
        Ok(LySection {
            pairs: scan.pairs.len(),
            candidates: scan.pairs.iter().filter(|p| p.candidate).count(),
            fraction: scan.fraction,
            delta,
            heuristic: true,
        })
    }));

    let lower = entropy.result.as_ref().map_or(0.0, |e| e.bounds.lower);
    let distributional = Section::from_result(timed(&mut timing, "distributional", || {
        let r = dc_classify_with(f, config.dc_samples, config.dc_horizon, &cfg)?;
        let mut counts = BTreeMap::new();
        for p in &r.pairs {
            *counts.entry(format!("{:?}", p.kind)).or_insert(0) += 1;
        }
        let kind = r.verdict.kind;
        Ok(DcSection {
            kind,
            pairs: r.pairs.len(),
            skipped: r.skipped,
            counts,
            invariants_ok: r.invariants_ok,
            zero_entropy_flag: matches!(kind, EvidenceKind::DC1 | EvidenceKind::DC2) && lower <= 0.0,
            verdict: r.verdict,
            heuristic: true,
        })
    }));

    let solenoid = Section::from_result(timed(&mut timing, "solenoid", || {
        let cycles = solenoid_scan(f, f.domain().lo(), config.solenoid_levels, config.solenoid_horizon)?;
        Ok(cycles
            .into_iter()
            .map(|c| SolenoidSummary {
                level: c.level,
                period: c.period,
                degenerate: c.degenerate,
                hull: c.intervals[0].clone(),
            })
            .collect())
    }));

    let consistency = Consistency {
        lower_le_upper: entropy
            .result
            .as_ref()
            .is_none_or(|e| e.bounds.lower <= e.bounds.upper + 1e-9),
        forced_tail_consistent: sharkovsky_type
            .result
            .as_ref()
            .is_none_or(|t| t.forced_tail_consistent),
        dc_entropy_consistent: distributional
            .result
            .as_ref()
            .is_none_or(|d| !matches!(d.kind, EvidenceKind::DC1 | EvidenceKind::DC2) || lower > 0.0 || d.zero_entropy_flag),
    };

    let spec = f.to_spec();
    ChaosReport {
        schema: SCHEMA.to_string(),
        map: MapInfo {
            id: id.to_string(),
            sha256: map_hash(f),
            domain: [f.domain().lo().clone(), f.domain().hi().clone()],
            pieces: f.num_pieces(),
            spec,
        },
        config: config.clone(),
        periods,
        sharkovsky_type,
        entropy,
        horseshoe,
        evidence: EvidenceSection {
            mixing,
            sensitivity,
            devaney,
            li_yorke,
            distributional,
        },
        solenoid,
        consistency,
        timing_ms: config.timing.then_some(timing),
    }
}

/// Rigorous bounds: the lower bound is the best of orbit matrices, the
/// horseshoe count and period forcing; the upper bound is the least of the
/// lap, Lipschitz and exact Markov values.
fn entropy_section(
    f: &PwlMap,
    config: &AnalysisConfig,
    periods: &Section<PeriodsSection>,
    horseshoe: &Section<Option<HorseshoeSection>>,
) -> Result<EntropySection> {
    let budget = config.budget;
    let (mut lower, mut lower_witness) = entropy_lower_sup(f, config.entropy_orbit_n, &budget)?;
    if let Some(Some(h)) = &horseshoe.result {
        let v = std::f64::consts::LN_2 / h.power as f64;
        if v > lower + 1e-15 {
            lower = v;
            lower_witness = LowerWitness::Horseshoe { power: h.power };
        }
    }
    if let Some(p) = &periods.result {
        for &m in &p.found {
            let v = type_entropy_bound(m as u64);
            if v > lower + 1e-15 {
                lower = v;
                lower_witness = LowerWitness::Period { period: m };
            }
        }
    }

    let mut candidates: Vec<(f64, UpperWitness)> = Vec::new();
    let lip = entropy_upper_lipschitz(f);
    candidates.push((lip, UpperWitness::Lipschitz { slope: f.max_abs_slope() }));
    // the lap bound is monotone in n only in the limit, so keep the best n
    for (i, g) in f.iterates(&budget).take(config.entropy_lap_n).enumerate() {
        let g = match g {
            Ok(g) => g,
            Err(e) if is_budget_error(&e) => break,
            Err(e) => return Err(e),
        };
        let (n, laps) = (i + 1, g.laps());
        candidates.push(((laps as f64).ln() / n as f64, UpperWitness::LapCount { n, laps }));
    }
    if let Some(pts) = breakpoint_orbit_set(f) {
        if pts.len() >= 2 {
            if let Ok(v) = entropy_markov(f, &pts) {
                candidates.push((v, UpperWitness::Markov { points: pts.len() }));
                if v > lower + 1e-15 {
                    lower = v;
                    lower_witness = LowerWitness::InvariantSet { points: pts };
                }
            }
        }
    }
    let (upper, upper_witness) = candidates
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("the Lipschitz bound is always present");
    let bounds = EntropyBounds {
        lower,
        upper,
        lower_witness,
        upper_witness,
    };
    let eps = &f.domain().len() * &Rat::new(1, 64);
    Ok(EntropySection {
        lower_witness_text: bounds.lower_witness.to_string(),
        upper_witness_text: bounds.upper_witness.to_string(),
        bounds,
        bowen_estimate: bowen_estimate(f, config.bowen_n, &eps, config.bowen_grid),
        bowen_heuristic: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> AnalysisConfig {
        AnalysisConfig {
            period_bound: 8,
            ly_pairs: 10,
            ly_horizon: 500,
            dc_samples: 4,
            dc_horizon: 1000,
            ..AnalysisConfig::default()
        }
    }

    #[test]
    fn floats_are_rounded() {
        let mut v = serde_json::json!({"a": [std::f64::consts::PI, 1.0], "b": {"c": 0.1}});
        round_floats(&mut v);
        assert_eq!(v["a"][0].as_f64().unwrap(), 3.14159265358979);
        assert_eq!(v["b"]["c"].as_f64().unwrap(), 0.1);
    }

    #[test]
    fn loads_catalog_and_inline_specs() {
        let (id, f) = load_map("tent:2").unwrap();
        assert_eq!(id, "tent:2");
        let (_, g) = load_map(&f.to_json()).unwrap();
        assert_eq!(f, g);
        assert!(matches!(load_map("nonsense:3"), Err(Error::Parse(_))));
    }

    #[test]
    fn report_is_deterministic() {
        let a = analyze("tent:2", &quick()).unwrap().to_json();
        let b = analyze("tent:2", &quick()).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": \"chaoskit-report/1\""));
    }

    #[test]
    fn tiny_budget_gives_a_partial_report() {
        let cfg = AnalysisConfig {
            budget: Budget {
                max_pieces: 16,
                max_den_bits: 4096,
            },
            ..quick()
        };
        let r = analyze("tent:2", &cfg).unwrap();
        assert!(r.budget_exceeded());
        assert_eq!(r.periods.status, Status::BudgetExceeded);
        assert_eq!(r.evidence.mixing.status, Status::Ok);
    }
}
