//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with its runtime; the test fails if any criterion fails or overruns.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chaoskit::chaos::dc::pair_points;
use chaoskit::chaos::{
    dc_classify, mixing_evidence, sensitivity_evidence, solenoid_scan, trajectory, Certificate,
    EvidenceKind,
};
use chaoskit::entropy::{
    entropy_markov, entropy_upper_lap, entropy_upper_lipschitz, horseshoe_search, lambda_q,
    shift_intervals, LAMBDA_TOL,
};
use chaoskit::families::{delahaye, s_map, square_root, stefan_map, tent, type_2inf, type_map};
use chaoskit::markov::{build_orbit_graph, path_count, AdjMatrix};
use chaoskit::periodic::{
    fixed_sets, infer_type, periodic_points, periods_up_to, sharkovsky_cmp, SharkovskyType,
};
use chaoskit::rational::{iv, q};
use chaoskit::{Budget, PwlMap, Rat};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

/// Largest root in `[a, b]` of an increasing-at-the-root polynomial by
/// bisection, coefficients highest degree first.
fn bisect_root(coeffs: &[f64], mut a: f64, mut b: f64) -> f64 {
    let p = |x: f64| coeffs.iter().fold(0.0, |acc, c| acc * x + c);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if p(m) > 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

/// Sharkovsky position: odd parts `> 1` by power of two then odd value,
/// powers of two last in decreasing order.
fn shark_key(m: u64) -> (u8, u32, u64) {
    let d = m.trailing_zeros();
    let odd = m >> d;
    if odd == 1 {
        (1, u32::MAX - d, 0)
    } else {
        (0, d, odd)
    }
}

/// `m ⊵ p`: `m` is forced by `p`.
fn forced_by(p: u64, m: u64) -> bool {
    shark_key(p) <= shark_key(m)
}

fn c1_tent_entropy() -> Outcome {
    let t2 = ok(tent(2))?;
    let b = Budget::default();
    let h = ok(entropy_markov(&t2, &[q(0, 1), q(1, 2), q(1, 1)]))?;
    ensure!((h - std::f64::consts::LN_2).abs() < 1e-9, "markov entropy {h}");
    for n in 1..=12 {
        let laps = ok(t2.lap_count(n, &b))?;
        ensure!(laps == 1 << n, "c_{n} = {laps}");
        let v = ok(entropy_upper_lap(&t2, n, &b))?;
        ensure!((v - std::f64::consts::LN_2).abs() < 1e-15, "lap bound at {n}: {v}");
    }
    let lip = entropy_upper_lipschitz(&t2);
    ensure!((lip - std::f64::consts::LN_2).abs() < 1e-15, "lipschitz {lip}");
    Ok(())
}

fn c2_s_entropy() -> Outcome {
    let h = ok(entropy_markov(&s_map(), &[q(-1, 1), q(-1, 2), q(0, 1), q(1, 1)]))?;
    ensure!((h - std::f64::consts::LN_2 / 2.0).abs() < 1e-9, "S entropy {h}");
    Ok(())
}

fn c3_stefan_entropy() -> Outcome {
    let f = ok(stefan_map(3))?;
    let h = ok(entropy_markov(&f, &[q(0, 1), q(1, 1), q(2, 1)]))?;
    let root = bisect_root(&[1.0, 0.0, -2.0, -1.0], 1.2, 3.0);
    ensure!((root - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14, "oracle root {root}");
    ensure!((h - root.ln()).abs() < 1e-9, "entropy {h} vs {}", root.ln());
    Ok(())
}

fn c4_lambda_bracketing() -> Outcome {
    let s2 = 2f64.sqrt();
    let mut lambdas = Vec::new();
    for qq in (3..=33).step_by(2) {
        let l = ok(lambda_q(qq, LAMBDA_TOL))?;
        // largest root of x^q − 2x^{q−2} − 1
        let mut coeffs = vec![0.0; qq as usize + 1];
        coeffs[0] = 1.0;
        coeffs[2] = -2.0;
        coeffs[qq as usize] = -1.0;
        let oracle = bisect_root(&coeffs, s2, 2.0);
        ensure!((l - oracle).abs() < 1e-12, "lambda_{qq} = {l}, oracle {oracle}");
        lambdas.push((qq, l));
    }
    for w in lambdas.windows(2) {
        let ((qq, lq), (_, lq2)) = (w[0], w[1]);
        let top = s2 + s2.powi(-(qq as i32 + 1));
        ensure!(s2 < lq2 && lq2 < lq && lq < top, "bracket fails at q = {qq}: {lq2} {lq} {top}");
    }
    Ok(())
}

fn c5_sharkovsky_sets() -> Outcome {
    let b = Budget::default();
    let expect = |p: u64, bound: u64| -> BTreeSet<usize> {
        (1..=bound).filter(|&m| forced_by(p, m)).map(|m| m as usize).collect()
    };
    for p in [3i64, 5, 7] {
        let got = ok(periods_up_to(&ok(stefan_map(p))?, 12, &b))?;
        ensure!(got == expect(p as u64, 12), "stefan {p}: {got:?}");
    }
    let got = ok(periods_up_to(&ok(type_map(6))?, 12, &b))?;
    ensure!(got == expect(6, 12), "type 6: {got:?}");
    let got = ok(periods_up_to(&ok(type_map(4))?, 8, &b))?;
    ensure!(got == BTreeSet::from([1, 2, 4]), "type 4: {got:?}");
    Ok(())
}

fn c6_periodic_growth() -> Outcome {
    let t2 = ok(tent(2))?;
    let b = Budget::default();
    let mut g = t2.clone();
    for n in 1..=14 {
        if n > 1 {
            g = ok(g.compose(&t2, &b))?;
        }
        let fs = fixed_sets(&g);
        ensure!(fs.segments.is_empty(), "T_2^{n} has a fixed segment");
        ensure!(fs.isolated.len() == 1 << n, "#P_{n} = {}", fs.isolated.len());
        let rate = (fs.isolated.len() as f64).ln() / n as f64;
        ensure!((rate - std::f64::consts::LN_2).abs() < 1e-15, "growth rate {rate}");
    }
    Ok(())
}

fn c7_horseshoes() -> Outcome {
    let b = Budget::default();
    let h = ok(horseshoe_search(&ok(tent(2))?, 1, 1, &b))?.ok_or("no horseshoe for T_2")?;
    ensure!(
        h.j == iv(q(0, 1), q(1, 2)) && h.k == iv(q(1, 2), q(1, 1)),
        "T_2 horseshoe {} {}",
        h.j,
        h.k
    );
    let f3 = ok(stefan_map(3))?;
    ensure!(ok(horseshoe_search(&f3, 1, 4, &b))?.is_none(), "stefan 3 has a horseshoe");
    let h2 = ok(horseshoe_search(&f3, 2, 4, &b))?.ok_or("no horseshoe for f^2")?;
    ensure!(ok(h2.verify(&f3, &b))?, "f^2 horseshoe does not verify");
    Ok(())
}

fn c8_delahaye() -> Outcome {
    let f = ok(delahaye(8))?;
    let orbit = ok(trajectory(&f, &q(0, 1), 63, 256))?;
    ensure!(orbit.is_exact(), "orbit not exact");
    for n in 1..=6u32 {
        let i = (1usize << n) - 1;
        let want = &Rat::one() - &Rat::from_bigints(1.into(), num_bigint::BigInt::from(3u32).pow(n));
        ensure!(orbit.value(i) == want, "f^{i}(0) = {} != {want}", orbit.value(i));
    }
    let cycles = ok(solenoid_scan(&f, &q(0, 1), 3, 4096))?;
    let periods: Vec<usize> = cycles.iter().map(|c| c.period).collect();
    ensure!(periods == vec![1, 2, 4, 8], "solenoid periods {periods:?}");
    ensure!(cycles.iter().all(|c| !c.degenerate), "degenerate solenoid cycle");
    for c in &cycles {
        for i in 0..c.period {
            for j in i + 1..c.period {
                ensure!(c.intervals[i].is_disjoint(&c.intervals[j]), "overlap at level {}", c.level);
            }
        }
    }
    let t = ok(infer_type(&f, 16, &Budget::default()))?;
    ensure!(matches!(t, SharkovskyType::TwoInfinityCandidate(_)), "type {t:?}");
    Ok(())
}

fn c9_mixing_sensitivity() -> Outcome {
    let eps = q(1, 32);
    for p in [2, 3, 5] {
        let v = ok(mixing_evidence(&ok(tent(p))?, &eps, 5, 20))?;
        ensure!(v.kind == EvidenceKind::MixingEvidence, "T_{p} not mixing");
    }
    let id = PwlMap::identity(iv(q(0, 1), q(1, 1)));
    ensure!(!ok(mixing_evidence(&id, &eps, 5, 20))?.is_positive(), "identity mixes");
    ensure!(!ok(mixing_evidence(&s_map(), &eps, 5, 20))?.is_positive(), "S mixes");
    let v = ok(sensitivity_evidence(&ok(tent(2))?, &q(1, 4), 6, 20))?;
    ensure!(v.kind == EvidenceKind::SensitivityEvidence, "T_2 not sensitive");
    Ok(())
}

fn c10_distributional_chaos() -> Outcome {
    let t2 = ok(tent(2))?;
    let r = ok(dc_classify(&t2, 50, 10_000))?;
    ensure!(r.verdict.kind == EvidenceKind::DC1, "T_2 verdict {:?}", r.verdict.kind);
    let dc1: Vec<_> = r.pairs.iter().filter(|p| p.kind == EvidenceKind::DC1).collect();
    ensure!(dc1.len() >= 50, "only {} DC1 pairs", dc1.len());
    for p in &dc1 {
        let (x, y) = ok(pair_points(&t2, &p.origin))?;
        ensure!(x.denom().bit(0) && y.denom().bit(0), "even denominator in a DC1 pair");
    }
    let Certificate::Pair(best) = &r.verdict.certificate else {
        return Err("DC1 verdict without a pair".into());
    };
    ensure!(best.f_lower_at_t_star < 0.05 && best.f_upper_min > 0.95, "weak certificate");
    ensure!(r.invariants_ok && r.skipped == 0, "T_2 invariants or skipped pairs");

    let id = PwlMap::identity(iv(q(0, 1), q(1, 1)));
    let r = ok(dc_classify(&id, 50, 10_000))?;
    ensure!(r.verdict.kind == EvidenceKind::None && r.invariants_ok, "identity {:?}", r.verdict.kind);
    let r = ok(dc_classify(&ok(type_2inf(4))?, 50, 10_000))?;
    ensure!(r.verdict.kind == EvidenceKind::None, "type 2^inf verdict {:?}", r.verdict.kind);
    ensure!(r.invariants_ok && r.skipped == 0, "type 2^inf invariants or skipped pairs");
    Ok(())
}

fn random_point(rng: &mut ChaCha8Rng, f: &PwlMap) -> Rat {
    let den: i64 = rng.gen_range(1..=1000);
    let k: i64 = rng.gen_range(0..=den);
    f.domain().lo() + &(&f.domain().len() * &Rat::new(k, den))
}

fn c11_property_suites() -> Outcome {
    let b = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let maps = vec![ok(tent(2))?, ok(tent(3))?, ok(stefan_map(5))?, s_map(), ok(type_map(6))?];

    // iterate/eval agreement
    let mut checks = 0usize;
    let per_map_power = 1_000_000 / (maps.len() * 5) + 1;
    for f in &maps {
        for n in 1..=5 {
            let g = ok(f.iterate(n, &b))?;
            for _ in 0..per_map_power {
                let x = random_point(&mut rng, f);
                let mut y = x.clone();
                for _ in 0..n {
                    y = ok(f.eval(&y))?;
                }
                ensure!(ok(g.eval(&x))? == y, "f^{n}({x}) disagrees");
                checks += 1;
            }
        }
    }
    ensure!(checks >= 1_000_000, "only {checks} point checks");

    // lap submultiplicativity
    for f in &maps {
        let laps: Vec<usize> = f
            .iterates(&b)
            .take(8)
            .map(|g| g.map(|g| g.laps()))
            .collect::<Result<_, _>>()
            .map_err(|e| format!("{e:?}"))?;
        for m in 1..=8 {
            for n in 1..=8 - m {
                ensure!(laps[m + n - 1] <= laps[m - 1] * laps[n - 1], "laps not submultiplicative");
            }
        }
    }

    // Sharkovsky order is a total order on [1, 1000]
    let mut order: Vec<u64> = (1..=1000).collect();
    order.sort_by(|&a, &b| sharkovsky_cmp(a, b));
    for i in 0..order.len() {
        for j in 0..order.len() {
            let want = i.cmp(&j);
            ensure!(sharkovsky_cmp(order[i], order[j]) == want, "order inconsistent at {i},{j}");
        }
    }
    ensure!(order[0] == 3 && order[999] == 1, "order ends {} {}", order[0], order[999]);
    ensure!(sharkovsky_cmp(5, 5) == Ordering::Equal, "reflexivity");

    // M(f|P) dominates M(f_P) on periodic orbits
    for f in &maps {
        for n in 2..=5 {
            let pp = ok(periodic_points(f, n, &b))?;
            for o in pp.orbits.iter().filter(|o| o.period() == n).take(8) {
                let g = ok(build_orbit_graph(f, o.points()))?;
                ensure!(g.full_matrix.dominates(&g.ctd_matrix), "M(f|P) < M(f_P)");
            }
        }
    }

    // path counts multiply
    let m = ok(AdjMatrix::new(vec![vec![1, 1, 0], vec![0, 1, 2], vec![1, 0, 1]]))?;
    for a in 0..6u32 {
        for c in 0..6u32 {
            let lhs = ok(path_count(&m, a + c))?;
            let rhs = ok(ok(path_count(&m, a))?.checked_mul(&ok(path_count(&m, c))?))?;
            ensure!(lhs == rhs, "path counts at {a}+{c}");
        }
    }

    // shift intervals to depth 6
    let t2 = ok(tent(2))?;
    let h = ok(horseshoe_search(&t2, 1, 1, &b))?.ok_or("no horseshoe")?;
    let si = ok(shift_intervals(&t2, &h, 6, &b))?;
    ensure!(si.verify_structure(h.strict), "shift interval structure");
    ensure!(si.words_of_len(6).count() == 64, "missing words");

    // square roots
    for f in [ok(tent(2))?, ok(stefan_map(3))?, ok(type_map(3))?] {
        let g = ok(square_root(&f, None))?;
        let g2 = ok(g.compose(&g, &b))?;
        let bb = f.domain().hi().clone();
        ensure!(ok(g2.restrict(&iv(q(0, 1), bb)))? == f, "g^2 != f on [0,b]");
    }
    Ok(())
}

fn main() {
    let criteria: Vec<(&str, u64, fn() -> Outcome)> = vec![
        ("1 tent map entropy", 1, c1_tent_entropy),
        ("2 entropy of S", 1, c2_s_entropy),
        ("3 Stefan entropy", 1, c3_stefan_entropy),
        ("4 lambda_q bracketing", 1, c4_lambda_bracketing),
        ("5 Sharkovsky period sets", 60, c5_sharkovsky_sets),
        ("6 periodic-point growth", 30, c6_periodic_growth),
        ("7 horseshoe logic", 10, c7_horseshoes),
        ("8 Delahaye exactness", 30, c8_delahaye),
        ("9 mixing and sensitivity evidence", 60, c9_mixing_sensitivity),
        ("10 distributional chaos", 120, c10_distributional_chaos),
        ("11 property suites", 120, c11_property_suites),
    ];
    let mut failures = Vec::new();
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(()) if elapsed > Duration::from_secs(limit) => Err(format!("over the {limit} s limit")),
            other => other,
        };
        match &outcome {
            Ok(()) => println!("PASS  {name:<36} {:>9.3} s", elapsed.as_secs_f64()),
            Err(why) => {
                println!("FAIL  {name:<36} {:>9.3} s  {why}", elapsed.as_secs_f64());
                failures.push(name);
            }
        }
    }
    if !failures.is_empty() {
        eprintln!("failed: {failures:?}");
        std::process::exit(1);
    }
}
