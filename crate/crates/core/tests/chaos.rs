//! Finite-horizon chaos diagnostics on the catalog maps.

use chaoskit::chaos::dc::{pair_points, PairOrigin};
use chaoskit::chaos::dist::{dist_fns_from_distances, pair_distances};
use chaoskit::chaos::{
    dc_classify, default_t_grid, devaney_verdict, dist_fns, ly_pair_scan, ly_pair_scan_with,
    mixing_evidence, random_seed_pairs, sensitivity_evidence, seq_entropy_estimate, solenoid_scan,
    trajectory, transitivity_evidence, ChaosConfig, EvidenceKind,
};
use chaoskit::families::{delahaye, mizera, s_map, stefan_map, tent, type_map};
use chaoskit::rational::{iv, q};
use chaoskit::{PwlMap, Rat};

fn identity() -> PwlMap {
    PwlMap::identity(iv(q(0, 1), q(1, 1)))
}

#[test]
fn trajectories_stay_exact() {
    let t2 = tent(2).unwrap();
    let fixed = trajectory(&t2, &q(2, 3), 5, 256).unwrap();
    assert!((0..=5).all(|i| fixed.value(i) == q(2, 3)));

    let orbit = trajectory(&delahaye(8).unwrap(), &q(0, 1), 7, 256).unwrap();
    assert_eq!(orbit.value(7), q(26, 27));

    let odd = trajectory(&t2, &q(1, (1 << 20) + 1), 60, 256).unwrap();
    assert!(odd.is_exact());
    assert!((0..=60).all(|i| odd.value(i).denom().bit(0)));
}

#[test]
fn mixing_implies_sensitivity() {
    let maps = vec![
        tent(2).unwrap(),
        tent(3).unwrap(),
        tent(5).unwrap(),
        stefan_map(3).unwrap(),
        stefan_map(5).unwrap(),
        s_map(),
        identity(),
        type_map(6).unwrap(),
    ];
    for f in &maps {
        let len = f.domain().len();
        let eps = &len * &q(1, 32);
        // any δ below |I|/2 − ε
        let delta = &len * &q(7, 16);
        for k in [3, 4, 5] {
            if mixing_evidence(f, &eps, k, 20).unwrap().is_positive() {
                assert!(sensitivity_evidence(f, &delta, k, 20).unwrap().is_positive());
            }
        }
    }
}

#[test]
fn mizera_tower_limits_sensitivity() {
    // the dyadic cell next to 1 lies inside an invariant interval of
    // length 1/27, so no iterate stretches it to 1/16
    let f = mizera(6).unwrap();
    let v = sensitivity_evidence(&f, &q(1, 16), 6, 30).unwrap();
    assert_eq!(v.kind, EvidenceKind::None);
    // coarser cells do straddle the tower and expand
    assert!(sensitivity_evidence(&f, &q(1, 16), 2, 30).unwrap().is_positive());
}

#[test]
fn devaney_matches_transitivity() {
    for (f, positive) in [(tent(2).unwrap(), true), (identity(), false), (s_map(), true)] {
        let d = devaney_verdict(&f, 4, 20).unwrap();
        let t = transitivity_evidence(&f, 4, 20).unwrap();
        assert_eq!(d.is_positive(), positive);
        assert_eq!(d.is_positive(), t.is_positive());
        assert_eq!(d.certificate, t.certificate);
    }
}

#[test]
fn li_yorke_pairs_of_the_tent_map() {
    let t2 = tent(2).unwrap();
    let seeds = random_seed_pairs(t2.domain(), 100, 3);
    let scan = ly_pair_scan(&t2, &seeds, 10_000, 0.25).unwrap();
    // with a 2000-step tail and δ_low = 2^-10 about one pair in seven
    // never comes that close; doubling δ_low catches nearly all of them
    assert!(scan.fraction >= 0.75, "fraction {}", scan.fraction);
    let loose = ChaosConfig {
        delta_low: 2f64.powi(-9),
        ..ChaosConfig::default()
    };
    let scan = ly_pair_scan_with(&t2, &seeds, 10_000, 0.25, &loose).unwrap();
    assert!(scan.fraction >= 0.9, "fraction {}", scan.fraction);

    let id = identity();
    let scan = ly_pair_scan(&id, &random_seed_pairs(id.domain(), 20, 3), 10_000, 0.25).unwrap();
    assert_eq!(scan.fraction, 0.0);

    let fixed = ly_pair_scan(&t2, &[(q(0, 1), q(2, 3))], 10_000, 0.25).unwrap();
    assert!(!fixed.pairs[0].candidate);
}

#[test]
fn distribution_functions_of_fixed_points() {
    let t2 = tent(2).unwrap();
    let grid = default_t_grid(1.0, 101);
    let fns = dist_fns(&t2, &q(0, 1), &q(2, 3), 1000, &grid).unwrap();
    for (i, &t) in grid.iter().enumerate() {
        let step = if t > 2.0 / 3.0 { 1.0 } else { 0.0 };
        assert_eq!((fns.f_lower[i], fns.f_upper[i]), (step, step));
    }
    let d = pair_distances(&t2, &q(0, 1), &q(2, 3), 10, 256).unwrap();
    assert_eq!(chaoskit::chaos::xi(&d, 5, 1.0), 5);
}

#[test]
fn random_pairs_have_nearly_equal_tail_functions() {
    // over a tail of a fifth of the horizon ξ(n,t)/n moves by at most about
    // a fifth, and for typical pairs it settles to one limit
    let t2 = tent(2).unwrap();
    let grid = default_t_grid(1.0, 101);
    for (x, y) in random_seed_pairs(t2.domain(), 5, 9) {
        let fns = dist_fns(&t2, &x, &y, 10_000, &grid).unwrap();
        assert!(fns.check_invariants(1.0));
        let gap = (0..grid.len()).map(|i| fns.f_upper[i] - fns.f_lower[i]).fold(0.0, f64::max);
        assert!(gap < 0.25, "gap {gap}");
    }
}

#[test]
fn coded_pairs_separate_the_distribution_functions() {
    let t2 = tent(2).unwrap();
    let r = dc_classify(&t2, 3, 10_000).unwrap();
    let coded = r
        .pairs
        .iter()
        .find(|p| matches!(p.origin, PairOrigin::Coded { .. }))
        .expect("T_2 has a strict horseshoe");
    let (x, y) = pair_points(&t2, &coded.origin).unwrap();
    let d = pair_distances(&t2, &x, &y, 10_000, 256).unwrap();
    let grid = default_t_grid(1.0, 101);
    let fns = dist_fns_from_distances(&d, &grid, 250, 10_000);
    let star = (0..grid.len()).find(|&i| fns.f_lower[i] < 0.2 && fns.f_upper[i] > 0.9);
    assert!(star.is_some());
}

#[test]
fn distributional_classes() {
    let r = dc_classify(&tent(3).unwrap(), 10, 10_000).unwrap();
    assert_eq!(r.verdict.kind, EvidenceKind::DC1);
    assert!(r.invariants_ok);
    let r = dc_classify(&type_map(8).unwrap(), 10, 10_000).unwrap();
    assert_eq!(r.verdict.kind, EvidenceKind::None);
}

#[test]
fn sequence_entropy_estimates() {
    let t2 = tent(2).unwrap();
    let times: Vec<usize> = (0..12).collect();
    let est = seq_entropy_estimate(&t2, &times, 12, &q(1, 64), 4096).unwrap();
    let ln2 = std::f64::consts::LN_2;
    assert!((est.value - ln2).abs() <= 0.15 * ln2, "estimate {}", est.value);
    assert!(est.heuristic);

    let id = identity();
    let times: Vec<usize> = (0..64).collect();
    let values: Vec<f64> = [4, 16, 64]
        .iter()
        .map(|&n| seq_entropy_estimate(&id, &times, n, &q(1, 64), 512).unwrap().value)
        .collect();
    assert!(values[0] > values[1] && values[1] > values[2] && values[2] < 0.1);

    // along powers of two the estimate is only a diagnostic
    let f = delahaye(8).unwrap();
    let powers: Vec<usize> = (0..8).map(|k| 1 << k).collect();
    let v = seq_entropy_estimate(&f, &powers, 8, &q(1, 64), 512).unwrap();
    assert!(v.value.is_finite() && v.value >= 0.0);
}

#[test]
fn solenoid_scans() {
    let f = delahaye(8).unwrap();
    let cycles = solenoid_scan(&f, &q(0, 1), 3, 4096).unwrap();
    assert_eq!(cycles.iter().map(|c| c.period).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
    for c in &cycles {
        // the rightmost hull of each level sits in the top block [1 − 3^{-k}, 1]
        let three_k = Rat::from_bigints(1.into(), num_bigint::BigInt::from(3u32).pow(c.level));
        let block = iv(&Rat::one() - &three_k, Rat::one());
        assert!(block.contains_interval(&c.intervals[0]), "level {}", c.level);
        // each hull maps onto the next, except the closing step which only
        // maps into the first
        let mut exact = 0;
        for i in 0..c.period {
            let img = f.image(&c.intervals[i]).unwrap();
            let next = &c.intervals[(i + 1) % c.period];
            assert!(next.contains_interval(&img));
            exact += usize::from(&img == next);
        }
        assert!(exact + 1 >= c.period);
    }
    for w in cycles.windows(2) {
        assert!(w[0].intervals[0].contains_interval(&w[1].intervals[0]));
    }

    let t2 = tent(2).unwrap();
    let generic = solenoid_scan(&t2, &q(1, 1_000_003), 4, 4096).unwrap();
    assert!(generic.len() <= 2);

    let fixed = solenoid_scan(&t2, &q(2, 3), 3, 512).unwrap();
    assert!(fixed.iter().all(|c| c.degenerate && c.intervals == vec![iv(q(2, 3), q(2, 3))]));
}
