use ndschaos::distchaos::{
    classify_pair, consistency_violations, dc_verdict_dual, estimate_f, pair_profile, scan_pairs, ClassifyOptions,
    Flag, PairProfile, ScanOptions, Tolerances,
};
use ndschaos::system::Logistic;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::new(0.05, 0.05, 0.01)
}

#[test]
fn scan_rows_do_not_depend_on_threads() {
    let sys = Logistic::autonomous(4.0).unwrap();
    let sample: Vec<f64> = (1..=12).map(|k| k as f64 / 13.0).collect();
    let idx: Vec<u64> = (0..1500).collect();
    let mut opts = ScanOptions {
        delta: 0.1,
        tolerances: tol(),
        classify: None,
        threads: 1,
    };
    let one = scan_pairs(&sys, &sample, &idx, &opts).unwrap();
    opts.threads = 5;
    let five = scan_pairs(&sys, &sample, &idx, &opts).unwrap();
    assert_eq!(one, five);
    assert_eq!(one.len(), 66);
    for r in &one {
        assert!(consistency_violations(r.verdict.as_ref().unwrap()).is_empty());
    }
}

/// `F*` and `F` by direct counting over the trailing window.
fn brute_f(d: &[f64], eps: f64, window: usize) -> (f64, f64) {
    let h = d.len();
    let first = (h - window).max(1);
    let mut c = 0usize;
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    for (i, &v) in d.iter().enumerate() {
        if v < eps {
            c += 1;
        }
        let n = i + 1;
        if n >= first {
            let r = c as f64 / n as f64;
            hi = hi.max(r);
            lo = lo.min(r);
        }
    }
    (hi, lo)
}

proptest! {
    #[test]
    fn estimator_matches_direct_count(d in prop::collection::vec(0.0f64..1.0, 10..300), eps in 0.01f64..1.0, wf in 0.0f64..1.0) {
        let w = (wf * d.len() as f64) as usize;
        let p = PairProfile::from_distances((0..d.len() as u64).collect(), d.clone(), 1.0).unwrap();
        let e = estimate_f(&p, eps, w).unwrap();
        let (hi, lo) = brute_f(&d, eps, w);
        prop_assert_eq!(e.upper_f, hi);
        prop_assert_eq!(e.lower_f, lo);
    }

    /// On an interval the diagonal distance is `d / 2`, so the hitting side
    /// and the direct side read the same indicator.
    #[test]
    fn dual_sides_agree_on_real_pairs(d in prop::collection::vec(0.0f64..1.0, 200..600)) {
        let p = PairProfile::from_distances((0..d.len() as u64).collect(), d, 1.0).unwrap();
        let v = dc_verdict_dual(&p, 0.3, &[0.1, 0.05], &tol(), p.len() / 10).unwrap();
        for (k, &e) in v.eps_grid.iter().enumerate() {
            prop_assert_eq!(v.hitting_upper[k], estimate_f(&p, 2.0 * e, p.len() / 10).unwrap().upper_f);
        }
    }
}

#[test]
fn fixed_points_are_distal_and_not_scrambled() {
    let sys = Logistic::autonomous(4.0).unwrap();
    let idx: Vec<u64> = (0..1000).collect();
    let p = pair_profile(&sys, 0.0, 0.75, &idx).unwrap();
    let v = classify_pair(&p, 0.25, &tol(), &ClassifyOptions::for_profile(&p)).unwrap();
    assert_eq!(v.distal, Flag::Holds);
    assert_eq!(v.proximal, Flag::Fails);
    assert_eq!(v.dc_pair, Flag::Fails);
    assert_eq!(v.min_distance, 0.75);
}
