//! Regression values for the reference examples. Derived values are recomputed
//! here by direct counting or by the piecewise closed forms, never through the
//! library's measure routines.

use std::sync::Arc;

use deltascale::companion::{companion_function, verify, DEFAULT_HORIZON_CAP};
use deltascale::convergence::{default_epsilons, delta_limit, is_delta_cauchy, CauchyVerdict, LimitVerdict};
use deltascale::density::{complement_density, density, ratio_trajectory};
use deltascale::equivalence::{check_equivalence, EquivalenceOptions};
use deltascale::measure::{measure, measure_interval, measure_singleton};
use deltascale::oracle::{enumerate_up_to, estimate_density};
use deltascale::rational::{frac, int, two_pow_neg};
use deltascale::{DeltaSet, Interval, IntervalKind, MeasureValue, QuadraticFamily, Rational, Rule, ScaleFunction, TimeScale};
use num_traits::{Signed, Zero};

fn nat() -> Arc<TimeScale> {
    Arc::new(TimeScale::naturals())
}

fn ray0() -> Arc<TimeScale> {
    Arc::new(TimeScale::ray(int(0)))
}

fn evens(s: &Arc<TimeScale>) -> DeltaSet {
    DeltaSet::periodic_pattern(s, int(0), int(2), vec![Interval::point(int(0))]).unwrap()
}

/// `⋃ₙ [n(l+r), n(l+r)+l]` on `[0,∞)`.
fn blocks(l: i64, r: i64) -> DeltaSet {
    DeltaSet::periodic_pattern(&ray0(), int(0), int(l + r), vec![Interval::closed(int(0), int(l))]).unwrap()
}

/// `μ_Δ(A(t))` for the block set: `t − n·r` inside a block, `(n+1)·l` in the gap after it.
fn block_measure(l: i64, r: i64, t: &Rational) -> Rational {
    let p = int(l + r);
    let n = (t / &p).floor();
    let offset = t - &n * &p;
    if offset <= int(l) {
        t - &n * int(r)
    } else {
        (n + int(1)) * int(l)
    }
}

fn finite(v: MeasureValue) -> Rational {
    v.finite().cloned().unwrap()
}

#[test]
fn scale_membership_jumps_and_minimum() {
    let two = Arc::new(TimeScale::periodic(int(0), int(2), vec![(int(0), int(1))]).unwrap());
    assert!(nat().contains(&int(3)));
    assert!(!ray0().contains(&int(-1)));
    assert!(!two.contains(&frac(3, 2)));
    assert_eq!(nat().sigma(&int(3)).unwrap(), int(4));
    assert_eq!(ray0().sigma(&frac(7, 2)).unwrap(), frac(7, 2));
    assert_eq!(two.sigma(&int(1)).unwrap(), int(2));
    assert_eq!(TimeScale::ray(int(5)).min_point(), &int(5));
    let mixed = TimeScale::new(vec![(int(1), int(1))], deltascale::ScaleTail::Ray { start: int(2) }).unwrap();
    assert_eq!(mixed.min_point(), &int(1));
}

#[test]
fn singleton_and_interval_measures() {
    let three = TimeScale::periodic(int(0), int(3), vec![(int(0), int(1))]).unwrap();
    assert_eq!(finite(measure_singleton(&nat(), &int(5)).unwrap()), int(1));
    assert_eq!(finite(measure_singleton(&ray0(), &int(2)).unwrap()), int(0));
    assert_eq!(finite(measure_singleton(&three, &int(1)).unwrap()), int(2));
    assert_eq!(finite(measure_interval(&nat(), IntervalKind::ClosedOpen, &int(2), &int(5)).unwrap()), int(3));
    assert_eq!(finite(measure_interval(&nat(), IntervalKind::Open, &int(2), &int(5)).unwrap()), int(2));
    assert_eq!(finite(measure_interval(&ray0(), IntervalKind::Closed, &frac(5, 3), &frac(5, 3)).unwrap()), int(0));
}

#[test]
fn restriction_and_set_measures() {
    let n = nat();
    let cut = evens(&n).restrict(&int(7)).unwrap();
    let members: Vec<i64> = (0..10).filter(|k| cut.contains(&int(*k))).collect();
    assert_eq!(members, vec![0, 2, 4, 6]);
    let cut = blocks(1, 1).restrict(&int(3)).unwrap();
    for (t, inside) in [(int(0), true), (int(1), true), (frac(3, 2), false), (int(2), true), (int(3), true)] {
        assert_eq!(cut.contains(&t), inside);
    }
    let first = DeltaSet::point(&n, int(0)).unwrap().union(&evens(&n)).unwrap();
    assert_eq!(first.restrict(&int(0)).unwrap(), DeltaSet::point(&n, int(0)).unwrap());

    assert_eq!(finite(measure(&DeltaSet::interval(&n, IntervalKind::ClosedOpen, int(2), int(5))).unwrap()), int(3));
    let squares = DeltaSet::sparse(&ray0(), QuadraticFamily::new(int(1), int(0), int(0)).unwrap()).unwrap();
    assert_eq!(finite(measure(&squares).unwrap()), int(0));
    assert!(measure(&blocks(1, 1)).unwrap().is_infinite());
    assert!(enumerate_up_to(&blocks(1, 1), &int(2000)).unwrap() >= int(1000));
}

#[test]
fn densities() {
    let n = nat();
    // ⌊t/2⌋ + 1 evens in [0, t], out of t + 1 points
    let count = (0..=10_000).filter(|k| evens(&n).contains(&int(*k))).count();
    assert_eq!(count, 5001);
    assert_eq!(density(&evens(&n)).value(), Some(&frac(1, 2)));
    assert_eq!(density(&blocks(1, 2)).value(), Some(&frac(1, 3)));
    let t = int(900);
    assert!((block_measure(1, 2, &t) / &t - frac(1, 3)).abs() <= frac(1, 100));
    let bounded = DeltaSet::interval(&n, IntervalKind::Closed, int(0), int(1_000_000));
    assert_eq!(density(&bounded).value(), Some(&int(0)));

    assert_eq!(complement_density(&evens(&n)).unwrap().value(), Some(&frac(1, 2)));
    assert_eq!(complement_density(&bounded).unwrap().value(), Some(&int(1)));
    let gaps = DeltaSet::periodic_pattern(&ray0(), int(0), int(3), vec![Interval::new(IntervalKind::Open, int(1), int(3))]).unwrap();
    assert_eq!(density(&gaps).value(), Some(&frac(2, 3)));
    assert_eq!(complement_density(&blocks(1, 2)).unwrap().value(), Some(&frac(2, 3)));
}

#[test]
fn trajectories_follow_the_piecewise_formula() {
    let hs: Vec<Rational> = (1..=4).map(int).collect();
    let tr = ratio_trajectory(&blocks(1, 1), &hs).unwrap();
    assert_eq!(tr.ratios().cloned().collect::<Vec<_>>(), vec![int(1), frac(1, 2), frac(2, 3), frac(1, 2)]);
    for t in &hs {
        assert_eq!(enumerate_up_to(&blocks(1, 1), t).unwrap(), block_measure(1, 1, t));
    }
    let r = ray0();
    assert!(ratio_trajectory(&DeltaSet::empty(&r), &hs).unwrap().ratios().all(Zero::is_zero));
    assert!(ratio_trajectory(&DeltaSet::full(&r), &hs).unwrap().ratios().all(|q| q == &int(1)));
}

#[test]
fn oracle_estimates() {
    let n = nat();
    assert_eq!(enumerate_up_to(&evens(&n), &int(7)).unwrap(), int(4));
    assert_eq!(enumerate_up_to(&blocks(1, 1), &int(3)).unwrap(), int(2));
    assert_eq!(enumerate_up_to(&DeltaSet::empty(&n), &int(40)).unwrap(), int(0));
    let hs: Vec<Rational> = (1..=20).map(|k| int(500 * k)).collect();
    let (lo, hi) = estimate_density(&evens(&n), &hs).unwrap();
    assert!((lo - frac(1, 2)).abs() <= frac(1, 100) && (hi - frac(1, 2)).abs() <= frac(1, 100));
    let b = DeltaSet::interval(&n, IntervalKind::Closed, int(3), int(40));
    let (lo, hi) = estimate_density(&b, &hs).unwrap();
    assert!(lo >= int(0) && hi <= frac(1, 100));
}

fn null_family_function() -> ScaleFunction {
    let r = ray0();
    let ints = DeltaSet::sparse(&r, QuadraticFamily::new(int(0), int(1), int(0)).unwrap()).unwrap();
    ScaleFunction::new(&r, vec![(ints, Rule::constant(int(0)))], Rule::constant(int(1))).unwrap()
}

#[test]
fn exceptional_sets_and_limits() {
    let n = nat();
    let ind = ScaleFunction::indicator(&evens(&n)).unwrap();
    let e = ind.exceptional_set(&int(0), &frac(1, 2)).unwrap();
    for k in 0..40 {
        assert_eq!(e.contains(&int(k)), k % 2 == 0);
    }
    let decay = ScaleFunction::new(&ray0(), vec![], Rule::reciprocal(int(1), int(1))).unwrap();
    let e = decay.exceptional_set(&int(0), &frac(1, 10)).unwrap();
    assert_eq!(e, DeltaSet::interval(&ray0(), IntervalKind::Closed, int(0), int(9)));
    assert!(ScaleFunction::constant(&ray0(), int(1)).exceptional_set(&int(1), &frac(1, 8)).unwrap().is_empty().unwrap());

    let eps = default_epsilons();
    assert_eq!(delta_limit(&null_family_function(), &eps).unwrap().limit(), Some(&int(1)));
    assert_eq!(delta_limit(&decay, &eps).unwrap().limit(), Some(&int(0)));
    match delta_limit(&ind, &[frac(1, 2)]).unwrap() {
        LimitVerdict::NotDeltaConvergent { epsilon, density, .. } => {
            assert_eq!(epsilon, frac(1, 2));
            assert_eq!(density.value(), Some(&frac(1, 2)));
        }
        v => panic!("{v:?}"),
    }
    // brute force: every candidate value leaves half of [0, 10⁴] at distance ≥ 1/2
    for l in [int(0), int(1)] {
        let far = (0..=10_000).filter(|k| (ind.eval(&int(*k)).unwrap() - &l).abs() >= frac(1, 2)).count();
        assert!(far == 5000 || far == 5001);
    }
}

#[test]
fn cauchy_verdicts() {
    let eps = default_epsilons();
    match is_delta_cauchy(&ScaleFunction::constant(&ray0(), int(4)), &eps).unwrap() {
        CauchyVerdict::Cauchy { witnesses } => assert!(witnesses.iter().all(|(_, t)| t == &int(0))),
        v => panic!("{v:?}"),
    }
    let ind = ScaleFunction::indicator(&evens(&nat())).unwrap();
    assert!(!is_delta_cauchy(&ind, &eps).unwrap().is_cauchy());
    assert!(is_delta_cauchy(&null_family_function(), &eps).unwrap().is_cauchy());
}

#[test]
fn companions() {
    let c = ScaleFunction::constant(&ray0(), frac(-3, 2));
    let tr = companion_function(&c, 6, DEFAULT_HORIZON_CAP).unwrap();
    assert_eq!(tr.lambda, frac(-3, 2));
    assert!(tr.exceptional.iter().all(|e| e.is_empty().unwrap()));

    let f = null_family_function();
    let tr = companion_function(&f, 6, DEFAULT_HORIZON_CAP).unwrap();
    assert_eq!(tr.lambda, int(1));
    assert!(verify(&f, &tr).unwrap().ok());
    let last = tr.thresholds.last().unwrap().floor() + int(1);
    for k in 0..30 {
        let t = &last + int(k) * frac(1, 3);
        assert_eq!(tr.companion.eval(&t).unwrap(), int(1));
    }

    let r = ray0();
    let sq = DeltaSet::sparse(&r, QuadraticFamily::new(int(1), int(0), int(0)).unwrap()).unwrap();
    let spiky = ScaleFunction::new(&r, vec![(sq, Rule::constant(int(5)))], Rule::reciprocal(int(1), int(1))).unwrap();
    let tr = companion_function(&spiky, 8, DEFAULT_HORIZON_CAP).unwrap();
    assert!(tr.lambda.abs() <= tr.radius);
    assert!(verify(&spiky, &tr).unwrap().ok());
    // g on the grid beyond the last threshold stays within 2^{1-m} of λ, spikes included
    let start = tr.thresholds.last().unwrap().ceil();
    for k in 1..200 {
        let t = &start + int(k * k);
        assert!((tr.companion.eval(&t).unwrap() - &tr.lambda).abs() <= two_pow_neg(7), "t = {t}");
    }
}

#[test]
fn equivalence_reports() {
    let opts = EquivalenceOptions::default();
    let verdicts = |f: &ScaleFunction| {
        let rep = check_equivalence(f, &opts).unwrap();
        assert!(rep.agree, "{rep:?}");
        (rep.convergent, rep.cauchy, rep.companion_exists)
    };
    assert_eq!(verdicts(&ScaleFunction::indicator(&evens(&nat())).unwrap()), (Some(false), Some(false), false));
    assert_eq!(verdicts(&ScaleFunction::constant(&nat(), int(2))), (Some(true), Some(true), true));
    assert_eq!(verdicts(&null_family_function()), (Some(true), Some(true), true));
}

#[test]
fn linear_combinations() {
    let r = ray0();
    let one = ScaleFunction::constant(&r, int(1));
    let two = ScaleFunction::constant(&r, int(2));
    assert_eq!(one.add(&two).unwrap().eval(&frac(7, 3)).unwrap(), int(3));
    assert_eq!(null_family_function().scale_by(&int(0)).eval(&int(4)).unwrap(), int(0));
    let half = ScaleFunction::new(&r, vec![], Rule::reciprocal(int(3), int(2)).add(&Rule::constant(frac(1, 2))).unwrap()).unwrap();
    let sum = null_family_function().add(&half).unwrap();
    assert_eq!(delta_limit(&sum, &default_epsilons()).unwrap().limit(), Some(&frac(3, 2)));
}
