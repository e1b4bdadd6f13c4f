use deltascale::density::{density, ratio_trajectory};
use deltascale::gen::{case_rng, Universe};
use deltascale::input::{parse_function, parse_scale, parse_set};
use deltascale::measure::{measure, measure_up_to};
use deltascale::oracle::{self, enumerate_up_to};
use deltascale::rational::{frac, int};
use deltascale::{DeltaSet, IntervalKind, MeasureValue, Rational, TimeScale};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

fn universe(seed: u64) -> (Universe, rand_chacha::ChaCha8Rng) {
    let mut rng = case_rng(seed, "properties", 0);
    (Universe::random(&mut rng), rng)
}

/// A scale point at or after `min + x`.
fn point(scale: &TimeScale, x: &Rational) -> Rational {
    scale.first_point_at_or_after(&(scale.min_point() + x))
}

fn q(n: u32) -> Rational {
    frac(n as i64, 4)
}

fn finite(m: MeasureValue) -> Rational {
    m.finite().cloned().expect("bounded set")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_steps_to_the_next_point(seed in any::<u64>(), x in 0u32..160) {
        let (u, _) = universe(seed);
        let s = &u.scale;
        let t = point(s, &q(x));
        let next = s.sigma(&t).unwrap();
        prop_assert!(next >= t);
        prop_assert!(s.contains(&next));
        if next > t {
            let mid = (&t + &next) * frac(1, 2);
            prop_assert_eq!(s.first_point_at_or_after(&mid), next);
        }
    }

    #[test]
    fn interval_formulas_add_up(seed in any::<u64>(), x in 0u32..120, w in 0u32..80) {
        let (u, _) = universe(seed);
        let s = &u.scale;
        let a = point(s, &q(x));
        let b = point(s, &(&a - s.min_point() + q(w)));
        let sa = s.sigma(&a).unwrap();
        let sb = s.sigma(&b).unwrap();
        let m = |kind| finite(measure(&DeltaSet::interval(s, kind, a.clone(), b.clone())).unwrap());
        prop_assert_eq!(m(IntervalKind::Closed), &sb - &a);
        prop_assert_eq!(m(IntervalKind::ClosedOpen), &b - &a);
        prop_assert_eq!(m(IntervalKind::OpenClosed), if a < b { &sb - &sa } else { Rational::zero() });
        prop_assert_eq!(m(IntervalKind::Open), if sa < b { &b - &sa } else { Rational::zero() });
        prop_assert_eq!((&b - &a) + (&sb - &b), &sb - &a);
    }

    #[test]
    fn measure_is_modular_and_monotone(seed in any::<u64>()) {
        let (u, mut rng) = universe(seed);
        let (a, b) = (u.bounded_set(&mut rng), u.bounded_set(&mut rng));
        let m = |x: &DeltaSet| finite(measure(x).unwrap());
        let (cup, cap) = (a.union(&b).unwrap(), a.intersection(&b).unwrap());
        prop_assert_eq!(m(&cup) + m(&cap), m(&a) + m(&b));
        prop_assert!(m(&cap) <= m(&a) && m(&a) <= m(&cup));
        let big = u.set(&mut rng);
        prop_assert!(measure(&big.intersection(&a).unwrap()).unwrap() <= measure(&big).unwrap());
    }

    #[test]
    fn oracle_matches_closed_forms(seed in any::<u64>(), x in 0u32..200) {
        let (u, mut rng) = universe(seed);
        let set = u.set(&mut rng);
        let t = point(&u.scale, &q(x));
        let exact = measure_up_to(&set, &t).unwrap();
        prop_assert_eq!(enumerate_up_to(&set, &t).unwrap(), exact.clone());
        prop_assert_eq!(finite(measure(&set.restrict(&t).unwrap()).unwrap()), exact);
    }

    #[test]
    fn trajectories_agree_and_stay_in_the_unit_interval(seed in any::<u64>()) {
        let (u, mut rng) = universe(seed);
        let set = u.set(&mut rng);
        let until = rng.gen_range(20..200);
        let hs: Vec<Rational> = oracle::spread_horizons(&u.scale, &int(until), 12)
            .into_iter()
            .filter(|t| u.scale.sigma(t).unwrap() > *u.scale.min_point())
            .collect();
        let exact = ratio_trajectory(&set, &hs).unwrap();
        prop_assert_eq!(&exact, &oracle::trajectory(&set, &hs).unwrap());
        for r in exact.ratios() {
            prop_assert!(*r >= Rational::zero() && *r <= Rational::one());
        }
    }

    #[test]
    fn densities_of_complements_sum_to_one(seed in any::<u64>()) {
        let (u, mut rng) = universe(seed);
        let set = u.set(&mut rng);
        let d = density(&set).value().cloned().unwrap();
        let c = density(&set.complement().unwrap()).value().cloned().unwrap();
        prop_assert_eq!(d + c, Rational::one());
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let (u, mut rng) = universe(seed);
        let scale = parse_scale(&serde_json::to_string(&*u.scale).unwrap()).unwrap();
        prop_assert_eq!(&scale, &*u.scale);
        let set = u.set(&mut rng);
        let back = parse_set(&serde_json::to_string(&set).unwrap(), None).unwrap();
        prop_assert_eq!(&back, &set);
        let f = u.perturbed(&mut rng);
        let g = parse_function(&serde_json::to_string(&f).unwrap(), None).unwrap();
        for x in 0..40 {
            let t = point(&u.scale, &q(x * 3));
            prop_assert_eq!(f.eval(&t).unwrap(), g.eval(&t).unwrap());
        }
    }
}
