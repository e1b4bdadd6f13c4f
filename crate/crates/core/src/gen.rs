//! Seeded generators for scales, sets and functions used by the property suites.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::density;
use crate::function::{Rule, ScaleFunction};
use crate::interval::{Interval, IntervalKind};
use crate::rational::{frac, int, Rational};
use crate::set::DeltaSet;
use crate::sparse::QuadraticFamily;
use crate::timescale::{ScaleTail, TimeScale};

/// Deterministic stream for case `index` of a run seeded with `seed`.
pub fn case_rng(seed: u64, stream: &str, index: u64) -> ChaCha8Rng {
    let tag = stream
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag);
    rng.set_stream(index);
    rng
}

/// A small rational with denominator in `1..=4`.
fn coord(rng: &mut impl Rng, lo: &Rational, span: i64) -> Rational {
    let den = rng.gen_range(1..=4i64);
    lo + frac(rng.gen_range(0..=span * den), den)
}

/// One of the generated scale shapes, each with a fixed pool of disjoint sparse families.
#[derive(Debug, Clone)]
pub struct Universe {
    pub name: &'static str,
    pub scale: Arc<TimeScale>,
    pub families: Vec<QuadraticFamily>,
}

impl Universe {
    fn new(name: &'static str, scale: TimeScale) -> Universe {
        let start = scale.tail().start().clone();
        let u = scale.tail().period().cloned().unwrap_or_else(Rational::one);
        // s + u·k² and s + u·(k² + 2) never meet: squares avoid 2 and 3 modulo 4
        let families = vec![
            QuadraticFamily::new(u.clone(), Rational::zero(), start.clone()).expect("quadratic"),
            QuadraticFamily::new(u.clone(), Rational::zero(), &start + &u * int(2)).expect("quadratic"),
        ];
        Universe { name, scale: Arc::new(scale), families }
    }

    pub fn naturals() -> Universe {
        Universe::new("nat", TimeScale::naturals())
    }

    pub fn ray0() -> Universe {
        Universe::new("ray0", TimeScale::ray(int(0)))
    }

    pub fn random(rng: &mut impl Rng) -> Universe {
        match rng.gen_range(0..7) {
            0 => Self::naturals(),
            1 => Self::ray0(),
            2 => {
                let h = [frac(1, 2), frac(1, 3), int(2), frac(3, 2)].choose(rng).expect("non-empty").clone();
                Universe::new("hZ", TimeScale::arithmetic(int(0), h))
            }
            3 => {
                let (period, block) = match rng.gen_range(0..3) {
                    0 => (int(1), vec![(int(0), frac(1, 2))]),
                    1 => (int(2), vec![(int(0), int(0)), (int(1), frac(3, 2))]),
                    _ => (int(3), vec![(int(0), int(1)), (int(2), int(2))]),
                };
                Universe::new("blocks", TimeScale::periodic(int(0), period, block).expect("valid block"))
            }
            4 => Universe::new(
                "mixed-ray",
                TimeScale::new(vec![(int(0), int(1)), (int(2), int(2))], ScaleTail::Ray { start: int(3) })
                    .expect("valid scale"),
            ),
            5 => Universe::new(
                "mixed-grid",
                TimeScale::new(
                    vec![(int(-1), int(-1)), (int(0), frac(1, 2))],
                    ScaleTail::Arithmetic { start: int(1), step: frac(1, 2) },
                )
                .expect("valid scale"),
            ),
            _ => Universe::new(
                "shifted-blocks",
                TimeScale::periodic(frac(1, 2), int(2), vec![(int(0), int(1))]).expect("valid block"),
            ),
        }
    }

    fn a(&self) -> &Rational {
        self.scale.min_point()
    }

    fn interval(&self, rng: &mut impl Rng) -> DeltaSet {
        let kind = [IntervalKind::Closed, IntervalKind::ClosedOpen, IntervalKind::OpenClosed, IntervalKind::Open]
            .choose(rng)
            .copied()
            .expect("non-empty");
        let lo = coord(rng, self.a(), 12);
        let hi = coord(rng, &lo, 8);
        DeltaSet::interval(&self.scale, kind, lo, hi)
    }

    fn point(&self, rng: &mut impl Rng) -> DeltaSet {
        let t = self.scale.first_point_at_or_after(&coord(rng, self.a(), 12));
        DeltaSet::point(&self.scale, t).expect("scale point")
    }

    fn pattern(&self, rng: &mut impl Rng) -> DeltaSet {
        let period = [int(1), int(2), int(3), frac(1, 2), frac(3, 2)].choose(rng).expect("non-empty").clone();
        let start = coord(rng, self.a(), 6);
        let mut block = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let lo = &period * frac(rng.gen_range(0..8), 8);
            let hi = (&lo + &period * frac(rng.gen_range(0..4), 8)).min(period.clone());
            let kind = if lo < hi && hi == period { IntervalKind::ClosedOpen } else { IntervalKind::Closed };
            block.push(Interval::new(kind, lo, hi));
        }
        DeltaSet::periodic_pattern(&self.scale, start, period, block).expect("positive period")
    }

    fn family(&self, rng: &mut impl Rng) -> DeltaSet {
        let f = self.families.choose(rng).expect("non-empty").clone();
        DeltaSet::sparse(&self.scale, f).expect("family inside the scale")
    }

    /// A union of one to three random pieces, occasionally carved by another piece.
    pub fn set(&self, rng: &mut impl Rng) -> DeltaSet {
        let mut out = DeltaSet::empty(&self.scale);
        for _ in 0..rng.gen_range(1..=3) {
            let piece = self.piece(rng);
            out = out.union(&piece).expect("shared family pool");
        }
        if rng.gen_bool(0.25) {
            let cut = self.piece(rng);
            out = out.difference(&cut).expect("shared family pool");
        }
        out
    }

    fn piece(&self, rng: &mut impl Rng) -> DeltaSet {
        match rng.gen_range(0..6) {
            0 => self.interval(rng),
            1 | 2 => self.pattern(rng),
            3 => DeltaSet::ray(&self.scale, coord(rng, self.a(), 12), rng.gen_bool(0.5)),
            4 => self.family(rng),
            _ => self.point(rng),
        }
    }

    /// A bounded set: intervals and points.
    pub fn bounded_set(&self, rng: &mut impl Rng) -> DeltaSet {
        let mut out = DeltaSet::empty(&self.scale);
        for _ in 0..rng.gen_range(1..=3) {
            let piece = if rng.gen_bool(0.7) { self.interval(rng) } else { self.point(rng) };
            out = out.union(&piece).expect("no families");
        }
        out
    }

    /// A set of density zero: bounded pieces, sparse families and, where the
    /// scale allows, point patterns of measure zero.
    pub fn null_set(&self, rng: &mut impl Rng) -> DeltaSet {
        let mut out = if rng.gen_bool(0.5) { self.bounded_set(rng) } else { DeltaSet::empty(&self.scale) };
        if rng.gen_bool(0.7) {
            out = out.union(&self.family(rng)).expect("shared family pool");
        }
        if rng.gen_bool(0.4) {
            let period = [int(1), int(2), frac(1, 2)].choose(rng).expect("non-empty").clone();
            let start = coord(rng, self.a(), 4);
            let dots = DeltaSet::periodic_pattern(&self.scale, start, period, vec![Interval::point(int(0))])
                .expect("positive period");
            if density(&dots).is_zero() {
                out = out.union(&dots).expect("no families");
            }
        }
        out
    }

    fn floor_shift(&self) -> Rational {
        // keeps reciprocal rules defined on the whole scale
        int(1) - self.a().clone().min(Rational::zero())
    }

    /// A rule with a classical limit, together with that limit.
    pub fn convergent_rule(&self, rng: &mut impl Rng) -> (Rule, Rational) {
        let l = frac(rng.gen_range(-8..=8), rng.gen_range(1..=4));
        match rng.gen_range(0..3) {
            0 => (Rule::constant(l.clone()), l),
            1 => (Rule::affine(Rational::zero(), l.clone()), l),
            _ => {
                let c = frac(rng.gen_range(-6..=6), rng.gen_range(1..=3));
                let d = self.floor_shift() + int(rng.gen_range(0..4));
                (Rule::reciprocal(c, d).add(&Rule::constant(l.clone())).expect("constant shift"), l)
            }
        }
    }

    fn any_rule(&self, rng: &mut impl Rng) -> Rule {
        match rng.gen_range(0..3) {
            0 => Rule::constant(frac(rng.gen_range(-8..=8), rng.gen_range(1..=4))),
            1 => Rule::affine(frac(rng.gen_range(-3..=3), 2), int(rng.gen_range(-4..=4))),
            _ => self.convergent_rule(rng).0,
        }
    }

    fn disjoint_cases(&self, regions: Vec<(DeltaSet, Rule)>) -> Vec<(DeltaSet, Rule)> {
        let mut covered = DeltaSet::empty(&self.scale);
        let mut out = Vec::new();
        for (region, rule) in regions {
            let r = region.difference(&covered).expect("shared family pool");
            if r.is_empty().expect("decidable") {
                continue;
            }
            covered = covered.union(&r).expect("shared family pool");
            out.push((r, rule));
        }
        out
    }

    /// A classically convergent function and its limit: arbitrary rules on
    /// bounded regions over a convergent default, plus convergent rules with the
    /// same limit on unbounded regions.
    pub fn classically_convergent(&self, rng: &mut impl Rng) -> (ScaleFunction, Rational) {
        let (default, l) = self.convergent_rule(rng);
        let mut regions = Vec::new();
        for _ in 0..rng.gen_range(0..=3) {
            if rng.gen_bool(0.6) {
                regions.push((self.bounded_set(rng), self.any_rule(rng)));
            } else {
                let region = if rng.gen_bool(0.5) { self.pattern(rng) } else { self.family(rng) };
                let rule = loop {
                    let (rule, m) = self.convergent_rule(rng);
                    if m == l {
                        break rule;
                    }
                    if rng.gen_bool(0.5) {
                        break Rule::constant(l.clone());
                    }
                };
                regions.push((region, rule));
            }
        }
        let f = ScaleFunction::new(&self.scale, self.disjoint_cases(regions), default).expect("rules defined on the scale");
        (f, l)
    }

    /// A Δ-convergent function and its Δ-limit: a classically convergent
    /// function with arbitrary rules on a density-zero set.
    pub fn delta_convergent(&self, rng: &mut impl Rng) -> (ScaleFunction, Rational) {
        let (f, l) = self.classically_convergent(rng);
        if rng.gen_bool(0.3) {
            return (f, l);
        }
        let null = self.null_set(rng);
        let f = f.override_on(&null, self.any_rule(rng)).expect("rules defined on the scale");
        (f, l)
    }

    /// A convergent base perturbed on density-zero sets and on sets that may
    /// have positive density.
    pub fn perturbed(&self, rng: &mut impl Rng) -> ScaleFunction {
        let (default, _) = self.convergent_rule(rng);
        let mut regions = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let region = match rng.gen_range(0..4) {
                0 => self.family(rng),
                1 => self.null_set(rng),
                2 => self.bounded_set(rng),
                _ => self.pattern(rng),
            };
            regions.push((region, self.any_rule(rng)));
        }
        ScaleFunction::new(&self.scale, self.disjoint_cases(regions), default).expect("rules defined on the scale")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let draw = |i| case_rng(7, "iv", i).gen::<u64>();
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
        assert_ne!(case_rng(7, "iv", 0).gen::<u64>(), case_rng(7, "v", 0).gen::<u64>());
    }

    #[test]
    fn family_pool_is_disjoint_on_every_shape() {
        let mut rng = case_rng(1, "pool", 0);
        for _ in 0..40 {
            let u = Universe::random(&mut rng);
            assert!(u.families[0].provably_disjoint(&u.families[1]), "{}", u.name);
        }
    }

    #[test]
    fn generated_sets_live_on_their_scale() {
        let mut rng = case_rng(2, "sets", 0);
        for _ in 0..60 {
            let u = Universe::random(&mut rng);
            let s = u.set(&mut rng);
            assert!(s.same_scale(&DeltaSet::full(&u.scale)));
            assert!(density(&u.null_set(&mut rng)).is_zero());
            assert!(u.bounded_set(&mut rng).is_bounded().unwrap());
        }
    }
}
