//! The nested-interval construction of a classically convergent companion `g`
//! that agrees with a Δ-Cauchy function `f` off a set of density zero.
//!
//! Step `m` picks a point `t` whose value band `[f(t) − 2^-m, f(t) + 2^-m]`
//! holds `f` Δ-almost everywhere and intersects it into the running interval.
//! Each interval `I_m` gets a threshold `T_m` beyond which the share of
//! `{t ≤ s : f(t) ∉ I_m}` stays below `1/m`. The companion takes the midpoint
//! `λ` of the last interval on `(T_m, T_{m+1}] ∩ {f ∉ I_m}` and agrees with `f`
//! elsewhere.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::convergence::representatives;
use crate::density::density;
use crate::error::{construction, Error, Result};
use crate::function::{Cmp, Rule, ScaleFunction, ScaleFunctionDto};
use crate::interval::IntervalKind;
use crate::measure::{aligned_frame, cell_measure, measure_union, measure_up_to};
use crate::rational::{self, frac, int, two_pow_neg, Rational, TimePoint};
use crate::set::DeltaSet;
use crate::sparse::Hits;
use crate::timescale::TimeScale;

/// Default limit on the number of grid horizons scanned per threshold.
pub const DEFAULT_HORIZON_CAP: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct CompanionTrace {
    /// Midpoint of the last interval.
    pub lambda: Rational,
    /// `2^-m_max`, a bound on `|λ − ⋂ I_m|`.
    pub radius: Rational,
    /// `I_1, …, I_{m_max}` as closed `(lo, hi)` pairs.
    pub intervals: Vec<(Rational, Rational)>,
    /// `T_1 < … < T_{m_max}`.
    pub thresholds: Vec<TimePoint>,
    /// The points `t` whose value bands built the intervals, one per radius `2^0 … 2^-m_max`.
    pub samples: Vec<TimePoint>,
    /// `{t : f(t) ∉ I_m}` for each `m`.
    pub exceptional: Vec<DeltaSet>,
    /// Every `s` beyond this point satisfies the threshold bounds by an analytic estimate.
    pub certified_from: Vec<Rational>,
    pub companion: ScaleFunction,
}

/// Largest graininess anywhere on the scale.
fn max_jump(scale: &TimeScale) -> Rational {
    let comps = scale.components();
    let mut w = scale.max_tail_jump();
    for (i, (_, hi)) in comps.iter().enumerate() {
        let next = comps
            .get(i + 1)
            .map(|c| &c.0)
            .unwrap_or_else(|| scale.tail().start());
        w = w.max(next - hi);
    }
    w
}

fn ceil_int(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

/// Upper bound for `1/√q`, `q > 0`.
fn inv_sqrt_upper(q: &Rational) -> Rational {
    // 1/√(p/r) = √(pr)/p
    let p = q.numer();
    let r = q.denom();
    Rational::new((p * r).sqrt() + BigInt::one(), p.clone())
}

/// A horizon `X` such that `m·μ_Δ(E(s)) < s − a` for every `s ≥ X`, for a set `E` of density zero.
fn analytic_horizon(set: &DeltaSet, m: u32) -> Result<Rational> {
    let scale = set.scale();
    let a = scale.min_point();
    let base = set.base();
    // mass of the periodic part: everything before the frame, nothing per cell
    let mut c = match aligned_frame(scale, base) {
        None => measure_union(scale, base.head()),
        Some((start, period)) => {
            if cell_measure(scale, base, &start, &period).is_positive() {
                return construction("threshold requested for a set of positive density");
            }
            measure_union(scale, &base.unroll(a, &start))
        }
    };
    let w = max_jump(scale);
    let mut slope = Rational::zero();
    let mut shift = Rational::zero();
    for term in set.terms() {
        match term
            .family
            .hits(&term.mask.intersect(scale.right_scattered()))?
        {
            Hits::Finite(points) => {
                for p in points {
                    c += scale.sigma_unchecked(&p) - &p;
                }
            }
            Hits::Infinite => {
                // #{k : p_k ≤ s} ≤ 1 + |c1|/c2 + √((s + |c0|)/c2)
                let f = &term.family;
                c += &w * (Rational::one() + f.c1.abs() / &f.c2);
                slope += &w * inv_sqrt_upper(&f.c2);
                shift = shift.max(f.c0.abs());
            }
        }
    }
    let m = int(m as i64);
    // need y² − K·y − D > 0 with y = √(s + B)
    let b = shift.max(a.abs());
    let k = &m * slope;
    let d = (&m * c + &b + a).max(Rational::zero());
    let y0 = ceil_int(&k) + ceil_int(&d).sqrt() + BigInt::from(2);
    Ok(Rational::from_integer(&y0 * &y0))
}

/// Least grid horizon `T` with `μ_Δ(E(s))/(σ(s) − a) < 1/m` for every scale point `s > T`.
fn threshold(set: &DeltaSet, m: u32, cap: u64) -> Result<(TimePoint, Rational)> {
    let scale = set.scale();
    let a = scale.min_point().clone();
    let x_far = analytic_horizon(set, m)?;
    let step = scale.tail().period().cloned().unwrap_or_else(Rational::one);
    let n = if x_far <= a {
        1
    } else {
        ceil_int(&((&x_far - &a) / &step))
            .to_u64()
            .unwrap_or(u64::MAX)
            .max(1)
    };
    if n > cap {
        return Err(Error::Undecided(format!(
            "threshold search for m = {m} needs {n} horizons, above the cap {cap}"
        )));
    }
    let grid = |i: u64| {
        scale.first_point_at_or_after(&(&a + Rational::from_integer(BigInt::from(i)) * &step))
    };
    let mut mu_cache: HashMap<u64, Rational> = HashMap::new();
    let mut mu = |i: u64| -> Result<Rational> {
        if let Some(v) = mu_cache.get(&i) {
            return Ok(v.clone());
        }
        let v = measure_up_to(set, &grid(i))?;
        mu_cache.insert(i, v.clone());
        Ok(v)
    };
    let mq = int(m as i64);
    // right end of the rightmost grid segment (x_lo, x_hi] that cannot be certified
    let mut stack = vec![(0u64, n)];
    let mut worst: Option<u64> = None;
    while let Some((lo, hi)) = stack.pop() {
        if hi <= lo || worst.is_some_and(|w| hi <= w) {
            continue;
        }
        let den = scale.sigma_unchecked(&grid(lo)) - &a;
        if &mq * mu(hi)? < den {
            continue;
        }
        if hi - lo == 1 {
            worst = Some(worst.map_or(hi, |w| w.max(hi)));
            continue;
        }
        let mid = lo + (hi - lo) / 2;
        // left half first on the stack so the right half is explored first
        stack.push((lo, mid));
        stack.push((mid, hi));
    }
    Ok((grid(worst.unwrap_or(0)), x_far))
}

/// Runs the construction with `m_max` halvings.
pub fn companion_function(f: &ScaleFunction, m_max: u32, cap: u64) -> Result<CompanionTrace> {
    if m_max < 2 {
        return Err(Error::Domain("m_max must be at least 2".into()));
    }
    let scale = f.scale_ref();
    let mut samples = Vec::new();
    let mut interval: Option<(Rational, Rational)> = None;
    let mut intervals = Vec::new();
    for step in 0..=m_max {
        let r = two_pow_neg(step);
        let t = pick_sample(f, &r)?;
        let v = f.eval(&t)?;
        let (lo, hi) = (&v - &r, &v + &r);
        let next = match interval {
            None => (lo, hi),
            Some((a, b)) => (a.max(lo), b.min(hi)),
        };
        if next.0 > next.1 {
            return construction("value bands of Δ-almost-all points do not intersect");
        }
        if step > 0 {
            intervals.push(next.clone());
        }
        interval = Some(next);
        samples.push(t);
    }
    let (lo, hi) = interval.expect("m_max ≥ 2");
    let lambda = (&lo + &hi) * frac(1, 2);

    let mut exceptional = Vec::new();
    let mut thresholds: Vec<TimePoint> = Vec::new();
    let mut certified_from = Vec::new();
    let step = scale.tail().period().cloned().unwrap_or_else(Rational::one);
    for (i, (lo, hi)) in intervals.iter().enumerate() {
        let m = i as u32 + 1;
        let e = f.outside(lo, hi)?;
        if !density(&e).is_zero() {
            return Err(Error::NotCauchy(format!(
                "f leaves I_{m} on a set of positive density"
            )));
        }
        let (mut t, far) = threshold(&e, m, cap)?;
        if let Some(prev) = thresholds.last() {
            if &t <= prev {
                t = scale.first_point_at_or_after(&(prev + &step));
            }
        }
        thresholds.push(t);
        certified_from.push(far);
        exceptional.push(e);
    }

    let mut z = DeltaSet::empty(scale);
    for (i, e) in exceptional.iter().enumerate() {
        let window = match thresholds.get(i + 1) {
            Some(next) => DeltaSet::interval(
                scale,
                IntervalKind::OpenClosed,
                thresholds[i].clone(),
                next.clone(),
            ),
            None => DeltaSet::ray(scale, thresholds[i].clone(), false),
        };
        z = z.union(&window.intersection(e)?)?;
    }
    let companion = f.override_on(&z, Rule::constant(lambda.clone()))?;
    Ok(CompanionTrace {
        lambda,
        radius: two_pow_neg(m_max),
        intervals,
        thresholds,
        samples,
        exceptional,
        certified_from,
        companion,
    })
}

/// Least representative `t` whose band `[f(t) ± r]` holds `f` off a density-zero set.
/// Least candidate whose band holds `f` Δ-almost everywhere, preferring points of
/// regions with positive density.
fn pick_sample(f: &ScaleFunction, r: &Rational) -> Result<TimePoint> {
    let heavy: Vec<&DeltaSet> = f
        .regions()?
        .into_iter()
        .map(|(region, _)| region)
        .filter(|region| !density(region).is_zero())
        .collect();
    let (mut order, light): (Vec<TimePoint>, Vec<TimePoint>) = representatives(f, r)?
        .into_iter()
        .partition(|t| heavy.iter().any(|region| region.contains(t)));
    order.extend(light);
    for t in order {
        let v = f.eval(&t)?;
        if density(&f.outside(&(&v - r), &(&v + r))?).is_zero() {
            return Ok(t);
        }
    }
    Err(Error::NotCauchy(format!(
        "no point t has f within {} of f(t) Δ-almost everywhere",
        rational::format(r)
    )))
}

/// Outcome of checking a trace against the construction's guarantees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompanionCheck {
    /// `I_{m+1} ⊆ I_m` and `|I_m| ≤ 2^{1−m}`.
    pub nested: bool,
    pub thresholds_increasing: bool,
    /// `{t > T_m : |g(t) − λ| > 2^{1−m}} = ∅` for every `m`.
    pub tail_bounds: bool,
    /// `δ({f ≠ g}) = 0`.
    pub agrees_almost_everywhere: bool,
    /// `μ_Δ({t ≤ s : f(t) ∉ I_m})/(σ(s) − a) < 1/m` at the sampled `s > T_m`.
    pub ratio_bounds: bool,
}

impl CompanionCheck {
    pub fn ok(&self) -> bool {
        self.nested
            && self.thresholds_increasing
            && self.tail_bounds
            && self.agrees_almost_everywhere
            && self.ratio_bounds
    }
}

/// Scale points beyond `t` used to spot-check the ratio bound.
pub fn probe_points(scale: &TimeScale, t: &TimePoint, count: u32) -> Vec<TimePoint> {
    let mut out = Vec::new();
    let mut x = scale.first_point_at_or_after(&(t + frac(1, 1000)));
    for k in 0..count {
        out.push(x.clone());
        x = scale.first_point_at_or_after(
            &(&x + Rational::from_integer(BigInt::from(1u64 << k.min(40)))),
        );
    }
    out
}

pub fn verify(f: &ScaleFunction, trace: &CompanionTrace) -> Result<CompanionCheck> {
    let scale = f.scale_ref();
    let a = scale.min_point();
    let nested = trace.intervals.iter().enumerate().all(|(i, (lo, hi))| {
        let m = i as u32 + 1;
        let len_ok = hi - lo <= two_pow_neg(m - 1);
        let inside = i == 0 || {
            let (plo, phi) = &trace.intervals[i - 1];
            plo <= lo && hi <= phi
        };
        len_ok && inside && lo <= &trace.lambda && &trace.lambda <= hi
    });
    let thresholds_increasing = trace.thresholds.windows(2).all(|w| w[0] < w[1]);
    let g = &trace.companion;
    let mut tail_bounds = true;
    for (i, t) in trace.thresholds.iter().enumerate() {
        let r = two_pow_neg(i as u32);
        let far = g
            .level_set(Cmp::Gt, &(&trace.lambda + &r))?
            .union(&g.level_set(Cmp::Lt, &(&trace.lambda - &r))?)?;
        if !far
            .intersection(&DeltaSet::ray(scale, t.clone(), false))?
            .is_empty()?
        {
            tail_bounds = false;
        }
    }
    let agrees_almost_everywhere = density(&f.disagreement(g)?).is_zero();
    let mut ratio_bounds = true;
    for (i, (t, e)) in trace.thresholds.iter().zip(&trace.exceptional).enumerate() {
        let m = int(i as i64 + 1);
        for s in probe_points(scale, t, 12) {
            let ratio = measure_up_to(e, &s)? / (scale.sigma_unchecked(&s) - a);
            if &ratio * &m >= Rational::one() {
                ratio_bounds = false;
            }
        }
    }
    Ok(CompanionCheck {
        nested,
        thresholds_increasing,
        tail_bounds,
        agrees_almost_everywhere,
        ratio_bounds,
    })
}

#[derive(Serialize)]
struct IntervalView {
    #[serde(with = "rational::serde_q")]
    lo: Rational,
    #[serde(with = "rational::serde_q")]
    hi: Rational,
}

#[derive(Serialize)]
struct TraceView<'a> {
    #[serde(with = "rational::serde_q")]
    lambda: &'a Rational,
    #[serde(with = "rational::serde_q")]
    radius: &'a Rational,
    intervals: Vec<IntervalView>,
    #[serde(with = "rational::serde_q::vec")]
    thresholds: &'a [Rational],
    #[serde(with = "rational::serde_q::vec")]
    samples: &'a [Rational],
    companion: ScaleFunctionDto,
}

impl Serialize for CompanionTrace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TraceView {
            lambda: &self.lambda,
            radius: &self.radius,
            intervals: self
                .intervals
                .iter()
                .map(|(lo, hi)| IntervalView {
                    lo: lo.clone(),
                    hi: hi.clone(),
                })
                .collect(),
            thresholds: &self.thresholds,
            samples: &self.samples,
            companion: ScaleFunctionDto::from_function(&self.companion, false),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::sparse::QuadraticFamily;

    fn ray0() -> Arc<TimeScale> {
        Arc::new(TimeScale::ray(int(0)))
    }

    #[test]
    fn constant_function() {
        let f = ScaleFunction::constant(&ray0(), int(3));
        let tr = companion_function(&f, 6, DEFAULT_HORIZON_CAP).unwrap();
        assert_eq!(tr.lambda, int(3));
        assert!(tr.exceptional.iter().all(|e| e.is_empty().unwrap()));
        for t in [int(0), int(7), frac(9, 2)] {
            assert_eq!(tr.companion.eval(&t).unwrap(), int(3));
        }
        assert!(verify(&f, &tr).unwrap().ok());
    }

    #[test]
    fn null_family_is_smoothed_away() {
        let r = ray0();
        let ints =
            DeltaSet::sparse(&r, QuadraticFamily::new(int(0), int(1), int(0)).unwrap()).unwrap();
        let f = ScaleFunction::new(
            &r,
            vec![(ints, Rule::constant(int(0)))],
            Rule::constant(int(1)),
        )
        .unwrap();
        let tr = companion_function(&f, 5, DEFAULT_HORIZON_CAP).unwrap();
        assert_eq!(tr.lambda, int(1));
        let last = tr.thresholds.last().unwrap().clone();
        let beyond = (&last + int(1)).floor() + int(3);
        assert_eq!(tr.companion.eval(&beyond).unwrap(), tr.lambda);
        assert_eq!(tr.companion.eval(&(&beyond + frac(1, 2))).unwrap(), int(1));
        assert!(verify(&f, &tr).unwrap().ok());
    }

    #[test]
    fn spikes_on_squares_in_naturals() {
        let n = Arc::new(TimeScale::naturals());
        let sq =
            DeltaSet::sparse(&n, QuadraticFamily::new(int(1), int(0), int(0)).unwrap()).unwrap();
        let f = ScaleFunction::new(
            &n,
            vec![(sq, Rule::constant(int(5)))],
            Rule::reciprocal(int(1), int(1)),
        )
        .unwrap();
        let tr = companion_function(&f, 6, DEFAULT_HORIZON_CAP).unwrap();
        assert!(tr.lambda.abs() <= tr.radius);
        let check = verify(&f, &tr).unwrap();
        assert!(check.ok(), "{check:?}");
        // the spikes are gone past the last threshold
        let t = tr.thresholds.last().unwrap();
        let k = (t.to_integer().sqrt() + BigInt::from(2)).to_i64().unwrap();
        let p = int(k * k);
        assert_eq!(f.eval(&p).unwrap(), int(5));
        assert_eq!(tr.companion.eval(&p).unwrap(), tr.lambda);
        // and every sampled value past T_m lies within 2^{1-m} of λ
        for (i, t) in tr.thresholds.iter().enumerate() {
            for s in probe_points(&n, t, 10) {
                assert!(
                    (tr.companion.eval(&s).unwrap() - &tr.lambda).abs() <= two_pow_neg(i as u32)
                );
            }
        }
    }

    #[test]
    fn rejects_functions_that_are_not_cauchy() {
        let n = Arc::new(TimeScale::naturals());
        let evens = DeltaSet::periodic_pattern(
            &n,
            int(0),
            int(2),
            vec![crate::interval::Interval::point(int(0))],
        )
        .unwrap();
        let f = ScaleFunction::indicator(&evens).unwrap();
        assert!(matches!(
            companion_function(&f, 4, DEFAULT_HORIZON_CAP),
            Err(Error::NotCauchy(_))
        ));
    }
}
