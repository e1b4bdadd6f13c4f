//! Lebesgue Δ-measure of scale subsets.
//!
//! Singletons weigh `σ(t) − t`; scale intervals use the four closed forms
//! `[a,b) ↦ b − a`, `(a,b) ↦ b − σ(a)`, `(a,b] ↦ σ(b) − σ(a)` and
//! `[a,b] ↦ σ(b) − a`. Everything else follows by additivity over the
//! interval decomposition of a set.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::interval::{IntervalKind, IntervalUnion};
use crate::periodic::PeriodicSet;
use crate::rational::{self, floor_div, lcm, Rational, TimePoint};
use crate::set::DeltaSet;
use crate::sparse::Hits;
use crate::timescale::TimeScale;

/// A Δ-measure: a nonnegative rational or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MeasureValue {
    Finite(Rational),
    Infinite,
}

impl MeasureValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            MeasureValue::Finite(q) => Some(q),
            MeasureValue::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, MeasureValue::Infinite)
    }
}

impl std::ops::Add for MeasureValue {
    type Output = MeasureValue;

    fn add(self, rhs: MeasureValue) -> MeasureValue {
        match (self, rhs) {
            (MeasureValue::Finite(a), MeasureValue::Finite(b)) => MeasureValue::Finite(a + b),
            _ => MeasureValue::Infinite,
        }
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureValue::Finite(q) => f.write_str(&rational::format(q)),
            MeasureValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for MeasureValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MeasureValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            return Ok(MeasureValue::Infinite);
        }
        rational::parse(&s)
            .map(MeasureValue::Finite)
            .map_err(serde::de::Error::custom)
    }
}

/// `μ_Δ({t₀}) = σ(t₀) − t₀`.
pub fn measure_singleton(scale: &TimeScale, t0: &TimePoint) -> Result<MeasureValue> {
    Ok(MeasureValue::Finite(scale.jump(t0)?))
}

/// Δ-measure of the scale interval between `a` and `b` with the given endpoint convention.
pub fn measure_interval(
    scale: &TimeScale,
    kind: IntervalKind,
    a: &TimePoint,
    b: &TimePoint,
) -> Result<MeasureValue> {
    if a > b {
        return domain(format!(
            "interval endpoints out of order: {} > {}",
            rational::format(a),
            rational::format(b)
        ));
    }
    for x in [a, b] {
        if !scale.contains(x) {
            return domain(format!(
                "interval endpoint {} is not in the scale",
                rational::format(x)
            ));
        }
    }
    Ok(MeasureValue::Finite(interval_formula(scale, kind, a, b)))
}

fn interval_formula(scale: &TimeScale, kind: IntervalKind, a: &Rational, b: &Rational) -> Rational {
    if a == b && kind != IntervalKind::Closed {
        // [a,a), (a,a) and (a,a] are empty
        return Rational::zero();
    }
    let sigma = |t: &Rational| scale.sigma_unchecked(t);
    match kind {
        IntervalKind::ClosedOpen => b - a,
        IntervalKind::Open => b - sigma(a),
        IntervalKind::OpenClosed => sigma(b) - sigma(a),
        IntervalKind::Closed => sigma(b) - a,
    }
}

/// Δ-measure of the scale points inside a bounded union of real intervals.
pub(crate) fn measure_union(scale: &TimeScale, u: &IntervalUnion) -> Rational {
    u.intervals()
        .iter()
        .filter_map(|iv| scale.snap(iv))
        .map(|iv| interval_formula(scale, iv.kind(), &iv.lo, &iv.hi))
        .sum()
}

/// Common frame `(start, period)` from which both `set` and the scale repeat.
pub(crate) fn aligned_frame(scale: &TimeScale, set: &PeriodicSet) -> Option<(Rational, Rational)> {
    let tail = set.tail()?;
    let st = scale.tail().start();
    let period = match scale.tail().period() {
        Some(p) => lcm(&tail.period, p),
        None => tail.period.clone(),
    };
    Some((tail.start.clone().max(st.clone()), period))
}

/// Per-period Δ-measure of the periodic part of a set inside the scale.
pub(crate) fn cell_measure(
    scale: &TimeScale,
    set: &PeriodicSet,
    start: &Rational,
    period: &Rational,
) -> Rational {
    let end = start + period;
    measure_union(scale, &set.unroll(start, &end))
}

/// `μ_Δ(P ∩ [a, t])` for a subset `P` of the scale, in closed form.
pub(crate) fn periodic_measure_up_to(
    scale: &TimeScale,
    set: &PeriodicSet,
    t: &Rational,
) -> Rational {
    let a = scale.min_point();
    let Some((start, period)) = aligned_frame(scale, set) else {
        return measure_union(scale, &set.unroll_closed(a, t));
    };
    if t < &(&start + &period) {
        return measure_union(scale, &set.unroll_closed(a, t));
    }
    let head = measure_union(scale, &set.unroll(a, &start));
    let cells = floor_div(&(t - &start), &period);
    let per_cell = cell_measure(scale, set, &start, &period);
    let rest_from = &start + Rational::from_integer(cells.clone()) * &period;
    let rest = measure_union(scale, &set.unroll_closed(&rest_from, t));
    head + Rational::from_integer(cells) * per_cell + rest
}

/// `μ_Δ(A)`.
pub fn measure(set: &DeltaSet) -> Result<MeasureValue> {
    let scale = set.scale();
    let base = set.base();
    let mut total = match aligned_frame(scale, base) {
        None => measure_union(scale, base.head()),
        Some((start, period)) => {
            if cell_measure(scale, base, &start, &period).is_positive() {
                return Ok(MeasureValue::Infinite);
            }
            // the periodic part carries no mass, only the part before the frame does
            measure_union(scale, &base.unroll(scale.min_point(), &start))
        }
    };
    let scattered = scale.right_scattered();
    for term in set.terms() {
        match term.family.hits(&term.mask.intersect(scattered))? {
            Hits::Infinite => return Ok(MeasureValue::Infinite),
            Hits::Finite(points) => {
                for p in points {
                    total += scale.sigma_unchecked(&p) - &p;
                }
            }
        }
        if let Hits::Finite(points) = term.family.hits(&base.intersect(scattered))? {
            for p in points {
                total -= scale.sigma_unchecked(&p) - &p;
            }
        }
    }
    Ok(MeasureValue::Finite(total))
}

/// `μ_Δ(A(t))` with `A(t) = {s ∈ A : s ≤ t}`, without materialising `A(t)`.
pub fn measure_up_to(set: &DeltaSet, t: &TimePoint) -> Result<Rational> {
    let scale = set.scale();
    if !scale.contains(t) {
        return domain(format!(
            "horizon {} is not a point of the scale",
            rational::format(t)
        ));
    }
    let mut total = periodic_measure_up_to(scale, set.base(), t);
    for term in set.terms() {
        for p in term.family.points_up_to(t) {
            let w = scale.sigma_unchecked(&p) - &p;
            if w.is_zero() {
                continue;
            }
            if set.base().contains(&p) {
                total -= &w;
            }
            if term.mask.contains(&p) {
                total += &w;
            }
        }
    }
    Ok(total)
}

/// `σ(t) − a`, the Δ-measure of `T(t)`.
pub fn horizon_measure(scale: &TimeScale, t: &TimePoint) -> Result<Rational> {
    Ok(scale.sigma(t)? - scale.min_point())
}

/// Number of whole aligned periods of the scale below `t`, for sizing horizons.
pub fn periods_below(scale: &TimeScale, t: &Rational) -> BigInt {
    let start = scale.tail().start();
    let p = scale
        .tail()
        .period()
        .cloned()
        .unwrap_or_else(|| rational::int(1));
    if t <= start {
        BigInt::zero()
    } else {
        floor_div(&(t - start), &p)
    }
}
