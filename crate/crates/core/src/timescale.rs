//! Time scales: closed subsets of ℝ with a least point and an infinite tail.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{construction, domain, Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::periodic::PeriodicSet;
use crate::rational::{self, floor_div, int, phase, Rational, TimePoint};

/// The unbounded part of a scale.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ScaleTail {
    /// `[start, ∞)`
    Ray { start: TimePoint },
    /// `{start + k·step : k ≥ 0}`
    Arithmetic { start: TimePoint, step: Rational },
    /// `⋃_n (start + n·period + block)` with closed block intervals inside `[0, period)`.
    Periodic {
        start: TimePoint,
        period: Rational,
        block: Vec<(Rational, Rational)>,
    },
}

impl ScaleTail {
    pub fn start(&self) -> &TimePoint {
        match self {
            ScaleTail::Ray { start }
            | ScaleTail::Arithmetic { start, .. }
            | ScaleTail::Periodic { start, .. } => start,
        }
    }

    /// Period of the tail; `None` for a ray, which is invariant under every shift.
    pub fn period(&self) -> Option<&Rational> {
        match self {
            ScaleTail::Ray { .. } => None,
            ScaleTail::Arithmetic { step, .. } => Some(step),
            ScaleTail::Periodic { period, .. } => Some(period),
        }
    }
}

/// A closed, bounded-below, unbounded-above subset of ℝ in canonical form.
///
/// Bounded components are disjoint closed intervals (degenerate ones are
/// isolated points) sorted left to right and lying strictly below the tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimeScale {
    components: Vec<(Rational, Rational)>,
    tail: ScaleTail,
    // derived from the two fields above
    points: PeriodicSet,
    scattered: PeriodicSet,
}

impl TimeScale {
    pub fn new(components: Vec<(Rational, Rational)>, tail: ScaleTail) -> Result<TimeScale> {
        for (lo, hi) in &components {
            if lo > hi {
                return construction(format!(
                    "component [{}, {}] has lo > hi",
                    rational::format(lo),
                    rational::format(hi)
                ));
            }
        }
        let tail = normalize_tail(tail)?;
        let mut comps = components;
        comps.sort();
        let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(comps.len());
        for (lo, hi) in comps {
            if let Some(last) = merged.last_mut() {
                if lo <= last.1 {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                    continue;
                }
            }
            merged.push((lo, hi));
        }
        let mut tail = tail;
        if let ScaleTail::Ray { start } = &mut tail {
            // a ray swallows every component that reaches it
            while let Some(last) = merged.last() {
                if last.1 >= *start {
                    if last.0 < *start {
                        *start = last.0.clone();
                    }
                    merged.pop();
                } else {
                    break;
                }
            }
        }
        if let Some(last) = merged.last() {
            if &last.1 >= tail.start() {
                return construction(format!(
                    "bounded component ending at {} reaches the tail starting at {}",
                    rational::format(&last.1),
                    rational::format(tail.start())
                ));
            }
        }
        Ok(Self::build(merged, tail))
    }

    fn build(components: Vec<(Rational, Rational)>, tail: ScaleTail) -> TimeScale {
        let points = point_set(&components, &tail);
        let scattered = scattered_set(&components, &tail);
        TimeScale {
            components,
            tail,
            points,
            scattered,
        }
    }

    /// ℕ = {0, 1, 2, ...}
    pub fn naturals() -> TimeScale {
        Self::arithmetic(int(0), int(1))
    }

    /// `[start, ∞)`
    pub fn ray(start: TimePoint) -> TimeScale {
        Self::build(Vec::new(), ScaleTail::Ray { start })
    }

    /// `{start + k·step}`; `step` must be positive.
    pub fn arithmetic(start: TimePoint, step: Rational) -> TimeScale {
        Self::new(Vec::new(), ScaleTail::Arithmetic { start, step }).expect("positive step")
    }

    /// `⋃_n [start + n·period + lo_i, start + n·period + hi_i]`.
    pub fn periodic(
        start: TimePoint,
        period: Rational,
        block: Vec<(Rational, Rational)>,
    ) -> Result<TimeScale> {
        Self::new(
            Vec::new(),
            ScaleTail::Periodic {
                start,
                period,
                block,
            },
        )
    }

    pub fn components(&self) -> &[(Rational, Rational)] {
        &self.components
    }

    pub fn tail(&self) -> &ScaleTail {
        &self.tail
    }

    /// `a = min T`.
    pub fn min_point(&self) -> &TimePoint {
        match self.components.first() {
            Some((lo, _)) => lo,
            None => self.tail.start(),
        }
    }

    pub fn contains(&self, t: &TimePoint) -> bool {
        if t < self.tail.start() {
            return self.component_index(t).is_some();
        }
        match &self.tail {
            ScaleTail::Ray { .. } => true,
            ScaleTail::Arithmetic { start, step } => phase(t, start, step).is_zero(),
            ScaleTail::Periodic {
                start,
                period,
                block,
            } => {
                let off = phase(t, start, period);
                block.iter().any(|(lo, hi)| lo <= &off && &off <= hi)
            }
        }
    }

    fn component_index(&self, t: &TimePoint) -> Option<usize> {
        let idx = self.components.partition_point(|(lo, _)| lo <= t);
        (idx > 0 && t <= &self.components[idx - 1].1).then(|| idx - 1)
    }

    /// Forward jump `σ(t) = inf{s ∈ T : s > t}`.
    pub fn sigma(&self, t: &TimePoint) -> Result<TimePoint> {
        if !self.contains(t) {
            return domain(format!(
                "σ: {} is not a point of the scale",
                rational::format(t)
            ));
        }
        Ok(self.sigma_unchecked(t))
    }

    pub(crate) fn sigma_unchecked(&self, t: &TimePoint) -> TimePoint {
        if t < self.tail.start() {
            let i = self.component_index(t).expect("member");
            let (_, hi) = &self.components[i];
            if t < hi {
                return t.clone();
            }
            return match self.components.get(i + 1) {
                Some((next, _)) => next.clone(),
                None => self.tail.start().clone(),
            };
        }
        match &self.tail {
            ScaleTail::Ray { .. } => t.clone(),
            ScaleTail::Arithmetic { step, .. } => t + step,
            ScaleTail::Periodic {
                start,
                period,
                block,
            } => {
                let off = phase(t, start, period);
                let base = t - &off;
                let j = block
                    .iter()
                    .position(|(lo, hi)| lo <= &off && &off <= hi)
                    .expect("member");
                if off < block[j].1 {
                    t.clone()
                } else {
                    match block.get(j + 1) {
                        Some((lo, _)) => base + lo,
                        None => base + period,
                    }
                }
            }
        }
    }

    /// `sup{s ∈ T : s < t}` for `t ∈ T`: `t` itself when `t` is left-dense, `None` at `min T`.
    pub(crate) fn rho(&self, t: &TimePoint) -> Option<TimePoint> {
        if t < self.tail.start() {
            let i = self.component_index(t).expect("member");
            if &self.components[i].0 < t {
                return Some(t.clone());
            }
            return i.checked_sub(1).map(|j| self.components[j].1.clone());
        }
        if t == self.tail.start() {
            return self.components.last().map(|c| c.1.clone());
        }
        Some(match &self.tail {
            ScaleTail::Ray { .. } => t.clone(),
            ScaleTail::Arithmetic { step, .. } => t - step,
            ScaleTail::Periodic {
                start,
                period,
                block,
            } => {
                let off = phase(t, start, period);
                let base = t - &off;
                let j = block
                    .iter()
                    .position(|(lo, hi)| lo <= &off && &off <= hi)
                    .expect("member");
                if off > block[j].0 {
                    t.clone()
                } else if j > 0 {
                    base + &block[j - 1].1
                } else {
                    base - period + &block.last().expect("non-empty block").1
                }
            }
        })
    }

    /// The interval with endpoints in `T` that meets `T` exactly where `iv` does,
    /// with open ends only at points that are dense on that side.
    pub(crate) fn snap(&self, iv: &Interval) -> Option<Interval> {
        if iv.is_empty() || &iv.hi < self.min_point() {
            return None;
        }
        let (mut lo, mut lo_closed) = if self.contains(&iv.lo) {
            (iv.lo.clone(), iv.lo_closed)
        } else {
            (self.first_point_at_or_after(&iv.lo), true)
        };
        let (mut hi, mut hi_closed) = if self.contains(&iv.hi) {
            (iv.hi.clone(), iv.hi_closed)
        } else {
            (self.last_point_at_or_before(&iv.hi).ok()?, true)
        };
        if !lo_closed {
            let next = self.sigma_unchecked(&lo);
            if next > lo {
                lo = next;
                lo_closed = true;
            }
        }
        if !hi_closed {
            match self.rho(&hi) {
                None => return None,
                Some(prev) if prev < hi => {
                    hi = prev;
                    hi_closed = true;
                }
                Some(_) => {}
            }
        }
        let out = Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        };
        (!out.is_empty()).then_some(out)
    }

    /// Graininess `σ(t) - t`.
    pub fn jump(&self, t: &TimePoint) -> Result<Rational> {
        Ok(self.sigma(t)? - t)
    }

    /// Least scale point `≥ x`.
    pub fn first_point_at_or_after(&self, x: &Rational) -> TimePoint {
        if x <= self.min_point() {
            return self.min_point().clone();
        }
        for (lo, hi) in &self.components {
            if x <= hi {
                return x.max(lo).clone();
            }
        }
        match &self.tail {
            ScaleTail::Ray { start } => x.max(start).clone(),
            ScaleTail::Arithmetic { start, step } => {
                if x <= start {
                    return start.clone();
                }
                let n = floor_div(&(x - start), step);
                let p = start + Rational::from_integer(n) * step;
                if &p == x {
                    p
                } else {
                    p + step
                }
            }
            ScaleTail::Periodic {
                start,
                period,
                block,
            } => {
                if x <= start {
                    return start.clone();
                }
                let off = phase(x, start, period);
                let base = x - &off;
                for (lo, hi) in block {
                    if &off <= hi {
                        return &base + lo.max(&off);
                    }
                }
                base + period
            }
        }
    }

    /// Greatest scale point `≤ x`; `x` must be at least `min T`.
    pub fn last_point_at_or_before(&self, x: &Rational) -> Result<TimePoint> {
        if x < self.min_point() {
            return domain(format!(
                "no scale point at or below {}",
                rational::format(x)
            ));
        }
        if x < self.tail.start() {
            let idx = self.components.partition_point(|(lo, _)| lo <= x);
            let (_, hi) = &self.components[idx - 1];
            return Ok(x.min(hi).clone());
        }
        Ok(match &self.tail {
            ScaleTail::Ray { .. } => x.clone(),
            ScaleTail::Arithmetic { start, step } => {
                start + Rational::from_integer(floor_div(&(x - start), step)) * step
            }
            ScaleTail::Periodic {
                start,
                period,
                block,
            } => {
                let off = phase(x, start, period);
                let base = x - &off;
                let (lo, hi) = block
                    .iter()
                    .rev()
                    .find(|(lo, _)| lo <= &off)
                    .expect("block starts at 0");
                let _ = lo;
                base + hi.min(&off)
            }
        })
    }

    /// The point set as an eventually periodic set.
    pub fn as_periodic_set(&self) -> &PeriodicSet {
        &self.points
    }

    /// Right-scattered points (those with `σ(t) > t`), as an eventually periodic set.
    pub fn right_scattered(&self) -> &PeriodicSet {
        &self.scattered
    }

    /// Largest graininess in the tail (zero for a ray).
    pub fn max_tail_jump(&self) -> Rational {
        match &self.tail {
            ScaleTail::Ray { .. } => Rational::zero(),
            ScaleTail::Arithmetic { step, .. } => step.clone(),
            ScaleTail::Periodic { period, block, .. } => {
                let mut best = Rational::zero();
                for (i, (_, hi)) in block.iter().enumerate() {
                    let next = block
                        .get(i + 1)
                        .map(|b| b.0.clone())
                        .unwrap_or_else(|| period.clone());
                    best = best.max(next - hi);
                }
                best
            }
        }
    }
}

fn point_set(components: &[(Rational, Rational)], tail: &ScaleTail) -> PeriodicSet {
    let head = IntervalUnion::from_intervals(
        components
            .iter()
            .map(|(lo, hi)| Interval::closed(lo.clone(), hi.clone()))
            .collect(),
    );
    let (start, period, block) = match tail {
        ScaleTail::Ray { start } => {
            return PeriodicSet::bounded(head).union(&PeriodicSet::ray(start.clone(), true))
        }
        ScaleTail::Arithmetic { start, step } => (
            start,
            step,
            IntervalUnion::single(Interval::point(Rational::zero())),
        ),
        ScaleTail::Periodic {
            start,
            period,
            block,
        } => (
            start,
            period,
            IntervalUnion::from_intervals(
                block
                    .iter()
                    .map(|(lo, hi)| Interval::closed(lo.clone(), hi.clone()))
                    .collect(),
            ),
        ),
    };
    PeriodicSet::periodic(head, start.clone(), period.clone(), block)
}

fn scattered_set(components: &[(Rational, Rational)], tail: &ScaleTail) -> PeriodicSet {
    let head = IntervalUnion::from_intervals(
        components
            .iter()
            .map(|(_, hi)| Interval::point(hi.clone()))
            .collect(),
    );
    match tail {
        ScaleTail::Ray { .. } => PeriodicSet::bounded(head),
        ScaleTail::Arithmetic { start, step } => PeriodicSet::periodic(
            head,
            start.clone(),
            step.clone(),
            IntervalUnion::single(Interval::point(Rational::zero())),
        ),
        ScaleTail::Periodic {
            start,
            period,
            block,
        } => PeriodicSet::periodic(
            head,
            start.clone(),
            period.clone(),
            IntervalUnion::from_intervals(
                block
                    .iter()
                    .map(|(_, hi)| Interval::point(hi.clone()))
                    .collect(),
            ),
        ),
    }
}

fn normalize_tail(tail: ScaleTail) -> Result<ScaleTail> {
    match tail {
        ScaleTail::Ray { .. } => Ok(tail),
        ScaleTail::Arithmetic { start, step } => {
            if !step.is_positive() {
                return construction("arithmetic tail needs a positive step");
            }
            Ok(ScaleTail::Arithmetic { start, step })
        }
        ScaleTail::Periodic {
            start,
            period,
            mut block,
        } => {
            if !period.is_positive() {
                return construction("periodic tail needs a positive period");
            }
            block.sort();
            let mut merged: Vec<(Rational, Rational)> = Vec::new();
            for (lo, hi) in block {
                if lo > hi || lo.is_negative() || hi >= period {
                    return construction(format!(
                        "block interval [{}, {}] must satisfy 0 <= lo <= hi < period",
                        rational::format(&lo),
                        rational::format(&hi)
                    ));
                }
                if let Some(last) = merged.last_mut() {
                    if lo <= last.1 {
                        last.1 = last.1.clone().max(hi);
                        continue;
                    }
                }
                merged.push((lo, hi));
            }
            match merged.first() {
                None => return construction("periodic tail needs a non-empty block"),
                Some((lo, _)) if !lo.is_zero() => {
                    return construction("the first block interval must start at 0")
                }
                _ => {}
            }
            if merged.len() == 1 && merged[0].1.is_zero() {
                return Ok(ScaleTail::Arithmetic {
                    start,
                    step: period,
                });
            }
            Ok(ScaleTail::Periodic {
                start,
                period,
                block: merged,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// JSON form

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub(crate) enum ComponentDto {
    Interval(#[serde(with = "rational::serde_q::vec")] Vec<Rational>),
    Points(#[serde(with = "rational::serde_q::vec")] Vec<Rational>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub(crate) enum TailDto {
    Ray {
        #[serde(with = "rational::serde_q")]
        start: Rational,
    },
    Arithmetic {
        #[serde(with = "rational::serde_q")]
        start: Rational,
        #[serde(with = "rational::serde_q")]
        step: Rational,
    },
    Periodic {
        #[serde(with = "rational::serde_q")]
        start: Rational,
        #[serde(with = "rational::serde_q")]
        period: Rational,
        block: Vec<BlockDto>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct BlockDto(
    #[serde(with = "rational::serde_q")] Rational,
    #[serde(with = "rational::serde_q")] Rational,
);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct TimeScaleDto {
    #[serde(
        with = "rational::serde_q::opt",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    min: Option<Rational>,
    #[serde(default)]
    components: Vec<ComponentDto>,
    tail: TailDto,
}

impl TryFrom<TimeScaleDto> for TimeScale {
    type Error = Error;

    fn try_from(dto: TimeScaleDto) -> Result<TimeScale> {
        let mut comps = Vec::new();
        for c in dto.components {
            match c {
                ComponentDto::Interval(v) => {
                    let [lo, hi]: [Rational; 2] = v.try_into().map_err(|_| {
                        Error::Construction(
                            "an interval component needs exactly two endpoints".into(),
                        )
                    })?;
                    comps.push((lo, hi));
                }
                ComponentDto::Points(v) => comps.extend(v.into_iter().map(|p| (p.clone(), p))),
            }
        }
        let tail = match dto.tail {
            TailDto::Ray { start } => ScaleTail::Ray { start },
            TailDto::Arithmetic { start, step } => ScaleTail::Arithmetic { start, step },
            TailDto::Periodic {
                start,
                period,
                block,
            } => ScaleTail::Periodic {
                start,
                period,
                block: block.into_iter().map(|b| (b.0, b.1)).collect(),
            },
        };
        let scale = TimeScale::new(comps, tail)?;
        if let Some(min) = dto.min {
            if &min != scale.min_point() {
                return construction(format!(
                    "declared min {} differs from the least point {}",
                    rational::format(&min),
                    rational::format(scale.min_point())
                ));
            }
        }
        Ok(scale)
    }
}

impl From<&TimeScale> for TimeScaleDto {
    fn from(t: &TimeScale) -> TimeScaleDto {
        let mut components = Vec::new();
        let mut points: Vec<Rational> = Vec::new();
        for (lo, hi) in &t.components {
            if lo == hi {
                points.push(lo.clone());
            } else {
                if !points.is_empty() {
                    components.push(ComponentDto::Points(std::mem::take(&mut points)));
                }
                components.push(ComponentDto::Interval(vec![lo.clone(), hi.clone()]));
            }
        }
        if !points.is_empty() {
            components.push(ComponentDto::Points(points));
        }
        let tail = match &t.tail {
            ScaleTail::Ray { start } => TailDto::Ray {
                start: start.clone(),
            },
            ScaleTail::Arithmetic { start, step } => TailDto::Arithmetic {
                start: start.clone(),
                step: step.clone(),
            },
            ScaleTail::Periodic {
                start,
                period,
                block,
            } => TailDto::Periodic {
                start: start.clone(),
                period: period.clone(),
                block: block
                    .iter()
                    .map(|(a, b)| BlockDto(a.clone(), b.clone()))
                    .collect(),
            },
        };
        TimeScaleDto {
            min: Some(t.min_point().clone()),
            components,
            tail,
        }
    }
}

impl Serialize for TimeScale {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TimeScaleDto::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TimeScale {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = TimeScaleDto::deserialize(d)?;
        TimeScale::try_from(dto).map_err(serde::de::Error::custom)
    }
}
