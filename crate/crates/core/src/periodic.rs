//! Eventually periodic subsets of the real line: a bounded head followed by a
//! block of intervals repeated with a fixed rational period.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::{Interval, IntervalKind, IntervalUnion};
use crate::rational::{self, floor_div, lcm, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tail {
    pub start: Rational,
    pub period: Rational,
    /// Offsets inside one cell, a subset of `[0, period)`.
    pub block: IntervalUnion,
}

/// `head ∪ ⋃_{n≥0} (start + n·period + block)`, with `head ⊂ (-∞, start)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PeriodicSet {
    head: IntervalUnion,
    tail: Option<Tail>,
}

fn cell(period: &Rational) -> Interval {
    Interval::closed_open(Rational::zero(), period.clone())
}

impl PeriodicSet {
    pub fn empty() -> Self {
        PeriodicSet::default()
    }

    pub fn bounded(head: IntervalUnion) -> Self {
        PeriodicSet { head, tail: None }
    }

    pub fn periodic(
        head: IntervalUnion,
        start: Rational,
        period: Rational,
        block: IntervalUnion,
    ) -> Self {
        assert!(period.is_positive(), "period must be positive");
        let head = head.intersect_interval(&Interval {
            lo: head
                .inf()
                .cloned()
                .unwrap_or_else(|| start.clone())
                .min(start.clone()),
            hi: start.clone(),
            lo_closed: true,
            hi_closed: false,
        });
        let block = block.intersect_interval(&cell(&period));
        let tail = if block.is_empty() {
            None
        } else {
            Some(Tail {
                start,
                period,
                block,
            })
        };
        PeriodicSet { head, tail }
    }

    /// `[x, ∞)` (or `(x, ∞)` when `closed` is false).
    pub fn ray(x: Rational, closed: bool) -> Self {
        let one = Rational::one();
        if closed {
            Self::periodic(
                IntervalUnion::empty(),
                x,
                one.clone(),
                IntervalUnion::single(cell(&one)),
            )
        } else {
            let next = &x + &one;
            let head = IntervalUnion::single(Interval::new(IntervalKind::Open, x, next.clone()));
            Self::periodic(head, next, one.clone(), IntervalUnion::single(cell(&one)))
        }
    }

    pub fn head(&self) -> &IntervalUnion {
        &self.head
    }

    pub fn tail(&self) -> Option<&Tail> {
        self.tail.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty() && self.tail.is_none()
    }

    pub fn is_bounded(&self) -> bool {
        self.tail.is_none()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        match &self.tail {
            Some(tail) if t >= &tail.start => {
                tail.block
                    .contains(&rational::phase(t, &tail.start, &tail.period))
            }
            _ => self.head.contains(t),
        }
    }

    pub fn inf(&self) -> Option<Rational> {
        if let Some(x) = self.head.inf() {
            return Some(x.clone());
        }
        self.tail
            .as_ref()
            .map(|t| &t.start + t.block.inf().expect("non-empty block"))
    }

    /// Supremum of a bounded set.
    pub fn sup(&self) -> Option<&Rational> {
        match self.tail {
            None => self.head.sup(),
            Some(_) => None,
        }
    }

    /// `self ∩ [lo, hi)` as a bounded union.
    pub fn unroll(&self, lo: &Rational, hi: &Rational) -> IntervalUnion {
        let window = Interval::closed_open(lo.clone(), hi.clone());
        if window.is_empty() {
            return IntervalUnion::empty();
        }
        let mut parts = self.head.intersect_interval(&window).into_intervals();
        if let Some(tail) = &self.tail {
            let from = lo.max(&tail.start).clone();
            if &from < hi && tail.block == IntervalUnion::single(cell(&tail.period)) {
                parts.push(Interval::closed_open(from, hi.clone()));
            } else if &from < hi {
                let first = floor_div(&(&from - &tail.start), &tail.period);
                let last = floor_div(&(hi - &tail.start), &tail.period);
                let mut n = first;
                while n <= last {
                    let base = &tail.start + Rational::from_integer(n.clone()) * &tail.period;
                    for iv in tail.block.intervals() {
                        let x = iv.translate(&base).intersect(&window);
                        if !x.is_empty() {
                            parts.push(x);
                        }
                    }
                    n += 1;
                }
            }
        }
        IntervalUnion::from_intervals(parts)
    }

    /// `self ∩ [lo, hi]`.
    pub fn unroll_closed(&self, lo: &Rational, hi: &Rational) -> IntervalUnion {
        let mut u = self.unroll(lo, hi);
        if lo <= hi && self.contains(hi) {
            u = u.union(&IntervalUnion::single(Interval::point(hi.clone())));
        }
        u
    }

    /// Re-express with a later start and a period that is a multiple of the current one.
    pub fn rebase(&self, start: &Rational, period: &Rational) -> PeriodicSet {
        let Some(tail) = &self.tail else {
            return self.clone();
        };
        debug_assert!(start >= &tail.start);
        debug_assert!(rational::is_multiple(period, &tail.period));
        let head = self.head.union(&self.unroll(&tail.start, start));
        let end = start + period;
        let block = self.unroll(start, &end).translate(&-start);
        PeriodicSet::periodic(head, start.clone(), period.clone(), block)
    }

    /// Common `(start, period)` frame for two sets; `None` when both are bounded.
    fn frame(&self, other: &PeriodicSet) -> Option<(Rational, Rational)> {
        let bound_of = |s: &PeriodicSet| s.head.sup().cloned();
        match (&self.tail, &other.tail) {
            (None, None) => None,
            (Some(a), None) => Some((
                pad_start(&a.start, &a.period, bound_of(other)),
                a.period.clone(),
            )),
            (None, Some(b)) => Some((
                pad_start(&b.start, &b.period, bound_of(self)),
                b.period.clone(),
            )),
            (Some(a), Some(b)) => {
                let period = lcm(&a.period, &b.period);
                Some((a.start.clone().max(b.start.clone()), period))
            }
        }
    }

    fn with_frame(&self, start: &Rational, period: &Rational) -> (IntervalUnion, IntervalUnion) {
        match &self.tail {
            Some(_) => {
                let r = self.rebase(start, period);
                let block = r.tail.map(|t| t.block).unwrap_or_default();
                (r.head, block)
            }
            None => (self.head.clone(), IntervalUnion::empty()),
        }
    }

    fn combine(
        &self,
        other: &PeriodicSet,
        op: impl Fn(&IntervalUnion, &IntervalUnion) -> IntervalUnion,
    ) -> PeriodicSet {
        match self.frame(other) {
            None => PeriodicSet::bounded(op(&self.head, &other.head)),
            Some((start, period)) => {
                let (ha, ba) = self.with_frame(&start, &period);
                let (hb, bb) = other.with_frame(&start, &period);
                PeriodicSet::periodic(op(&ha, &hb), start, period, op(&ba, &bb)).compact()
            }
        }
    }

    pub fn union(&self, other: &PeriodicSet) -> PeriodicSet {
        self.combine(other, IntervalUnion::union)
    }

    pub fn intersect(&self, other: &PeriodicSet) -> PeriodicSet {
        self.combine(other, IntervalUnion::intersect)
    }

    pub fn difference(&self, other: &PeriodicSet) -> PeriodicSet {
        self.combine(other, IntervalUnion::difference)
    }

    pub fn symmetric_difference(&self, other: &PeriodicSet) -> PeriodicSet {
        self.difference(other).union(&other.difference(self))
    }

    /// Semantic equality of the represented point sets.
    pub fn same_set(&self, other: &PeriodicSet) -> bool {
        self.symmetric_difference(other).is_empty()
    }

    /// Shrink the period and pull the tail start backwards where the data allows,
    /// so repeated algebra does not inflate the representation.
    pub fn compact(self) -> PeriodicSet {
        let Some(tail) = self.tail.clone() else {
            return self;
        };
        let mut period = tail.period.clone();
        let mut block = tail.block.clone();
        if block == IntervalUnion::single(cell(&period)) {
            // a full cell is a ray; fix its period at 1
            period = Rational::one();
            block = IntervalUnion::single(cell(&period));
        }
        // a rotation by period/k permutes the components of the block on the
        // circle, so only divisors of the component count can work
        let full = IntervalUnion::single(cell(&period));
        let ivs = block.intervals();
        let wraps = ivs.len() > 1
            && ivs[0].lo.is_zero()
            && ivs[0].lo_closed
            && ivs[ivs.len() - 1].hi == period;
        let components = ivs.len() - usize::from(wraps);
        let candidates = (2..=components).rev().filter(|k| components % k == 0);
        'outer: for k in candidates {
            if block == full {
                break;
            }
            let kq = Rational::from_integer(BigInt::from(k));
            let small = &period / &kq;
            let first = block.intersect_interval(&cell(&small));
            for j in 1..k {
                let off = &small * Rational::from_integer(BigInt::from(j));
                let window = Interval::closed_open(off.clone(), &off + &small);
                if block.intersect_interval(&window) != first.translate(&off) {
                    continue 'outer;
                }
            }
            period = small;
            block = first;
            break;
        }
        let mut start = tail.start.clone();
        // pull back one cell at a time while the head repeats the block
        for _ in 0..4096 {
            let prev = &start - &period;
            let window = Interval::closed_open(prev.clone(), start.clone());
            if self.head.intersect_interval(&window) != block.translate(&prev) {
                break;
            }
            start = prev;
        }
        let head = if start == tail.start {
            self.head
        } else {
            let absorbed = Interval::closed_open(start.clone(), tail.start.clone());
            self.head.difference(&IntervalUnion::single(absorbed))
        };
        PeriodicSet::periodic(head, start, period, block)
    }

    /// Measure-free description of the first point at or after `x`, if any.
    pub fn first_at_or_after(&self, x: &Rational) -> Option<Interval> {
        let probe = |u: &IntervalUnion| {
            u.intervals()
                .iter()
                .map(|iv| {
                    iv.intersect(&Interval {
                        lo: x.clone(),
                        hi: iv.hi.clone(),
                        lo_closed: true,
                        hi_closed: true,
                    })
                })
                .find(|iv| !iv.is_empty())
        };
        if let Some(iv) = probe(&self.head) {
            return Some(iv);
        }
        let tail = self.tail.as_ref()?;
        let from = x.max(&tail.start).clone();
        let n = floor_div(&(&from - &tail.start), &tail.period);
        for step in 0..2 {
            let base = &tail.start + Rational::from_integer(&n + step) * &tail.period;
            if let Some(iv) = probe(&tail.block.translate(&base)) {
                return Some(iv);
            }
        }
        None
    }

    /// Number of whole cells between `start` and `x`, clamped to `u64`.
    pub fn cells_before(&self, x: &Rational) -> u64 {
        match &self.tail {
            Some(t) if x > &t.start => floor_div(&(x - &t.start), &t.period)
                .to_u64()
                .unwrap_or(u64::MAX),
            _ => 0,
        }
    }
}

fn pad_start(start: &Rational, period: &Rational, bound: Option<Rational>) -> Rational {
    match bound {
        Some(b) if &b >= start => {
            let n = floor_div(&(&b - start), period) + 1;
            start + Rational::from_integer(n) * period
        }
        _ => start.clone(),
    }
}
