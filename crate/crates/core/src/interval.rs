//! Bounded real intervals with open/closed endpoints and finite unions of them.

use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

/// Endpoint convention of an interval `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntervalKind {
    /// `[a,b)`
    #[serde(rename = "[)")]
    ClosedOpen,
    /// `(a,b)`
    #[serde(rename = "()")]
    Open,
    /// `(a,b]`
    #[serde(rename = "(]")]
    OpenClosed,
    /// `[a,b]`
    #[serde(rename = "[]")]
    Closed,
}

impl IntervalKind {
    pub fn from_flags(lo_closed: bool, hi_closed: bool) -> Self {
        match (lo_closed, hi_closed) {
            (true, false) => IntervalKind::ClosedOpen,
            (false, false) => IntervalKind::Open,
            (false, true) => IntervalKind::OpenClosed,
            (true, true) => IntervalKind::Closed,
        }
    }

    pub fn flags(self) -> (bool, bool) {
        match self {
            IntervalKind::ClosedOpen => (true, false),
            IntervalKind::Open => (false, false),
            IntervalKind::OpenClosed => (false, true),
            IntervalKind::Closed => (true, true),
        }
    }

    pub fn brackets(self) -> (char, char) {
        let (l, h) = self.flags();
        (if l { '[' } else { '(' }, if h { ']' } else { ')' })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(kind: IntervalKind, lo: Rational, hi: Rational) -> Self {
        let (lo_closed, hi_closed) = kind.flags();
        Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Self::new(IntervalKind::Closed, lo, hi)
    }

    pub fn closed_open(lo: Rational, hi: Rational) -> Self {
        Self::new(IntervalKind::ClosedOpen, lo, hi)
    }

    pub fn point(p: Rational) -> Self {
        Self::closed(p.clone(), p)
    }

    pub fn kind(&self) -> IntervalKind {
        IntervalKind::from_flags(self.lo_closed, self.hi_closed)
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Greater => true,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Less => false,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi && !self.is_empty()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        let above = if self.lo_closed {
            t >= &self.lo
        } else {
            t > &self.lo
        };
        let below = if self.hi_closed {
            t <= &self.hi
        } else {
            t < &self.hi
        };
        above && below
    }

    pub fn length(&self) -> Rational {
        if self.is_empty() {
            Rational::zero()
        } else {
            &self.hi - &self.lo
        }
    }

    pub fn translate(&self, by: &Rational) -> Interval {
        Interval {
            lo: &self.lo + by,
            hi: &self.hi + by,
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    /// `self \ other` as at most two pieces (possibly empty).
    pub fn subtract(&self, other: &Interval) -> [Interval; 2] {
        let left = Interval {
            lo: self.lo.clone(),
            hi: other.lo.clone(),
            lo_closed: self.lo_closed,
            hi_closed: !other.lo_closed,
        }
        .intersect(self);
        let right = Interval {
            lo: other.hi.clone(),
            hi: self.hi.clone(),
            lo_closed: !other.hi_closed,
            hi_closed: self.hi_closed,
        }
        .intersect(self);
        [left, right]
    }

    fn sort_key(&self) -> (&Rational, bool) {
        (&self.lo, !self.lo_closed)
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (l, h) = self.kind().brackets();
        write!(
            f,
            "{l}{},{}{h}",
            rational::format(&self.lo),
            rational::format(&self.hi)
        )
    }
}

/// Sorted, pairwise disjoint, non-empty, maximally merged intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalUnion(Vec<Interval>);

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion(Vec::new())
    }

    pub fn single(iv: Interval) -> Self {
        Self::from_intervals(vec![iv])
    }

    pub fn from_intervals(mut ivs: Vec<Interval>) -> Self {
        ivs.retain(|iv| !iv.is_empty());
        ivs.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            if let Some(cur) = out.last_mut() {
                let touches =
                    iv.lo < cur.hi || (iv.lo == cur.hi && (cur.hi_closed || iv.lo_closed));
                if touches {
                    match iv.hi.cmp(&cur.hi) {
                        Ordering::Greater => {
                            cur.hi = iv.hi;
                            cur.hi_closed = iv.hi_closed;
                        }
                        Ordering::Equal => cur.hi_closed |= iv.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        IntervalUnion(out)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    pub fn into_intervals(self) -> Vec<Interval> {
        self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        // binary search on the left endpoints
        let idx = self.0.partition_point(|iv| &iv.lo <= t);
        idx > 0 && self.0[idx - 1].contains(t)
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut all = self.0.clone();
        all.extend(other.0.iter().cloned());
        Self::from_intervals(all)
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let a = &self.0[i];
            let b = &other.0[j];
            let x = a.intersect(b);
            if !x.is_empty() {
                out.push(x);
            }
            let a_ends_first = match a.hi.cmp(&b.hi) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => !a.hi_closed || b.hi_closed,
            };
            if a_ends_first {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_intervals(out)
    }

    pub fn intersect_interval(&self, iv: &Interval) -> IntervalUnion {
        if iv.is_empty() {
            return IntervalUnion::empty();
        }
        let from = self.0.partition_point(|x| x.hi < iv.lo);
        let out = self.0[from..]
            .iter()
            .take_while(|x| x.lo <= iv.hi)
            .map(|x| x.intersect(iv))
            .filter(|x| !x.is_empty())
            .collect();
        IntervalUnion(out)
    }

    pub fn difference(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for a in &self.0 {
            // the `b` are sorted and disjoint, so only the rightmost remainder can still shrink
            let mut rest = Some(a.clone());
            let from = other.0.partition_point(|b| b.hi < a.lo);
            for b in other.0[from..].iter().take_while(|b| b.lo <= a.hi) {
                let Some(r) = rest.take() else { break };
                for p in r.subtract(b).into_iter().filter(|p| !p.is_empty()) {
                    if p.hi <= b.lo {
                        out.push(p);
                    } else {
                        rest = Some(p);
                    }
                }
            }
            out.extend(rest);
        }
        Self::from_intervals(out)
    }

    pub fn translate(&self, by: &Rational) -> IntervalUnion {
        IntervalUnion(self.0.iter().map(|iv| iv.translate(by)).collect())
    }

    pub fn inf(&self) -> Option<&Rational> {
        self.0.first().map(|iv| &iv.lo)
    }

    pub fn sup(&self) -> Option<&Rational> {
        self.0.last().map(|iv| &iv.hi)
    }

    /// Lebesgue length of the union.
    pub fn length(&self) -> Rational {
        self.0.iter().map(Interval::length).sum()
    }

    /// Endpoints of every interval, in order.
    pub fn endpoints(&self) -> impl Iterator<Item = &Rational> {
        self.0.iter().flat_map(|iv| [&iv.lo, &iv.hi])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn iv(kind: IntervalKind, a: i64, b: i64) -> Interval {
        Interval::new(kind, int(a), int(b))
    }

    #[test]
    fn merge_touching_pieces() {
        let u = IntervalUnion::from_intervals(vec![
            iv(IntervalKind::ClosedOpen, 0, 1),
            iv(IntervalKind::Closed, 1, 2),
            iv(IntervalKind::Open, 2, 3),
        ]);
        assert_eq!(u.intervals(), &[iv(IntervalKind::ClosedOpen, 0, 3)]);
        // [0,1) and (1,2] stay apart
        let v = IntervalUnion::from_intervals(vec![
            iv(IntervalKind::ClosedOpen, 0, 1),
            iv(IntervalKind::OpenClosed, 1, 2),
        ]);
        assert_eq!(v.intervals().len(), 2);
        assert!(!v.contains(&int(1)));
    }

    #[test]
    fn point_merges_into_open_neighbour() {
        let u = IntervalUnion::from_intervals(vec![
            Interval::point(int(1)),
            iv(IntervalKind::Open, 1, 2),
        ]);
        assert_eq!(u.intervals(), &[iv(IntervalKind::ClosedOpen, 1, 2)]);
    }

    #[test]
    fn difference_splits_around_points() {
        let a = IntervalUnion::single(iv(IntervalKind::Closed, 0, 4));
        let b = IntervalUnion::from_intervals(vec![
            Interval::point(int(1)),
            iv(IntervalKind::ClosedOpen, 2, 3),
        ]);
        let d = a.difference(&b);
        assert_eq!(
            d.intervals(),
            &[
                iv(IntervalKind::ClosedOpen, 0, 1),
                iv(IntervalKind::Open, 1, 2),
                iv(IntervalKind::Closed, 3, 4)
            ]
        );
        assert_eq!(d.length(), int(3));
    }

    #[test]
    fn intersection_keeps_shared_endpoint() {
        let a = IntervalUnion::single(iv(IntervalKind::Closed, 0, 2));
        let b = IntervalUnion::single(iv(IntervalKind::Closed, 2, 5));
        assert_eq!(a.intersect(&b).intervals(), &[Interval::point(int(2))]);
        let c = IntervalUnion::single(iv(IntervalKind::OpenClosed, 2, 5));
        assert!(a.intersect(&c).is_empty());
    }
}
