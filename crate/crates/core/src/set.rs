//! Δ-measurable subsets of a time scale in a closed structural class.
//!
//! A set is stored as `((P ∩ T) \ N) ∪ ⋃ᵢ (Fᵢ ∩ Mᵢ)` where `P` and every mask
//! `Mᵢ` are eventually periodic real sets, the `Fᵢ` are pairwise
//! disjoint quadratic point families and `N = ⋃ᵢ Fᵢ`. Boolean operations act
//! pointwise on `P` and on the masks, which keeps the class closed under
//! union, intersection, difference and complement.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{construction, domain, Error, Result};
use crate::interval::{Interval, IntervalKind, IntervalUnion};
use crate::measure::aligned_frame;
use crate::periodic::PeriodicSet;
use crate::rational::{self, frac, Rational, TimePoint};
use crate::sparse::{Hits, QuadraticFamily};
use crate::timescale::TimeScale;

/// One input piece of a [`DeltaSet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    /// The scale interval `{t ∈ T : a ⋈ t ⋈ b}`.
    Interval {
        kind: IntervalKind,
        a: TimePoint,
        b: TimePoint,
    },
    SinglePoint(TimePoint),
    SparsePointFamily(QuadraticFamily),
    /// `⋃_{n≥0} (start + n·period + block) ∩ T`, block given relative to `[0, period)`.
    PeriodicPattern {
        start: TimePoint,
        period: Rational,
        block: Vec<Interval>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseTerm {
    pub family: QuadraticFamily,
    pub mask: PeriodicSet,
}

#[derive(Debug, Clone)]
pub struct DeltaSet {
    scale: Arc<TimeScale>,
    base: PeriodicSet,
    terms: Vec<SparseTerm>,
}

impl PartialEq for DeltaSet {
    /// Semantic equality of the underlying point sets.
    fn eq(&self, other: &Self) -> bool {
        self.same_scale(other)
            && self
                .symmetric_difference(other)
                .and_then(|d| d.is_empty())
                .unwrap_or(false)
    }
}

impl DeltaSet {
    fn raw(scale: &Arc<TimeScale>, base: PeriodicSet, terms: Vec<SparseTerm>) -> DeltaSet {
        DeltaSet {
            scale: scale.clone(),
            base,
            terms,
        }
    }

    pub fn empty(scale: &Arc<TimeScale>) -> DeltaSet {
        Self::raw(scale, PeriodicSet::empty(), Vec::new())
    }

    /// The whole scale `T`.
    pub fn full(scale: &Arc<TimeScale>) -> DeltaSet {
        Self::raw(
            scale,
            PeriodicSet::ray(scale.min_point().clone(), true),
            Vec::new(),
        )
    }

    /// Any eventually periodic real set, intersected with the scale.
    pub fn from_periodic(scale: &Arc<TimeScale>, set: &PeriodicSet) -> DeltaSet {
        Self::raw(scale, tidy(scale, set.clone()), Vec::new())
    }

    /// The scale interval with the given endpoint convention.
    pub fn interval(
        scale: &Arc<TimeScale>,
        kind: IntervalKind,
        a: TimePoint,
        b: TimePoint,
    ) -> DeltaSet {
        let iv = IntervalUnion::single(Interval::new(kind, a, b));
        Self::from_periodic(scale, &PeriodicSet::bounded(iv))
    }

    /// `{t ∈ T : t ≥ x}` or `{t ∈ T : t > x}`.
    pub fn ray(scale: &Arc<TimeScale>, x: Rational, closed: bool) -> DeltaSet {
        Self::from_periodic(scale, &PeriodicSet::ray(x, closed))
    }

    pub fn point(scale: &Arc<TimeScale>, t: TimePoint) -> Result<DeltaSet> {
        if !scale.contains(&t) {
            return domain(format!(
                "point {} is not in the scale",
                rational::format(&t)
            ));
        }
        Ok(Self::interval(scale, IntervalKind::Closed, t.clone(), t))
    }

    pub fn periodic_pattern(
        scale: &Arc<TimeScale>,
        start: TimePoint,
        period: Rational,
        block: Vec<Interval>,
    ) -> Result<DeltaSet> {
        if period <= Rational::zero() {
            return construction("periodic pattern needs a positive period");
        }
        let set = PeriodicSet::periodic(
            IntervalUnion::empty(),
            start,
            period,
            IntervalUnion::from_intervals(block),
        );
        Ok(Self::from_periodic(scale, &set))
    }

    /// The image of a point family; every image point must lie in the scale.
    pub fn sparse(scale: &Arc<TimeScale>, family: QuadraticFamily) -> Result<DeltaSet> {
        let lower = scale.min_point().clone().min(family.c0.clone()) - Rational::one();
        let outside = PeriodicSet::ray(lower, true).difference(scale.as_periodic_set());
        if family.meets(&outside)? {
            return construction("sparse family leaves the scale");
        }
        if !family.is_quadratic() {
            // an arithmetic progression is periodic
            let set = PeriodicSet::periodic(
                IntervalUnion::empty(),
                family.c0.clone(),
                family.c1.clone(),
                IntervalUnion::single(Interval::point(Rational::zero())),
            );
            return Ok(Self::from_periodic(scale, &set));
        }
        let mask = scale.as_periodic_set().clone();
        Ok(Self::raw(
            scale,
            PeriodicSet::empty(),
            vec![SparseTerm { family, mask }],
        ))
    }

    pub fn from_piece(scale: &Arc<TimeScale>, piece: &Piece) -> Result<DeltaSet> {
        match piece {
            Piece::Interval { kind, a, b } => {
                Ok(Self::interval(scale, *kind, a.clone(), b.clone()))
            }
            Piece::SinglePoint(t) => Self::point(scale, t.clone()),
            Piece::SparsePointFamily(f) => Self::sparse(scale, f.clone()),
            Piece::PeriodicPattern {
                start,
                period,
                block,
            } => Self::periodic_pattern(scale, start.clone(), period.clone(), block.clone()),
        }
    }

    pub fn from_pieces(scale: &Arc<TimeScale>, pieces: &[Piece]) -> Result<DeltaSet> {
        pieces.iter().try_fold(Self::empty(scale), |acc, p| {
            acc.union(&Self::from_piece(scale, p)?)
        })
    }

    pub fn scale(&self) -> &Arc<TimeScale> {
        &self.scale
    }

    pub fn base(&self) -> &PeriodicSet {
        &self.base
    }

    pub fn terms(&self) -> &[SparseTerm] {
        &self.terms
    }

    pub fn same_scale(&self, other: &DeltaSet) -> bool {
        Arc::ptr_eq(&self.scale, &other.scale) || self.scale == other.scale
    }

    /// The pieces of `P ∩ T` in order, each snapped onto the scale.
    fn scale_pieces(&self) -> impl Iterator<Item = Interval> + '_ {
        let head = self.base.head().intervals().iter().cloned();
        let cells = self.base.tail().into_iter().flat_map(|tail| {
            (0u64..).flat_map(move |n| {
                let at = &tail.start + Rational::from_integer(n.into()) * &tail.period;
                tail.block.translate(&at).into_intervals()
            })
        });
        head.chain(cells).filter_map(|iv| self.scale.snap(&iv))
    }

    /// A point of a snapped piece that no family claims.
    fn point_in(&self, iv: &Interval) -> Option<TimePoint> {
        let free = |t: &Rational| self.family_of(t).is_none();
        let mut x = iv.lo.clone();
        let mut closed = iv.lo_closed;
        for _ in 0..64 {
            if closed && iv.contains(&x) && free(&x) {
                return Some(x);
            }
            let next = self.scale.sigma_unchecked(&x);
            if next > x {
                if !iv.contains(&next) {
                    return None;
                }
                x = next;
                closed = true;
                continue;
            }
            // right-dense: halve towards x until the point is free
            let mut q = &x + (&iv.hi - &x).min(Rational::one()) * frac(1, 2);
            for _ in 0..64 {
                if self.scale.contains(&q) && free(&q) {
                    return Some(q);
                }
                q = &x + (&q - &x) * frac(1, 2);
            }
            return None;
        }
        None
    }

    fn family_of(&self, t: &Rational) -> Option<&SparseTerm> {
        self.terms.iter().find(|term| term.family.contains(t))
    }

    pub fn contains(&self, t: &Rational) -> bool {
        if !self.scale.contains(t) {
            return false;
        }
        match self.family_of(t) {
            Some(term) => term.mask.contains(t),
            None => self.base.contains(t),
        }
    }

    fn combine(
        &self,
        other: &DeltaSet,
        op: impl Fn(&PeriodicSet, &PeriodicSet) -> PeriodicSet,
    ) -> Result<DeltaSet> {
        if !self.same_scale(other) {
            return construction("set operation across different scales");
        }
        let mut families: Vec<QuadraticFamily> =
            self.terms.iter().map(|t| t.family.clone()).collect();
        for t in &other.terms {
            if !families.contains(&t.family) {
                if let Some(clash) = families.iter().find(|f| !f.provably_disjoint(&t.family)) {
                    return construction(format!(
                        "sparse families {:?} and {:?} are not provably disjoint",
                        clash, t.family
                    ));
                }
                families.push(t.family.clone());
            }
        }
        let mask_in = |s: &DeltaSet, f: &QuadraticFamily| -> PeriodicSet {
            s.terms
                .iter()
                .find(|t| &t.family == f)
                .map(|t| t.mask.clone())
                .unwrap_or_else(|| s.base.clone())
        };
        let base = op(&self.base, &other.base);
        let terms = families
            .into_iter()
            .map(|f| {
                let mask = op(&mask_in(self, &f), &mask_in(other, &f));
                SparseTerm { family: f, mask }
            })
            .collect();
        Self::raw(&self.scale, base, terms).normalized()
    }

    fn normalized(mut self) -> Result<DeltaSet> {
        self.base = tidy(&self.scale, self.base.compact());
        let mut kept = Vec::with_capacity(self.terms.len());
        for mut term in std::mem::take(&mut self.terms) {
            term.mask = term.mask.compact();
            let disagreement = term.mask.symmetric_difference(&self.base);
            if term.family.meets(&disagreement)? {
                kept.push(term);
            }
        }
        self.terms = kept;
        Ok(self)
    }

    pub fn union(&self, other: &DeltaSet) -> Result<DeltaSet> {
        self.combine(other, PeriodicSet::union)
    }

    pub fn intersection(&self, other: &DeltaSet) -> Result<DeltaSet> {
        self.combine(other, PeriodicSet::intersect)
    }

    pub fn difference(&self, other: &DeltaSet) -> Result<DeltaSet> {
        self.combine(other, PeriodicSet::difference)
    }

    pub fn symmetric_difference(&self, other: &DeltaSet) -> Result<DeltaSet> {
        self.difference(other)?.union(&other.difference(self)?)
    }

    /// `T \ self`.
    pub fn complement(&self) -> Result<DeltaSet> {
        Self::full(&self.scale).difference(self)
    }

    pub fn is_empty(&self) -> Result<bool> {
        for term in &self.terms {
            if term.family.meets(&term.mask)? {
                return Ok(false);
            }
        }
        if self.base.tail().is_some() {
            // an infinite periodic set is never covered by finitely many sparse families
            return Ok(false);
        }
        for iv in self
            .base
            .head()
            .intervals()
            .iter()
            .filter_map(|iv| self.scale.snap(iv))
        {
            if !iv.is_point() || self.family_of(&iv.lo).is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_subset(&self, other: &DeltaSet) -> Result<bool> {
        self.difference(other)?.is_empty()
    }

    /// True when the set has an upper bound.
    pub fn is_bounded(&self) -> Result<bool> {
        if !self.base.is_bounded() {
            return Ok(false);
        }
        for term in &self.terms {
            if term.family.hits(&term.mask)? == Hits::Infinite {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `A(t) = {s ∈ A : s ≤ t}` as a bounded set without sparse terms.
    pub fn restrict(&self, t: &TimePoint) -> Result<DeltaSet> {
        if !self.scale.contains(t) {
            return domain(format!(
                "restrict: {} is not a point of the scale",
                rational::format(t)
            ));
        }
        let a = self.scale.min_point();
        let mut head = self.base.unroll_closed(a, t);
        for term in &self.terms {
            for p in term.family.points_up_to(t) {
                let pt = IntervalUnion::single(Interval::point(p.clone()));
                head = if term.mask.contains(&p) {
                    head.union(&pt)
                } else {
                    head.difference(&pt)
                };
            }
        }
        Ok(Self::raw(
            &self.scale,
            PeriodicSet::bounded(head),
            Vec::new(),
        ))
    }

    /// Boundary points of the set inside `[lo, hi]`: interval endpoints of the
    /// periodic part and family points. Between consecutive boundary points the
    /// set is either entirely present or entirely absent.
    pub fn boundary_points(&self, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self
            .base
            .unroll_closed(lo, hi)
            .endpoints()
            .cloned()
            .collect();
        for term in &self.terms {
            let k0 = term.family.first_index_at_or_after(lo);
            pts.extend((k0..).map(|k| term.family.point(k)).take_while(|p| p <= hi));
            let masks = term.mask.unroll_closed(lo, hi);
            pts.extend(masks.endpoints().cloned());
        }
        pts.retain(|p| p >= lo && p <= hi);
        pts.sort();
        pts.dedup();
        pts
    }

    /// Greatest lower bound, or `None` for the empty set.
    pub fn infimum(&self) -> Result<Option<Rational>> {
        let mut best = self.scale_pieces().next().map(|iv| iv.lo);
        for term in &self.terms {
            if let Some(p) = term.family.first_hit(&term.mask)? {
                best = Some(match best {
                    Some(b) if b <= p => b,
                    _ => p,
                });
            }
        }
        Ok(best)
    }

    /// Least upper bound of a bounded set, or `None` if empty or unbounded.
    pub fn supremum(&self) -> Result<Option<Rational>> {
        if !self.is_bounded()? {
            return Ok(None);
        }
        let mut best = self
            .base
            .head()
            .intervals()
            .iter()
            .rev()
            .find_map(|iv| self.scale.snap(iv))
            .map(|iv| iv.hi);
        for term in &self.terms {
            if let Hits::Finite(v) = term.family.hits(&term.mask)? {
                if let Some(p) = v.last() {
                    best = Some(match best {
                        Some(b) if &b >= p => b,
                        _ => p.clone(),
                    });
                }
            }
        }
        Ok(best)
    }

    /// A deterministic element: the least element when one exists, otherwise a
    /// point just inside the first interval of the set.
    pub fn sample_point(&self) -> Result<Option<TimePoint>> {
        let mut family_pick: Option<Rational> = None;
        for term in &self.terms {
            if let Some(p) = term.family.first_hit(&term.mask)? {
                if family_pick.as_ref().map_or(true, |b| &p < b) {
                    family_pick = Some(p);
                }
            }
        }
        let mut base_pick: Option<Rational> = None;
        for iv in self.scale_pieces().take(4096) {
            if let Some(p) = self.point_in(&iv) {
                base_pick = Some(p);
                break;
            }
        }
        Ok(match (family_pick, base_pick) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        })
    }
}

/// Drops a periodic part that never meets the scale, keeping what lies before it.
fn tidy(scale: &TimeScale, base: PeriodicSet) -> PeriodicSet {
    let Some((start, period)) = aligned_frame(scale, &base) else {
        return base;
    };
    let end = &start + &period;
    if base
        .unroll(&start, &end)
        .intervals()
        .iter()
        .any(|iv| scale.snap(iv).is_some())
    {
        return base;
    }
    let from = base.inf().expect("non-empty tail");
    PeriodicSet::bounded(base.unroll(&from, &start))
}

// ---------------------------------------------------------------------------
// JSON form

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct IntervalDto {
    pub kind: IntervalKind,
    #[serde(with = "rational::serde_q")]
    pub a: Rational,
    #[serde(with = "rational::serde_q")]
    pub b: Rational,
}

impl From<&Interval> for IntervalDto {
    fn from(iv: &Interval) -> Self {
        IntervalDto {
            kind: iv.kind(),
            a: iv.lo.clone(),
            b: iv.hi.clone(),
        }
    }
}

impl From<&IntervalDto> for Interval {
    fn from(d: &IntervalDto) -> Self {
        Interval::new(d.kind, d.a.clone(), d.b.clone())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub(crate) enum PieceDto {
    Interval(IntervalDto),
    Point(#[serde(with = "rational::serde_q")] Rational),
    Sparse(QuadraticFamily),
    Periodic {
        #[serde(with = "rational::serde_q")]
        start: Rational,
        #[serde(with = "rational::serde_q")]
        period: Rational,
        block: Vec<IntervalDto>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct FamilyDto {
    pub family: QuadraticFamily,
    pub mask: Vec<PieceDto>,
}

/// Serialized form of a [`DeltaSet`]; the scale may be omitted when the
/// surrounding document supplies it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaSetDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<TimeScale>,
    #[serde(default)]
    pieces: Vec<PieceDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    families: Vec<FamilyDto>,
}

fn piece_from_dto(p: &PieceDto) -> Result<Piece> {
    Ok(match p {
        PieceDto::Interval(d) => Piece::Interval {
            kind: d.kind,
            a: d.a.clone(),
            b: d.b.clone(),
        },
        PieceDto::Point(t) => Piece::SinglePoint(t.clone()),
        PieceDto::Sparse(f) => Piece::SparsePointFamily(QuadraticFamily::new(
            f.c2.clone(),
            f.c1.clone(),
            f.c0.clone(),
        )?),
        PieceDto::Periodic {
            start,
            period,
            block,
        } => Piece::PeriodicPattern {
            start: start.clone(),
            period: period.clone(),
            block: block.iter().map(Interval::from).collect(),
        },
    })
}

fn periodic_to_pieces(set: &PeriodicSet) -> Vec<PieceDto> {
    let mut out: Vec<PieceDto> = set
        .head()
        .intervals()
        .iter()
        .map(|iv| PieceDto::Interval(iv.into()))
        .collect();
    if let Some(t) = set.tail() {
        out.push(PieceDto::Periodic {
            start: t.start.clone(),
            period: t.period.clone(),
            block: t.block.intervals().iter().map(IntervalDto::from).collect(),
        });
    }
    out
}

impl DeltaSetDto {
    pub fn has_scale(&self) -> bool {
        self.scale.is_some()
    }

    pub fn into_set(self, fallback: Option<&Arc<TimeScale>>) -> Result<DeltaSet> {
        let scale = match (self.scale, fallback) {
            (Some(s), _) => Arc::new(s),
            (None, Some(s)) => s.clone(),
            (None, None) => return construction("set has no scale"),
        };
        let pieces = self
            .pieces
            .iter()
            .map(piece_from_dto)
            .collect::<Result<Vec<_>>>()?;
        let mut set = DeltaSet::from_pieces(&scale, &pieces)?;
        for fam in &self.families {
            let family = QuadraticFamily::new(
                fam.family.c2.clone(),
                fam.family.c1.clone(),
                fam.family.c0.clone(),
            )?;
            let fam_set = DeltaSet::sparse(&scale, family)?;
            let mask_pieces = fam
                .mask
                .iter()
                .map(piece_from_dto)
                .collect::<Result<Vec<_>>>()?;
            let mask = DeltaSet::from_pieces(&scale, &mask_pieces)?;
            set = set
                .difference(&fam_set)?
                .union(&fam_set.intersection(&mask)?)?;
        }
        Ok(set)
    }

    pub fn from_set(set: &DeltaSet, with_scale: bool) -> DeltaSetDto {
        DeltaSetDto {
            scale: with_scale.then(|| (*set.scale).clone()),
            pieces: periodic_to_pieces(&set.base),
            families: set
                .terms
                .iter()
                .map(|t| FamilyDto {
                    family: t.family.clone(),
                    mask: periodic_to_pieces(&t.mask),
                })
                .collect(),
        }
    }
}

impl Serialize for DeltaSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DeltaSetDto::from_set(self, true).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DeltaSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = DeltaSetDto::deserialize(d)?;
        dto.into_set(None).map_err(serde::de::Error::custom)
    }
}

impl From<Error> for String {
    fn from(e: Error) -> String {
        e.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn nat() -> Arc<TimeScale> {
        Arc::new(TimeScale::naturals())
    }

    fn ray0() -> Arc<TimeScale> {
        Arc::new(TimeScale::ray(int(0)))
    }

    fn evens(s: &Arc<TimeScale>) -> DeltaSet {
        DeltaSet::periodic_pattern(s, int(0), int(2), vec![Interval::point(int(0))]).unwrap()
    }

    fn squares(s: &Arc<TimeScale>) -> DeltaSet {
        DeltaSet::sparse(s, QuadraticFamily::new(int(1), int(0), int(0)).unwrap()).unwrap()
    }

    #[test]
    fn scale_intervals_follow_the_scale() {
        let s = nat();
        let a = DeltaSet::interval(&s, IntervalKind::ClosedOpen, int(2), int(5));
        assert!(a.contains(&int(2)) && a.contains(&int(4)));
        assert!(!a.contains(&int(5)) && !a.contains(&frac(5, 2)));
    }

    #[test]
    fn restrict_unrolls_patterns() {
        let s = nat();
        let r = evens(&s).restrict(&int(7)).unwrap();
        let expect =
            DeltaSet::from_pieces(&s, &[0, 2, 4, 6].map(|k| Piece::SinglePoint(int(k)))).unwrap();
        assert_eq!(r, expect);
        let ray = ray0();
        let blocks = DeltaSet::periodic_pattern(
            &ray,
            int(0),
            int(2),
            vec![Interval::closed(int(0), int(1))],
        )
        .unwrap();
        let r = blocks.restrict(&int(3)).unwrap();
        let expect = DeltaSet::interval(&ray, IntervalKind::Closed, int(0), int(1))
            .union(&DeltaSet::interval(
                &ray,
                IntervalKind::Closed,
                int(2),
                int(3),
            ))
            .unwrap();
        assert_eq!(r, expect);
        assert!(r.is_bounded().unwrap());
    }

    #[test]
    fn restrict_at_min_point() {
        let s = nat();
        let r = evens(&s).restrict(&int(0)).unwrap();
        assert_eq!(r, DeltaSet::point(&s, int(0)).unwrap());
    }

    #[test]
    fn sparse_terms_carry_their_own_membership() {
        let s = ray0();
        let sq = squares(&s);
        let full = DeltaSet::full(&s);
        let off = full.difference(&sq).unwrap();
        assert!(!off.contains(&int(4)));
        assert!(off.contains(&int(5)));
        assert!(off.contains(&frac(9, 2)));
        let back = off.union(&sq).unwrap();
        assert_eq!(back, full);
        assert!(
            back.terms().is_empty(),
            "redundant family terms are dropped"
        );
        assert!(!sq.is_bounded().unwrap());
        assert!(sq.restrict(&int(10)).unwrap().contains(&int(9)));
    }

    #[test]
    fn emptiness_and_subsets() {
        let s = nat();
        let sq = squares(&s);
        assert!(!sq.is_empty().unwrap());
        assert!(sq.difference(&sq).unwrap().is_empty().unwrap());
        assert!(sq.is_subset(&DeltaSet::full(&s)).unwrap());
        let ev = evens(&s);
        assert!(!sq.is_subset(&ev).unwrap());
        // even squares are exactly the squares of even numbers
        let even_sq = sq.intersection(&ev).unwrap();
        assert!(even_sq.contains(&int(16)) && !even_sq.contains(&int(9)));
    }

    #[test]
    fn points_outside_the_scale_are_rejected() {
        let s = nat();
        assert!(matches!(
            DeltaSet::point(&s, frac(1, 2)),
            Err(Error::Domain(_))
        ));
        let half = QuadraticFamily::new(int(1), int(0), frac(1, 2)).unwrap();
        assert!(DeltaSet::sparse(&s, half).is_err());
    }

    #[test]
    fn sample_points() {
        let s = ray0();
        let open = DeltaSet::interval(&s, IntervalKind::Open, int(1), int(3));
        assert_eq!(open.sample_point().unwrap(), Some(frac(3, 2)));
        let sq = squares(&s);
        let off = DeltaSet::full(&s).difference(&sq).unwrap();
        let p = off.sample_point().unwrap().unwrap();
        assert!(off.contains(&p));
        assert_eq!(sq.sample_point().unwrap(), Some(int(0)));
    }

    #[test]
    fn json_round_trip() {
        let s = ray0();
        let x =
            DeltaSet::periodic_pattern(&s, int(0), int(3), vec![Interval::closed(int(0), int(1))])
                .unwrap()
                .difference(&squares(&s))
                .unwrap();
        let json = serde_json::to_string(&x).unwrap();
        let back: DeltaSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
}
