//! Brute-force enumeration of `μ_Δ(A(t))` at finite horizons.
//!
//! This module walks the connected pieces of the scale one at a time and
//! measures `A` inside each piece by Lebesgue length between breakpoints plus
//! the jump at the piece's right end. It shares no code with the closed-form
//! routines in [`crate::measure`] and serves as an independent check on them.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::density::{check_horizons, RatioTrajectory, TrajectorySample};
use crate::error::{domain, Result};
use crate::rational::{self, frac, Rational, TimePoint};
use crate::set::DeltaSet;
use crate::timescale::{ScaleTail, TimeScale};

/// One maximal connected piece `[lo, hi]` of the scale and the start of the next one.
#[derive(Debug, Clone)]
struct Piece {
    lo: Rational,
    hi: Rational,
    next: Rational,
}

/// Connected pieces of the scale meeting `(-∞, upto]`, in order.
fn pieces_up_to(scale: &TimeScale, upto: &Rational) -> Vec<Piece> {
    let mut raw: Vec<(Rational, Rational)> = scale.components().to_vec();
    let mut ray_from = None;
    match scale.tail() {
        ScaleTail::Ray { start } => ray_from = Some(start.clone()),
        ScaleTail::Arithmetic { start, step } => {
            let mut x = start.clone();
            while &x <= upto {
                raw.push((x.clone(), x.clone()));
                x += step;
            }
            raw.push((x.clone(), x));
        }
        ScaleTail::Periodic {
            start,
            period,
            block,
        } => {
            let mut base = start.clone();
            'cells: loop {
                for (lo, hi) in block {
                    let piece = (&base + lo, &base + hi);
                    let past = &piece.0 > upto;
                    raw.push(piece);
                    if past {
                        break 'cells;
                    }
                }
                base += period;
            }
        }
    }
    // blocks may touch across cells only if the block covers the whole period
    let mut merged: Vec<(Rational, Rational)> = Vec::new();
    for (lo, hi) in raw {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.clone().max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    let mut out = Vec::new();
    for (i, (lo, hi)) in merged.iter().enumerate() {
        if lo > upto {
            break;
        }
        let next = match merged.get(i + 1) {
            Some((n, _)) => n.clone(),
            None => match &ray_from {
                Some(r) => r.clone(),
                None => continue,
            },
        };
        out.push(Piece {
            lo: lo.clone(),
            hi: hi.clone(),
            next,
        });
    }
    if let Some(r) = ray_from {
        if &r <= upto {
            // a ray never ends; stretch it past the horizon
            let hi = upto + Rational::from_integer(BigInt::from(1));
            out.push(Piece {
                lo: r,
                next: hi.clone(),
                hi,
            });
        }
    }
    out
}

/// Accumulates `μ_Δ(A ∩ [a, t])` piece by piece, returning the value at every horizon.
fn walk(set: &DeltaSet, horizons: &[TimePoint]) -> Vec<(Rational, Rational)> {
    let scale = set.scale();
    let Some(last) = horizons.last() else {
        return Vec::new();
    };
    let pieces = pieces_up_to(scale, last);
    let mut breaks = set.boundary_points(scale.min_point(), last);
    breaks.reverse();
    let mut out = Vec::with_capacity(horizons.len());
    let mut hs = horizons.iter().peekable();
    let mut acc = Rational::zero();
    for piece in &pieces {
        // breakpoints strictly inside this piece
        let mut inner: Vec<Rational> = Vec::new();
        while breaks.last().is_some_and(|b| b <= &piece.hi) {
            let b = breaks.pop().expect("checked");
            if b > piece.lo && b < piece.hi {
                inner.push(b);
            }
        }
        let mut cuts = vec![piece.lo.clone()];
        cuts.extend(inner);
        cuts.push(piece.hi.clone());
        for w in cuts.windows(2) {
            let (x, y) = (&w[0], &w[1]);
            // horizons falling inside (x, y]
            while let Some(t) = hs.peek() {
                if *t > y || *t < x {
                    break;
                }
                let partial = if set.contains(&((x + *t) * frac(1, 2))) {
                    *t - x
                } else {
                    Rational::zero()
                };
                let jump = if *t == &piece.hi && set.contains(t) {
                    &piece.next - &piece.hi
                } else {
                    Rational::zero()
                };
                out.push(((*t).clone(), &acc + partial + jump));
                hs.next();
            }
            if x < y && set.contains(&((x + y) * frac(1, 2))) {
                acc += y - x;
            }
        }
        if set.contains(&piece.hi) {
            acc += &piece.next - &piece.hi;
        }
        if hs.peek().is_none() {
            break;
        }
    }
    out
}

/// The walk's own forward jump: the start of the next piece at a right end, else `t`.
fn oracle_sigma(scale: &TimeScale, t: &TimePoint) -> Rational {
    for piece in pieces_up_to(scale, t) {
        if &piece.lo <= t && t <= &piece.hi {
            return if t == &piece.hi {
                piece.next
            } else {
                t.clone()
            };
        }
    }
    unreachable!("horizon lies in the scale")
}

/// `μ_Δ(A(t))` by explicit enumeration.
pub fn enumerate_up_to(set: &DeltaSet, t: &TimePoint) -> Result<Rational> {
    if !set.scale().contains(t) {
        return domain(format!(
            "horizon {} is not a point of the scale",
            rational::format(t)
        ));
    }
    Ok(walk(set, std::slice::from_ref(t))
        .pop()
        .expect("one horizon")
        .1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HorizonReport {
    #[serde(with = "rational::serde_q")]
    pub horizon: TimePoint,
    #[serde(with = "rational::serde_q")]
    pub measure_a: Rational,
    #[serde(with = "rational::serde_q")]
    pub denom: Rational,
    #[serde(with = "rational::serde_q")]
    pub ratio: Rational,
}

/// Ratios at every horizon from a single walk over the scale.
pub fn reports(set: &DeltaSet, horizons: &[TimePoint]) -> Result<Vec<HorizonReport>> {
    check_horizons(set.scale(), horizons)?;
    let a = set.scale().min_point().clone();
    walk(set, horizons)
        .into_iter()
        .map(|(t, mu)| {
            let denom = oracle_sigma(set.scale(), &t) - &a;
            if denom.is_zero() {
                return domain(format!("σ({0}) − a = 0 at {0}", rational::format(&t)));
            }
            Ok(HorizonReport {
                ratio: &mu / &denom,
                horizon: t,
                measure_a: mu,
                denom,
            })
        })
        .collect()
}

/// The same samples as [`crate::density::ratio_trajectory`], computed by enumeration.
pub fn trajectory(set: &DeltaSet, horizons: &[TimePoint]) -> Result<RatioTrajectory> {
    let samples = reports(set, horizons)?
        .into_iter()
        .map(|r| TrajectorySample {
            t: r.horizon,
            mu: r.measure_a,
            den: r.denom,
            ratio: r.ratio,
        })
        .collect();
    Ok(RatioTrajectory { samples })
}

/// Running minimum and maximum of the ratios over the last half of the horizons.
pub fn estimate_density(set: &DeltaSet, horizons: &[TimePoint]) -> Result<(Rational, Rational)> {
    if horizons.len() < 10 {
        return domain("density estimation needs at least 10 horizons");
    }
    let reps = reports(set, horizons)?;
    let tail = &reps[reps.len() / 2..];
    let lo = tail
        .iter()
        .map(|r| &r.ratio)
        .min()
        .expect("non-empty")
        .clone();
    let hi = tail
        .iter()
        .map(|r| &r.ratio)
        .max()
        .expect("non-empty")
        .clone();
    Ok((lo, hi))
}

/// `count` scale points spread evenly up to roughly `until`, for use as horizons.
pub fn spread_horizons(scale: &TimeScale, until: &Rational, count: usize) -> Vec<TimePoint> {
    let a = scale.min_point();
    let mut out: Vec<TimePoint> = Vec::with_capacity(count);
    for i in 1..=count {
        let x = a + (until - a) * Rational::new(BigInt::from(i), BigInt::from(count));
        let p = scale.first_point_at_or_after(&x);
        if out.last().is_none_or(|q| q < &p) {
            out.push(p);
        }
    }
    out
}

/// Geometric horizons `a + base^k` for `k` in `0..count`, snapped to the scale.
pub fn geometric_horizons(scale: &TimeScale, base: u32, count: u32) -> Vec<TimePoint> {
    let a = scale.min_point();
    let mut out: Vec<TimePoint> = Vec::new();
    for k in 0..count {
        let x = a + Rational::from_integer(BigInt::from(base).pow(k));
        let p = scale.first_point_at_or_after(&x);
        if out.last().is_none_or(|q| q < &p) {
            out.push(p);
        }
    }
    out
}

/// Renders an approximate float for log output.
pub fn approx(q: &Rational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}
