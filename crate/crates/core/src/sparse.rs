//! Sparse point families `k ↦ c2·k² + c1·k + c0` (k ≥ 0).
//!
//! Membership of `p_k` in an eventually periodic set is itself periodic in
//! `k` once `p_k` passes the set's tail start, which makes intersections with
//! periodic data decidable by checking a finite window of indices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{construction, Error, Result};
use crate::periodic::PeriodicSet;
use crate::rational::{self, Rational, TimePoint};

/// Largest index period we are prepared to scan when deciding membership questions.
pub const MAX_INDEX_PERIOD: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticFamily {
    #[serde(with = "rational::serde_q")]
    pub c2: Rational,
    #[serde(with = "rational::serde_q")]
    pub c1: Rational,
    #[serde(with = "rational::serde_q")]
    pub c0: Rational,
}

/// Points of a family that fall inside some set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hits {
    Finite(Vec<TimePoint>),
    Infinite,
}

impl QuadraticFamily {
    pub fn new(c2: Rational, c1: Rational, c0: Rational) -> Result<QuadraticFamily> {
        if c2.is_negative() {
            return construction("sparse family needs c2 >= 0");
        }
        // p_{k+1} - p_k = c2 (2k + 1) + c1 > 0 for all k >= 0
        if !(&c2 + &c1).is_positive() {
            return construction("sparse family must be strictly increasing (c2 + c1 > 0)");
        }
        Ok(QuadraticFamily { c2, c1, c0 })
    }

    pub fn is_quadratic(&self) -> bool {
        self.c2.is_positive()
    }

    pub fn point(&self, k: u64) -> TimePoint {
        let k = Rational::from_integer(BigInt::from(k));
        &self.c2 * &k * &k + &self.c1 * &k + &self.c0
    }

    /// Points `p_k ≤ t`, in increasing order.
    pub fn points_up_to<'a>(&'a self, t: &'a Rational) -> impl Iterator<Item = TimePoint> + 'a {
        (0u64..)
            .map(move |k| self.point(k))
            .take_while(move |p| p <= t)
    }

    /// Index `k` with `p_k = t`, if any.
    pub fn index_of(&self, t: &Rational) -> Option<u64> {
        if t < &self.c0 {
            return None;
        }
        if self.c2.is_zero() {
            let k = (t - &self.c0) / &self.c1;
            return if k.is_integer() {
                k.to_integer().to_u64()
            } else {
                None
            };
        }
        // c2 k² + c1 k + (c0 - t) = 0
        let disc = &self.c1 * &self.c1
            - Rational::from_integer(BigInt::from(4)) * &self.c2 * (&self.c0 - t);
        let root = rational_sqrt(&disc)?;
        let k = (root - &self.c1) / (Rational::from_integer(BigInt::from(2)) * &self.c2);
        if k.is_integer() && !k.is_negative() {
            k.to_integer().to_u64()
        } else {
            None
        }
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.index_of(t).is_some()
    }

    /// First index with `p_k ≥ x`.
    pub fn first_index_at_or_after(&self, x: &Rational) -> u64 {
        if x <= &self.c0 {
            return 0;
        }
        // p_k ≥ c0 + k·(c2 + c1) ≥ ..., so a bound exists; use exponential then binary search
        let mut hi: u64 = 1;
        while &self.point(hi) < x {
            hi *= 2;
        }
        let mut lo = hi / 2;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if &self.point(mid) < x {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Period in `k` of membership in a tail with the given period: the offset
    /// `(p_k - start) / period` is fixed modulo 1 under `k ↦ k + den`.
    fn index_period(&self, period: &Rational) -> Result<u64> {
        let alpha = &self.c2 / period;
        let beta = &self.c1 / period;
        let den = alpha.denom().lcm(beta.denom());
        den.to_u64()
            .filter(|d| *d <= MAX_INDEX_PERIOD)
            .ok_or_else(|| {
                Error::Undecided(format!(
                    "index period {den} of sparse family exceeds the scan budget"
                ))
            })
    }

    /// `{p_k} ∩ z`.
    pub fn hits(&self, z: &PeriodicSet) -> Result<Hits> {
        let mut found = Vec::new();
        match z.tail() {
            None => {
                let Some(sup) = z.sup().cloned() else {
                    return Ok(Hits::Finite(found));
                };
                for p in self.points_up_to(&sup) {
                    if z.contains(&p) {
                        found.push(p);
                    }
                }
                Ok(Hits::Finite(found))
            }
            Some(tail) => {
                let k0 = self.first_index_at_or_after(&tail.start);
                let e = self.index_period(&tail.period)?;
                for k in k0..k0 + e {
                    if z.contains(&self.point(k)) {
                        return Ok(Hits::Infinite);
                    }
                }
                for k in 0..k0 {
                    let p = self.point(k);
                    if z.contains(&p) {
                        found.push(p);
                    }
                }
                Ok(Hits::Finite(found))
            }
        }
    }

    pub fn meets(&self, z: &PeriodicSet) -> Result<bool> {
        Ok(match self.hits(z)? {
            Hits::Finite(v) => !v.is_empty(),
            Hits::Infinite => true,
        })
    }

    /// First point of the family inside `z`, if any.
    pub fn first_hit(&self, z: &PeriodicSet) -> Result<Option<TimePoint>> {
        if !self.meets(z)? {
            return Ok(None);
        }
        for k in 0u64.. {
            let p = self.point(k);
            if z.contains(&p) {
                return Ok(Some(p));
            }
        }
        unreachable!()
    }

    /// Exact proof that two families never share a point, by comparing residues
    /// of the scaled integer polynomials modulo small moduli.
    pub fn provably_disjoint(&self, other: &QuadraticFamily) -> bool {
        if self == other {
            return false;
        }
        let den = [
            &self.c2, &self.c1, &self.c0, &other.c2, &other.c1, &other.c0,
        ]
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let scale = Rational::from_integer(den);
        let ints = |f: &QuadraticFamily| -> [BigInt; 3] {
            [
                (&f.c2 * &scale).to_integer(),
                (&f.c1 * &scale).to_integer(),
                (&f.c0 * &scale).to_integer(),
            ]
        };
        let a = ints(self);
        let b = ints(other);
        let residues = |c: &[BigInt; 3], m: u64| -> Vec<bool> {
            let mb = BigInt::from(m);
            let mut seen = vec![false; m as usize];
            for k in 0..m {
                let kb = BigInt::from(k);
                let v = (&c[0] * &kb * &kb + &c[1] * &kb + &c[2]).mod_floor(&mb);
                seen[v.to_usize().expect("small residue")] = true;
            }
            seen
        };
        (2u64..=512).any(|m| {
            let ra = residues(&a, m);
            let rb = residues(&b, m);
            ra.iter().zip(&rb).all(|(x, y)| !(*x && *y))
        })
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{Interval, IntervalUnion};
    use crate::rational::{frac, int};

    fn squares() -> QuadraticFamily {
        QuadraticFamily::new(int(1), int(0), int(0)).unwrap()
    }

    #[test]
    fn inverse_index() {
        let f = squares();
        assert_eq!(f.index_of(&int(49)), Some(7));
        assert_eq!(f.index_of(&int(50)), None);
        let g = QuadraticFamily::new(frac(1, 2), frac(1, 2), int(0)).unwrap(); // triangular numbers
        assert_eq!(g.index_of(&int(10)), Some(4));
        assert_eq!(g.first_index_at_or_after(&int(11)), 5);
    }

    #[test]
    fn rejects_non_increasing() {
        assert!(QuadraticFamily::new(int(0), int(0), int(1)).is_err());
        assert!(QuadraticFamily::new(int(1), int(-1), int(0)).is_err());
    }

    #[test]
    fn hits_in_periodic_sets() {
        let f = squares();
        let evens = PeriodicSet::periodic(
            IntervalUnion::empty(),
            int(0),
            int(2),
            IntervalUnion::single(Interval::point(int(0))),
        );
        assert_eq!(f.hits(&evens).unwrap(), Hits::Infinite);
        // squares are never 2 or 3 mod 4
        let twos = PeriodicSet::periodic(
            IntervalUnion::empty(),
            int(0),
            int(4),
            IntervalUnion::from_intervals(vec![Interval::point(int(2)), Interval::point(int(3))]),
        );
        assert_eq!(f.hits(&twos).unwrap(), Hits::Finite(vec![]));
        let head = PeriodicSet::bounded(IntervalUnion::single(Interval::closed(int(2), int(20))));
        assert_eq!(
            f.hits(&head).unwrap(),
            Hits::Finite(vec![int(4), int(9), int(16)])
        );
    }

    #[test]
    fn disjointness_proofs() {
        let f = squares();
        let g = QuadraticFamily::new(int(1), int(0), int(2)).unwrap();
        assert!(f.provably_disjoint(&g));
        let h = QuadraticFamily::new(int(4), int(0), int(0)).unwrap();
        assert!(!f.provably_disjoint(&h));
        let half = QuadraticFamily::new(int(1), int(0), frac(1, 2)).unwrap();
        assert!(f.provably_disjoint(&half));
    }
}
