//! Δ-density `δ_Δ(A) = lim μ_Δ(A(t)) / (σ(t) − a)`.
//!
//! On the supported class the limit always exists: after aligning a set with
//! the scale, `μ_Δ(A(t))` grows by a fixed amount per period, so the ratio
//! tends to (mass of `A` per period) / (mass of `T` per period). Sparse point
//! families change `μ_Δ(A(t))` by `O(√t)` and never affect the limit.

use std::io::Write;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::measure::{aligned_frame, cell_measure, horizon_measure, measure_up_to};
use crate::periodic::PeriodicSet;
use crate::rational::{self, Rational, TimePoint};
use crate::set::DeltaSet;
use crate::timescale::TimeScale;

/// Default number of significant digits in CSV output.
pub const CSV_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DensityResult {
    Exists {
        #[serde(with = "rational::serde_q")]
        value: Rational,
    },
    Oscillates {
        #[serde(with = "rational::serde_q")]
        liminf: Rational,
        #[serde(with = "rational::serde_q")]
        limsup: Rational,
    },
    NumericalBounds {
        #[serde(with = "rational::serde_q")]
        lower: Rational,
        #[serde(with = "rational::serde_q")]
        upper: Rational,
        #[serde(with = "rational::serde_q")]
        horizon: TimePoint,
    },
}

impl DensityResult {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            DensityResult::Exists { value } => Some(value),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value().is_some_and(Zero::is_zero)
    }
}

/// Density of an eventually periodic subset of the scale.
pub(crate) fn periodic_density(scale: &TimeScale, set: &PeriodicSet) -> Rational {
    match aligned_frame(scale, set) {
        None => Rational::zero(),
        Some((start, period)) => {
            let num = cell_measure(scale, set, &start, &period);
            let den = cell_measure(scale, scale.as_periodic_set(), &start, &period);
            num / den
        }
    }
}

pub fn density(set: &DeltaSet) -> DensityResult {
    DensityResult::Exists {
        value: periodic_density(set.scale(), set.base()),
    }
}

/// Density of `T \ A`.
pub fn complement_density(set: &DeltaSet) -> Result<DensityResult> {
    Ok(density(&set.complement()?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectorySample {
    #[serde(with = "rational::serde_q")]
    pub t: TimePoint,
    /// `μ_Δ(A(t))`
    #[serde(with = "rational::serde_q")]
    pub mu: Rational,
    /// `σ(t) − a`
    #[serde(with = "rational::serde_q")]
    pub den: Rational,
    #[serde(with = "rational::serde_q")]
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RatioTrajectory {
    pub samples: Vec<TrajectorySample>,
}

impl RatioTrajectory {
    pub fn ratios(&self) -> impl Iterator<Item = &Rational> {
        self.samples.iter().map(|s| &s.ratio)
    }

    /// CSV with header `t,mu,den,ratio` and values rendered to `digits` significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W, digits: usize) -> std::io::Result<()> {
        writeln!(w, "t,mu,den,ratio")?;
        for s in &self.samples {
            writeln!(
                w,
                "{},{},{},{}",
                rational::to_decimal(&s.t, digits),
                rational::to_decimal(&s.mu, digits),
                rational::to_decimal(&s.den, digits),
                rational::to_decimal(&s.ratio, digits)
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self, digits: usize) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, digits)
            .expect("writing to a vector");
        String::from_utf8(buf).expect("ascii output")
    }
}

pub(crate) fn check_horizons(scale: &TimeScale, horizons: &[TimePoint]) -> Result<()> {
    for w in horizons.windows(2) {
        if w[0] >= w[1] {
            return domain("horizons must be strictly increasing");
        }
    }
    if let Some(t) = horizons.iter().find(|t| !scale.contains(t)) {
        return domain(format!(
            "horizon {} is not a point of the scale",
            rational::format(t)
        ));
    }
    Ok(())
}

/// Exact ratios `μ_Δ(A(t)) / (σ(t) − a)` at each horizon.
pub fn ratio_trajectory(set: &DeltaSet, horizons: &[TimePoint]) -> Result<RatioTrajectory> {
    check_horizons(set.scale(), horizons)?;
    let mut samples = Vec::with_capacity(horizons.len());
    for t in horizons {
        let mu = measure_up_to(set, t)?;
        let den = horizon_measure(set.scale(), t)?;
        if den.is_zero() {
            return domain(format!(
                "σ({0}) − a = 0 at {0}; the ratio is undefined",
                rational::format(t)
            ));
        }
        let ratio = &mu / &den;
        samples.push(TrajectorySample {
            t: t.clone(),
            mu,
            den,
            ratio,
        });
    }
    Ok(RatioTrajectory { samples })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::interval::{Interval, IntervalKind};
    use crate::rational::{frac, int};

    fn exists(q: Rational) -> DensityResult {
        DensityResult::Exists { value: q }
    }

    fn example1(scale: &Arc<TimeScale>, l: i64, r: i64) -> DeltaSet {
        DeltaSet::periodic_pattern(
            scale,
            int(0),
            int(l + r),
            vec![Interval::closed(int(0), int(l))],
        )
        .unwrap()
    }

    #[test]
    fn evens_have_density_one_half() {
        let n = Arc::new(TimeScale::naturals());
        let evens =
            DeltaSet::periodic_pattern(&n, int(0), int(2), vec![Interval::point(int(0))]).unwrap();
        assert_eq!(density(&evens), exists(frac(1, 2)));
        assert_eq!(complement_density(&evens).unwrap(), exists(frac(1, 2)));
    }

    #[test]
    fn block_patterns_on_a_ray() {
        let r = Arc::new(TimeScale::ray(int(0)));
        assert_eq!(density(&example1(&r, 1, 2)), exists(frac(1, 3)));
        assert_eq!(
            complement_density(&example1(&r, 1, 2)).unwrap(),
            exists(frac(2, 3))
        );
        assert_eq!(density(&example1(&r, 3, 2)), exists(frac(3, 5)));
    }

    #[test]
    fn bounded_sets_have_density_zero() {
        let n = Arc::new(TimeScale::naturals());
        let b = DeltaSet::interval(&n, IntervalKind::Closed, int(0), int(1_000_000));
        assert_eq!(density(&b), exists(int(0)));
        assert_eq!(complement_density(&b).unwrap(), exists(int(1)));
    }

    #[test]
    fn trajectory_of_unit_blocks() {
        let r = Arc::new(TimeScale::ray(int(0)));
        let a = example1(&r, 1, 1);
        let tr = ratio_trajectory(&a, &[int(1), int(2), int(3), int(4)]).unwrap();
        let got: Vec<_> = tr.ratios().cloned().collect();
        assert_eq!(got, vec![int(1), frac(1, 2), frac(2, 3), frac(1, 2)]);
    }

    #[test]
    fn trajectory_edge_cases() {
        let n = Arc::new(TimeScale::naturals());
        let empty = DeltaSet::empty(&n);
        let tr = ratio_trajectory(&empty, &[int(1), int(5), int(9)]).unwrap();
        assert!(tr.ratios().all(Zero::is_zero));
        let full = DeltaSet::full(&n);
        let tr = ratio_trajectory(&full, &[int(0), int(5), int(9)]).unwrap();
        assert!(tr.ratios().all(|q| q == &int(1)));
        assert!(ratio_trajectory(&full, &[int(3), int(2)]).is_err());
        assert!(ratio_trajectory(&full, &[frac(1, 2)]).is_err());
        let r = Arc::new(TimeScale::ray(int(0)));
        assert!(ratio_trajectory(&DeltaSet::full(&r), &[int(0)]).is_err());
    }

    #[test]
    fn csv_layout() {
        let n = Arc::new(TimeScale::naturals());
        let evens =
            DeltaSet::periodic_pattern(&n, int(0), int(2), vec![Interval::point(int(0))]).unwrap();
        let csv = ratio_trajectory(&evens, &[int(2)])
            .unwrap()
            .to_csv(CSV_DIGITS);
        assert_eq!(csv, "t,mu,den,ratio\n2,2,3,0.666666666667\n");
    }
}
