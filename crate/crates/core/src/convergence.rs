//! Deciding Δ-convergence and the Δ-Cauchy property.
//!
//! Both questions reduce to densities of exceptional sets
//! `{t : |f(t) − L| ≥ ε}`, which are exact on the supported class.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::density::{density, DensityResult};
use crate::error::{domain, Error, Result};
use crate::function::{Cmp, ScaleFunction};
use crate::rational::{self, two_pow_neg, Rational, TimePoint};
use crate::set::{DeltaSet, DeltaSetDto};

/// `1, 1/2, …, 2^-10`.
pub fn default_epsilons() -> Vec<Rational> {
    (0..=10).map(two_pow_neg).collect()
}

#[derive(Debug, Clone)]
pub enum LimitVerdict {
    DeltaLimit {
        limit: Rational,
        /// `ε ↦ {t : |f(t) − L| ≥ ε}`, each of density zero.
        witnesses: Vec<(Rational, DeltaSet)>,
    },
    NotDeltaConvergent {
        candidate: Rational,
        epsilon: Rational,
        exceptional: DeltaSet,
        density: DensityResult,
    },
    Undecided(String),
}

impl LimitVerdict {
    pub fn limit(&self) -> Option<&Rational> {
        match self {
            LimitVerdict::DeltaLimit { limit, .. } => Some(limit),
            _ => None,
        }
    }

    pub fn is_convergent(&self) -> bool {
        matches!(self, LimitVerdict::DeltaLimit { .. })
    }
}

#[derive(Debug, Clone)]
pub enum CauchyVerdict {
    /// For each ε, the least representative `t₀` that works.
    Cauchy {
        witnesses: Vec<(Rational, TimePoint)>,
    },
    NotCauchy {
        epsilon: Rational,
        /// Representatives tried, each leaving an exceptional set of positive density.
        tried: Vec<(TimePoint, DensityResult)>,
    },
    Undecided(String),
}

impl CauchyVerdict {
    pub fn is_cauchy(&self) -> bool {
        matches!(self, CauchyVerdict::Cauchy { .. })
    }
}

/// Sorted, deduplicated, decreasing ε list.
fn normalize_grid(mut eps: Vec<Rational>) -> Result<Vec<Rational>> {
    if eps.is_empty() {
        return domain("ε grid is empty");
    }
    if eps.iter().any(|e| !e.is_positive()) {
        return domain("every ε must be positive");
    }
    eps.sort_by(|a, b| b.cmp(a));
    eps.dedup();
    Ok(eps)
}

/// Limits of the rules on every non-empty region.
fn region_limits(f: &ScaleFunction) -> Result<Vec<Rational>> {
    Ok(f.regions()?
        .into_iter()
        .filter_map(|(_, r)| r.limit())
        .collect())
}

/// Adds `g/2` and `g/4` for every positive gap `g` between the given values.
fn augment(eps: &[Rational], values: &[Rational]) -> Result<Vec<Rational>> {
    let mut out = eps.to_vec();
    for a in values {
        for b in values {
            let g = (a - b).abs();
            if g.is_positive() {
                out.push(&g / rational::int(2));
                out.push(&g / rational::int(4));
            }
        }
    }
    normalize_grid(out)
}

fn undecided<T>(e: Error, wrap: impl FnOnce(String) -> T) -> Result<T> {
    match e {
        Error::Undecided(msg) => Ok(wrap(msg)),
        other => Err(other),
    }
}

/// The unique possible Δ-limit: the limit on the densest region, ties to the smallest.
pub fn candidate_limit(f: &ScaleFunction) -> Result<Rational> {
    let mut best: Option<(Rational, Option<Rational>)> = None;
    for (region, rule) in f.regions()? {
        let d = density(region)
            .value()
            .cloned()
            .unwrap_or_else(Rational::zero);
        let lim = rule.limit();
        best = match best {
            None => Some((d, lim)),
            Some((bd, bl)) => {
                if d > bd {
                    Some((d, lim))
                } else if d == bd {
                    let pick = match (&bl, &lim) {
                        (Some(x), Some(y)) => Some(x.clone().min(y.clone())),
                        (Some(x), None) => Some(x.clone()),
                        (None, y) => y.clone(),
                    };
                    Some((bd, pick))
                } else {
                    Some((bd, bl))
                }
            }
        };
    }
    let (_, lim) = best.expect("the regions cover the scale");
    // a diverging rule on the densest region rules out every L; any candidate will fail
    Ok(match lim {
        Some(l) => l,
        None => region_limits(f)?
            .into_iter()
            .min()
            .unwrap_or_else(Rational::zero),
    })
}

/// Decides `Δ-lim f = L` for the candidate `L` over the (augmented) ε grid.
pub fn delta_limit(f: &ScaleFunction, eps: &[Rational]) -> Result<LimitVerdict> {
    match delta_limit_inner(f, eps) {
        Ok(v) => Ok(v),
        Err(e) => undecided(e, LimitVerdict::Undecided),
    }
}

fn delta_limit_inner(f: &ScaleFunction, eps: &[Rational]) -> Result<LimitVerdict> {
    let grid = normalize_grid(eps.to_vec())?;
    let limit = candidate_limit(f)?;
    let mut values = region_limits(f)?;
    values.push(limit.clone());
    let grid = augment(&grid, &values)?;
    // half gaps between limits go first so a failure reports the natural ε
    let mut halves: Vec<Rational> = values
        .iter()
        .flat_map(|a| values.iter().map(move |b| (a - b).abs() / rational::int(2)))
        .filter(|g| g.is_positive())
        .collect();
    halves.sort_by(|a, b| b.cmp(a));
    halves.dedup();
    let order: Vec<Rational> = halves
        .iter()
        .cloned()
        .chain(grid.iter().filter(|e| !halves.contains(e)).cloned())
        .collect();
    let mut witnesses = Vec::with_capacity(order.len());
    for e in order {
        let ex = f.exceptional_set(&limit, &e)?;
        let d = density(&ex);
        if !d.is_zero() {
            return Ok(LimitVerdict::NotDeltaConvergent {
                candidate: limit,
                epsilon: e,
                exceptional: ex,
                density: d,
            });
        }
        witnesses.push((e, ex));
    }
    witnesses.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(LimitVerdict::DeltaLimit { limit, witnesses })
}

/// Candidate points `t₀` for the Cauchy test at tolerance `eps`, in increasing order.
pub(crate) fn representatives(f: &ScaleFunction, eps: &Rational) -> Result<Vec<TimePoint>> {
    let floor = f.scale_ref().min_point();
    let mut reps = Vec::new();
    for (region, rule) in f.regions()? {
        let near = match rule.limit() {
            Some(l) => {
                let half = eps / rational::int(2);
                let band = DeltaSet::from_periodic(
                    f.scale_ref(),
                    &rule.solve(Cmp::Gt, &(&l - &half), floor),
                )
                .intersection(&DeltaSet::from_periodic(
                    f.scale_ref(),
                    &rule.solve(Cmp::Lt, &(&l + &half), floor),
                ))?;
                region.intersection(&band)?
            }
            None => region.clone(),
        };
        for s in [&near, region] {
            if let Some(t) = s.sample_point()? {
                reps.push(t);
            }
        }
    }
    reps.sort();
    reps.dedup();
    Ok(reps)
}

/// Decides whether `f` is Δ-Cauchy over the (augmented) ε grid.
pub fn is_delta_cauchy(f: &ScaleFunction, eps: &[Rational]) -> Result<CauchyVerdict> {
    match cauchy_inner(f, eps) {
        Ok(v) => Ok(v),
        Err(e) => undecided(e, CauchyVerdict::Undecided),
    }
}

fn cauchy_inner(f: &ScaleFunction, eps: &[Rational]) -> Result<CauchyVerdict> {
    let grid = augment(&normalize_grid(eps.to_vec())?, &region_limits(f)?)?;
    let mut witnesses = Vec::with_capacity(grid.len());
    'eps: for e in grid {
        let mut tried = Vec::new();
        for t0 in representatives(f, &e)? {
            let ex = f.exceptional_set(&f.eval(&t0)?, &e)?;
            let d = density(&ex);
            if d.is_zero() {
                witnesses.push((e, t0));
                continue 'eps;
            }
            tried.push((t0, d));
        }
        return Ok(CauchyVerdict::NotCauchy { epsilon: e, tried });
    }
    Ok(CauchyVerdict::Cauchy { witnesses })
}

/// Whether `f` converges in the ordinary sense, decided structurally.
pub fn classical_limit(f: &ScaleFunction) -> Result<Option<Rational>> {
    let mut lim: Option<Rational> = None;
    for (region, rule) in f.regions()? {
        if region.is_bounded()? {
            continue;
        }
        match (rule.limit(), &lim) {
            (None, _) => return Ok(None),
            (Some(l), Some(m)) if &l != m => return Ok(None),
            (Some(l), _) => lim = Some(l),
        }
    }
    Ok(lim)
}

// ---------------------------------------------------------------------------
// JSON views

#[derive(Serialize)]
struct WitnessView {
    #[serde(with = "rational::serde_q")]
    epsilon: Rational,
    exceptional: DeltaSetDto,
}

#[derive(Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
enum LimitView {
    DeltaLimit {
        #[serde(with = "rational::serde_q")]
        limit: Rational,
        witnesses: Vec<WitnessView>,
    },
    NotDeltaConvergent {
        #[serde(with = "rational::serde_q")]
        candidate: Rational,
        #[serde(with = "rational::serde_q")]
        epsilon: Rational,
        exceptional: DeltaSetDto,
        density: DensityResult,
    },
    Undecided {
        reason: String,
    },
}

impl Serialize for LimitVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let view = match self {
            LimitVerdict::DeltaLimit { limit, witnesses } => LimitView::DeltaLimit {
                limit: limit.clone(),
                witnesses: witnesses
                    .iter()
                    .map(|(e, x)| WitnessView {
                        epsilon: e.clone(),
                        exceptional: DeltaSetDto::from_set(x, false),
                    })
                    .collect(),
            },
            LimitVerdict::NotDeltaConvergent {
                candidate,
                epsilon,
                exceptional,
                density,
            } => LimitView::NotDeltaConvergent {
                candidate: candidate.clone(),
                epsilon: epsilon.clone(),
                exceptional: DeltaSetDto::from_set(exceptional, false),
                density: density.clone(),
            },
            LimitVerdict::Undecided(reason) => LimitView::Undecided {
                reason: reason.clone(),
            },
        };
        view.serialize(s)
    }
}

#[derive(Serialize)]
struct CauchyWitness {
    #[serde(with = "rational::serde_q")]
    epsilon: Rational,
    #[serde(with = "rational::serde_q")]
    t0: Rational,
}

#[derive(Serialize)]
struct Tried {
    #[serde(with = "rational::serde_q")]
    t0: Rational,
    density: DensityResult,
}

#[derive(Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
enum CauchyView {
    Cauchy {
        witnesses: Vec<CauchyWitness>,
    },
    NotCauchy {
        #[serde(with = "rational::serde_q")]
        epsilon: Rational,
        tried: Vec<Tried>,
    },
    Undecided {
        reason: String,
    },
}

impl Serialize for CauchyVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let view = match self {
            CauchyVerdict::Cauchy { witnesses } => CauchyView::Cauchy {
                witnesses: witnesses
                    .iter()
                    .map(|(e, t)| CauchyWitness {
                        epsilon: e.clone(),
                        t0: t.clone(),
                    })
                    .collect(),
            },
            CauchyVerdict::NotCauchy { epsilon, tried } => CauchyView::NotCauchy {
                epsilon: epsilon.clone(),
                tried: tried
                    .iter()
                    .map(|(t, d)| Tried {
                        t0: t.clone(),
                        density: d.clone(),
                    })
                    .collect(),
            },
            CauchyVerdict::Undecided(reason) => CauchyView::Undecided {
                reason: reason.clone(),
            },
        };
        view.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::function::Rule;
    use crate::interval::Interval;
    use crate::rational::{frac, int};
    use crate::sparse::QuadraticFamily;
    use crate::timescale::TimeScale;

    fn ray0() -> Arc<TimeScale> {
        Arc::new(TimeScale::ray(int(0)))
    }

    fn evens_indicator() -> ScaleFunction {
        let n = Arc::new(TimeScale::naturals());
        let evens =
            DeltaSet::periodic_pattern(&n, int(0), int(2), vec![Interval::point(int(0))]).unwrap();
        ScaleFunction::indicator(&evens).unwrap()
    }

    /// 1 everywhere except 0 on the integers.
    fn null_family_function() -> ScaleFunction {
        let r = ray0();
        let ints =
            DeltaSet::sparse(&r, QuadraticFamily::new(int(0), int(1), int(0)).unwrap()).unwrap();
        ScaleFunction::new(
            &r,
            vec![(ints, Rule::constant(int(0)))],
            Rule::constant(int(1)),
        )
        .unwrap()
    }

    #[test]
    fn limits() {
        let v = delta_limit(&null_family_function(), &default_epsilons()).unwrap();
        assert_eq!(v.limit(), Some(&int(1)));
        match delta_limit(&evens_indicator(), &default_epsilons()).unwrap() {
            LimitVerdict::NotDeltaConvergent {
                epsilon, density, ..
            } => {
                assert_eq!(epsilon, frac(1, 2));
                assert_eq!(density, DensityResult::Exists { value: frac(1, 2) });
            }
            other => panic!("{other:?}"),
        }
        let recip = ScaleFunction::new(&ray0(), vec![], Rule::reciprocal(int(1), int(1))).unwrap();
        assert_eq!(
            delta_limit(&recip, &default_epsilons()).unwrap().limit(),
            Some(&int(0))
        );
    }

    #[test]
    fn cauchy() {
        let c = ScaleFunction::constant(&ray0(), int(3));
        match is_delta_cauchy(&c, &default_epsilons()).unwrap() {
            CauchyVerdict::Cauchy { witnesses } => {
                assert!(witnesses.iter().all(|(_, t)| t == &int(0)))
            }
            other => panic!("{other:?}"),
        }
        assert!(!is_delta_cauchy(&evens_indicator(), &default_epsilons())
            .unwrap()
            .is_cauchy());
        match is_delta_cauchy(&null_family_function(), &default_epsilons()).unwrap() {
            CauchyVerdict::Cauchy { witnesses } => {
                for (_, t) in witnesses {
                    assert!(!t.is_integer());
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn limit_of_a_sum() {
        let r = ray0();
        let f = null_family_function();
        let g = ScaleFunction::new(
            &r,
            vec![],
            Rule::Reciprocal {
                c: int(1),
                d: int(1),
                offset: frac(1, 2),
            },
        )
        .unwrap();
        let h = f.add(&g).unwrap();
        assert_eq!(
            delta_limit(&h, &default_epsilons()).unwrap().limit(),
            Some(&frac(3, 2))
        );
        let twice = f.scale_by(&int(2));
        assert_eq!(
            delta_limit(&twice, &default_epsilons()).unwrap().limit(),
            Some(&int(2))
        );
    }

    #[test]
    fn permuted_grid_gives_the_same_limit() {
        let f = null_family_function();
        let mut eps = default_epsilons();
        eps.reverse();
        eps.swap(2, 7);
        assert_eq!(delta_limit(&f, &eps).unwrap().limit(), Some(&int(1)));
        assert!(delta_limit(&f, &[]).is_err());
        assert!(delta_limit(&f, &[int(0)]).is_err());
    }

    #[test]
    fn classical_limits() {
        assert_eq!(classical_limit(&null_family_function()).unwrap(), None);
        let recip = ScaleFunction::new(&ray0(), vec![], Rule::reciprocal(int(1), int(1))).unwrap();
        assert_eq!(classical_limit(&recip).unwrap(), Some(int(0)));
    }
}
