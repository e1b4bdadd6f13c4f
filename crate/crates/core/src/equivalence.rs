//! Cross-checks the three equivalent conditions on a function:
//! Δ-convergence, the Δ-Cauchy property, and agreement Δ-almost everywhere
//! with a classically convergent function.

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::companion::{companion_function, verify, CompanionCheck, DEFAULT_HORIZON_CAP};
use crate::convergence::{
    classical_limit, default_epsilons, delta_limit, is_delta_cauchy, CauchyVerdict, LimitVerdict,
};
use crate::density::density;
use crate::error::{Error, Result};
use crate::function::{Rule, ScaleFunction};
use crate::gen::{case_rng, Universe};
use crate::lemma::ClauseReport;
use crate::rational::{self, frac, Rational};
use crate::set::DeltaSet;

#[derive(Debug, Clone, Serialize)]
pub struct CompanionSummary {
    #[serde(with = "rational::serde_q")]
    pub lambda: Rational,
    #[serde(with = "rational::serde_q::vec")]
    pub thresholds: Vec<Rational>,
    pub check: CompanionCheck,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    /// (i); `None` when undecided.
    pub convergent: Option<bool>,
    #[serde(
        with = "rational::serde_q::opt",
        skip_serializing_if = "Option::is_none"
    )]
    pub limit: Option<Rational>,
    /// (ii)
    pub cauchy: Option<bool>,
    /// (iii), decided structurally by modifying `f` on its density-zero regions.
    pub companion_exists: bool,
    /// The explicit construction, run when `f` is Δ-Cauchy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub companion: Option<CompanionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub agree: bool,
    pub status: &'static str,
}

impl EquivalenceReport {
    pub fn failed(&self) -> bool {
        !self.agree
    }
}

#[derive(Debug, Clone)]
pub struct EquivalenceOptions {
    pub epsilons: Vec<Rational>,
    pub m_max: u32,
    pub horizon_cap: u64,
}

impl Default for EquivalenceOptions {
    fn default() -> Self {
        EquivalenceOptions {
            epsilons: default_epsilons(),
            m_max: 8,
            horizon_cap: DEFAULT_HORIZON_CAP,
        }
    }
}

/// Whether some classically convergent `g` equals `f` off a density-zero set.
///
/// Regions of positive density cannot be modified, so their rules must share a
/// limit `ℓ`; the density-zero regions are then reset to `ℓ`.
pub fn companion_exists(f: &ScaleFunction) -> Result<bool> {
    let mut heavy_limit: Option<Rational> = None;
    let mut null = DeltaSet::empty(f.scale_ref());
    for (region, rule) in f.regions()? {
        if density(region).is_zero() {
            null = null.union(region)?;
            continue;
        }
        match (rule.limit(), &heavy_limit) {
            (None, _) => return Ok(false),
            (Some(l), Some(h)) if &l != h => return Ok(false),
            (Some(l), _) => heavy_limit = Some(l),
        }
    }
    let l = heavy_limit.expect("the regions cover a set of density one");
    let g = f.override_on(&null, Rule::constant(l.clone()))?;
    Ok(classical_limit(&g)? == Some(l))
}

pub fn check_equivalence(
    f: &ScaleFunction,
    opts: &EquivalenceOptions,
) -> Result<EquivalenceReport> {
    let lim = delta_limit(f, &opts.epsilons)?;
    let (convergent, limit) = match &lim {
        LimitVerdict::DeltaLimit { limit, .. } => (Some(true), Some(limit.clone())),
        LimitVerdict::NotDeltaConvergent { .. } => (Some(false), None),
        LimitVerdict::Undecided(_) => (None, None),
    };
    let cauchy = match is_delta_cauchy(f, &opts.epsilons)? {
        CauchyVerdict::Cauchy { .. } => Some(true),
        CauchyVerdict::NotCauchy { .. } => Some(false),
        CauchyVerdict::Undecided(_) => None,
    };
    let exists = companion_exists(f)?;
    let mut companion = None;
    let mut companion_ok = true;
    let mut note = None;
    if cauchy == Some(true) {
        match companion_function(f, opts.m_max, opts.horizon_cap) {
            Ok(trace) => {
                let check = verify(f, &trace)?;
                let near_limit = limit
                    .as_ref()
                    .is_none_or(|l| (l - &trace.lambda).abs() <= trace.radius);
                companion_ok = check.ok() && near_limit;
                companion = Some(CompanionSummary {
                    lambda: trace.lambda,
                    thresholds: trace.thresholds,
                    check,
                });
            }
            Err(e) => {
                companion_ok = false;
                note = Some(e.to_string());
            }
        }
    }
    let agree = convergent.is_some()
        && cauchy.is_some()
        && convergent == cauchy
        && convergent == Some(exists)
        && companion_ok;
    Ok(EquivalenceReport {
        convergent,
        limit,
        cauchy,
        companion_exists: exists,
        companion,
        note,
        agree,
        status: if agree { "ok" } else { "FAILED" },
    })
}

/// Randomized suites over generated functions, run by [`run_suite`].
pub const SUITES: [&str; 4] = ["equivalence", "upgrade", "linearity", "uniqueness"];

fn limit_of(f: &ScaleFunction, eps: &[Rational]) -> std::result::Result<Rational, String> {
    match delta_limit(f, eps).map_err(|e| e.to_string())? {
        LimitVerdict::DeltaLimit { limit, .. } => Ok(limit),
        v => Err(format!("no Δ-limit: {}", serde_json::to_string(&v).unwrap_or_default())),
    }
}

fn suite_case(suite: &str, seed: u64, index: u64) -> std::result::Result<(), String> {
    let mut rng = case_rng(seed, suite, index);
    let u = Universe::random(&mut rng);
    let eps = default_epsilons();
    let q = rational::format;
    let out = match suite {
        "equivalence" => {
            let f = u.perturbed(&mut rng);
            let rep = check_equivalence(&f, &EquivalenceOptions::default()).map_err(|e| e.to_string())?;
            if rep.agree {
                Ok(())
            } else {
                Err(serde_json::to_string(&rep).unwrap_or_default())
            }
        }
        "upgrade" => {
            let (f, l) = u.classically_convergent(&mut rng);
            let got = limit_of(&f, &eps)?;
            if got == l {
                Ok(())
            } else {
                Err(format!("Δ-limit {} but classical limit {}", q(&got), q(&l)))
            }
        }
        "linearity" => {
            let (f, lf) = u.delta_convergent(&mut rng);
            let c = frac(rng.gen_range(-6..=6), rng.gen_range(1..=3));
            let scaled = limit_of(&f.scale_by(&c), &eps)?;
            if scaled != &c * &lf {
                return Err(format!("case {index} on {}: Δ-lim(cf) = {} for c = {}, Δ-lim f = {}", u.name, q(&scaled), q(&c), q(&lf)));
            }
            // sums of reciprocal rules with different poles leave the rule class; redraw g
            let mut tries = 0;
            let (sum, lg) = loop {
                let (g, lg) = u.delta_convergent(&mut rng);
                match f.add(&g) {
                    Ok(sum) => break (sum, lg),
                    Err(Error::Construction(_)) if tries < 16 => tries += 1,
                    Err(e) => return Err(format!("case {index} on {}: {e}", u.name)),
                }
            };
            let got = limit_of(&sum, &eps)?;
            if got == &lf + &lg {
                Ok(())
            } else {
                Err(format!("Δ-lim(f+g) = {} but {} + {}", q(&got), q(&lf), q(&lg)))
            }
        }
        "uniqueness" => {
            let f = u.perturbed(&mut rng);
            let first = delta_limit(&f, &eps).map_err(|e| e.to_string())?;
            let mut shuffled = eps.clone();
            shuffled.shuffle(&mut rng);
            let again = delta_limit(&f, &shuffled).map_err(|e| e.to_string())?;
            match (first.limit(), again.limit()) {
                (Some(a), Some(b)) if a != b => Err(format!("limits {} and {} from one function", q(a), q(b))),
                (Some(_), None) | (None, Some(_)) => Err("verdict depends on the ε order".into()),
                _ => Ok(()),
            }
        }
        other => return Err(format!("unknown suite {other}")),
    };
    out.map_err(|m| if m.starts_with("case ") { m } else { format!("case {index} on {}: {m}", u.name) })
}

/// Runs `cases` seeded cases of one suite; cases run in index order.
pub fn run_suite(suite: &str, cases: u64, seed: u64) -> Result<ClauseReport> {
    if !SUITES.contains(&suite) {
        return Err(Error::Domain(format!("unknown suite '{suite}'; expected one of {}", SUITES.join(", "))));
    }
    let mut failures = 0;
    let mut first_failure = None;
    for index in 0..cases {
        if let Err(msg) = suite_case(suite, seed, index) {
            failures += 1;
            first_failure.get_or_insert(msg);
        }
    }
    Ok(ClauseReport { clause: suite.to_string(), cases, failures, first_failure })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::interval::Interval;
    use crate::rational::int;
    use crate::sparse::QuadraticFamily;
    use crate::timescale::TimeScale;

    #[test]
    fn evens_indicator_fails_all_three() {
        let n = Arc::new(TimeScale::naturals());
        let evens =
            DeltaSet::periodic_pattern(&n, int(0), int(2), vec![Interval::point(int(0))]).unwrap();
        let rep = check_equivalence(
            &ScaleFunction::indicator(&evens).unwrap(),
            &EquivalenceOptions::default(),
        )
        .unwrap();
        assert_eq!(
            (rep.convergent, rep.cauchy, rep.companion_exists),
            (Some(false), Some(false), false)
        );
        assert!(rep.agree);
    }

    #[test]
    fn constants_pass_all_three() {
        let r = Arc::new(TimeScale::ray(int(0)));
        let rep = check_equivalence(
            &ScaleFunction::constant(&r, int(7)),
            &EquivalenceOptions::default(),
        )
        .unwrap();
        assert_eq!(
            (rep.convergent, rep.cauchy, rep.companion_exists),
            (Some(true), Some(true), true)
        );
        assert_eq!(rep.companion.unwrap().lambda, int(7));
        assert_eq!(rep.status, "ok");
    }

    #[test]
    fn null_family_analog() {
        let r = Arc::new(TimeScale::ray(int(0)));
        let ints =
            DeltaSet::sparse(&r, QuadraticFamily::new(int(0), int(1), int(0)).unwrap()).unwrap();
        let f = ScaleFunction::new(
            &r,
            vec![(ints, Rule::constant(int(0)))],
            Rule::constant(int(1)),
        )
        .unwrap();
        let rep = check_equivalence(&f, &EquivalenceOptions::default()).unwrap();
        assert!(rep.agree, "{rep:?}");
        assert_eq!(rep.limit, Some(int(1)));
        assert!(rep.companion.unwrap().check.ok());
    }

    #[test]
    fn every_suite_passes_a_short_run() {
        for suite in SUITES {
            let rep = run_suite(suite, 12, 3).unwrap();
            assert_eq!(rep.failures, 0, "{rep:?}");
        }
        assert!(matches!(run_suite("nope", 1, 0), Err(Error::Domain(_))));
    }
}
