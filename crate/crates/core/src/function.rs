//! Piecewise functions on a time scale with constant, affine and reciprocal pieces.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{construction, domain, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::periodic::PeriodicSet;
use crate::rational::{self, Rational, TimePoint};
use crate::set::{DeltaSet, DeltaSetDto};
use crate::timescale::TimeScale;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum Rule {
    /// `c`
    Constant {
        #[serde(with = "rational::serde_q")]
        c: Rational,
    },
    /// `slope·t + intercept`
    Affine {
        #[serde(with = "rational::serde_q")]
        slope: Rational,
        #[serde(with = "rational::serde_q")]
        intercept: Rational,
    },
    /// `offset + c/(t + d)`
    Reciprocal {
        #[serde(with = "rational::serde_q")]
        c: Rational,
        #[serde(with = "rational::serde_q")]
        d: Rational,
        #[serde(default = "Rational::zero", with = "rational::serde_q")]
        offset: Rational,
    },
}

/// Comparison used when solving `rule(t) ⋈ k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    fn holds(self, x: &Rational, k: &Rational) -> bool {
        match self {
            Cmp::Lt => x < k,
            Cmp::Le => x <= k,
            Cmp::Gt => x > k,
            Cmp::Ge => x >= k,
        }
    }

    fn is_upper(self) -> bool {
        matches!(self, Cmp::Gt | Cmp::Ge)
    }

    fn is_strict(self) -> bool {
        matches!(self, Cmp::Lt | Cmp::Gt)
    }
}

impl Rule {
    pub fn constant(c: Rational) -> Rule {
        Rule::Constant { c }
    }

    pub fn affine(slope: Rational, intercept: Rational) -> Rule {
        Rule::Affine { slope, intercept }.normalized()
    }

    pub fn reciprocal(c: Rational, d: Rational) -> Rule {
        Rule::Reciprocal {
            c,
            d,
            offset: Rational::zero(),
        }
        .normalized()
    }

    fn normalized(self) -> Rule {
        match self {
            Rule::Affine { slope, intercept } if slope.is_zero() => Rule::Constant { c: intercept },
            Rule::Reciprocal { c, offset, .. } if c.is_zero() => Rule::Constant { c: offset },
            r => r,
        }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        match self {
            Rule::Constant { c } => c.clone(),
            Rule::Affine { slope, intercept } => slope * t + intercept,
            Rule::Reciprocal { c, d, offset } => offset + c / (t + d),
        }
    }

    /// Classical limit as `t → ∞`, if finite.
    pub fn limit(&self) -> Option<Rational> {
        match self {
            Rule::Constant { c } => Some(c.clone()),
            Rule::Affine { .. } => None,
            Rule::Reciprocal { offset, .. } => Some(offset.clone()),
        }
    }

    fn is_flat(&self) -> bool {
        match self {
            Rule::Constant { .. } => true,
            Rule::Affine { slope, .. } => slope.is_zero(),
            Rule::Reciprocal { c, .. } => c.is_zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Rule::Constant { .. })
    }

    /// Checks that the rule is defined on every `t ≥ floor`.
    pub fn check_domain(&self, floor: &Rational) -> Result<()> {
        if let Rule::Reciprocal { d, .. } = self {
            if !(floor + d).is_positive() {
                return domain(format!(
                    "reciprocal rule needs d > {}, got {}",
                    rational::format(&-floor),
                    rational::format(d)
                ));
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Rule) -> Result<Rule> {
        use Rule::*;
        let r = match (self, other) {
            (Constant { c: a }, Constant { c: b }) => Constant { c: a + b },
            (Constant { c: k }, Affine { slope, intercept })
            | (Affine { slope, intercept }, Constant { c: k }) => Affine {
                slope: slope.clone(),
                intercept: intercept + k,
            },
            (
                Affine {
                    slope: s1,
                    intercept: i1,
                },
                Affine {
                    slope: s2,
                    intercept: i2,
                },
            ) => Affine {
                slope: s1 + s2,
                intercept: i1 + i2,
            },
            (Constant { c: k }, Reciprocal { c, d, offset })
            | (Reciprocal { c, d, offset }, Constant { c: k }) => Reciprocal {
                c: c.clone(),
                d: d.clone(),
                offset: offset + k,
            },
            (
                Reciprocal {
                    c: c1,
                    d: d1,
                    offset: o1,
                },
                Reciprocal {
                    c: c2,
                    d: d2,
                    offset: o2,
                },
            ) if d1 == d2 => Reciprocal {
                c: c1 + c2,
                d: d1.clone(),
                offset: o1 + o2,
            },
            (a, b) => {
                return construction(format!(
                    "sum of rules {a:?} and {b:?} is outside the rule class"
                ))
            }
        };
        Ok(r.normalized())
    }

    pub fn scale(&self, k: &Rational) -> Rule {
        match self {
            Rule::Constant { c } => Rule::Constant { c: k * c },
            Rule::Affine { slope, intercept } => Rule::Affine {
                slope: k * slope,
                intercept: k * intercept,
            },
            Rule::Reciprocal { c, d, offset } => Rule::Reciprocal {
                c: k * c,
                d: d.clone(),
                offset: k * offset,
            },
        }
        .normalized()
    }

    /// `{t ≥ floor : rule(t) ⋈ k}` as a real set. The rule must be defined on `[floor, ∞)`.
    pub fn solve(&self, cmp: Cmp, k: &Rational, floor: &Rational) -> PeriodicSet {
        let all = || PeriodicSet::ray(floor.clone(), true);
        let none = PeriodicSet::empty;
        // `rule(t) ⋈ k` on a monotone rule is an up-set or down-set in t, cut at `x`
        let (x, increasing) = match self {
            _ if self.is_flat() => {
                return if cmp.holds(&self.eval(floor), k) { all() } else { none() }
            }
            Rule::Constant { .. } => unreachable!(),
            Rule::Affine { slope, intercept } => ((k - intercept) / slope, slope.is_positive()),
            Rule::Reciprocal { c, d, offset } => {
                // c/u ⋈ k - offset with u = t + d > 0; c/u has the sign of c
                let kk = k - offset;
                let increasing = c.is_negative();
                let reachable = if c.is_positive() {
                    kk.is_positive()
                } else {
                    kk.is_negative()
                };
                if !reachable {
                    // c/u stays strictly on one side of kk
                    let sample = c / (floor + d);
                    return if cmp.holds(&sample, &kk) {
                        all()
                    } else {
                        none()
                    };
                }
                (c / &kk - d, increasing)
            }
        };
        // rule(x) = k; the solution is [x,∞)/(x,∞) or (-∞,x]/(-∞,x)
        let ray_side = cmp.is_upper() == increasing;
        let include_x = !cmp.is_strict();
        if ray_side {
            if &x < floor {
                all()
            } else {
                PeriodicSet::ray(x, include_x)
            }
        } else if &x < floor || (&x == floor && !include_x) {
            none()
        } else {
            let iv = Interval {
                lo: floor.clone(),
                hi: x,
                lo_closed: true,
                hi_closed: include_x,
            };
            PeriodicSet::bounded(IntervalUnion::single(iv))
        }
    }
}

#[derive(Debug, Clone)]
pub struct Case {
    pub region: DeltaSet,
    pub rule: Rule,
}

/// A function `T → ℚ` given by rules on disjoint regions and a default rule elsewhere.
#[derive(Debug, Clone)]
pub struct ScaleFunction {
    scale: Arc<TimeScale>,
    cases: Vec<Case>,
    default: Rule,
    default_region: DeltaSet,
}

impl ScaleFunction {
    pub fn new(
        scale: &Arc<TimeScale>,
        cases: Vec<(DeltaSet, Rule)>,
        default: Rule,
    ) -> Result<ScaleFunction> {
        let floor = scale.min_point();
        default.check_domain(floor)?;
        let mut covered = DeltaSet::empty(scale);
        let mut out = Vec::with_capacity(cases.len());
        for (region, rule) in cases {
            if !region.same_scale(&covered) {
                return construction("case region lives on a different scale");
            }
            rule.check_domain(floor)?;
            if !region.intersection(&covered)?.is_empty()? {
                return construction("case regions overlap");
            }
            covered = covered.union(&region)?;
            out.push(Case { region, rule });
        }
        let default_region = covered.complement()?;
        Ok(ScaleFunction {
            scale: scale.clone(),
            cases: out,
            default,
            default_region,
        })
    }

    pub fn constant(scale: &Arc<TimeScale>, c: Rational) -> ScaleFunction {
        Self::new(scale, Vec::new(), Rule::constant(c)).expect("constant function")
    }

    /// The indicator `1_A`.
    pub fn indicator(set: &DeltaSet) -> Result<ScaleFunction> {
        Self::new(
            set.scale(),
            vec![(set.clone(), Rule::constant(Rational::one()))],
            Rule::constant(Rational::zero()),
        )
    }

    pub fn scale_ref(&self) -> &Arc<TimeScale> {
        &self.scale
    }

    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    pub fn default_rule(&self) -> &Rule {
        &self.default
    }

    pub fn default_region(&self) -> &DeltaSet {
        &self.default_region
    }

    /// All `(region, rule)` pairs including the default one, skipping empty regions.
    pub fn regions(&self) -> Result<Vec<(&DeltaSet, &Rule)>> {
        let mut out: Vec<(&DeltaSet, &Rule)> = Vec::new();
        for c in &self.cases {
            if !c.region.is_empty()? {
                out.push((&c.region, &c.rule));
            }
        }
        if !self.default_region.is_empty()? {
            out.push((&self.default_region, &self.default));
        }
        Ok(out)
    }

    pub fn rule_at(&self, t: &TimePoint) -> Result<&Rule> {
        if !self.scale.contains(t) {
            return domain(format!(
                "{} is not a point of the scale",
                rational::format(t)
            ));
        }
        Ok(self
            .cases
            .iter()
            .find(|c| c.region.contains(t))
            .map(|c| &c.rule)
            .unwrap_or(&self.default))
    }

    pub fn eval(&self, t: &TimePoint) -> Result<Rational> {
        Ok(self.rule_at(t)?.eval(t))
    }

    /// `{t ∈ T : f(t) ⋈ k}`.
    pub fn level_set(&self, cmp: Cmp, k: &Rational) -> Result<DeltaSet> {
        let floor = self.scale.min_point();
        let mut out = DeltaSet::empty(&self.scale);
        for (region, rule) in self.regions()? {
            let solved = DeltaSet::from_periodic(&self.scale, &rule.solve(cmp, k, floor));
            out = out.union(&region.intersection(&solved)?)?;
        }
        Ok(out)
    }

    /// `{t ∈ T : |f(t) − L| ≥ ε}`.
    pub fn exceptional_set(&self, l: &Rational, eps: &Rational) -> Result<DeltaSet> {
        if !eps.is_positive() {
            return domain("ε must be positive");
        }
        let above = self.level_set(Cmp::Ge, &(l + eps))?;
        let below = self.level_set(Cmp::Le, &(l - eps))?;
        above.union(&below)
    }

    /// `{t ∈ T : f(t) ∉ [lo, hi]}`.
    pub fn outside(&self, lo: &Rational, hi: &Rational) -> Result<DeltaSet> {
        self.level_set(Cmp::Lt, lo)?
            .union(&self.level_set(Cmp::Gt, hi)?)
    }

    /// `{t ∈ T : f(t) ≠ g(t)}`.
    pub fn disagreement(&self, other: &ScaleFunction) -> Result<DeltaSet> {
        let diff = self.add(&other.scale_by(&-Rational::one()))?;
        let zero = Rational::zero();
        diff.level_set(Cmp::Lt, &zero)?
            .union(&diff.level_set(Cmp::Gt, &zero)?)
    }

    /// Pointwise sum, by refining both partitions.
    pub fn add(&self, other: &ScaleFunction) -> Result<ScaleFunction> {
        if !self.scale.as_ref().eq(other.scale.as_ref()) {
            return construction("functions live on different scales");
        }
        let default = self.default.add(&other.default)?;
        let mut cases = Vec::new();
        let left = self.partition();
        let right = other.partition();
        for (i, (ra, fa)) in left.iter().enumerate() {
            for (j, (rb, fb)) in right.iter().enumerate() {
                if i == left.len() - 1 && j == right.len() - 1 {
                    continue; // default ∩ default keeps the default rule
                }
                let region = ra.intersection(rb)?;
                if region.is_empty()? {
                    continue;
                }
                cases.push((region, fa.add(fb)?));
            }
        }
        ScaleFunction::new(&self.scale, cases, default)
    }

    /// Regions with their rules, the default region last.
    fn partition(&self) -> Vec<(&DeltaSet, &Rule)> {
        let mut out: Vec<(&DeltaSet, &Rule)> =
            self.cases.iter().map(|c| (&c.region, &c.rule)).collect();
        out.push((&self.default_region, &self.default));
        out
    }

    pub fn scale_by(&self, k: &Rational) -> ScaleFunction {
        ScaleFunction {
            scale: self.scale.clone(),
            cases: self
                .cases
                .iter()
                .map(|c| Case {
                    region: c.region.clone(),
                    rule: c.rule.scale(k),
                })
                .collect(),
            default: self.default.scale(k),
            default_region: self.default_region.clone(),
        }
    }

    /// Replaces the function by `rule` on `region`, keeping it elsewhere.
    pub fn override_on(&self, region: &DeltaSet, rule: Rule) -> Result<ScaleFunction> {
        let mut cases = Vec::new();
        for c in &self.cases {
            let rest = c.region.difference(region)?;
            if !rest.is_empty()? {
                cases.push((rest, c.rule.clone()));
            }
        }
        if !region.is_empty()? {
            cases.push((region.clone(), rule));
        }
        ScaleFunction::new(&self.scale, cases, self.default.clone())
    }
}

// ---------------------------------------------------------------------------
// JSON form

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CaseDto {
    region: DeltaSetDto,
    #[serde(flatten)]
    rule: Rule,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScaleFunctionDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<TimeScale>,
    #[serde(default)]
    cases: Vec<CaseDto>,
    default: Rule,
}

impl ScaleFunctionDto {
    pub fn has_scale(&self) -> bool {
        self.scale.is_some()
    }

    pub fn into_function(self, fallback: Option<&Arc<TimeScale>>) -> Result<ScaleFunction> {
        let scale = match (self.scale, fallback) {
            (Some(s), _) => Arc::new(s),
            (None, Some(s)) => s.clone(),
            (None, None) => return construction("function has no scale"),
        };
        let cases = self
            .cases
            .into_iter()
            .map(|c| Ok((c.region.into_set(Some(&scale))?, c.rule)))
            .collect::<Result<Vec<_>>>()?;
        ScaleFunction::new(&scale, cases, self.default)
    }

    pub fn from_function(f: &ScaleFunction, with_scale: bool) -> ScaleFunctionDto {
        ScaleFunctionDto {
            scale: with_scale.then(|| f.scale.as_ref().clone()),
            cases: f
                .cases
                .iter()
                .map(|c| CaseDto {
                    region: DeltaSetDto::from_set(&c.region, false),
                    rule: c.rule.clone(),
                })
                .collect(),
            default: f.default.clone(),
        }
    }
}

impl Serialize for ScaleFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ScaleFunctionDto::from_function(self, true).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScaleFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ScaleFunctionDto::deserialize(d)?
            .into_function(None)
            .map_err(serde::de::Error::custom)
    }
}
