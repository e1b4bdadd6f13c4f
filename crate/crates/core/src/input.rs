//! Text forms of scales, sets and functions: JSON documents plus short names.
//!
//! Scales: `nat`, `ray0`, `ray:<a>`, `grid:<h>` (the points `0, h, 2h, …`).
//! Sets: a union of terms joined by `u` or `∪`, where a term is `evens`, `odds`,
//! `squares`, `empty`, `all`, an interval such as `[2,5)` or `(1/2,inf)`, or a
//! point list such as `{0,3/2}`.
//! Functions: `const:<c>` or `indicator:<set>`.

use std::sync::Arc;

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};
use crate::function::{ScaleFunction, ScaleFunctionDto};
use crate::interval::{Interval, IntervalKind};
use crate::rational::{self, int, Rational};
use crate::set::{DeltaSet, DeltaSetDto};
use crate::sparse::QuadraticFamily;
use crate::timescale::{TimeScale, TimeScaleDto};

fn parse_error(column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line: 1, column, message: message.into() }
}

fn json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn is_json(text: &str) -> bool {
    let t = text.trim_start();
    t.starts_with('{') && t[1..].trim_start().starts_with(['"', '}'])
}

fn number(s: &str, column: usize) -> Result<Rational> {
    rational::parse(s).map_err(|_| parse_error(column, format!("expected a rational, found {:?}", s.trim())))
}

pub fn parse_scale(text: &str) -> Result<TimeScale> {
    let t = text.trim();
    if is_json(t) {
        return TimeScale::try_from(json::<TimeScaleDto>(t)?);
    }
    match t {
        "nat" | "N" => return Ok(TimeScale::naturals()),
        "ray0" => return Ok(TimeScale::ray(int(0))),
        _ => {}
    }
    if let Some(a) = t.strip_prefix("ray:") {
        return Ok(TimeScale::ray(number(a, 5)?));
    }
    if let Some(h) = t.strip_prefix("grid:") {
        let h = number(h, 6)?;
        if h <= int(0) {
            return Err(Error::Construction("grid step must be positive".into()));
        }
        return Ok(TimeScale::arithmetic(int(0), h));
    }
    Err(parse_error(1, format!("unknown scale {t:?}; use nat, ray0, ray:<a>, grid:<h> or a JSON document")))
}

/// Splits on top-level `u` / `∪`, returning each term with its 1-based column.
fn terms(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices();
    while let Some((i, c)) = chars.next() {
        let sep = match c {
            '∪' => Some(c.len_utf8()),
            'u' if text[..i].ends_with(' ') && text[i + 1..].starts_with(' ') => Some(1),
            _ => None,
        };
        if let Some(len) = sep {
            out.push((start, &text[start..i]));
            start = i + len;
        }
    }
    out.push((start, &text[start..]));
    out.into_iter()
        .map(|(at, s)| {
            let lead = s.len() - s.trim_start().len();
            (text[..at + lead].chars().count() + 1, s.trim())
        })
        .collect()
}

fn term(scale: &Arc<TimeScale>, s: &str, col: usize) -> Result<DeltaSet> {
    let every_other = |phase: i64| {
        DeltaSet::periodic_pattern(scale, int(phase), int(2), vec![Interval::point(int(0))])
    };
    match s {
        "evens" => return every_other(0),
        "odds" => return every_other(1),
        "squares" => return DeltaSet::sparse(scale, QuadraticFamily::new(int(1), int(0), int(0))?),
        "empty" => return Ok(DeltaSet::empty(scale)),
        "all" => return Ok(DeltaSet::full(scale)),
        _ => {}
    }
    if let Some(body) = s.strip_prefix('{').and_then(|b| b.strip_suffix('}')) {
        let mut set = DeltaSet::empty(scale);
        for p in body.split(',').filter(|p| !p.trim().is_empty()) {
            set = set.union(&DeltaSet::point(scale, number(p, col)?)?)?;
        }
        return Ok(set);
    }
    let lo_closed = match s.chars().next() {
        Some('[') => true,
        Some('(') => false,
        _ => return Err(parse_error(col, format!("unknown set term {s:?}"))),
    };
    let hi_closed = match s.chars().last() {
        Some(']') => true,
        Some(')') => false,
        _ => return Err(parse_error(col + s.chars().count() - 1, "interval must end with ] or )")),
    };
    let body = &s[1..s.len() - 1];
    let (a, b) = body
        .split_once(',')
        .ok_or_else(|| parse_error(col, format!("interval {s:?} needs two endpoints")))?;
    let b_col = col + 2 + a.chars().count();
    let a = number(a, col + 1)?;
    if matches!(b.trim(), "inf" | "∞") {
        if hi_closed {
            return Err(parse_error(b_col, "an unbounded interval must end with )"));
        }
        return Ok(DeltaSet::ray(scale, a, lo_closed));
    }
    let b = number(b, b_col)?;
    Ok(DeltaSet::interval(scale, IntervalKind::from_flags(lo_closed, hi_closed), a, b))
}

/// A set on `scale`; a JSON document may carry its own scale.
pub fn parse_set(text: &str, scale: Option<&Arc<TimeScale>>) -> Result<DeltaSet> {
    let t = text.trim();
    if is_json(t) {
        return json::<DeltaSetDto>(t)?.into_set(scale);
    }
    let scale = scale.ok_or_else(|| Error::Construction("set has no scale; pass one".into()))?;
    let mut set = DeltaSet::empty(scale);
    for (col, s) in terms(t) {
        if s.is_empty() {
            return Err(parse_error(col, "empty set term"));
        }
        set = set.union(&term(scale, s, col)?)?;
    }
    Ok(set)
}

/// A function on `scale`; a JSON document may carry its own scale.
pub fn parse_function(text: &str, scale: Option<&Arc<TimeScale>>) -> Result<ScaleFunction> {
    let t = text.trim();
    if is_json(t) {
        return json::<ScaleFunctionDto>(t)?.into_function(scale);
    }
    let scale = scale.ok_or_else(|| Error::Construction("function has no scale; pass one".into()))?;
    if let Some(c) = t.strip_prefix("const:") {
        return Ok(ScaleFunction::constant(scale, number(c, 7)?));
    }
    if let Some(s) = t.strip_prefix("indicator:") {
        return ScaleFunction::indicator(&parse_set(s, Some(scale))?);
    }
    Err(parse_error(1, format!("unknown function {t:?}; use const:<c>, indicator:<set> or a JSON document")))
}

/// Comma-separated rationals.
pub fn parse_list(text: &str) -> Result<Vec<Rational>> {
    let mut col = 1;
    let mut out = Vec::new();
    for part in text.split(',') {
        out.push(number(part, col)?);
        col += part.chars().count() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::density;
    use crate::measure::measure;
    use crate::rational::frac;

    fn nat() -> Arc<TimeScale> {
        Arc::new(parse_scale("nat").unwrap())
    }

    #[test]
    fn shorthand_sets() {
        let n = nat();
        assert_eq!(measure(&parse_set("[2,5)", Some(&n)).unwrap()).unwrap().to_string(), "3");
        assert_eq!(density(&parse_set("evens", Some(&n)).unwrap()).value(), Some(&frac(1, 2)));
        let u = parse_set("{1} u [4,6] ∪ (10,inf)", Some(&n)).unwrap();
        for (t, inside) in [(1, true), (2, false), (5, true), (10, false), (11, true)] {
            assert_eq!(u.contains(&int(t)), inside, "t = {t}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        let n = nat();
        match parse_set("[0,2) u [x,3]", Some(&n)) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 10),
            other => panic!("{other:?}"),
        }
        match parse_scale("{\n \"tail\": 3}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_set("[0,inf]", Some(&n)), Err(Error::Parse { .. })));
    }

    #[test]
    fn invalid_structures_are_construction_errors() {
        let bad = r#"{"components":[{"interval":["3","1"]}],"tail":{"ray":{"start":"5"}}}"#;
        assert!(matches!(parse_scale(bad), Err(Error::Construction(_))));
        assert!(matches!(parse_set("evens", None), Err(Error::Construction(_))));
    }

    #[test]
    fn json_round_trip() {
        let n = nat();
        let s = parse_set("odds u {4}", Some(&n)).unwrap();
        let back = parse_set(&serde_json::to_string(&s).unwrap(), None).unwrap();
        assert_eq!(s, back);
        let f = parse_function("indicator:evens", Some(&n)).unwrap();
        let g = parse_function(&serde_json::to_string(&f).unwrap(), None).unwrap();
        assert_eq!(f.eval(&int(6)).unwrap(), g.eval(&int(6)).unwrap());
        assert_eq!(parse_list("1, 1/2,0.25").unwrap(), vec![int(1), frac(1, 2), frac(1, 4)]);
    }
}
