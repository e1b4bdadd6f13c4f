//! Exact rational helpers shared by every module.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A point of the real line carrying a time-scale coordinate.
pub type TimePoint = Rational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn two_pow_neg(m: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << m as usize)
}

/// `floor(x / p)` for `p > 0`.
pub fn floor_div(x: &Rational, p: &Rational) -> BigInt {
    (x / p).floor().to_integer()
}

/// Least `q > 0` that is an integer multiple of both `a > 0` and `b > 0`.
pub fn lcm(a: &Rational, b: &Rational) -> Rational {
    let num = a.numer().lcm(b.numer());
    let den = a.denom().gcd(b.denom());
    Rational::new(num, den)
}

/// True when `a / b` is a positive integer.
pub fn is_multiple(a: &Rational, b: &Rational) -> bool {
    let q = a / b;
    q.is_integer() && q.is_positive()
}

/// Offset of `x` inside its period cell: `x - start - floor((x - start)/p) * p`.
pub fn phase(x: &Rational, start: &Rational, p: &Rational) -> Rational {
    let d = x - start;
    let n = floor_div(&d, p);
    d - Rational::from_integer(n) * p
}

pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::Parse {
        line: 1,
        column: 1,
        message: format!("invalid rational literal {s:?}"),
    };
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, fract) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && fract.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(fract.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{whole}{fract}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let d = num_traits::pow(BigInt::from(10), fract.len());
    let v = Rational::new(n, d);
    Ok(if neg { -v } else { v })
}

/// Lossless `p/q` (or `p`) rendering.
pub fn format(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering with `sig` significant digits, rounded half away from zero.
pub fn to_decimal(q: &Rational, sig: usize) -> String {
    let sig = sig.max(1);
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let ten = Rational::from_integer(BigInt::from(10));
    let mut e: i64 = a.to_integer().to_string().len() as i64 - 1;
    if a < Rational::one() {
        e = -1;
        let mut x = a.clone() * &ten;
        while x < Rational::one() {
            x *= &ten;
            e -= 1;
        }
    }
    let shift = sig as i64 - 1 - e;
    let scaled = if shift >= 0 {
        a * Rational::from_integer(num_traits::pow(BigInt::from(10), shift as usize))
    } else {
        a / Rational::from_integer(num_traits::pow(BigInt::from(10), (-shift) as usize))
    };
    let rounded = (scaled + frac(1, 2)).floor().to_integer();
    let mut digits = rounded.to_string();
    let mut shift = shift;
    if digits.len() > sig {
        // rounding carried into a new digit
        digits.pop();
        shift -= 1;
    }
    let body = if shift <= 0 {
        let zeros = "0".repeat((-shift) as usize);
        format!("{digits}{zeros}")
    } else {
        let shift = shift as usize;
        if digits.len() > shift {
            let (i, f) = digits.split_at(digits.len() - shift);
            format!("{i}.{f}")
        } else {
            format!("0.{}{}", "0".repeat(shift - digits.len()), digits)
        }
    };
    let body = if body.contains('.') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Display adapter for `p/q` formatting.
pub struct Exact<'a>(pub &'a Rational);

impl fmt::Display for Exact<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(self.0))
    }
}

/// serde adapter: rationals travel as `"p/q"` strings, decimals accepted on input.
pub mod serde_q {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => parse(&s).map_err(de::Error::custom),
            Raw::I(i) => Ok(int(i)),
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(
            v: &[Rational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            let raw: Vec<String> = Vec::deserialize(d)?;
            raw.iter()
                .map(|s| parse(s).map_err(de::Error::custom))
                .collect()
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(
            q: &Option<Rational>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            match q {
                Some(q) => s.serialize_str(&format(q)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Option<Rational>, D::Error> {
            let raw: Option<String> = Option::deserialize(d)?;
            raw.map(|s| parse(&s).map_err(de::Error::custom))
                .transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse("-2.25").unwrap(), frac(-9, 4));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse(".").is_err());
    }

    #[test]
    fn lcm_of_rationals() {
        assert_eq!(lcm(&frac(1, 2), &int(1)), int(1));
        assert_eq!(lcm(&frac(3, 2), &int(2)), int(6));
        assert_eq!(lcm(&frac(2, 3), &frac(3, 4)), int(6));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&frac(1, 3), 12), "0.333333333333");
        assert_eq!(to_decimal(&frac(2, 3), 3), "0.667");
        assert_eq!(to_decimal(&int(1500), 2), "1500");
        assert_eq!(to_decimal(&frac(-1, 8), 12), "-0.125");
        assert_eq!(to_decimal(&frac(999, 1000), 2), "1");
        assert_eq!(to_decimal(&int(0), 5), "0");
    }

    #[test]
    fn phase_wraps_into_cell() {
        assert_eq!(phase(&frac(7, 2), &int(0), &int(2)), frac(3, 2));
        assert_eq!(phase(&int(-1), &int(0), &int(3)), int(2));
    }
}
