//! Judgment values.
//!
//! Comparison ratios are entered as decimal ("3.8") or rational ("3/2")
//! text. The exact rational is kept next to the binary float so that
//! equal judgments tie exactly when ranked, and so that files can be
//! re-rendered without drift.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CellParseError;

/// A single positive-real judgment, optionally backed by an exact rational.
#[derive(Clone, Copy, Debug)]
pub struct Cell {
    value: f64,
    exact: Option<Rational64>,
}

impl Cell {
    pub const ONE: Cell = Cell {
        value: 1.0,
        exact: Some(Rational64::new_raw(1, 1)),
    };

    pub fn from_ratio(r: Rational64) -> Self {
        Cell {
            value: *r.numer() as f64 / *r.denom() as f64,
            exact: Some(r),
        }
    }

    pub fn from_f64(value: f64) -> Self {
        Cell { value, exact: None }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<Rational64> {
        self.exact
    }

    /// Multiplicative inverse, exact when the source is exact.
    pub fn recip(&self) -> Cell {
        match self.exact {
            Some(r) if *r.numer() != 0 => Cell::from_ratio(r.recip()),
            _ => Cell::from_f64(1.0 / self.value),
        }
    }

    /// Product of two judgments, exact when both are exact and it fits.
    pub fn mul(&self, other: &Cell) -> Cell {
        if let (Some(a), Some(b)) = (self.exact, other.exact) {
            if let Some(p) = checked_mul(a, b) {
                return Cell::from_ratio(p);
            }
        }
        Cell::from_f64(self.value * other.value)
    }

    /// Division, exact when both are exact and it fits.
    pub fn div(&self, other: &Cell) -> Cell {
        self.mul(&other.recip())
    }

    /// Total order used for ranking: exact comparison when both sides
    /// carry a rational, float comparison otherwise.
    pub fn cmp_value(&self, other: &Cell) -> Ordering {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => self.value.total_cmp(&other.value),
        }
    }

    /// Canonical text: `p` or `p/q` in lowest terms, else the shortest
    /// round-trip decimal of the float.
    pub fn to_text(&self) -> String {
        match self.exact {
            Some(r) if *r.denom() == 1 => r.numer().to_string(),
            Some(r) => format!("{}/{}", r.numer(), r.denom()),
            None => format!("{:?}", self.value),
        }
    }
}

fn checked_mul(a: Rational64, b: Rational64) -> Option<Rational64> {
    let n = (*a.numer() as i128) * (*b.numer() as i128);
    let d = (*a.denom() as i128) * (*b.denom() as i128);
    let g = gcd(n.abs(), d.abs()).max(1);
    let (n, d) = (n / g, d / g);
    Some(Rational64::new(i64::try_from(n).ok()?, i64::try_from(d).ok()?))
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl From<f64> for Cell {
    fn from(value: f64) -> Self {
        // Shortest round-trip decimal recovers what was typed in almost
        // every practical case.
        format!("{value:?}")
            .parse::<Cell>()
            .ok()
            .filter(|c| c.value == value)
            .unwrap_or(Cell::from_f64(value))
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::from_ratio(Rational64::from_integer(v))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Cell {
    type Err = CellParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err(CellParseError::Empty);
        }
        let cell = if let Some((p, q)) = t.split_once('/') {
            let p = parse_decimal(p.trim()).ok_or_else(|| CellParseError::Syntax(t.to_string()))?;
            let q = parse_decimal(q.trim()).ok_or_else(|| CellParseError::Syntax(t.to_string()))?;
            match (p, q) {
                (Exactish::Exact(p), Exactish::Exact(q)) => {
                    if *q.numer() == 0 {
                        return Err(CellParseError::ZeroDenominator(t.to_string()));
                    }
                    match checked_mul(p, q.recip()) {
                        Some(r) => Cell::from_ratio(r),
                        None => Cell::from_f64(p_f64(&p) / p_f64(&q)),
                    }
                }
                (p, q) => {
                    if q.as_f64() == 0.0 {
                        return Err(CellParseError::ZeroDenominator(t.to_string()));
                    }
                    Cell::from_f64(p.as_f64() / q.as_f64())
                }
            }
        } else {
            match parse_decimal(t).ok_or_else(|| CellParseError::Syntax(t.to_string()))? {
                Exactish::Exact(r) => Cell::from_ratio(r),
                Exactish::Float(v) => Cell::from_f64(v),
            }
        };
        if !cell.value.is_finite() {
            return Err(CellParseError::Syntax(t.to_string()));
        }
        if cell.value <= 0.0 {
            return Err(CellParseError::NonPositive(t.to_string()));
        }
        Ok(cell)
    }
}

fn p_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

enum Exactish {
    Exact(Rational64),
    Float(f64),
}

impl Exactish {
    fn as_f64(&self) -> f64 {
        match self {
            Exactish::Exact(r) => p_f64(r),
            Exactish::Float(v) => *v,
        }
    }
}

/// Plain decimals become exact rationals; exponent forms and overlong
/// digit strings fall back to floats.
fn parse_decimal(t: &str) -> Option<Exactish> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits_ok = !(int.is_empty() && frac.is_empty())
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit());
    if digits_ok {
        let scale = 10i64.checked_pow(frac.len() as u32);
        let joined = format!("{int}{frac}");
        if let (Some(scale), Ok(n)) = (scale, joined.parse::<i64>()) {
            let n = if neg { -n } else { n };
            return Some(Exactish::Exact(Rational64::new(n, scale)));
        }
    }
    t.parse::<f64>().ok().map(Exactish::Float)
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.exact {
            Some(_) => s.serialize_str(&self.to_text()),
            None => s.serialize_f64(self.value),
        }
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if v > 0.0 && v.is_finite() => Ok(Cell::from(v)),
            Raw::Num(v) => Err(serde::de::Error::custom(CellParseError::NonPositive(v.to_string()))),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_decimals_exactly() {
        let c: Cell = "3/2".parse().unwrap();
        assert_eq!(c.exact(), Some(Rational64::new(3, 2)));
        let c: Cell = "3.8".parse().unwrap();
        assert_eq!(c.exact(), Some(Rational64::new(19, 5)));
        assert_eq!(c.value(), 3.8);
        let c: Cell = " 8/9 ".parse().unwrap();
        assert_eq!(c.to_text(), "8/9");
        let c: Cell = "1.5/3".parse().unwrap();
        assert_eq!(c.to_text(), "1/2");
    }

    #[test]
    fn rejects_bad_text() {
        assert!(matches!("-1".parse::<Cell>(), Err(CellParseError::NonPositive(_))));
        assert!(matches!("0".parse::<Cell>(), Err(CellParseError::NonPositive(_))));
        assert!(matches!("1/0".parse::<Cell>(), Err(CellParseError::ZeroDenominator(_))));
        assert!(matches!("abc".parse::<Cell>(), Err(CellParseError::Syntax(_))));
        assert!(matches!("".parse::<Cell>(), Err(CellParseError::Empty)));
    }

    #[test]
    fn exponent_falls_back_to_float() {
        let c: Cell = "2.5e-1".parse().unwrap();
        assert_eq!(c.value(), 0.25);
        assert!(c.exact().is_none());
    }

    #[test]
    fn exact_ties_survive_float_noise() {
        let a: Cell = "1/3".parse().unwrap();
        let b = Cell::from_ratio(Rational64::new(2, 6));
        assert_eq!(a.cmp_value(&b), Ordering::Equal);
        let third = Cell::from(1.0 / 3.0);
        assert_eq!(third.value(), 1.0 / 3.0);
    }

    #[test]
    fn json_accepts_numbers_and_strings() {
        let v: Vec<Cell> = serde_json::from_str(r#"[1, "1/9", 3.8, "2"]"#).unwrap();
        let text: Vec<String> = v.iter().map(Cell::to_text).collect();
        assert_eq!(text, ["1", "1/9", "19/5", "2"]);
        assert!(serde_json::from_str::<Cell>("-2").is_err());
    }
}
