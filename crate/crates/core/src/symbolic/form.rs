//! Linear forms α·a + β·b + γ, their extension by slide parameters, and
//! rational intervals for a/b.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

/// α·a + β·b + γ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct LinearForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl LinearForm {
    pub const ZERO: LinearForm = LinearForm { a: 0, b: 0, c: 0 };
    pub const ONE: LinearForm = LinearForm { a: 0, b: 0, c: 1 };

    pub const fn new(a: i64, b: i64, c: i64) -> LinearForm {
        LinearForm { a, b, c }
    }

    pub const fn constant(c: i64) -> LinearForm {
        LinearForm { a: 0, b: 0, c }
    }

    pub fn eval(&self, a: i64, b: i64) -> i64 {
        self.a * a + self.b * b + self.c
    }

    pub fn is_zero(&self) -> bool {
        *self == LinearForm::ZERO
    }

    pub fn is_constant(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Root of the homogeneous part α·x + β, if α ≠ 0.
    pub fn ratio_root(&self) -> Option<Q> {
        (self.a != 0).then(|| Q::new(-self.b, self.a))
    }

    pub fn to_array(self) -> [i64; 3] {
        [self.a, self.b, self.c]
    }
}

impl Add for LinearForm {
    type Output = LinearForm;
    fn add(self, o: LinearForm) -> LinearForm {
        LinearForm::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl Sub for LinearForm {
    type Output = LinearForm;
    fn sub(self, o: LinearForm) -> LinearForm {
        LinearForm::new(self.a - o.a, self.b - o.b, self.c - o.c)
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm::new(-self.a, -self.b, -self.c)
    }
}

impl Mul<i64> for LinearForm {
    type Output = LinearForm;
    fn mul(self, k: i64) -> LinearForm {
        LinearForm::new(self.a * k, self.b * k, self.c * k)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[(i64, &str)]) -> fmt::Result {
    let mut first = true;
    for &(k, v) in terms {
        if k == 0 {
            continue;
        }
        let mag = k.unsigned_abs();
        if first {
            if k < 0 {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if k < 0 { "-" } else { "+" })?;
        }
        if v.is_empty() {
            write!(f, "{mag}")?;
        } else if mag == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{mag}{v}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &[(self.a, "a"), (self.b, "b"), (self.c, "")])
    }
}

/// Parses expressions like `5a-6b-1`, `-a+2b`, `a`, `3`.
impl FromStr for LinearForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<LinearForm> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty linear form".into()));
        }
        let mut out = LinearForm::ZERO;
        let mut rest = t.as_str();
        while !rest.is_empty() {
            let (sign, r) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let digits = r.bytes().take_while(|c| c.is_ascii_digit()).count();
            let coef = if digits == 0 {
                1
            } else {
                r[..digits]
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(e.to_string()))?
            };
            let r = &r[digits..];
            match r.as_bytes().first() {
                Some(b'a') => {
                    out.a += sign * coef;
                    rest = &r[1..];
                }
                Some(b'b') => {
                    out.b += sign * coef;
                    rest = &r[1..];
                }
                _ if digits > 0 => {
                    out.c += sign * coef;
                    rest = r;
                }
                _ => return Err(Error::Parse(format!("bad linear form {s:?}"))),
            }
            if !rest.is_empty() && !rest.starts_with(['+', '-']) {
                return Err(Error::Parse(format!("bad linear form {s:?}")));
            }
        }
        Ok(out)
    }
}

/// A linear form plus multiples of two slide parameters i and j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExtForm {
    pub base: LinearForm,
    pub i: i64,
    pub j: i64,
}

impl ExtForm {
    pub fn constant(c: i64) -> ExtForm {
        ExtForm::from(LinearForm::constant(c))
    }

    pub fn is_const(&self, c: i64) -> bool {
        self.i == 0 && self.j == 0 && self.base == LinearForm::constant(c)
    }

    pub fn has_params(&self) -> bool {
        self.i != 0 || self.j != 0
    }

    /// Substitute values for i and j.
    pub fn at(&self, i: LinearForm, j: LinearForm) -> LinearForm {
        self.base + i * self.i + j * self.j
    }

    pub fn eval(&self, a: i64, b: i64, i: i64, j: i64) -> i64 {
        self.base.eval(a, b) + self.i * i + self.j * j
    }

    /// Rename i to j.
    pub fn i_to_j(&self) -> ExtForm {
        ExtForm {
            base: self.base,
            i: 0,
            j: self.j + self.i,
        }
    }
}

impl From<LinearForm> for ExtForm {
    fn from(base: LinearForm) -> ExtForm {
        ExtForm { base, i: 0, j: 0 }
    }
}

impl Add for ExtForm {
    type Output = ExtForm;
    fn add(self, o: ExtForm) -> ExtForm {
        ExtForm {
            base: self.base + o.base,
            i: self.i + o.i,
            j: self.j + o.j,
        }
    }
}

impl Sub for ExtForm {
    type Output = ExtForm;
    fn sub(self, o: ExtForm) -> ExtForm {
        ExtForm {
            base: self.base - o.base,
            i: self.i - o.i,
            j: self.j - o.j,
        }
    }
}

impl Mul<i64> for ExtForm {
    type Output = ExtForm;
    fn mul(self, k: i64) -> ExtForm {
        ExtForm {
            base: self.base * k,
            i: self.i * k,
            j: self.j * k,
        }
    }
}

impl fmt::Display for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.base;
        write_terms(
            f,
            &[(b.a, "a"), (b.b, "b"), (self.i, "i"), (self.j, "j"), (b.c, "")],
        )
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: i64 = d.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d <= 0 {
        return Err(Error::Parse(format!("bad rational {s:?}")));
    }
    Ok(Q::new(n, d))
}

pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// An interval of values of a/b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    pub lower: Q,
    pub upper: Q,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl RationalInterval {
    pub fn new(lower: Q, upper: Q, lower_closed: bool, upper_closed: bool) -> Result<Self> {
        let ok = lower < upper || (lower == upper && lower_closed && upper_closed);
        if !ok {
            return Err(Error::EmptyInterval(format!(
                "{}..{}",
                fmt_q(&lower),
                fmt_q(&upper)
            )));
        }
        Ok(RationalInterval {
            lower,
            upper,
            lower_closed,
            upper_closed,
        })
    }

    pub fn open(lower: Q, upper: Q) -> Result<Self> {
        RationalInterval::new(lower, upper, false, false)
    }

    pub fn contains(&self, x: Q) -> bool {
        let lo = if self.lower_closed { x >= self.lower } else { x > self.lower };
        let hi = if self.upper_closed { x <= self.upper } else { x < self.upper };
        lo && hi
    }

    pub fn interior(&self) -> RationalInterval {
        RationalInterval {
            lower_closed: false,
            upper_closed: false,
            ..*self
        }
    }

    pub fn intersect(&self, o: &RationalInterval) -> Result<RationalInterval> {
        let (lower, lower_closed) = if self.lower > o.lower {
            (self.lower, self.lower_closed)
        } else if o.lower > self.lower {
            (o.lower, o.lower_closed)
        } else {
            (self.lower, self.lower_closed && o.lower_closed)
        };
        let (upper, upper_closed) = if self.upper < o.upper {
            (self.upper, self.upper_closed)
        } else if o.upper < self.upper {
            (o.upper, o.upper_closed)
        } else {
            (self.upper, self.upper_closed && o.upper_closed)
        };
        RationalInterval::new(lower, upper, lower_closed, upper_closed)
    }

    /// Least a such that some a/b in the interior has gcd(b, s) = 1.
    pub fn min_numerator(&self, s: i64) -> Option<i64> {
        for a in 2..=100_000i64 {
            let lo = self.lower;
            let hi = self.upper;
            // a/hi < b < a/lo
            let bmin = (Q::from_integer(a) / hi).floor().to_integer() + 1;
            let bmax = (Q::from_integer(a) / lo).ceil().to_integer() - 1;
            for b in bmin.max(1)..=bmax {
                let x = Q::new(a, b);
                if x > lo && x < hi && num_integer::gcd(b, s) == 1 && num_integer::gcd(a, b) == 1 {
                    return Some(a);
                }
            }
        }
        None
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}..{}{}",
            if self.lower_closed { '[' } else { '(' },
            fmt_q(&self.lower),
            fmt_q(&self.upper),
            if self.upper_closed { ']' } else { ')' }
        )
    }
}

/// Accepts `[5/3..2)`, `(4/3..2)`, or a bare `4/3..2` (open).
impl FromStr for RationalInterval {
    type Err = Error;
    fn from_str(s: &str) -> Result<RationalInterval> {
        let t = s.trim();
        let (lc, t) = match t.chars().next() {
            Some('[') => (true, &t[1..]),
            Some('(') => (false, &t[1..]),
            _ => (false, t),
        };
        let (uc, t) = match t.chars().last() {
            Some(']') => (true, &t[..t.len() - 1]),
            Some(')') => (false, &t[..t.len() - 1]),
            _ => (false, t),
        };
        let (lo, hi) = t
            .split_once("..")
            .ok_or_else(|| Error::Parse(format!("bad interval {s:?}")))?;
        RationalInterval::new(parse_q(lo)?, parse_q(hi)?, lc, uc)
    }
}

impl Serialize for RationalInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_round_trip() {
        for s in ["5a-6b-1", "-a+2b-1", "a", "3", "-2a", "a-b"] {
            let f: LinearForm = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert_eq!("2 a - 2 b".parse::<LinearForm>().unwrap(), LinearForm::new(2, -2, 0));
        assert!("2c".parse::<LinearForm>().is_err());
    }

    #[test]
    fn intervals() {
        let i: RationalInterval = "[5/3..2)".parse().unwrap();
        assert!(i.contains(Q::new(5, 3)));
        assert!(!i.contains(Q::new(2, 1)));
        assert_eq!(i.to_string(), "[5/3..2)");
        let j: RationalInterval = "4/3..2".parse().unwrap();
        assert_eq!(j.to_string(), "(4/3..2)");
        assert_eq!(i.interior().min_numerator(2), Some(9));
        assert!("2..1".parse::<RationalInterval>().is_err());
    }
}
