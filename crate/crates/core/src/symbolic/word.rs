//! Run-length words with symbolic exponents, and uniform morphisms whose
//! image is such a word followed by a shifted letter n + d.

use std::fmt;

use num_integer::Integer;
use serde_json::{json, Map, Value};

use super::form::{fmt_q, parse_q, ExtForm, LinearForm, RationalInterval, Q};
use crate::error::{Error, Result};
use crate::morphism::ExplicitMorphism;
use crate::word::{Fraction, Letter, Word};

/// A letter of a symbolic factor: an explicit value, or n_copy + d where
/// n_copy is the letter whose image contains this position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymLetter {
    Lit(u32),
    Var { copy: u32, d: u32 },
}

impl SymLetter {
    /// True when no assignment of the n's makes the two letters equal.
    pub fn never_equal(self, other: SymLetter) -> bool {
        match (self, other) {
            (SymLetter::Lit(x), SymLetter::Lit(y)) => x != y,
            (SymLetter::Lit(x), SymLetter::Var { d, .. }) | (SymLetter::Var { d, .. }, SymLetter::Lit(x)) => x < d,
            (SymLetter::Var { copy: c1, d: d1 }, SymLetter::Var { copy: c2, d: d2 }) => c1 == c2 && d1 != d2,
        }
    }

    /// Syntactic identity: the same letter for every assignment.
    pub fn same(self, other: SymLetter) -> bool {
        self == other
    }

    pub fn is_nonzero(self) -> bool {
        match self {
            SymLetter::Lit(x) => x > 0,
            SymLetter::Var { d, .. } => d > 0,
        }
    }

    pub fn is_zero(self) -> bool {
        self == SymLetter::Lit(0)
    }

    pub fn renamed(self, offset: u32) -> SymLetter {
        match self {
            SymLetter::Var { copy, d } => SymLetter::Var { copy: copy + offset, d },
            l => l,
        }
    }

    /// Explicit value given values for the n's.
    pub fn value(self, n: &dyn Fn(u32) -> u32) -> u32 {
        match self {
            SymLetter::Lit(x) => x,
            SymLetter::Var { copy, d } => n(copy) + d,
        }
    }
}

impl fmt::Display for SymLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymLetter::Lit(x) => write!(f, "{x}"),
            SymLetter::Var { copy, d } => write!(f, "(n{copy}+{d})"),
        }
    }
}

/// A word given as blocks letter^exponent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymWord {
    pub blocks: Vec<(SymLetter, ExtForm)>,
}

impl SymWord {
    pub fn new() -> SymWord {
        SymWord::default()
    }

    pub fn push(&mut self, c: SymLetter, e: ExtForm) {
        if let Some(last) = self.blocks.last_mut() {
            if last.0 == c && matches!(c, SymLetter::Lit(_)) {
                last.1 = last.1 + e;
                return;
            }
        }
        self.blocks.push((c, e));
    }

    pub fn len_form(&self) -> ExtForm {
        self.blocks.iter().fold(ExtForm::default(), |s, b| s + b.1)
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Substitute the slide parameters.
    pub fn at(&self, i: LinearForm, j: LinearForm) -> SymWord {
        SymWord {
            blocks: self
                .blocks
                .iter()
                .map(|&(c, e)| (c, ExtForm::from(e.at(i, j))))
                .collect(),
        }
    }

    /// Rename i to j and shift variable copies, for comparing two
    /// independent occurrences.
    pub fn as_second(&self, offset: u32) -> SymWord {
        SymWord {
            blocks: self
                .blocks
                .iter()
                .map(|&(c, e)| (c.renamed(offset), e.i_to_j()))
                .collect(),
        }
    }

    /// Explicit letters at a point, with symbolic letters kept as cells.
    pub fn expand(&self, a: i64, b: i64, i: i64, j: i64) -> Vec<SymLetter> {
        let mut out = Vec::new();
        for &(c, e) in &self.blocks {
            let n = e.eval(a, b, i, j);
            assert!(n >= 0, "negative exponent {e} at {a}/{b}, i={i}");
            out.extend(std::iter::repeat(c).take(n as usize));
        }
        out
    }
}

impl fmt::Display for SymWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|(c, e)| {
                if e.is_const(1) {
                    c.to_string()
                } else {
                    format!("{c}^{{{e}}}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// φ(n) = c_0^{e_0} c_1^{e_1} ⋯ (n + d), with k = s·a − t·b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicMorphism {
    pub name: String,
    pub blocks: Vec<(LinearForm, u32)>,
    pub d: u32,
    pub k: LinearForm,
    pub interval: RationalInterval,
    /// gcd(b, g) = 1 is required for each listed g.
    pub gcd: Vec<i64>,
    /// Rationals excluded in the statement.
    pub exceptions: Vec<Q>,
    /// Rationals excluded as input to the search (perfect-power images).
    pub assume_excluded: Vec<Q>,
    /// Claimed locating length, if known.
    pub locates: Option<LinearForm>,
}

impl SymbolicMorphism {
    pub fn new(
        name: &str,
        blocks: Vec<(LinearForm, u32)>,
        d: u32,
        interval: RationalInterval,
        gcd: Vec<i64>,
    ) -> SymbolicMorphism {
        let k = blocks.iter().fold(LinearForm::ONE, |s, b| s + b.0);
        SymbolicMorphism {
            name: name.to_string(),
            blocks,
            d,
            k,
            interval,
            gcd,
            exceptions: Vec::new(),
            assume_excluded: Vec::new(),
            locates: None,
        }
    }

    /// s and t with k = s·a − t·b.
    pub fn st(&self) -> (i64, i64) {
        (self.k.a, -self.k.b)
    }

    pub fn nonzero_letters(&self) -> usize {
        self.blocks.iter().filter(|b| b.1 != 0).count() + 1
    }

    /// Sum of exponents plus one must equal k.
    pub fn check_length(&self) -> Result<()> {
        let sum = self.blocks.iter().fold(LinearForm::ONE, |s, b| s + b.0);
        if sum != self.k || self.k.c != 0 {
            return Err(Error::Invalid(format!(
                "{}: exponents sum to {} but k = {}",
                self.name,
                sum - LinearForm::ONE,
                self.k
            )));
        }
        Ok(())
    }

    /// Whether a/b satisfies every hypothesis of the statement.
    pub fn admits(&self, a: i64, b: i64) -> Result<()> {
        let x = Q::new(a, b);
        let f = format!("{a}/{b}");
        if !self.interval.contains(x) {
            return Err(Error::OutOfInterval(f));
        }
        if let Some(g) = self.gcd.iter().find(|&&g| b.gcd(&g) != 1) {
            return Err(Error::GcdViolation(format!("gcd({b}, {g}) ≠ 1")));
        }
        if self.exceptions.contains(&x) || self.assume_excluded.contains(&x) {
            return Err(Error::ExceptionRational(f));
        }
        Ok(())
    }

    /// The explicit morphism at (a, b) without checking hypotheses.
    pub fn at(&self, a: i64, b: i64) -> Result<ExplicitMorphism> {
        let mut u = Vec::new();
        for &(e, c) in &self.blocks {
            let n = e.eval(a, b);
            if n < 0 {
                return Err(Error::OutOfInterval(format!(
                    "{a}/{b}: exponent {e} is {n}"
                )));
            }
            u.extend(std::iter::repeat(Letter::new(c)).take(n as usize));
        }
        Ok(ExplicitMorphism::shift(Word::from(u), self.d))
    }

    pub fn instantiate(&self, f: Fraction) -> Result<ExplicitMorphism> {
        let (a, b) = (f.a as i64, f.b as i64);
        self.admits(a, b)?;
        self.at(a, b)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), json!("symbolic-shift"));
        m.insert("name".into(), json!(self.name));
        m.insert(
            "blocks".into(),
            Value::Array(
                self.blocks
                    .iter()
                    .map(|(e, c)| json!([e.to_array(), c]))
                    .collect(),
            ),
        );
        m.insert("d".into(), json!(self.d));
        m.insert("k".into(), json!(self.k.to_array()));
        m.insert("interval".into(), json!(self.interval.to_string()));
        m.insert("gcd".into(), json!(self.gcd));
        let qs = |v: &[Q]| Value::Array(v.iter().map(|q| json!(fmt_q(q))).collect());
        m.insert("exceptions".into(), qs(&self.exceptions));
        m.insert("assume_excluded".into(), qs(&self.assume_excluded));
        if let Some(l) = self.locates {
            m.insert("locates".into(), json!(l.to_array()));
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<SymbolicMorphism> {
        let bad = |what: &str| Error::Parse(format!("symbolic morphism: bad or missing {what}"));
        let form = |v: &Value| -> Result<LinearForm> {
            let a = v.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("linear form"))?;
            let c: Vec<i64> = a.iter().map(|x| x.as_i64().ok_or_else(|| bad("coefficient"))).collect::<Result<_>>()?;
            Ok(LinearForm::new(c[0], c[1], c[2]))
        };
        if v.get("kind").and_then(Value::as_str) != Some("symbolic-shift") {
            return Err(bad("kind"));
        }
        let name = v.get("name").and_then(Value::as_str).unwrap_or("").to_string();
        let mut blocks = Vec::new();
        for blk in v.get("blocks").and_then(Value::as_array).ok_or_else(|| bad("blocks"))? {
            let pair = blk.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("block"))?;
            let c = pair[1].as_u64().ok_or_else(|| bad("block letter"))? as u32;
            blocks.push((form(&pair[0])?, c));
        }
        let d = v.get("d").and_then(Value::as_u64).ok_or_else(|| bad("d"))? as u32;
        let k = form(v.get("k").ok_or_else(|| bad("k"))?)?;
        let interval: RationalInterval = v
            .get("interval")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("interval"))?
            .parse()?;
        let ints = |key: &str| -> Result<Vec<i64>> {
            match v.get(key) {
                None => Ok(vec![]),
                Some(x) => x
                    .as_array()
                    .ok_or_else(|| bad(key))?
                    .iter()
                    .map(|g| g.as_i64().ok_or_else(|| bad(key)))
                    .collect(),
            }
        };
        let rats = |key: &str| -> Result<Vec<Q>> {
            match v.get(key) {
                None => Ok(vec![]),
                Some(x) => x
                    .as_array()
                    .ok_or_else(|| bad(key))?
                    .iter()
                    .map(|g| parse_q(g.as_str().ok_or_else(|| bad(key))?))
                    .collect(),
            }
        };
        let locates = match v.get("locates") {
            Some(l) if !l.is_null() => Some(form(l)?),
            _ => None,
        };
        let m = SymbolicMorphism {
            name,
            blocks,
            d,
            k,
            interval,
            gcd: ints("gcd")?,
            exceptions: rats("exceptions")?,
            assume_excluded: rats("assume_excluded")?,
            locates,
        };
        m.check_length()?;
        Ok(m)
    }

    pub fn parse(text: &str) -> Result<SymbolicMorphism> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        SymbolicMorphism::from_json(&v)
    }

    /// The image as a symbolic word (blocks with zero exponents kept).
    pub fn image_word(&self) -> SymWord {
        let mut w = SymWord::new();
        for &(e, c) in &self.blocks {
            w.blocks.push((SymLetter::Lit(c), ExtForm::from(e)));
        }
        w.blocks.push((SymLetter::Var { copy: 0, d: self.d }, ExtForm::constant(1)));
        w
    }
}

impl fmt::Display for SymbolicMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "φ(n) = ")?;
        for (e, c) in &self.blocks {
            if *e == LinearForm::ONE {
                write!(f, "{c} ")?;
            } else {
                write!(f, "{c}^{{{e}}} ")?;
            }
        }
        write!(f, "(n+{})  [k = {}, {}", self.d, self.k, self.interval)?;
        if !self.gcd.is_empty() {
            let g: Vec<String> = self.gcd.iter().map(|g| g.to_string()).collect();
            write!(f, ", gcd(b,{})=1", g.join(","))?;
        }
        write!(f, "]")
    }
}

/// The morphism of the 4r-nonzero-letter family for a given r ≥ 2, built
/// from the words A, B, C, X, Y, Z. For r = 2 the factor Y·B^{r−3} is
/// reduced in the free group.
pub fn conj4r_morphism(r: i64) -> Result<SymbolicMorphism> {
    if r < 2 {
        return Err(Error::Invalid(format!("r = {r}: need r ≥ 2")));
    }
    #[derive(Clone, Copy)]
    enum Tok {
        Zeros(LinearForm),
        One,
        InvOne,
    }
    let lf = LinearForm::new;
    let piece = |e: LinearForm| vec![Tok::Zeros(e), Tok::One];
    let a_ = piece(lf(1, -1, -1));
    let b_ = piece(lf(2, -2, -1));
    let c_ = piece(lf(3, -3, -1));
    let x_ = piece(lf(2 * r + 1, -(2 * r + 2), -1));
    let y_ = piece(lf(-(2 * r - 2), 2 * r - 1, -1));
    let z_ = piece(lf(2 * r, -(2 * r + 1), -1));
    let inv_b = vec![Tok::InvOne, Tok::Zeros(lf(-2, 2, 1))];
    let pow = |w: &Vec<Tok>, n: i64| -> Vec<Tok> {
        if n >= 0 {
            (0..n).flat_map(|_| w.clone()).collect()
        } else {
            (0..-n).flat_map(|_| inv_b.clone()).collect()
        }
    };
    let mut seq: Vec<Tok> = Vec::new();
    seq.extend(x_.clone());
    for _ in 0..r - 2 {
        seq.extend(y_.clone());
        seq.extend(z_.clone());
    }
    seq.extend(b_.clone());
    seq.extend(a_.clone());
    seq.extend(y_.clone());
    seq.extend(pow(&b_, r - 2));
    seq.extend(c_.clone());
    seq.extend(y_.clone());
    seq.extend(pow(&b_, r - 3));
    seq.extend(y_.clone());
    seq.extend(a_.clone());
    seq.push(Tok::Zeros(lf(1, -1, -1)));

    // free reduction: One·InvOne cancels, adjacent zero runs merge
    let mut red: Vec<Tok> = Vec::new();
    for t in seq {
        match (red.last().copied(), t) {
            (Some(Tok::One), Tok::InvOne) => {
                red.pop();
            }
            (Some(Tok::Zeros(e)), Tok::Zeros(g)) => {
                red.pop();
                red.push(Tok::Zeros(e + g));
            }
            _ => red.push(t),
        }
    }
    let mut blocks = Vec::new();
    for t in red {
        match t {
            Tok::Zeros(e) => blocks.push((e, 0)),
            Tok::One => blocks.push((LinearForm::ONE, 1)),
            Tok::InvOne => return Err(Error::Invalid("unreduced inverse letter".into())),
        }
    }
    let interval = RationalInterval::open(Q::new(2 * r + 1, 2 * r), Q::new(2 * r, 2 * r - 1))?;
    let mut m = SymbolicMorphism::new(
        &format!("{} {}", 4 * r, lf(2 * r + 1, -(2 * r - 1), 0)),
        blocks,
        1,
        interval,
        vec![2 * r + 1],
    );
    m.exceptions = vec![Q::new(4 * r + 1, 4 * r - 1)];
    if m.k != lf(2 * r + 1, -(2 * r - 1), 0) {
        return Err(Error::Inconsistent(format!("conj4r({r}): k = {}", m.k)));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_two_a_minus_b_instances() {
        let m = SymbolicMorphism::new(
            "2 2a-b",
            vec![
                (LinearForm::new(1, 0, -1), 0),
                (LinearForm::ONE, 1),
                (LinearForm::new(1, -1, -1), 0),
            ],
            1,
            "[5/3..2)".parse().unwrap(),
            vec![2],
        );
        let e = m.instantiate(Fraction::new(5, 3).unwrap()).unwrap();
        assert_eq!(e.k, 7);
        assert_eq!(e.image(Letter::new(0)).unwrap().digits(), "0000101");
        let e = m.instantiate(Fraction::new(9, 5).unwrap()).unwrap();
        assert_eq!(e.image(Letter::new(0)).unwrap().digits(), "0000000010001");
        assert_eq!(
            m.instantiate(Fraction::new(3, 2).unwrap()),
            Err(Error::OutOfInterval("3/2".into()))
        );
        assert!(matches!(
            m.instantiate(Fraction::new(7, 4).unwrap()),
            Err(Error::GcdViolation(_))
        ));
    }

    #[test]
    fn four_r_family_has_right_size() {
        for r in 2..=6 {
            let m = conj4r_morphism(r).unwrap();
            m.check_length().unwrap();
            assert_eq!(m.nonzero_letters() as i64, 4 * r);
        }
    }
}
