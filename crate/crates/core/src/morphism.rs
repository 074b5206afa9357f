//! Uniform shift morphisms φ(n) = u·(n + d), with letter-dependent last letters,
//! a transient φ(0′) = v·φ(0), and full replacement images for primed letters.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// An explicit k-uniform morphism on ℤ≥0, optionally extended to 0′ and 1′.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExplicitMorphism {
    pub k: usize,
    /// φ(n) without its last letter, for every n ∈ ℤ≥0.
    pub u: Word,
    pub d: u32,
    /// n ↦ last letter of φ(n), overriding n + d.
    pub shift_exceptions: BTreeMap<u32, u32>,
    /// v, with φ(0′) = v·φ(0).
    pub transient: Option<Word>,
    /// Full images of 0′ or 1′ that are not of the form v·φ(0).
    pub primed_overrides: BTreeMap<Letter, Word>,
}

/// One named hypothesis check.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl ExplicitMorphism {
    /// φ(n) = u·(n + d).
    pub fn shift(u: Word, d: u32) -> ExplicitMorphism {
        ExplicitMorphism {
            k: u.len() + 1,
            u,
            d,
            shift_exceptions: BTreeMap::new(),
            transient: None,
            primed_overrides: BTreeMap::new(),
        }
    }

    pub fn with_transient(mut self, v: Word) -> ExplicitMorphism {
        self.transient = Some(v);
        self
    }

    pub fn with_exception(mut self, n: u32, last: u32) -> ExplicitMorphism {
        self.shift_exceptions.insert(n, last);
        self
    }

    pub fn with_override(mut self, letter: Letter, image: Word) -> ExplicitMorphism {
        self.primed_overrides.insert(letter, image);
        self
    }

    /// Last letter of φ(n) for n ∈ ℤ≥0.
    pub fn last(&self, n: u32) -> u32 {
        match self.shift_exceptions.get(&n) {
            Some(&c) => c,
            None => n.checked_add(self.d).expect("letter overflow"),
        }
    }

    /// Whether some n ∈ ℤ≥0 has last(n) = c.
    pub fn last_attains(&self, c: u32) -> bool {
        if self.shift_exceptions.values().any(|&x| x == c) {
            return true;
        }
        c >= self.d && !self.shift_exceptions.contains_key(&(c - self.d))
    }

    /// The letter φ^∞ starts from.
    pub fn start_letter(&self) -> Letter {
        if self.transient.is_some() || self.primed_overrides.contains_key(&Letter::primed(0)) {
            Letter::primed(0)
        } else {
            Letter::new(0)
        }
    }

    fn transient_len(&self) -> usize {
        self.transient.as_ref().map_or(0, |v| v.len())
    }

    /// Letter r of φ(c).
    pub fn image_letter(&self, c: Letter, r: usize) -> Result<Letter> {
        if c.is_primed() {
            if let Some(img) = self.primed_overrides.get(&c) {
                return img
                    .get(r)
                    .copied()
                    .ok_or_else(|| Error::Invalid(format!("image of {c} is too short")));
            }
            if c == Letter::primed(0) {
                if let Some(v) = &self.transient {
                    return if r < v.len() {
                        Ok(v[r])
                    } else {
                        self.image_letter(Letter::new(0), r - v.len())
                    };
                }
            }
            return Err(Error::UnknownLetter(c.to_string()));
        }
        if r + 1 < self.k {
            Ok(self.u[r])
        } else if r + 1 == self.k {
            Ok(Letter::new(self.last(c.value())))
        } else {
            Err(Error::Invalid(format!("position {r} outside image of length {}", self.k)))
        }
    }

    pub fn image(&self, c: Letter) -> Result<Word> {
        let len = self.image_len(c)?;
        (0..len).map(|r| self.image_letter(c, r)).collect()
    }

    pub fn image_len(&self, c: Letter) -> Result<usize> {
        if !c.is_primed() {
            return Ok(self.k);
        }
        if let Some(img) = self.primed_overrides.get(&c) {
            return Ok(img.len());
        }
        if c == Letter::primed(0) && self.transient.is_some() {
            return Ok(self.transient_len() + self.k);
        }
        Err(Error::UnknownLetter(c.to_string()))
    }

    /// φ(w), by concatenation.
    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        let mut out = Vec::with_capacity(w.len() * self.k);
        for &c in w {
            out.extend(self.image(c)?.letters);
        }
        Ok(Word::from(out))
    }

    fn check_prolongable(&self) -> Result<()> {
        let s = self.start_letter();
        let first = self.image_letter(s, 0)?;
        if first != s {
            return Err(Error::NotProlongable(format!("φ({s}) begins with {first}")));
        }
        if self.k < 2 {
            return Err(Error::NotProlongable("k < 2".into()));
        }
        Ok(())
    }

    /// Prefix of φ^∞(start) with primes kept.
    pub fn expand_raw(&self, n: usize) -> Result<Word> {
        self.check_prolongable()?;
        let start = self.start_letter();
        let mut raw: Vec<Letter> = Vec::with_capacity(n);
        let tl = self.transient_len();
        let k = self.k;
        for i in 0..n {
            let c = if i == 0 {
                start
            } else if tl > 0 {
                if i < tl {
                    self.transient.as_ref().unwrap()[i]
                } else {
                    let j = i - tl;
                    let q = j / k;
                    let src = if q == 0 { Letter::new(0) } else { raw[q] };
                    self.image_letter(src, j % k)?
                }
            } else {
                self.image_letter(raw[i / k], i % k)?
            };
            raw.push(c);
        }
        Ok(Word::from(raw))
    }

    /// Prefix of length n of τ(φ^∞(start)).
    pub fn expand_fixed_point(&self, n: usize) -> Result<Word> {
        Ok(self.expand_raw(n)?.coded())
    }

    /// Letter i of φ^∞(start), primes kept, from the base-k recurrence.
    pub fn raw_letter_at(&self, i: usize) -> Result<Letter> {
        self.check_prolongable()?;
        self.raw_at(i)
    }

    fn raw_at(&self, i: usize) -> Result<Letter> {
        let k = self.k;
        if i == 0 {
            return Ok(self.start_letter());
        }
        match &self.transient {
            Some(v) => {
                if i < v.len() {
                    return Ok(v[i]);
                }
                let j = i - v.len();
                let q = j / k;
                let src = if q == 0 { Letter::new(0) } else { self.raw_at(q)? };
                self.image_letter(src, j % k)
            }
            None => {
                let src = self.raw_at(i / k)?;
                self.image_letter(src, i % k)
            }
        }
    }

    /// w(i) = τ(φ^∞(start))(i).
    pub fn letter_at(&self, i: usize) -> Result<Letter> {
        Ok(self.raw_letter_at(i)?.coded())
    }

    /// Hypothesis checks: uniformity, prolongability, a-power images, and
    /// images differing in at most one position.
    pub fn validate(&self) -> Vec<CheckResult> {
        let mut out = Vec::new();

        let mut uniform = self.u.len() + 1 == self.k && self.k >= 2;
        let mut detail = format!("k = {}, |u| = {}", self.k, self.u.len());
        for (c, img) in &self.primed_overrides {
            if img.len() != self.k {
                uniform = false;
                detail = format!("override image of {c} has length {}", img.len());
            }
        }
        if self.u.iter().any(|c| c.is_primed())
            && !self.u.iter().filter(|c| c.is_primed()).all(|c| self.image_len(*c).is_ok())
        {
            uniform = false;
            detail = "u contains a primed letter without an image".into();
        }
        out.push(CheckResult { name: "uniform", passed: uniform, detail });

        let transient_ok = match &self.transient {
            None => true,
            Some(v) => {
                !v.is_empty()
                    && v[0] == Letter::primed(0)
                    && v[1..].iter().all(|&c| c != Letter::primed(0))
                    && !self.primed_overrides.contains_key(&Letter::primed(0))
            }
        };
        out.push(CheckResult {
            name: "transient",
            passed: transient_ok,
            detail: match &self.transient {
                None => "no transient".into(),
                Some(v) => format!("|v| = {}", v.len()),
            },
        });

        let prolong = self.check_prolongable();
        out.push(CheckResult {
            name: "prolongable",
            passed: prolong.is_ok(),
            detail: match prolong {
                Ok(()) => format!("φ({}) begins with {}", self.start_letter(), self.start_letter()),
                Err(e) => e.to_string(),
            },
        });

        let power = self.perfect_power_image();
        out.push(CheckResult {
            name: "no-power-image",
            passed: power.is_none(),
            detail: match power {
                None => "no φ(n) is an integer power".into(),
                Some((n, p)) => format!("φ({n}) has period {p} dividing k = {}", self.k),
            },
        });

        // Every φ(n), n ∈ ℤ≥0, is u followed by one letter.
        out.push(CheckResult {
            name: "one-position-difference",
            passed: uniform,
            detail: "images of distinct letters differ only in the last position".into(),
        });
        out
    }

    /// Some (n, p) with φ(n) = (prefix of length p)^{k/p}, p < k.
    pub fn perfect_power_image(&self) -> Option<(u32, usize)> {
        let k = self.k;
        if self.u.len() + 1 != k {
            return None;
        }
        for p in 1..k {
            if k % p != 0 {
                continue;
            }
            let periodic = (p..k - 1).all(|i| self.u[i].value() == self.u[i - p].value());
            if !periodic {
                continue;
            }
            let want = self.u[k - 1 - p].value();
            if self.last_attains(want) {
                let n = self
                    .shift_exceptions
                    .iter()
                    .find(|(_, &c)| c == want)
                    .map(|(&n, _)| n)
                    .unwrap_or_else(|| want - self.d);
                return Some((n, p));
            }
        }
        None
    }

    /// Largest letter value appearing in u, v and overrides.
    pub fn max_explicit_letter(&self) -> u32 {
        let mut m = self.u.iter().map(|c| c.value()).max().unwrap_or(0);
        if let Some(v) = &self.transient {
            m = m.max(v.iter().map(|c| c.value()).max().unwrap_or(0));
        }
        for img in self.primed_overrides.values() {
            m = m.max(img.iter().map(|c| c.value()).max().unwrap_or(0));
        }
        m
    }

    /// Serialize in the morphism file dialect; `extra` fields are appended.
    pub fn to_json(&self, extra: &Map<String, Value>) -> Value {
        let mut obj = Map::new();
        obj.insert("kind".into(), json!("uniform-shift"));
        obj.insert("k".into(), json!(self.k));
        obj.insert("u".into(), encode_runs(&self.u));
        obj.insert("d".into(), json!(self.d));
        if !self.shift_exceptions.is_empty() {
            obj.insert(
                "shift_exceptions".into(),
                Value::Array(self.shift_exceptions.iter().map(|(n, c)| json!([n, c])).collect()),
            );
        }
        if let Some(v) = &self.transient {
            obj.insert("transient".into(), encode_runs(v));
        }
        if !self.primed_overrides.is_empty() {
            let mut m = Map::new();
            for (c, img) in &self.primed_overrides {
                m.insert(c.to_string(), encode_runs(img));
            }
            obj.insert("primed_overrides".into(), Value::Object(m));
        }
        for (key, val) in extra {
            obj.insert(key.clone(), val.clone());
        }
        Value::Object(obj)
    }

    /// Parse the morphism file dialect, returning unrecognized fields separately.
    pub fn from_json(v: &Value) -> Result<(ExplicitMorphism, Map<String, Value>)> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("morphism must be an object".into()))?;
        let kind = obj.get("kind").and_then(Value::as_str).unwrap_or("uniform-shift");
        if kind != "uniform-shift" {
            return Err(Error::Parse(format!("unsupported morphism kind {kind:?}")));
        }
        let u = decode_runs(obj.get("u").ok_or_else(|| Error::Parse("missing u".into()))?)?;
        let k = match obj.get("k") {
            Some(k) => k.as_u64().ok_or_else(|| Error::Parse("bad k".into()))? as usize,
            None => u.len() + 1,
        };
        let d = obj.get("d").and_then(Value::as_u64).unwrap_or(0);
        let d = u32::try_from(d).map_err(|_| Error::Parse("d overflows".into()))?;
        let mut shift_exceptions = BTreeMap::new();
        if let Some(ex) = obj.get("shift_exceptions") {
            for pair in ex.as_array().ok_or_else(|| Error::Parse("bad shift_exceptions".into()))? {
                let p = pair
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::Parse("shift exception must be [n, last]".into()))?;
                let n = p[0].as_u64().ok_or_else(|| Error::Parse("bad n".into()))?;
                let c = p[1].as_u64().ok_or_else(|| Error::Parse("bad last".into()))?;
                shift_exceptions.insert(n as u32, c as u32);
            }
        }
        let transient = obj.get("transient").map(decode_runs).transpose()?;
        let mut primed_overrides = BTreeMap::new();
        if let Some(o) = obj.get("primed_overrides") {
            for (key, img) in o.as_object().ok_or_else(|| Error::Parse("bad overrides".into()))? {
                let c: Letter = key.parse()?;
                if !c.is_primed() {
                    return Err(Error::Parse(format!("override key {key:?} is not primed")));
                }
                primed_overrides.insert(c, decode_runs(img)?);
            }
        }
        let known = ["kind", "k", "u", "d", "shift_exceptions", "transient", "primed_overrides"];
        let extra = obj
            .iter()
            .filter(|(key, _)| !known.contains(&key.as_str()))
            .map(|(key, val)| (key.clone(), val.clone()))
            .collect();
        let m = ExplicitMorphism {
            k,
            u,
            d,
            shift_exceptions,
            transient,
            primed_overrides,
        };
        if m.u.len() + 1 != m.k {
            return Err(Error::Parse(format!("|u| = {} but k = {}", m.u.len(), m.k)));
        }
        Ok((m, extra))
    }

    pub fn parse(text: &str) -> Result<(ExplicitMorphism, Map<String, Value>)> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        ExplicitMorphism::from_json(&v)
    }
}

impl fmt::Display for ExplicitMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "φ(n) = ")?;
        for (c, n) in runs(&self.u) {
            if n == 1 {
                write!(f, "{c} ")?;
            } else {
                write!(f, "{c}^{n} ")?;
            }
        }
        write!(f, "(n+{}), k = {}", self.d, self.k)
    }
}

fn letter_json(c: Letter) -> Value {
    if c.is_primed() {
        json!(c.to_string())
    } else {
        json!(c.value())
    }
}

fn letter_from_json(v: &Value) -> Result<Letter> {
    match v {
        Value::Number(n) => {
            Letter::checked(n.as_u64().ok_or_else(|| Error::Parse(format!("bad letter {n}")))?)
        }
        Value::String(s) => s.parse(),
        _ => Err(Error::Parse(format!("bad letter {v}"))),
    }
}

/// Maximal runs (letter, count).
pub fn runs(w: &[Letter]) -> Vec<(Letter, usize)> {
    let mut out: Vec<(Letter, usize)> = Vec::new();
    for &c in w {
        match out.last_mut() {
            Some((x, n)) if *x == c => *n += 1,
            _ => out.push((c, 1)),
        }
    }
    out
}

/// Run-length pairs `[[letter, count], ...]`.
pub fn encode_runs(w: &[Letter]) -> Value {
    Value::Array(
        runs(w)
            .into_iter()
            .map(|(c, n)| json!([letter_json(c), n]))
            .collect(),
    )
}

/// Accepts run-length pairs or a flat list of letters.
pub fn decode_runs(v: &Value) -> Result<Word> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("word must be a list".into()))?;
    let mut out = Vec::new();
    for item in arr {
        match item {
            Value::Array(pair) if pair.len() == 2 => {
                let c = letter_from_json(&pair[0])?;
                let n = pair[1]
                    .as_u64()
                    .ok_or_else(|| Error::Parse("bad run count".into()))?;
                out.extend(std::iter::repeat(c).take(n as usize));
            }
            other => out.push(letter_from_json(other)?),
        }
    }
    Ok(Word::from(out))
}

/// The 6-uniform morphism with primed letters whose coded fixed point is w_{3/2}.
pub fn three_halves_morphism() -> ExplicitMorphism {
    let p0 = Letter::primed(0);
    let p1 = Letter::primed(1);
    let l = Letter::new;
    ExplicitMorphism::shift(Word::from(vec![p1, l(0), p0, l(1), p1]), 2)
        .with_override(p0, Word::from(vec![p0, l(0), p1, l(1), p0, l(2)]))
        .with_override(p1, Word::from(vec![p0, l(0), p1, l(1), p0, l(3)]))
}

/// φ(n) = 0^{a−1}(n + 1), whose fixed point is w_a.
pub fn integer_power_morphism(a: u32) -> ExplicitMorphism {
    ExplicitMorphism::shift(Word::from_values(&vec![0; a as usize - 1]), 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_points() {
        let m = integer_power_morphism(2);
        assert_eq!(m.expand_fixed_point(8).unwrap().digits(), "01020103");
        let m = ExplicitMorphism::shift(Word::from_digits("000010"), 1);
        assert_eq!(m.expand_fixed_point(14).unwrap().digits(), "00001010000101");
        let m = three_halves_morphism();
        assert_eq!(m.expand_fixed_point(12).unwrap().digits(), "001102100112");
    }

    #[test]
    fn apply_concatenates() {
        let m = integer_power_morphism(2);
        assert_eq!(m.apply(&Word::from_digits("01")).unwrap().digits(), "0102");
        assert!(m.apply(&[]).unwrap().is_empty());
        assert!(m.apply(&[Letter::primed(1)]).is_err());
    }

    #[test]
    fn letter_at_matches_expansion() {
        for m in [
            integer_power_morphism(2),
            three_halves_morphism(),
            ExplicitMorphism::shift(Word::from_digits("000010"), 1),
            ExplicitMorphism::shift(Word::from_digits("0102"), 2)
                .with_transient("0' 1 1 0 2".parse().unwrap())
                .with_exception(0, 1),
        ] {
            let w = m.expand_fixed_point(3000).unwrap();
            for (i, &c) in w.iter().enumerate() {
                assert_eq!(m.letter_at(i).unwrap(), c, "{m} at {i}");
            }
        }
        assert_eq!(integer_power_morphism(2).letter_at(15).unwrap(), Letter::new(4));
    }

    #[test]
    fn validation() {
        let m = ExplicitMorphism::shift(Word::from_digits("000010"), 1);
        assert!(m.validate().iter().all(|c| c.passed));
        let sq = ExplicitMorphism::shift(Word::from_digits("00100"), 1);
        let checks = sq.validate();
        assert!(!checks.iter().find(|c| c.name == "no-power-image").unwrap().passed);
        let not_prolongable = ExplicitMorphism::shift(Word::from_digits("10"), 1);
        assert!(not_prolongable.expand_fixed_point(3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = three_halves_morphism().with_exception(4, 9);
        let mut extra = Map::new();
        extra.insert("name".into(), json!("test"));
        let text = serde_json::to_string(&m.to_json(&extra)).unwrap();
        let (back, extra_back) = ExplicitMorphism::parse(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(extra_back, extra);
        let (flat, _) = ExplicitMorphism::parse(r#"{"k": 3, "u": [0, 0], "d": 1}"#).unwrap();
        assert_eq!(flat, integer_power_morphism(3));
    }
}
