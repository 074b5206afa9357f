//! Letters, words, fractional powers and the greedy lexicographically least generator.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};
use std::ops::{Deref, DerefMut};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

const PRIME_BIT: u32 = 1 << 31;

/// A letter of ℤ≥0, or one of the marked letters 0′ and 1′.
///
/// Marked letters are internal to transient and extended morphisms; the coding τ
/// erases the mark.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub const MAX_VALUE: u32 = PRIME_BIT - 1;

    pub fn new(value: u32) -> Letter {
        assert!(value <= Self::MAX_VALUE, "letter value {value} overflows");
        Letter(value)
    }

    pub fn checked(value: u64) -> Result<Letter> {
        if value > Self::MAX_VALUE as u64 {
            return Err(Error::LetterOverflow(value));
        }
        Ok(Letter(value as u32))
    }

    /// The marked letter 0′ or 1′.
    pub fn primed(value: u32) -> Letter {
        assert!(value <= 1, "only 0 and 1 may be primed");
        Letter(value | PRIME_BIT)
    }

    pub fn value(self) -> u32 {
        self.0 & !PRIME_BIT
    }

    pub fn is_primed(self) -> bool {
        self.0 & PRIME_BIT != 0
    }

    /// τ(self).
    pub fn coded(self) -> Letter {
        Letter(self.value())
    }
}

impl From<u32> for Letter {
    fn from(v: u32) -> Letter {
        Letter::new(v)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_primed() {
            write!(f, "{}'", self.value())
        } else {
            write!(f, "{}", self.value())
        }
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Letter> {
        let s = s.trim();
        let (digits, primed) = match s.strip_suffix('\'') {
            Some(d) => (d, true),
            None => (s, false),
        };
        let v: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad letter {s:?}")))?;
        if primed {
            if v > 1 {
                return Err(Error::Parse(format!("only 0 and 1 may be primed, got {s:?}")));
            }
            Ok(Letter::primed(v as u32))
        } else {
            Letter::checked(v)
        }
    }
}

/// A finite word, indexed from position 0.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn from_values(values: &[u32]) -> Word {
        Word {
            letters: values.iter().map(|&v| Letter::new(v)).collect(),
        }
    }

    /// Parse a digit string such as "001102" (one letter per character).
    pub fn from_digits(s: &str) -> Word {
        Word {
            letters: s
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| Letter::new(c.to_digit(10).expect("decimal digit")))
                .collect(),
        }
    }

    pub fn values(&self) -> Vec<u32> {
        self.letters.iter().map(|l| l.value()).collect()
    }

    /// τ applied letterwise.
    pub fn coded(&self) -> Word {
        Word {
            letters: self.letters.iter().map(|l| l.coded()).collect(),
        }
    }

    /// Concatenated digits; only meaningful when every letter is below 10.
    pub fn digits(&self) -> String {
        self.letters.iter().map(|l| l.to_string()).collect()
    }
}

impl Deref for Word {
    type Target = Vec<Letter>;
    fn deref(&self) -> &Vec<Letter> {
        &self.letters
    }
}

impl DerefMut for Word {
    fn deref_mut(&mut self) -> &mut Vec<Letter> {
        &mut self.letters
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Word {
        Word { letters }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word {
            letters: iter.into_iter().collect(),
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

/// Space-separated decimal letters, primes rendered as `0'` and `1'`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        s.split_whitespace().map(Letter::from_str).collect()
    }
}

/// The exponent a/b, reduced and greater than 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fraction {
    pub a: u32,
    pub b: u32,
}

impl Fraction {
    pub fn new(a: u32, b: u32) -> Result<Fraction> {
        if b == 0 || a == 0 {
            return Err(Error::InvalidFraction(format!("{a}/{b}: zero term")));
        }
        if a.gcd(&b) != 1 {
            return Err(Error::InvalidFraction(format!("{a}/{b} is not reduced")));
        }
        if a <= b {
            return Err(Error::InvalidFraction(format!(
                "{a}/{b} <= 1: every word of length a is an a/b-power"
            )));
        }
        Ok(Fraction { a, b })
    }

    /// Reduce first, then validate.
    pub fn reduced(a: u32, b: u32) -> Result<Fraction> {
        if b == 0 {
            return Err(Error::InvalidFraction(format!("{a}/0")));
        }
        let g = a.gcd(&b).max(1);
        Fraction::new(a / g, b / g)
    }

    pub fn ratio(self) -> Ratio<i64> {
        Ratio::new(self.a as i64, self.b as i64)
    }

    pub fn in_unit_interval(self) -> bool {
        self.a < 2 * self.b
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Fraction> {
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        let a: u32 = a.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let b: u32 = b.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        Fraction::new(a, b)
    }
}

/// Which powers are forbidden.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AvoidMode {
    /// a/b-powers only.
    Exact,
    /// p/q-powers for every p/q ≥ a/b.
    AtLeast,
    /// p/q-powers for every p/q > a/b.
    Greater,
}

impl FromStr for AvoidMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<AvoidMode> {
        match s {
            "exact" => Ok(AvoidMode::Exact),
            "geq" | "atleast" | "at-least" => Ok(AvoidMode::AtLeast),
            "gt" | "greater" => Ok(AvoidMode::Greater),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// Number of positions j with w(j) = w(j − p) that a factor with period p needs
/// before it is forbidden; `None` when period p is irrelevant in this mode.
fn period_threshold(f: Fraction, mode: AvoidMode, p: u64) -> Option<u64> {
    let (a, b) = (f.a as u64, f.b as u64);
    match mode {
        AvoidMode::Exact => {
            if p % b == 0 {
                Some(p / b * (a - b))
            } else {
                None
            }
        }
        AvoidMode::AtLeast => Some((p * (a - b)).div_ceil(b)),
        AvoidMode::Greater => Some(p * (a - b) / b + 1),
    }
}

fn values_eq(x: Letter, y: Letter) -> bool {
    x.value() == y.value()
}

/// Whether `w` is an (a/b)-power: |w| = m·a and w(i) = w(i − m·b) for m·b ≤ i < m·a.
pub fn is_fractional_power(w: &[Letter], f: Fraction) -> bool {
    let n = w.len();
    let a = f.a as usize;
    if n == 0 || n % a != 0 {
        return false;
    }
    let p = n / a * f.b as usize;
    (p..n).all(|i| values_eq(w[i], w[i - p]))
}

/// Leftmost, then shortest, factor of `w` that is an a/b-power, as (start, m).
pub fn find_power_factor(w: &[Letter], f: Fraction) -> Option<(usize, usize)> {
    let (a, b) = (f.a as usize, f.b as usize);
    let n = w.len();
    for start in 0..n {
        let mut m = 1;
        while start + m * a <= n {
            let p = m * b;
            let x = m * (a - b);
            if (0..x).all(|t| values_eq(w[start + p + t], w[start + t])) {
                return Some((start, m));
            }
            m += 1;
        }
    }
    None
}

/// Leftmost, then shortest, factor forbidden in `mode`, as (start, length, period).
pub fn find_forbidden_factor(
    w: &[Letter],
    f: Fraction,
    mode: AvoidMode,
) -> Option<(usize, usize, usize)> {
    let n = w.len();
    for start in 0..n {
        let mut best: Option<(usize, usize)> = None;
        for p in 1..n - start {
            let Some(t) = period_threshold(f, mode, p as u64) else {
                continue;
            };
            let need = p + t as usize;
            if start + need > n || best.is_some_and(|(len, _)| len <= need) {
                continue;
            }
            if (0..t as usize).all(|j| values_eq(w[start + p + j], w[start + j])) {
                best = Some((need, p));
            }
        }
        if let Some((len, p)) = best {
            return Some((start, len, p));
        }
    }
    None
}

/// The shortest forbidden suffix of `w`.
///
/// In `Exact` mode the result is m, the suffix being an a/b-power of length m·a.
/// In the other modes it is the period q′ of the shortest suffix with a forbidden
/// exponent.
pub fn power_suffix(w: &[Letter], f: Fraction, mode: AvoidMode) -> Option<usize> {
    let n = w.len();
    let mut best: Option<(usize, usize)> = None;
    for p in 1..=n {
        let Some(t) = period_threshold(f, mode, p as u64) else {
            continue;
        };
        let need = p + t as usize;
        if need > n {
            continue;
        }
        if (0..t as usize).all(|j| values_eq(w[n - 1 - j], w[n - 1 - j - p])) {
            if best.is_none_or(|(len, _)| need < len) {
                best = Some((need, p));
            }
        }
    }
    best.map(|(len, p)| match mode {
        AvoidMode::Exact => len / f.a as usize,
        _ => p,
    })
}

/// Lexicographic comparison of letter values on the common prefix range.
pub fn compare_lex(w1: &[Letter], w2: &[Letter]) -> Ordering {
    for (x, y) in w1.iter().zip(w2.iter()) {
        match x.value().cmp(&y.value()) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Least position of each letter value.
pub fn first_occurrences(w: &[Letter]) -> BTreeMap<u32, usize> {
    let mut out = BTreeMap::new();
    for (i, l) in w.iter().enumerate() {
        out.entry(l.value()).or_insert(i);
    }
    out
}

const HASH_MOD: u64 = (1 << 61) - 1;
const HASH_BASE: u64 = 1_000_003;

fn mul_mod(x: u64, y: u64) -> u64 {
    let r = (x as u128) * (y as u128);
    let lo = (r as u64) & HASH_MOD;
    let hi = (r >> 61) as u64;
    let s = lo + hi;
    if s >= HASH_MOD {
        s - HASH_MOD
    } else {
        s
    }
}

struct Scale {
    lo: usize,
    hi: usize,
    /// Length of the suffix window hashed at this scale.
    h: usize,
    /// Most recent window end for each hash.
    heads: HashMap<u64, u32, BuildHasherDefault<KeyHasher>>,
    /// Previous window end with the same hash, or `NONE`.
    prev: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl Scale {
    fn insert(&mut self, key: u64, e: usize) {
        if self.prev.len() < e {
            self.prev.resize(e, NONE);
        }
        let old = self.heads.insert(key, e as u32).unwrap_or(NONE);
        self.prev.push(old);
    }
}

/// Identity hasher for keys that are already uniformly mixed.
#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = self.0.rotate_left(8) ^ b as u64;
        }
    }
    fn write_u64(&mut self, x: u64) {
        self.0 = x.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }
    fn write_usize(&mut self, x: usize) {
        self.write_u64(x as u64);
    }
}

/// Incremental greedy generator of the lexicographically least word avoiding the
/// powers selected by `mode`.
///
/// A period p forbids the letter w(n − p) at position n when the last
/// threshold(p) − 1 positions already repeat with period p. Short periods keep an
/// explicit run counter. Long periods are grouped in dyadic scales; a long period
/// only matters once its run is a fixed fraction of p, and such runs are found by
/// looking up the hashed suffix among earlier positions at that distance, then
/// tracked exactly until they break.
pub struct Generator {
    f: Fraction,
    mode: AvoidMode,
    w: Vec<u32>,
    small_limit: usize,
    small_periods: Vec<usize>,
    small_thresholds: Vec<u64>,
    small_runs: Vec<u64>,
    scales: Vec<Scale>,
    active: HashMap<usize, u64, BuildHasherDefault<KeyHasher>>,
    prefix_hash: Vec<u64>,
    powers: Vec<u64>,
}

impl Generator {
    pub fn new(f: Fraction, mode: AvoidMode) -> Generator {
        let mut small_limit = 64usize;
        loop {
            let t = (small_limit..small_limit + f.b as usize)
                .filter_map(|p| period_threshold(f, mode, p as u64))
                .next()
                .unwrap_or(0);
            if t >= 9 {
                break;
            }
            small_limit *= 2;
        }
        let small_periods: Vec<usize> = (1..small_limit)
            .filter(|&p| period_threshold(f, mode, p as u64).is_some())
            .collect();
        let small_thresholds = small_periods
            .iter()
            .map(|&p| period_threshold(f, mode, p as u64).unwrap())
            .collect();
        let small_runs = vec![0; small_periods.len()];
        Generator {
            f,
            mode,
            w: Vec::new(),
            small_limit,
            small_periods,
            small_thresholds,
            small_runs,
            scales: Vec::new(),
            active: HashMap::default(),
            prefix_hash: vec![0],
            powers: vec![1],
        }
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.w
    }

    pub fn into_word(self) -> Word {
        Word {
            letters: self.w.into_iter().map(Letter).collect(),
        }
    }

    fn threshold(&self, p: usize) -> u64 {
        period_threshold(self.f, self.mode, p as u64).unwrap()
    }

    fn window_hash(&self, end: usize, h: usize) -> u64 {
        // hash of w[end + 1 - h ..= end]
        let hi = self.prefix_hash[end + 1];
        let lo = mul_mod(self.prefix_hash[end + 1 - h], self.powers[h]);
        (hi + HASH_MOD - lo) % HASH_MOD
    }

    /// Letters that would complete a forbidden suffix at the next position.
    pub fn forbidden(&self) -> Vec<u32> {
        let n = self.w.len();
        let mut out = Vec::new();
        for (idx, &p) in self.small_periods.iter().enumerate() {
            if p > n {
                break;
            }
            if self.small_runs[idx] + 1 >= self.small_thresholds[idx] {
                out.push(self.w[n - p]);
            }
        }
        for (&p, &run) in &self.active {
            if run + 1 >= self.threshold(p) {
                out.push(self.w[n - p]);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Append the least admissible letter and return it.
    pub fn push_next(&mut self) -> u32 {
        let forbidden = self.forbidden();
        let mut c = 0u32;
        for &x in &forbidden {
            if x == c {
                c = c.checked_add(1).expect("letter overflow");
            } else if x > c {
                break;
            }
        }
        assert!(c <= Letter::MAX_VALUE, "letter overflow");
        self.push_unchecked(c);
        c
    }

    fn push_unchecked(&mut self, c: u32) {
        let n = self.w.len();
        self.w.push(c);
        let last_hash = *self.prefix_hash.last().unwrap();
        self.prefix_hash
            .push((mul_mod(last_hash, HASH_BASE) + c as u64 + 1) % HASH_MOD);
        let last_pow = *self.powers.last().unwrap();
        self.powers.push(mul_mod(last_pow, HASH_BASE));

        for (idx, &p) in self.small_periods.iter().enumerate() {
            if p > n {
                break;
            }
            if self.w[n - p] == c {
                self.small_runs[idx] += 1;
            } else {
                self.small_runs[idx] = 0;
            }
        }
        let w = &self.w;
        self.active.retain(|&p, run| {
            if w[n - p] == c {
                *run += 1;
                true
            } else {
                false
            }
        });

        // a scale must exist (and index every earlier position) before its
        // smallest period is reachable
        while self.scales.last().map_or(self.small_limit, |s| s.hi) <= 2 * n + 2 {
            let lo = self.scales.last().map_or(self.small_limit, |s| s.hi);
            let hi = 2 * lo;
            let h = (lo..hi)
                .filter_map(|p| period_threshold(self.f, self.mode, p as u64))
                .min()
                .unwrap() as usize
                - 1;
            let h = h.max(1);
            let mut scale = Scale {
                lo,
                hi,
                h,
                heads: HashMap::default(),
                prev: Vec::new(),
            };
            for e in h.saturating_sub(1)..n {
                scale.insert(self.window_hash(e, h), e);
            }
            self.scales.push(scale);
        }

        let mut found = Vec::new();
        for s in 0..self.scales.len() {
            let (lo, hi, h) = (self.scales[s].lo, self.scales[s].hi, self.scales[s].h);
            if n + 1 < h {
                continue;
            }
            let key = self.window_hash(n, h);
            if lo <= n {
                let first = n.saturating_sub(hi - 1);
                let scale = &self.scales[s];
                let mut e = scale.heads.get(&key).copied().unwrap_or(NONE);
                while e != NONE && e as usize >= first {
                    let p = n - e as usize;
                    if p >= lo
                        && period_threshold(self.f, self.mode, p as u64).is_some()
                        && !self.active.contains_key(&p)
                    {
                        found.push((p, h));
                    }
                    e = scale.prev[e as usize];
                }
            }
            self.scales[s].insert(key, n);
        }
        for (p, h) in found {
            let t = self.threshold(p) as usize;
            let mut run = 0usize;
            while run < t && run + p <= n && self.w[n - run] == self.w[n - run - p] {
                run += 1;
            }
            if run >= h {
                self.active.insert(p, run as u64);
            }
        }
    }
}

/// The length-n prefix of the lexicographically least infinite word on ℤ≥0
/// avoiding the powers selected by `mode`.
pub fn generate_lexleast(f: Fraction, n: usize, mode: AvoidMode) -> Word {
    let mut g = Generator::new(f, mode);
    for _ in 0..n {
        g.push_next();
    }
    g.into_word()
}

/// Like [`generate_lexleast`] but returning raw letter values.
pub fn generate_values(f: Fraction, n: usize, mode: AvoidMode) -> Vec<u32> {
    let mut g = Generator::new(f, mode);
    for _ in 0..n {
        g.push_next();
    }
    g.w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(a: u32, b: u32) -> Fraction {
        Fraction::new(a, b).unwrap()
    }

    /// Quadratic reference generator: tries each letter and scans every suffix.
    fn naive(f: Fraction, n: usize, mode: AvoidMode) -> Vec<u32> {
        let mut w: Vec<Letter> = Vec::new();
        for _ in 0..n {
            let mut c = 0;
            loop {
                w.push(Letter::new(c));
                if power_suffix(&w, f, mode).is_none() {
                    break;
                }
                w.pop();
                c += 1;
            }
        }
        w.iter().map(|l| l.value()).collect()
    }

    #[test]
    fn letters_round_trip_text() {
        let w: Word = "0' 0 1' 1 0' 2".parse().unwrap();
        assert_eq!(w.to_string(), "0' 0 1' 1 0' 2");
        assert!(w[0].is_primed());
        assert_eq!(w.coded().digits(), "001102");
        assert!("2'".parse::<Letter>().is_err());
    }

    #[test]
    fn fractions_reject_small_exponents() {
        assert!(Fraction::new(3, 3).is_err());
        assert!(Fraction::new(2, 3).is_err());
        assert!(Fraction::new(6, 4).is_err());
        assert_eq!(Fraction::reduced(6, 4).unwrap(), fr(3, 2));
        assert_eq!("8/5".parse::<Fraction>().unwrap(), fr(8, 5));
        assert_eq!("3".parse::<Fraction>().unwrap(), fr(3, 1));
    }

    #[test]
    fn fractional_power_examples() {
        assert!(is_fractional_power(&Word::from_digits("011101"), fr(3, 2)));
        assert!(is_fractional_power(&Word::from_digits("000"), fr(3, 1)));
        assert!(!is_fractional_power(&Word::from_digits("001102"), fr(3, 2)));
        assert!(!is_fractional_power(&Word::from_digits("0111"), fr(3, 2)));
    }

    #[test]
    fn power_factor_examples() {
        assert_eq!(find_power_factor(&Word::from_digits("0000011"), fr(3, 2)), Some((0, 1)));
        assert_eq!(find_power_factor(&Word::from_digits("001102100112"), fr(3, 2)), None);
        assert_eq!(find_power_factor(&Word::from_digits("00100"), fr(5, 3)), Some((0, 1)));
    }

    #[test]
    fn power_suffix_examples() {
        assert_eq!(power_suffix(&Word::from_digits("00000"), fr(5, 3), AvoidMode::Exact), Some(1));
        assert_eq!(power_suffix(&Word::from_digits("0000101"), fr(5, 3), AvoidMode::Exact), None);
        // the only candidate suffix length is 5, and 00110 is not a 5/3-power
        assert_eq!(power_suffix(&Word::from_digits("0000110"), fr(5, 3), AvoidMode::Exact), None);
    }

    #[test]
    fn generator_examples() {
        let g = |a, b, n, m| generate_lexleast(fr(a, b), n, m).digits();
        assert_eq!(g(2, 1, 16, AvoidMode::Exact), "0102010301020104");
        assert_eq!(g(3, 2, 12, AvoidMode::Exact), "001102100112");
        assert_eq!(g(5, 2, 10, AvoidMode::Exact), "0000100001");
        assert_eq!(g(3, 2, 5, AvoidMode::AtLeast), "01203");
        assert_eq!(g(2, 1, 12, AvoidMode::Greater), "001001100100");
    }

    #[test]
    fn generator_matches_naive_reference() {
        let cases = [
            (3, 2),
            (4, 3),
            (5, 3),
            (5, 4),
            (7, 4),
            (7, 5),
            (8, 5),
            (6, 5),
            (2, 1),
            (5, 2),
            (11, 8),
            (13, 9),
        ];
        for &(a, b) in &cases {
            for mode in [AvoidMode::Exact, AvoidMode::AtLeast, AvoidMode::Greater] {
                let f = fr(a, b);
                let n = 700;
                assert_eq!(generate_values(f, n, mode), naive(f, n, mode), "{a}/{b} {mode:?}");
            }
        }
    }

    #[test]
    fn compare_and_occurrences() {
        assert_eq!(compare_lex(&Word::from_digits("01"), &Word::from_digits("001")), Ordering::Greater);
        assert_eq!(compare_lex(&Word::from_digits("0"), &Word::from_digits("0")), Ordering::Equal);
        let occ = first_occurrences(&Word::from_digits("0102"));
        assert_eq!(occ.into_iter().collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 3)]);
    }
}
