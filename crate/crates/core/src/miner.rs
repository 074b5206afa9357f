//! Reading morphism structure off a prefix of w_{a/b}: the row width k, the
//! eventually periodic columns, the transient, and the shift in the
//! self-similar column.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog;
use crate::error::{Error, Result};
use crate::morphism::ExplicitMorphism;
use crate::symbolic::form::{LinearForm, RationalInterval, Q};
use crate::symbolic::word::SymbolicMorphism;
use crate::word::{Fraction, Letter, Word};

/// A candidate row width.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KCandidate {
    pub k: usize,
    pub method: &'static str,
    pub evidence: String,
    /// Whether the rows of width k have exactly one column that is not
    /// eventually periodic.
    pub structured: bool,
}

/// Classification of one residue class mod k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ColumnKind {
    Constant { value: u32, from_row: usize },
    Periodic { period: usize, pattern: Vec<u32>, from_row: usize },
    SelfSimilar,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColumnProfile {
    pub k: usize,
    pub columns: Vec<ColumnKind>,
    /// Least row after which every periodic column is periodic.
    pub transient_rows: usize,
    pub self_similar: Vec<usize>,
}

/// Tunables for column classification.
#[derive(Clone, Copy, Debug)]
pub struct MinerConfig {
    pub max_period: usize,
    pub min_rows: usize,
}

impl Default for MinerConfig {
    fn default() -> MinerConfig {
        MinerConfig {
            max_period: 16,
            min_rows: 50,
        }
    }
}

/// The shift in the self-similar column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Shift {
    Constant(u32),
    /// last(n) = n + d except at the listed letters.
    LetterMap { d: u32, exceptions: BTreeMap<u32, u32> },
    /// The increment depends on the row, not the letter; listed per row.
    PeriodicIncrement(Vec<i64>),
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureConjecture {
    pub fraction: String,
    pub k: usize,
    pub transient_rows: usize,
    pub self_similar_column: usize,
    pub shift: Shift,
    pub transient_length: usize,
    pub column_profile: Vec<ColumnKind>,
    /// Fraction of rows consistent with the column classification.
    pub confidence: f64,
    #[serde(skip)]
    pub morphism: Option<ExplicitMorphism>,
}

impl fmt::Display for StructureConjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "a/b = {}", self.fraction)?;
        writeln!(f, "  k = {}", self.k)?;
        match &self.shift {
            Shift::Constant(d) => writeln!(f, "  shift: n + {d}")?,
            Shift::LetterMap { d, exceptions } => {
                let ex: Vec<String> = exceptions.iter().map(|(n, c)| format!("{n} -> {c}")).collect();
                writeln!(f, "  shift: n + {d}, except {}", ex.join(", "))?
            }
            Shift::PeriodicIncrement(inc) => {
                let s: Vec<String> = inc.iter().map(|x| x.to_string()).collect();
                writeln!(f, "  shift: periodic increments [{}]", s.join(" "))?
            }
        }
        writeln!(f, "  self-similar column: {}", self.self_similar_column)?;
        writeln!(f, "  transient rows: {}", self.transient_rows)?;
        writeln!(f, "  |v| = {}", self.transient_length)?;
        let (mut constant, mut periodic) = (0, 0);
        for c in &self.column_profile {
            match c {
                ColumnKind::Constant { .. } => constant += 1,
                ColumnKind::Periodic { .. } => periodic += 1,
                ColumnKind::SelfSimilar => {}
            }
        }
        writeln!(f, "  columns: {constant} constant, {periodic} periodic")?;
        writeln!(f, "  confidence: {:.4}", self.confidence)?;
        match &self.morphism {
            Some(m) if m.k <= 80 => writeln!(f, "  morphism: {m}"),
            Some(_) => writeln!(f, "  morphism: regenerates the prefix"),
            None => writeln!(f, "  morphism: none"),
        }
    }
}

fn column(prefix: &[u32], k: usize, j: usize) -> Vec<u32> {
    prefix.iter().skip(j).step_by(k).copied().collect()
}

fn classify(col: &[u32], cfg: MinerConfig) -> ColumnKind {
    for p in 1..=cfg.max_period {
        if col.len() < p + cfg.min_rows {
            break;
        }
        // last row breaking period p
        let from = (p..col.len())
            .rev()
            .find(|&i| col[i] != col[i - p])
            .map_or(0, |i| i + 1 - p);
        // a self-similar column with few distinct letters can look periodic
        // over a short tail, so the period must hold on at least half the rows
        if col.len() - from >= (cfg.min_rows + p).max(col.len() / 2) {
            if p == 1 {
                return ColumnKind::Constant {
                    value: col[col.len() - 1],
                    from_row: from,
                };
            }
            // phase-aligned pattern: pattern[r] is the value at rows ≡ r (mod p)
            let pattern = (0..p).map(|r| col[from + (r + p - from % p) % p]).collect();
            return ColumnKind::Periodic {
                period: p,
                pattern,
                from_row: from,
            };
        }
    }
    ColumnKind::SelfSimilar
}

/// Classify every residue class mod k.
pub fn column_profile(prefix: &[Letter], k: usize) -> ColumnProfile {
    column_profile_with(prefix, k, MinerConfig::default())
}

pub fn column_profile_with(prefix: &[Letter], k: usize, cfg: MinerConfig) -> ColumnProfile {
    let values: Vec<u32> = prefix.iter().map(|c| c.value()).collect();
    let usable = values.len() / k * k;
    let values = &values[..usable];
    // short prefixes have few rows; ask for half of them
    let cfg = MinerConfig {
        min_rows: cfg.min_rows.min((usable / k / 2).max(4)),
        ..cfg
    };
    let columns: Vec<ColumnKind> = (0..k)
        .into_par_iter()
        .map(|j| classify(&column(values, k, j), cfg))
        .collect();
    let transient_rows = columns
        .iter()
        .map(|c| match c {
            ColumnKind::Constant { from_row, .. } | ColumnKind::Periodic { from_row, .. } => {
                *from_row
            }
            ColumnKind::SelfSimilar => 0,
        })
        .max()
        .unwrap_or(0);
    let self_similar = columns
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c, ColumnKind::SelfSimilar))
        .map(|(j, _)| j)
        .collect();
    ColumnProfile {
        k,
        columns,
        transient_rows,
        self_similar,
    }
}

fn divisors(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..)
        .take_while(|d| d * d <= n)
        .filter(|d| n % d == 0)
        .flat_map(|d| [d, n / d])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// The row offset q0 such that column j of row i is a function of w(i − q0),
/// or w(i − q0) plus an eventually periodic increment.
fn self_similar_offset(values: &[u32], k: usize, j: usize, transient_rows: usize) -> Option<usize> {
    let col = column(values, k, j);
    (0..=transient_rows + 2).find(|&q0| {
        if col.len() < q0 + 8 {
            return false;
        }
        let mut map: HashMap<u32, u32> = HashMap::new();
        let functional = (q0..col.len()).all(|i| *map.entry(values[i - q0]).or_insert(col[i]) == col[i]);
        if functional && map.len() >= 2 {
            return true;
        }
        let inc: Vec<i64> = (q0..col.len())
            .map(|i| col[i] as i64 - values[i - q0] as i64)
            .collect();
        let tail = &inc[inc.len() / 2..];
        (1..=16.min(tail.len() / 3)).any(|p| (p..tail.len()).all(|i| tail[i] == tail[i - p]))
    })
}

fn is_structured(prefix: &[Letter], k: usize) -> bool {
    if k < 2 || prefix.len() < 10 * k {
        return false;
    }
    let p = column_profile(prefix, k);
    if p.self_similar.len() != 1 {
        return false;
    }
    let values: Vec<u32> = prefix.iter().map(|c| c.value()).collect();
    self_similar_offset(&values, k, p.self_similar[0], p.transient_rows).is_some()
}

/// The smallest divisor of `g` (at least 2) giving structured rows, else `g`.
fn refine(prefix: &[Letter], g: usize) -> (usize, bool) {
    for d in divisors(g) {
        if d >= 2 && prefix.len() >= 10 * d && is_structured(prefix, d) {
            return (d, true);
        }
    }
    (g, is_structured(prefix, g))
}

/// Smallest p such that `seq[from..]` is p-periodic with at least two periods.
fn eventual_period(seq: &[usize]) -> Option<usize> {
    let from = seq.len() / 2;
    let tail = &seq[from..];
    (1..=tail.len() / 3).find(|&p| (p..tail.len()).all(|i| tail[i] == tail[i - p]))
}

/// Candidate row widths: the gcd of gaps between occurrences of the largest
/// letters, and sums over a repetition period of the gaps between occurrences
/// of small letters.
pub fn detect_k(prefix: &[Letter]) -> Result<Vec<KCandidate>> {
    let values: Vec<u32> = prefix.iter().map(|c| c.value()).collect();
    let mut out: Vec<KCandidate> = Vec::new();
    let max = values.iter().copied().max().unwrap_or(0);
    for c in (1..=max).rev() {
        let pos: Vec<usize> = (0..values.len()).filter(|&i| values[i] == c).collect();
        if pos.len() < 3 {
            continue;
        }
        // a letter may also sit in a constant column; then only sums of r
        // consecutive gaps are multiples of k
        let Some((r, g)) = (1..=4.min(pos.len() - 1))
            .map(|r| (r, (r..pos.len()).fold(0, |g, i| g.gcd(&(pos[i] - pos[i - r])))))
            .find(|&(_, g)| g >= 2)
        else {
            continue;
        };
        let (k, structured) = refine(prefix, g);
        if values.len() >= 10 * k {
            out.push(KCandidate {
                k,
                method: "gcd",
                evidence: format!(
                    "gcd of {r}-step gaps between {} occurrences of {c} is {g}",
                    pos.len()
                ),
                structured,
            });
        }
        break;
    }
    // gaps that recur between occurrences of a frequent small letter
    let mut letters = vec![max];
    letters.extend((1..=max.min(3)).filter(|&c| c != max));
    for c in letters.into_iter().filter(|&c| c > 0) {
        let pos: Vec<usize> = (0..values.len())
            .filter(|&i| values[i] == c)
            .take(3000)
            .collect();
        if pos.len() < 8 {
            continue;
        }
        let limit = values.len() / 10;
        let mut hist: HashMap<usize, usize> = HashMap::new();
        for (i, &p) in pos.iter().enumerate() {
            for &q in &pos[i + 1..] {
                if q - p > limit {
                    break;
                }
                *hist.entry(q - p).or_default() += 1;
            }
        }
        let mut gaps: Vec<(usize, usize)> = hist.into_iter().filter(|&(g, _)| g >= 2).collect();
        gaps.sort_by_key(|&(g, n)| (std::cmp::Reverse(n), g));
        for &(g, n) in gaps.iter().take(6) {
            let (k, structured) = refine(prefix, g);
            if structured && !out.iter().any(|o| o.k == k) {
                out.push(KCandidate {
                    k,
                    method: "recurring-gaps",
                    evidence: format!("gap {g} occurs {n} times between occurrences of {c}"),
                    structured,
                });
            }
        }
        if out.iter().any(|o| o.structured) {
            break;
        }
    }
    if out.is_empty() {
        return Err(Error::NoCandidate);
    }
    out.sort_by_key(|c| (!c.structured, c.k));
    Ok(out)
}

/// Assemble u, v and the shift from the eventual column values and check that
/// the resulting morphism regenerates the prefix.
pub fn conjecture_structure(prefix: &[Letter], f: Fraction) -> Result<StructureConjecture> {
    conjecture_structure_with(prefix, f, None, MinerConfig::default())
}

pub fn conjecture_structure_with(
    prefix: &[Letter],
    f: Fraction,
    k: Option<usize>,
    cfg: MinerConfig,
) -> Result<StructureConjecture> {
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => detect_k(prefix)?.into_iter().map(|c| c.k).collect(),
    };
    let values: Vec<u32> = prefix.iter().map(|c| c.value()).collect();
    let mut last_err = Error::NoCandidate;
    for k in ks {
        match conjecture_for_k(&values, prefix, f, k, cfg) {
            Ok(c) => return Ok(c),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

fn conjecture_for_k(
    values: &[u32],
    prefix: &[Letter],
    f: Fraction,
    k: usize,
    cfg: MinerConfig,
) -> Result<StructureConjecture> {
    let profile = column_profile_with(prefix, k, cfg);
    if profile.self_similar.len() != 1 {
        return Err(Error::Inconsistent(format!(
            "k = {k}: {} columns are not eventually periodic",
            profile.self_similar.len()
        )));
    }
    let j = profile.self_similar[0];
    let rows = values.len() / k;
    let col = column(values, k, j);
    let consistent_rows = profile
        .columns
        .iter()
        .filter(|c| !matches!(c, ColumnKind::SelfSimilar))
        .map(|c| match c {
            ColumnKind::Constant { from_row, .. } | ColumnKind::Periodic { from_row, .. } => {
                rows - from_row
            }
            ColumnKind::SelfSimilar => rows,
        })
        .min()
        .unwrap_or(rows);
    let confidence = consistent_rows as f64 / rows as f64;

    // images end at column j; |v| = q0·k + j + 1 − k
    let q_min = if j + 1 == k { 0 } else { 1 };
    for q0 in q_min..=profile.transient_rows + 2 {
        let v_len = q0 * k + j + 1 - k;
        // relation between w(i) and the self-similar column
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        let mut functional = true;
        let mut increments = Vec::new();
        for (i, &s) in col.iter().enumerate().skip(q0) {
            let n = values[i - q0];
            increments.push(s as i64 - n as i64);
            match map.get(&n) {
                Some(&x) if x != s => functional = false,
                _ => {
                    map.insert(n, s);
                }
            }
        }
        if !functional {
            if q0 == profile.transient_rows + 2 {
                let period = eventual_period(
                    &increments.iter().map(|&x| x as usize).collect::<Vec<_>>(),
                );
                if let Some(p) = period {
                    let from = increments.len() / 2;
                    return Ok(StructureConjecture {
                        fraction: f.to_string(),
                        k,
                        transient_rows: profile.transient_rows,
                        self_similar_column: j,
                        shift: Shift::PeriodicIncrement(increments[from..from + p].to_vec()),
                        transient_length: v_len,
                        column_profile: profile.columns,
                        confidence,
                        morphism: None,
                    });
                }
            }
            continue;
        }
        // the largest observed letter fixes d
        let Some((&n_max, &s_max)) = map.iter().next_back() else {
            continue;
        };
        if s_max < n_max {
            continue;
        }
        let d = s_max - n_max;
        let exceptions: BTreeMap<u32, u32> =
            map.iter().filter(|(&n, &s)| s != n + d).map(|(&n, &s)| (n, s)).collect();
        let mut u = Vec::with_capacity(k - 1);
        let mut ok = true;
        for r in 0..k - 1 {
            match &profile.columns[(j + 1 + r) % k] {
                ColumnKind::Constant { value, .. } => u.push(Letter::new(*value)),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            return Err(Error::Inconsistent(format!(
                "k = {k}: some column is periodic but not constant"
            )));
        }
        let mut m = ExplicitMorphism::shift(Word::from(u), d);
        m.shift_exceptions = exceptions.clone();
        if v_len > 0 {
            let mut v: Vec<Letter> = prefix[..v_len].iter().map(|c| c.coded()).collect();
            if v[0] != Letter::new(0) {
                continue;
            }
            v[0] = Letter::primed(0);
            m.transient = Some(Word::from(v));
        }
        let Ok(expanded) = m.expand_fixed_point(values.len()) else {
            continue;
        };
        if expanded.iter().zip(values).all(|(x, &y)| x.value() == y) {
            let shift = if exceptions.is_empty() {
                Shift::Constant(d)
            } else {
                Shift::LetterMap { d, exceptions }
            };
            return Ok(StructureConjecture {
                fraction: f.to_string(),
                k,
                transient_rows: profile.transient_rows,
                self_similar_column: j,
                shift,
                transient_length: v_len,
                column_profile: profile.columns,
                confidence,
                morphism: Some(m),
            });
        }
    }
    Err(Error::Inconsistent(format!(
        "k = {k}: no transient length regenerates the prefix"
    )))
}

fn zero_runs(m: &ExplicitMorphism) -> Option<(Vec<usize>, Vec<u32>)> {
    let mut runs = vec![0];
    let mut letters = Vec::new();
    for c in m.u.iter() {
        if c.is_primed() {
            return None;
        }
        if c.value() == 0 {
            *runs.last_mut().unwrap() += 1;
        } else {
            letters.push(c.value());
            runs.push(0);
        }
    }
    Some((runs, letters))
}

/// The symbolic family through two explicit shift morphisms: each zero run
/// of length l before a nonzero letter becomes 0^{i·a + j·b − 1}, with (i, j)
/// the integer solution of i·a + j·b = l + 1 at both rationals.
pub fn generalize_pair(
    m1: &ExplicitMorphism,
    f1: Fraction,
    m2: &ExplicitMorphism,
    f2: Fraction,
) -> Option<SymbolicMorphism> {
    let plain = |m: &ExplicitMorphism| {
        m.transient.is_none() && m.shift_exceptions.is_empty() && m.primed_overrides.is_empty()
    };
    if m1.d != m2.d || !plain(m1) || !plain(m2) {
        return None;
    }
    let (r1, c1) = zero_runs(m1)?;
    let (r2, c2) = zero_runs(m2)?;
    if c1 != c2 {
        return None;
    }
    let (a1, b1, a2, b2) = (f1.a as i64, f1.b as i64, f2.a as i64, f2.b as i64);
    let det = a1 * b2 - a2 * b1;
    if det == 0 {
        return None;
    }
    let mut blocks = Vec::new();
    for (t, (&l1, &l2)) in r1.iter().zip(&r2).enumerate() {
        let (y1, y2) = (l1 as i64 + 1, l2 as i64 + 1);
        let (ni, nj) = (y1 * b2 - y2 * b1, a1 * y2 - a2 * y1);
        if ni % det != 0 || nj % det != 0 {
            return None;
        }
        blocks.push((LinearForm::new(ni / det, nj / det, -1), 0));
        if t < c1.len() {
            blocks.push((LinearForm::ONE, c1[t]));
        }
    }
    let mut m = SymbolicMorphism::new(&format!("{f1} ~ {f2}"), blocks, m1.d, open_unit(), vec![]);
    let (s, t) = m.st();
    if t != 0 {
        m.gcd = vec![s];
    }
    m.interval = guess_interval(&m).ok()?;
    Some(m)
}

fn open_unit() -> RationalInterval {
    RationalInterval::open(Q::from_integer(1), Q::from_integer(2)).expect("(1, 2) is nonempty")
}

/// Ratios a/b in (1, 2) at which every exponent stays nonnegative for large
/// a, b: each α·a + β·b + γ with γ < 0 bounds a/b by the root of α·x + β.
pub fn guess_interval(m: &SymbolicMorphism) -> Result<RationalInterval> {
    let (mut lo, mut hi) = (Q::from_integer(1), Q::from_integer(2));
    for &(e, _) in &m.blocks {
        let strict_ok = |v: i64| if e.c < 0 { v > 0 } else { v >= 0 };
        if e.a == 0 {
            if !strict_ok(e.b) {
                return Err(Error::EmptyInterval(format!("exponent {e} is negative for large b")));
            }
            continue;
        }
        let root = Q::new(-e.b, e.a);
        if e.a > 0 {
            lo = lo.max(root);
        } else {
            hi = hi.min(root);
        }
    }
    RationalInterval::open(lo, hi)
}

/// The conjectured row width of w_{a/b} together with the bundled theorems
/// that cover a/b.
#[derive(Clone, Debug, Serialize)]
pub struct RhoReport {
    pub fraction: String,
    pub k_candidates: Vec<KCandidate>,
    pub conjecture: Option<StructureConjecture>,
    pub error: Option<String>,
    pub catalog: Vec<String>,
}

pub fn rho_report(prefix: &[Letter], f: Fraction) -> RhoReport {
    let k_candidates = detect_k(prefix).unwrap_or_default();
    let (conjecture, error) = match conjecture_structure(prefix, f) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    RhoReport {
        fraction: f.to_string(),
        k_candidates,
        conjecture,
        error,
        catalog: catalog::theorems_for(f),
    }
}

/// Rows of width k as text, for eyeballing.
pub fn render_array(prefix: &[Letter], k: usize, rows: usize) -> String {
    let mut s = String::new();
    for row in prefix.chunks(k).take(rows) {
        for c in row {
            s.push_str(&c.value().to_string());
            if c.value() >= 10 {
                s.push(' ');
            }
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{generate_lexleast, AvoidMode};

    fn fr(a: u32, b: u32) -> Fraction {
        Fraction::new(a, b).unwrap()
    }

    #[test]
    fn five_thirds() {
        let w = generate_lexleast(fr(5, 3), 10_000, AvoidMode::Exact);
        let ks = detect_k(&w).unwrap();
        assert_eq!(ks[0].k, 7);
        let p = column_profile(&w, 7);
        assert_eq!(p.self_similar, vec![6]);
        assert_eq!(p.transient_rows, 0);
        let c = conjecture_structure(&w, fr(5, 3)).unwrap();
        assert_eq!(c.shift, Shift::Constant(1));
        assert_eq!(c.transient_length, 0);
        assert_eq!(c.morphism.unwrap().u.digits(), "000010");
    }

    #[test]
    fn three_halves_columns() {
        let w = generate_lexleast(fr(3, 2), 10_000, AvoidMode::Exact);
        assert_eq!(detect_k(&w).unwrap()[0].k, 6);
        let p = column_profile(&w, 6);
        for j in [0, 2, 4] {
            assert!(matches!(p.columns[j], ColumnKind::Periodic { period: 2, .. }));
        }
        for j in [1, 3] {
            assert!(matches!(p.columns[j], ColumnKind::Constant { .. }));
        }
        assert_eq!(p.self_similar, vec![5]);
    }

    fn admitted(m: &SymbolicMorphism, count: usize) -> Vec<Fraction> {
        let mut out = Vec::new();
        for b in 2..400u32 {
            for a in b + 1..2 * b {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let f = fr(a, b);
                if m.instantiate(f).is_ok() {
                    out.push(f);
                    if out.len() == count {
                        return out;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn generalize_two_instances() {
        let t = catalog::symbolic("thm_2_2a_b").unwrap();
        let g = generalize_pair(
            &t.instantiate(fr(5, 3)).unwrap(),
            fr(5, 3),
            &t.instantiate(fr(9, 5)).unwrap(),
            fr(9, 5),
        )
        .unwrap();
        assert_eq!(g.blocks, t.blocks);
        assert_eq!(g.to_string().split("  ").next().unwrap(), "φ(n) = 0^{a-1} 1 0^{a-b-1} (n+1)");
        assert!(generalize_pair(
            &ExplicitMorphism::shift(Word::from_digits("000010"), 1),
            fr(5, 3),
            &ExplicitMorphism::shift(Word::from_digits("0000200"), 1),
            fr(9, 5),
        )
        .is_none());
        // 7i + 5j = 4, 5i + 3j = 5 has i = 13/4
        assert!(generalize_pair(
            &ExplicitMorphism::shift(Word::from_digits("0001"), 1),
            fr(7, 5),
            &ExplicitMorphism::shift(Word::from_digits("00001"), 1),
            fr(5, 3),
        )
        .is_none());
    }

    #[test]
    fn generalize_recovers_every_bundled_theorem() {
        for (name, t) in catalog::symbolic_theorems() {
            let fs = admitted(&t, 2);
            let g = generalize_pair(
                &t.instantiate(fs[0]).unwrap(),
                fs[0],
                &t.instantiate(fs[1]).unwrap(),
                fs[1],
            )
            .unwrap_or_else(|| panic!("{name} at {} and {}", fs[0], fs[1]));
            assert_eq!((g.blocks, g.d, g.k), (t.blocks.clone(), t.d, t.k), "{name}");
        }
    }

    #[test]
    fn guessed_interval_contains_the_statement() {
        for (name, t) in catalog::symbolic_theorems() {
            let g = guess_interval(&t).unwrap();
            let i = &t.interval;
            let lo_ok = g.lower < i.lower || (g.lower == i.lower && !i.lower_closed);
            let hi_ok = i.upper < g.upper || (g.upper == i.upper && !i.upper_closed);
            assert!(lo_ok && hi_ok, "{name}: {g} vs {i}");
        }
        let t = catalog::symbolic("thm_3_a").unwrap();
        assert_eq!(guess_interval(&t).unwrap().to_string(), "(6/5..3/2)");
        let single = SymbolicMorphism::new("", vec![(LinearForm::new(1, -1, -1), 0)], 1, open_unit(), vec![]);
        assert_eq!(guess_interval(&single).unwrap().to_string(), "(1..2)");
    }
}
