//! Explicit-rational proofs that a uniform morphism is a/b-power-free and that
//! its fixed point is the lexicographically least a/b-power-free word.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::{CheckResult, ExplicitMorphism};
use crate::word::{find_power_factor, generate_values, AvoidMode, Fraction, Letter, Word};

/// Outcome of a verification.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Proved,
    Refuted,
    Inconclusive,
    HypothesisViolation,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Proved => 0,
            Status::Refuted => 1,
            Status::Inconclusive => 2,
            Status::HypothesisViolation => 3,
        }
    }

    /// The weaker of two statuses.
    pub fn and(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Proved => 0,
            Status::Inconclusive => 1,
            Status::Refuted => 2,
            Status::HypothesisViolation => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Proved => "proved",
            Status::Refuted => "refuted",
            Status::Inconclusive => "inconclusive",
            Status::HypothesisViolation => "hypothesis-violation",
        };
        f.write_str(s)
    }
}

/// A letter of the cyclic word φ(n): explicit, or the last letter of the image.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Cell {
    Lit(u32),
    Last,
}

/// φ(n) for n ∈ ℤ≥0 as a cyclic word, with the set of possible last letters.
pub struct CyclicImage<'a> {
    pub m: &'a ExplicitMorphism,
    cells: Vec<Cell>,
}

impl<'a> CyclicImage<'a> {
    pub fn new(m: &'a ExplicitMorphism) -> CyclicImage<'a> {
        let mut cells: Vec<Cell> = m.u.iter().map(|c| Cell::Lit(c.value())).collect();
        cells.push(Cell::Last);
        CyclicImage { m, cells }
    }

    pub fn k(&self) -> usize {
        self.cells.len()
    }

    /// Letter at position q of φ(n₀)φ(n₁)⋯.
    pub fn at(&self, q: usize) -> Cell {
        self.cells[q % self.cells.len()]
    }

    /// Whether two letters at distinct positions can be equal for some choice
    /// of the nᵢ.
    pub fn compatible(&self, x: Cell, y: Cell) -> bool {
        match (x, y) {
            (Cell::Lit(p), Cell::Lit(q)) => p == q,
            (Cell::Lit(c), Cell::Last) | (Cell::Last, Cell::Lit(c)) => self.m.last_attains(c),
            (Cell::Last, Cell::Last) => true,
        }
    }
}

/// Result of the position-set refinement.
#[derive(Clone, Debug, Serialize)]
pub struct Locating {
    pub ell: usize,
    /// Two residues whose factors of length ℓ − 1 are not provably unequal.
    pub witness_pair: Option<(usize, usize)>,
}

/// The least ℓ such that φ locates words of length ℓ, by refining sets of
/// residues whose factors are pairwise not provably unequal.
pub fn locating_length_explicit(m: &ExplicitMorphism) -> Result<Locating> {
    let img = CyclicImage::new(m);
    let k = img.k();
    let mut sets: Vec<Vec<u32>> = vec![(0..k as u32).collect()];
    let mut witness = None;
    let mut ell = 0;
    while !sets.is_empty() {
        if ell >= k {
            let s = &sets[0];
            return Err(Error::NoLocatingLength(format!(
                "residues {} and {} agree cyclically; φ(n) is periodic",
                s[0], s[1]
            )));
        }
        witness = Some((sets[0][0] as usize, sets[0][1] as usize));
        let t = ell;
        let mut next: Vec<Vec<u32>> = Vec::new();
        for s in &sets {
            let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
            let mut last = None;
            for &p in s {
                match img.at(p as usize + t) {
                    Cell::Lit(c) => groups.entry(c).or_default().push(p),
                    Cell::Last => last = Some(p),
                }
            }
            for (c, mut g) in groups {
                if let Some(p) = last {
                    if m.last_attains(c) {
                        g.push(p);
                    }
                }
                if g.len() >= 2 {
                    g.sort_unstable();
                    next.push(g);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        sets = next;
        ell += 1;
    }
    Ok(Locating {
        ell,
        witness_pair: witness,
    })
}

/// A letter of a window through φ(n₀)φ(n₁)⋯.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum WindowLetter {
    Lit(u32),
    /// Last letter of the image of nᵢ.
    Last(usize),
}

/// An a/b-power candidate x·y·z with x = z satisfiable.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Violation {
    /// Start, as a residue mod k (or an absolute position for concrete scans).
    pub position: usize,
    pub m: usize,
    pub letters: Vec<WindowLetter>,
    pub rendered: String,
}

impl Violation {
    /// Concrete letters obtained by choosing each nᵢ to satisfy x = z.
    pub fn instantiate(&self, f: Fraction, morphism: &ExplicitMorphism) -> Word {
        let p = self.m * f.b as usize;
        let x = self.m * (f.a - f.b) as usize;
        let default = morphism.last(0);
        let mut value: HashMap<usize, u32> = HashMap::new();
        for t in 0..x {
            match (self.letters[t], self.letters[t + p]) {
                (WindowLetter::Last(i), WindowLetter::Lit(c))
                | (WindowLetter::Lit(c), WindowLetter::Last(i)) => {
                    value.insert(i, c);
                }
                _ => {}
            }
        }
        self.letters
            .iter()
            .map(|l| match *l {
                WindowLetter::Lit(c) => Letter::new(c),
                WindowLetter::Last(i) => Letter::new(*value.get(&i).unwrap_or(&default)),
            })
            .collect()
    }
}

fn render_window(letters: &[WindowLetter], d: u32, cuts: &[usize]) -> String {
    let mut s = String::new();
    for (i, l) in letters.iter().enumerate() {
        if cuts.contains(&i) {
            s.push('·');
        }
        match l {
            WindowLetter::Lit(c) if *c < 10 => s.push_str(&c.to_string()),
            WindowLetter::Lit(c) => s.push_str(&format!("[{c}]")),
            WindowLetter::Last(j) => s.push_str(&format!("(n{j}+{d})")),
        }
    }
    s
}

/// First window of length m·a through φ(n₀)φ(n₁)⋯ that may be an a/b-power.
pub fn window_scan(morphism: &ExplicitMorphism, f: Fraction, m: usize) -> Option<Violation> {
    assert!(f.in_unit_interval(), "window scan needs 1 < a/b < 2");
    let img = CyclicImage::new(morphism);
    let k = img.k();
    let p = m * f.b as usize;
    let x = m * (f.a - f.b) as usize;
    let len = m * f.a as usize;
    (0..k).find_map(|start| {
        let ok = (0..x).all(|t| img.compatible(img.at(start + t), img.at(start + t + p)));
        if !ok {
            return None;
        }
        let letters: Vec<WindowLetter> = (0..len)
            .map(|t| match img.at(start + t) {
                Cell::Lit(c) => WindowLetter::Lit(c),
                Cell::Last => WindowLetter::Last((start + t) / k),
            })
            .collect();
        Some(Violation {
            position: start,
            m,
            rendered: render_window(&letters, morphism.d, &[x, p]),
            letters,
        })
    })
}

/// Whether ⌈(m_max·a − 1)/k⌉ + 1 ≤ a − 1.
pub fn short_words_check(f: Fraction, k: usize, m_max: usize) -> bool {
    let a = f.a as usize;
    if m_max == 0 {
        return true;
    }
    (m_max * a - 1).div_ceil(k) + 1 <= a - 1
}

/// ⌈ℓ/(a − b)⌉ − 1.
pub fn explicit_m_max(f: Fraction, ell: usize) -> usize {
    ell.div_ceil((f.a - f.b) as usize).saturating_sub(1)
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowOutcome {
    pub m: usize,
    pub violation: Option<Violation>,
}

/// A factor asserted to occur only once, used where refinement cannot separate
/// a transient position from the generic images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct AnchorHint {
    pub position: usize,
    /// Letters preceding the run of φ(0) images.
    pub prefix: Vec<u32>,
    /// Number of consecutive copies of φ(0) following the prefix.
    pub image_power: usize,
}

impl AnchorHint {
    /// Length that covers the prefix, the image run, and one image of slack for
    /// alignment.
    pub fn required_length(&self, k: usize) -> usize {
        self.prefix.len() + (self.image_power + 1) * k
    }
}

/// Report of a freeness or leastness verification.
#[derive(Clone, Debug, Serialize)]
pub struct ProofReport {
    pub fraction: String,
    pub k: usize,
    pub d: u32,
    pub status: Status,
    pub hypotheses: Vec<CheckResult>,
    pub locating_length: Option<usize>,
    pub locating_witness: Option<(usize, usize)>,
    pub m_max: Option<usize>,
    pub short_words_check: Option<bool>,
    pub window_results: Vec<WindowOutcome>,
    pub transient_unique_length: Option<usize>,
    pub transient_m_max: Option<usize>,
    pub anchor_length: Option<usize>,
    pub leastness_prefix_checked: Option<usize>,
    pub leastness_witnesses: BTreeMap<String, usize>,
    pub leastness_inductive: Vec<String>,
    pub unresolved: Vec<String>,
    pub notes: Vec<String>,
}

impl ProofReport {
    fn new(m: &ExplicitMorphism, f: Fraction) -> ProofReport {
        ProofReport {
            fraction: f.to_string(),
            k: m.k,
            d: m.d,
            status: Status::Proved,
            hypotheses: Vec::new(),
            locating_length: None,
            locating_witness: None,
            m_max: None,
            short_words_check: None,
            window_results: Vec::new(),
            transient_unique_length: None,
            transient_m_max: None,
            anchor_length: None,
            leastness_prefix_checked: None,
            leastness_witnesses: BTreeMap::new(),
            leastness_inductive: Vec::new(),
            unresolved: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Largest m among leastness witnesses.
    pub fn max_witness_m(&self) -> usize {
        self.leastness_witnesses.values().copied().max().unwrap_or(0)
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.window_results.iter().find_map(|w| w.violation.as_ref())
    }
}

impl fmt::Display for ProofReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}-uniform, d = {}, a/b = {}: {}", self.k, self.d, self.fraction, self.status)?;
        for h in &self.hypotheses {
            let mark = if h.passed { "ok" } else { "FAILED" };
            writeln!(f, "  hypothesis {}: {mark} ({})", h.name, h.detail)?;
        }
        if let Some(l) = self.locating_length {
            write!(f, "  locating length {l}")?;
            if let Some((p, q)) = self.locating_witness {
                write!(f, " (residues {p} and {q} agree on {})", l - 1)?;
            }
            writeln!(f)?;
        }
        if let Some(m) = self.m_max {
            let sw = match self.short_words_check {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "not checked",
            };
            writeln!(f, "  m_max = {m}; short words {sw}")?;
        }
        if !self.window_results.is_empty() {
            let scanned = self.window_results.iter().map(|w| w.m).max().unwrap_or(0);
            writeln!(f, "  windows scanned for m ≤ {scanned}")?;
        }
        if let Some(v) = self.first_violation() {
            writeln!(f, "  power: m = {} at position {}: {}", v.m, v.position, v.rendered)?;
        }
        if let Some(l) = self.transient_unique_length {
            writeln!(f, "  transient: factors of length {l} are unique")?;
        }
        if let Some(m) = self.transient_m_max {
            writeln!(f, "  transient m_max = {m}")?;
        }
        if let Some(n) = self.leastness_prefix_checked {
            writeln!(f, "  leastness: prefix of {n} letters replayed")?;
        }
        for (what, m) in &self.leastness_witnesses {
            writeln!(f, "    {what}: power with m = {m}")?;
        }
        for s in &self.leastness_inductive {
            writeln!(f, "    {s}")?;
        }
        for u in &self.unresolved {
            writeln!(f, "  unresolved: {u}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Knobs shared by the verifiers.
#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Largest m to scan; larger required values leave the result inconclusive.
    pub max_m: Option<usize>,
    /// Largest m searched for leastness witnesses.
    pub cap: Option<usize>,
    pub anchor: Option<AnchorHint>,
    /// Length of the expansion used to check an anchor hint.
    pub anchor_check_length: Option<usize>,
}

fn hypothesis_checks(m: &ExplicitMorphism, f: Fraction) -> Vec<CheckResult> {
    let mut checks: Vec<CheckResult> = m
        .validate()
        .into_iter()
        .filter(|c| c.name != "transient")
        .collect();
    let g = (f.b as usize).gcd(&m.k);
    checks.push(CheckResult {
        name: "gcd(b,k)=1",
        passed: g == 1,
        detail: format!("gcd({}, {}) = {g}", f.b, m.k),
    });
    let primed = m.u.iter().any(|c| c.is_primed());
    checks.push(CheckResult {
        name: "plain-images",
        passed: !primed,
        detail: if primed {
            "u contains primed letters".into()
        } else {
            "u is a word on ℤ≥0".into()
        },
    });
    checks
}

/// Whether the fixed point of φ restricted to ℤ≥0 is a/b-power-free, via the
/// locating length, the window bound, and a scan of every window up to it.
pub fn verify_free_explicit(
    m: &ExplicitMorphism,
    f: Fraction,
    opts: &VerifyOptions,
) -> ProofReport {
    verify_free_inner(m, f, opts, true)
}

/// Whether φ maps a/b-power-free words to a/b-power-free words. Unlike
/// [`verify_free_explicit`], φ(0) need not begin with 0.
pub fn verify_morphism_free(m: &ExplicitMorphism, f: Fraction, opts: &VerifyOptions) -> ProofReport {
    verify_free_inner(m, f, opts, false)
}

fn verify_free_inner(
    m: &ExplicitMorphism,
    f: Fraction,
    opts: &VerifyOptions,
    needs_prolongable: bool,
) -> ProofReport {
    if !f.in_unit_interval() {
        return verify_free_large(m, f);
    }
    let mut report = ProofReport::new(m, f);
    report.hypotheses = hypothesis_checks(m, f);
    if !needs_prolongable {
        // the transient supplies the start; φ(0) need not begin with 0
        report.hypotheses.retain(|c| c.name != "prolongable");
    }
    if report.hypotheses.iter().any(|c| !c.passed) {
        report.status = Status::HypothesisViolation;
        return report;
    }
    let loc = match locating_length_explicit(m) {
        Ok(l) => l,
        Err(e) => {
            report.notes.push(e.to_string());
            report.status = Status::Inconclusive;
            return report;
        }
    };
    report.locating_length = Some(loc.ell);
    report.locating_witness = loc.witness_pair;
    let m_max = explicit_m_max(f, loc.ell);
    report.m_max = Some(m_max);
    let short = short_words_check(f, m.k, m_max);
    report.short_words_check = Some(short);
    let limit = opts.max_m.map_or(m_max, |c| c.min(m_max));
    if limit < m_max {
        report.status = report.status.and(Status::Inconclusive);
        report
            .notes
            .push(format!("windows scanned for m ≤ {limit} of {m_max}"));
    }
    report.window_results = (1..=limit)
        .into_par_iter()
        .map(|mm| WindowOutcome {
            m: mm,
            violation: window_scan(m, f, mm),
        })
        .collect();
    if let Some(v) = report.first_violation().cloned() {
        // the scan ranges over all preimages; a hit is a counterexample only
        // when its preimage is itself free
        if short || preimage_is_free(&v, f, m) {
            report.status = Status::Refuted;
        } else {
            report.status = Status::Inconclusive;
            report
                .notes
                .push("power found over a preimage that is not itself free".into());
        }
    }
    report
}

/// Whether the letters n₀n₁⋯ chosen by `Violation::instantiate` form an
/// a/b-power-free word.
fn preimage_is_free(v: &Violation, f: Fraction, m: &ExplicitMorphism) -> bool {
    let inst = v.instantiate(f, m);
    let mut pre: BTreeMap<usize, u32> = BTreeMap::new();
    for (l, c) in v.letters.iter().zip(inst.iter()) {
        if let WindowLetter::Last(i) = *l {
            let n = (0..=c.value()).find(|&n| m.last(n) == c.value()).unwrap_or(0);
            pre.insert(i, n);
        }
    }
    let (Some(&first), Some(&last)) = (pre.keys().next(), pre.keys().next_back()) else {
        return true;
    };
    let w: Word = (first..=last)
        .map(|i| Letter::new(*pre.get(&i).unwrap_or(&0)))
        .collect();
    find_power_factor(&w, f).is_none()
}

/// a/b ≥ 2: the fixed point of 0^{a−1}(n+1) has nonzero letters only at
/// positions ≡ a − 1 (mod a), so any a/b-power in it has length divisible by a
/// and deleting zeros yields a shorter one one level up.
fn verify_free_large(m: &ExplicitMorphism, f: Fraction) -> ProofReport {
    let mut report = ProofReport::new(m, f);
    let a = f.a as usize;
    let shape = m.k == a
        && m.d == 1
        && m.u.iter().all(|c| *c == Letter::new(0))
        && m.shift_exceptions.is_empty()
        && m.transient.is_none()
        && m.primed_overrides.is_empty();
    report.hypotheses.push(CheckResult {
        name: "shape 0^{a-1}(n+1)",
        passed: shape,
        detail: format!("k = {}, d = {}", m.k, m.d),
    });
    if !shape {
        report.status = Status::HypothesisViolation;
        report
            .notes
            .push("for a/b ≥ 2 only the morphism 0^{a-1}(n+1) is supported".into());
        return report;
    }
    match locating_length_explicit(m) {
        Ok(l) => {
            report.locating_length = Some(l.ell);
            report.locating_witness = l.witness_pair;
        }
        Err(e) => report.notes.push(e.to_string()),
    }
    report.notes.push(
        "longest zero run is 0^{a-1} and nonzero letters are spaced by multiples of a; \
         a minimal power would descend to a shorter one"
            .into(),
    );
    report
}

/// Concrete letters of τ(φ^∞(start)).
fn concrete(m: &ExplicitMorphism, n: usize) -> Result<Vec<u32>> {
    Ok(m.expand_fixed_point(n)?.values())
}

enum Elem {
    Concrete(u32),
    Generic(u32),
}

/// Uniqueness length for factors starting in the transient: refine sets of
/// transient positions and generic residues of the images that follow.
fn transient_refinement(
    m: &ExplicitMorphism,
    w: &[u32],
    skip: &BTreeSet<usize>,
    limit: usize,
) -> Result<usize> {
    let img = CyclicImage::new(m);
    let k = img.k();
    let v_len = m.transient.as_ref().map_or(0, |v| v.len());
    // elements 0..v_len are concrete positions, v_len.. generic residues
    let start: Vec<u32> = (0..v_len)
        .filter(|i| !skip.contains(i))
        .chain(v_len..v_len + k)
        .map(|e| e as u32)
        .collect();
    let elem = |e: u32| {
        if (e as usize) < v_len {
            Elem::Concrete(e)
        } else {
            Elem::Generic(e - v_len as u32)
        }
    };
    let mut sets = vec![start];
    let mut ell = 0;
    while !sets.is_empty() {
        if ell >= limit {
            let pos = sets
                .iter()
                .flat_map(|s| s.iter().copied())
                .filter(|&e| (e as usize) < v_len)
                .max()
                .unwrap_or(0);
            return Err(Error::NoUniqueFactor(pos as usize));
        }
        let t = ell;
        let mut next = Vec::new();
        for s in &sets {
            let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
            let mut last = None;
            for &e in s {
                match elem(e) {
                    Elem::Concrete(i) => {
                        let q = i as usize + t;
                        if q >= w.len() {
                            return Err(Error::Invalid("expansion too short".into()));
                        }
                        groups.entry(w[q]).or_default().push(e);
                    }
                    Elem::Generic(r) => match img.at(r as usize + t) {
                        Cell::Lit(c) => groups.entry(c).or_default().push(e),
                        Cell::Last => last = Some(e),
                    },
                }
            }
            for (c, mut g) in groups {
                if let Some(e) = last {
                    if m.last_attains(c) {
                        g.push(e);
                    }
                }
                let has_concrete = g.iter().any(|&e| (e as usize) < v_len);
                if g.len() >= 2 && has_concrete {
                    g.sort_unstable();
                    next.push(g);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        sets = next;
        ell += 1;
    }
    Ok(ell)
}

/// Whether `w[pos..pos+len]` occurs nowhere else in `w`.
fn occurs_once(w: &[u32], pos: usize, len: usize) -> bool {
    const B: u64 = 1_000_003;
    if pos + len > w.len() {
        return false;
    }
    let target = &w[pos..pos + len];
    let mut pow = 1u64;
    for _ in 0..len {
        pow = pow.wrapping_mul(B);
    }
    let hash = |s: &[u32]| s.iter().fold(0u64, |h, &c| h.wrapping_mul(B).wrapping_add(c as u64 + 1));
    let th = hash(target);
    let mut h = hash(&w[..len]);
    for i in 0..=w.len() - len {
        if i > 0 {
            h = h
                .wrapping_mul(B)
                .wrapping_add(w[i + len - 1] as u64 + 1)
                .wrapping_sub(pow.wrapping_mul(w[i - 1] as u64 + 1));
        }
        if i != pos && h == th && &w[i..i + len] == target {
            return false;
        }
    }
    true
}

/// Concrete scan of windows of length m·a starting at positions `starts`.
fn concrete_window_scan(
    w: &[u32],
    f: Fraction,
    starts: std::ops::Range<usize>,
    mm: usize,
) -> Option<Violation> {
    let p = mm * f.b as usize;
    let x = mm * (f.a - f.b) as usize;
    let len = mm * f.a as usize;
    starts
        .into_iter()
        .find(|&i| i + len <= w.len() && (0..x).all(|t| w[i + t] == w[i + t + p]))
        .map(|i| {
            let letters: Vec<WindowLetter> =
                w[i..i + len].iter().map(|&c| WindowLetter::Lit(c)).collect();
            Violation {
                position: i,
                m: mm,
                rendered: render_window(&letters, 0, &[x, p]),
                letters,
            }
        })
}

/// Freeness of τ(φ^∞(0′)) given a transient: φ restricted to ℤ≥0 is checked
/// first, then windows starting inside τ(v) are scanned up to the uniqueness
/// length of factors starting there.
pub fn verify_transient_free(
    m: &ExplicitMorphism,
    f: Fraction,
    opts: &VerifyOptions,
) -> ProofReport {
    let mut plain = m.clone();
    plain.transient = None;
    plain.primed_overrides.clear();
    let base = verify_free_inner(&plain, f, opts, false);
    let mut report = base;
    let Some(v) = &m.transient else {
        report.notes.push("no transient".into());
        return report;
    };
    if !m.primed_overrides.is_empty() {
        report.status = report.status.and(Status::Inconclusive);
        report
            .notes
            .push("primed override images are not covered by the transient argument".into());
        return report;
    }
    if report.status == Status::Refuted || report.status == Status::HypothesisViolation {
        return report;
    }
    let v_len = v.len();
    let k = m.k;

    let mut skip = BTreeSet::new();
    let mut anchor_len = 0;
    let mut w_len = v_len + 4 * k + 1024;
    if let Some(h) = &opts.anchor {
        anchor_len = h.required_length(k);
        w_len = w_len.max(opts.anchor_check_length.unwrap_or(0));
        w_len = w_len.max(h.position + anchor_len + 1);
    }
    let limit = v_len + 2 * k;
    let mut w = match concrete(m, w_len + limit) {
        Ok(w) => w,
        Err(e) => {
            report.status = Status::HypothesisViolation;
            report.notes.push(e.to_string());
            return report;
        }
    };
    if let Some(h) = &opts.anchor {
        let phi0: Vec<u32> = (0..k).map(|r| if r + 1 < k { m.u[r].value() } else { m.last(0) }).collect();
        let mut expect = h.prefix.clone();
        for _ in 0..h.image_power {
            expect.extend_from_slice(&phi0);
        }
        let shape_ok = w.len() >= h.position + expect.len()
            && w[h.position..h.position + expect.len()] == expect[..];
        let unique = occurs_once(&w, h.position, anchor_len);
        if !(shape_ok && unique) {
            report.status = report.status.and(Status::Inconclusive);
            report.notes.push(format!(
                "anchor at {} rejected (shape {shape_ok}, unique {unique})",
                h.position
            ));
            return report;
        }
        report.notes.push(format!(
            "anchor factor of length {anchor_len} at {} occurs once in the first {} letters",
            h.position,
            w.len()
        ));
        skip.insert(h.position);
        report.anchor_length = Some(anchor_len);
    }
    let refined = match transient_refinement(m, &w, &skip, limit) {
        Ok(l) => l,
        Err(e) => {
            report.status = report.status.and(Status::Inconclusive);
            report.notes.push(e.to_string());
            return report;
        }
    };
    let ell2 = refined.max(anchor_len);
    report.transient_unique_length = Some(ell2);
    let m2 = explicit_m_max(f, ell2);
    report.transient_m_max = Some(m2);
    let limit_m = opts.max_m.map_or(m2, |c| c.min(m2));
    if limit_m < m2 {
        report.status = report.status.and(Status::Inconclusive);
        report
            .notes
            .push(format!("transient windows scanned for m ≤ {limit_m} of {m2}"));
    }
    let need = v_len + limit_m * f.a as usize;
    if w.len() < need {
        w = concrete(m, need).expect("expansion succeeded before");
    }
    let hits: Vec<Violation> = (1..=limit_m)
        .into_par_iter()
        .filter_map(|mm| concrete_window_scan(&w, f, 0..v_len, mm))
        .collect();
    if let Some(v) = hits.into_iter().min_by_key(|v| (v.m, v.position)) {
        report.notes.push(format!("power at transient position {}", v.position));
        report.window_results.push(WindowOutcome {
            m: v.m,
            violation: Some(v),
        });
        report.status = Status::Refuted;
    }
    report
}

/// Default leastness search cap: max(256, 2⌈ℓ/(a − b)⌉).
pub fn default_cap(f: Fraction, ell: usize) -> usize {
    256.max(2 * ell.div_ceil((f.a - f.b) as usize))
}

/// Least m ≤ cap such that setting the letter at `r` (a position of the current
/// image, preceded by images of arbitrary letters) to `c` creates an a/b-power
/// suffix whose equalities involve only explicit letters.
fn definite_witness(img: &CyclicImage, f: Fraction, r: usize, c: u32, cap: usize) -> Option<usize> {
    let k = img.k();
    let (a, b) = (f.a as usize, f.b as usize);
    // absolute index: the current image occupies [base, base + k)
    let base = k * (cap * a / k + 2);
    let end = base + r;
    let at = |q: usize| -> Cell {
        if q == end {
            Cell::Lit(c)
        } else {
            img.at(q)
        }
    };
    (1..=cap).find(|&mm| {
        let start = end + 1 - mm * a;
        let p = mm * b;
        (0..mm * (a - b)).all(|t| match (at(start + t), at(start + t + p)) {
            (Cell::Lit(x), Cell::Lit(y)) => x == y,
            _ => false,
        })
    })
}

/// Lexicographic leastness of τ(φ^∞(start)) among a/b-power-free words, by
/// decrement tests: a concrete prefix, then every nonzero letter of φ(n) in the
/// context of preceding images, then the last letter by induction.
pub fn verify_lex_least(m: &ExplicitMorphism, f: Fraction, cap: Option<usize>) -> ProofReport {
    let mut report = ProofReport::new(m, f);
    let ell = locating_length_explicit(m).map(|l| l.ell).unwrap_or(m.k);
    let cap = cap.unwrap_or_else(|| default_cap(f, ell));
    let overrides_outside_start = m
        .primed_overrides
        .keys()
        .any(|&c| c != Letter::primed(0) || m.u.iter().any(|&x| x == c));
    if overrides_outside_start || m.u.iter().any(|c| c.is_primed()) {
        report.status = Status::Inconclusive;
        report
            .unresolved
            .push("images of primed letters recur; only plain images are supported".into());
        return report;
    }
    let v_len = m.transient.as_ref().map_or(0, |v| v.len());
    let n0 = v_len + cap * f.a as usize + 2 * m.k;
    let w = match concrete(m, n0) {
        Ok(w) => w,
        Err(e) => {
            report.status = Status::HypothesisViolation;
            report.notes.push(e.to_string());
            return report;
        }
    };
    let g = generate_values(f, n0, AvoidMode::Exact);
    report.leastness_prefix_checked = Some(n0);
    if let Some(i) = (0..n0).find(|&i| w[i] != g[i]) {
        report.status = Status::Refuted;
        report.notes.push(format!(
            "prefix differs from the greedy word at position {i}: {} vs {}",
            w[i], g[i]
        ));
        return report;
    }

    let img = CyclicImage::new(m);
    let k = m.k;
    let classes: Vec<(usize, u32)> = (0..k - 1)
        .flat_map(|r| (0..m.u[r].value()).map(move |c| (r, c)))
        .collect();
    let found: Vec<((usize, u32), Option<usize>)> = classes
        .par_iter()
        .map(|&(r, c)| ((r, c), definite_witness(&img, f, r, c, cap)))
        .collect();
    for ((r, c), wm) in found {
        let key = format!("u[{r}]={}->{c}", m.u[r].value());
        match wm {
            Some(mm) => {
                report.leastness_witnesses.insert(key, mm);
            }
            None => report.unresolved.push(key),
        }
    }

    // last letter: c is inductive when it is the last letter of an earlier n′
    let max_key = m.shift_exceptions.keys().copied().max().unwrap_or(0);
    let mut targets: BTreeSet<u32> = BTreeSet::new();
    for n in 0..=max_key + 1 {
        let earlier: BTreeSet<u32> = (0..n).map(|x| m.last(x)).collect();
        for c in 0..m.last(n) {
            if earlier.contains(&c) {
                continue;
            }
            targets.insert(c);
        }
    }
    for c in targets {
        let key = format!("last->{c}");
        match definite_witness(&img, f, k - 1, c, cap) {
            Some(mm) => {
                report.leastness_witnesses.insert(key, mm);
            }
            None => report.unresolved.push(key),
        }
    }
    report.leastness_inductive.push(format!(
        "last letter of φ(n) lowered to last(n′) for n′ < n is the image of lowering n to n′"
    ));
    if !report.unresolved.is_empty() {
        report.status = Status::Inconclusive;
        report
            .notes
            .push(format!("no witness with m ≤ {cap} for {} classes", report.unresolved.len()));
    }
    report
}

/// Replay a leastness witness on a concrete word: lowering `w[i]` to `c` makes
/// `w[..=i]` end with an a/b-power of length m·a.
pub fn replay_decrement(w: &[u32], i: usize, c: u32, f: Fraction, mm: usize) -> bool {
    let len = mm * f.a as usize;
    if len > i + 1 {
        return false;
    }
    let start = i + 1 - len;
    let p = mm * f.b as usize;
    let at = |q: usize| if q == i { c } else { w[q] };
    (start + p..=i).all(|q| at(q) == at(q - p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::integer_power_morphism;
    use crate::word::is_fractional_power;

    fn fr(a: u32, b: u32) -> Fraction {
        Fraction::new(a, b).unwrap()
    }

    fn phi(s: &str, d: u32) -> ExplicitMorphism {
        ExplicitMorphism::shift(Word::from_digits(s), d)
    }

    /// Every pair of residues whose length-ℓ factors agree letter by letter
    /// under some assignment, by direct comparison.
    fn brute_locating(m: &ExplicitMorphism) -> usize {
        let img = CyclicImage::new(m);
        let k = img.k();
        (1..=k)
            .find(|&l| {
                (0..k).all(|p| {
                    (p + 1..k).all(|q| (0..l).any(|t| !img.compatible(img.at(p + t), img.at(q + t))))
                })
            })
            .unwrap()
    }

    #[test]
    fn locating_length_small() {
        let m = phi("000010", 1);
        let loc = locating_length_explicit(&m).unwrap();
        assert_eq!(loc.ell, 4);
        assert_eq!(loc.ell, brute_locating(&m));
        let (p, q) = loc.witness_pair.unwrap();
        let img = CyclicImage::new(&m);
        assert!((0..loc.ell - 1).all(|t| img.compatible(img.at(p + t), img.at(q + t))));
        assert!(locating_length_explicit(&phi("00100", 1)).is_err());
    }

    #[test]
    fn locating_matches_brute_force_on_random_images() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let k = rng.gen_range(2..14);
            let u: Vec<u32> = (0..k - 1).map(|_| rng.gen_range(0..3)).collect();
            let d = rng.gen_range(0..3);
            let m = ExplicitMorphism::shift(Word::from_values(&u), d);
            let brute = {
                let img = CyclicImage::new(&m);
                (1..=k).find(|&l| {
                    (0..k).all(|p| {
                        (p + 1..k)
                            .all(|q| (0..l).any(|t| !img.compatible(img.at(p + t), img.at(q + t))))
                    })
                })
            };
            match locating_length_explicit(&m) {
                Ok(l) => assert_eq!(Some(l.ell), brute, "{m}"),
                Err(_) => assert_eq!(brute, None, "{m}"),
            }
        }
    }

    #[test]
    fn window_scan_examples() {
        assert!(window_scan(&phi("000010", 1), fr(5, 3), 1).is_none());
        let v = window_scan(&phi("00", 1), fr(3, 2), 1).unwrap();
        assert_eq!(v.position, 1);
        let m = phi("00", 1);
        assert!(is_fractional_power(&v.instantiate(fr(3, 2), &m), fr(3, 2)));
    }

    #[test]
    fn five_thirds_proved() {
        let m = phi("000010", 1);
        let r = verify_free_explicit(&m, fr(5, 3), &VerifyOptions::default());
        assert_eq!(r.status, Status::Proved);
        assert_eq!(r.locating_length, Some(4));
        assert_eq!(r.m_max, Some(1));
        let l = verify_lex_least(&m, fr(5, 3), Some(4));
        assert_eq!(l.status, Status::Proved, "{:?}", l.unresolved);
        assert_eq!(l.leastness_witnesses.get("last->0"), Some(&1));
    }

    #[test]
    fn integer_path() {
        let r = verify_free_explicit(&integer_power_morphism(3), fr(5, 2), &VerifyOptions::default());
        assert_eq!(r.status, Status::HypothesisViolation);
        let r = verify_free_explicit(&integer_power_morphism(5), fr(5, 2), &VerifyOptions::default());
        assert_eq!(r.status, Status::Proved);
        let l = verify_lex_least(&integer_power_morphism(5), fr(5, 2), None);
        assert_eq!(l.status, Status::Proved, "{:?}", l.unresolved);
    }

    #[test]
    fn replay() {
        let w = Word::from_digits("0000101").values();
        assert!(replay_decrement(&w, 4, 0, fr(5, 3), 1));
        assert!(!replay_decrement(&w, 6, 1, fr(5, 3), 1));
    }
}
