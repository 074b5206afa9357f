//! End-to-end symbolic freeness proofs: a locating length found among
//! combinations cc·a − dd·b, then every window x|y|z of length m·a with
//! m ≤ m_max shown to have x ≠ z on every piece of the interval. Points that
//! leave the symbolic analysis are checked with the explicit verifier.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::form::{fmt_q, LinearForm, RationalInterval, Q};
use super::region::{sign_bit, Obstacle, Region, NEG, POS, ZERO};
use super::table::{self, merge_rows, normalized_image, power_cuts, refine_all, sign_of, Row, Stop};
use super::unequal::{sym_unequal, Ctx, Verdict};
use super::word::{SymWord, SymbolicMorphism};
use crate::error::{Error, Result};
use crate::verifier::{locating_length_explicit, verify_morphism_free, Status, VerifyOptions};
use crate::word::Fraction;

/// Outcome of comparing two linear forms over an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    LessEq,
    Equal,
    GreaterEq,
    Greater,
    SplitAt(Q),
    Mixed(Obstacle),
}

/// Sign of f − g over the lattice points (a, b) with a/b in `i`.
pub fn lf_compare(f: LinearForm, g: LinearForm, i: &RationalInterval) -> Comparison {
    let h = f - g;
    if h.is_zero() {
        return Comparison::Equal;
    }
    let (mut s, ob) = if i.lower < i.upper {
        Region::new(i.lower, i.upper, vec![]).signs(h)
    } else {
        (0, None)
    };
    for (x, closed) in [(i.lower, i.lower_closed), (i.upper, i.upper_closed)] {
        if closed {
            s |= sign_bit(h.eval(*x.numer(), *x.denom()));
        }
    }
    match s {
        NEG => Comparison::Less,
        ZERO => Comparison::Equal,
        POS => Comparison::Greater,
        x if x == NEG | ZERO => Comparison::LessEq,
        x if x == ZERO | POS => Comparison::GreaterEq,
        _ => match ob {
            Some(Obstacle::Split(r)) => Comparison::SplitAt(r),
            Some(o) => Comparison::Mixed(o),
            None => Comparison::Mixed(Obstacle::Exclude(vec![])),
        },
    }
}

/// The first `len` letters of φ(n)φ(n)⋯ on each piece of the region.
pub fn sym_take(
    m: &SymbolicMorphism,
    region: Region,
    len: LinearForm,
) -> std::result::Result<Vec<(Region, SymWord)>, (Region, String)> {
    refine_all(vec![region], 40, |r| {
        let img = normalized_image(m, r)?;
        table::take(&img, r, len)
    })
    .map(|(done, _)| done)
}

/// One piece of a factor table.
#[derive(Clone, Debug)]
pub struct TableLeaf {
    pub region: Region,
    /// Rows for display, with adjacent single windows folded in.
    pub rows: Vec<Row>,
    /// Rows with every block nonempty, as used by the prover.
    pub raw: Vec<Row>,
}

/// All windows x|y|z of length mult·a as the start runs through φ(n), on
/// each piece of the interval. Points split off along the way are returned
/// separately.
pub fn sym_factor_table(
    m: &SymbolicMorphism,
    mult: i64,
    i: &RationalInterval,
) -> std::result::Result<(Vec<TableLeaf>, Vec<(i64, i64)>), (Region, String)> {
    let root = Region::from_interval(i, m.gcd.clone());
    let (done, points) = refine_all(vec![root], 40, |r| {
        let img = normalized_image(m, r)?;
        table::rows(&img, r, &power_cuts(mult))
    })?;
    let leaves = done
        .into_iter()
        .map(|(region, raw)| TableLeaf {
            rows: merge_rows(&raw),
            region,
            raw,
        })
        .collect();
    Ok((leaves, points))
}

#[derive(Clone, Debug)]
pub struct ProverOptions {
    /// Bound on cc in candidates cc·a − dd·b.
    pub candidate_bound: i64,
    pub max_depth: u32,
    /// Largest denominator in the search for rationals where φ(0) is a power.
    pub scan_denominator: i64,
    /// Skip isolated points outside the gcd condition when checking a
    /// locating length. Off by default: the search for ℓ then runs on the
    /// whole interval, and rationals such as 17/12 for 14·(6a−b) must be
    /// excluded explicitly.
    pub locating_respects_gcd: bool,
}

impl Default for ProverOptions {
    fn default() -> Self {
        ProverOptions {
            candidate_bound: 10,
            max_depth: 60,
            scan_denominator: 100,
            locating_respects_gcd: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortWords {
    pub a_min: i64,
    /// (s − t/I_min)(a_min − 2)
    pub bound: String,
    pub holds: bool,
}

/// A locating length with what it took to establish it.
#[derive(Clone, Debug, Serialize)]
pub struct LocatingCertificate {
    pub ell: String,
    pub cc: i64,
    pub dd: i64,
    pub m_max: i64,
    pub short_words: ShortWords,
    pub leaves: usize,
    pub pairs_checked: usize,
    pub explicit_points: Vec<String>,
    pub candidates_tried: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafRecord {
    pub region: String,
    /// Rows checked for each m.
    pub rows: Vec<(i64, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointCheck {
    pub fraction: String,
    pub status: String,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub region: String,
    pub m: Option<i64>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolicProof {
    pub name: String,
    pub interval: String,
    pub status: Status,
    pub k: String,
    pub locating: Option<LocatingCertificate>,
    pub m_max: Option<i64>,
    pub leaves: Vec<LeafRecord>,
    /// Distinct open intervals among the leaves.
    pub subintervals: Vec<String>,
    pub point_checks: Vec<PointCheck>,
    /// Points where the explicit check found a power or broken hypothesis.
    pub exceptions: Vec<String>,
    pub stated_exceptions: Vec<String>,
    /// Rationals with denominator ≤ the scan bound where φ(0) is a power.
    pub obstructions: Vec<String>,
    pub failure: Option<Failure>,
    pub notes: Vec<String>,
}

impl SymbolicProof {
    fn new(m: &SymbolicMorphism, i: &RationalInterval) -> SymbolicProof {
        SymbolicProof {
            name: m.name.clone(),
            interval: i.to_string(),
            status: Status::Inconclusive,
            k: m.k.to_string(),
            locating: None,
            m_max: None,
            leaves: Vec::new(),
            subintervals: Vec::new(),
            point_checks: Vec::new(),
            exceptions: Vec::new(),
            stated_exceptions: m.exceptions.iter().map(fmt_q).collect(),
            obstructions: Vec::new(),
            failure: None,
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("proof serializes")
    }
}

impl fmt::Display for SymbolicProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} on {}: {}", self.name, self.interval, self.status)?;
        writeln!(f, "  k = {}", self.k)?;
        if let Some(l) = &self.locating {
            writeln!(f, "  locates words of length {} (cc = {}, dd = {})", l.ell, l.cc, l.dd)?;
            writeln!(
                f,
                "  m_max = {}; short words: a_min = {}, bound {} ({})",
                l.m_max,
                l.short_words.a_min,
                l.short_words.bound,
                if l.short_words.holds { "holds" } else { "fails" }
            )?;
        }
        writeln!(f, "  subintervals: {}", self.subintervals.len())?;
        for s in &self.subintervals {
            let n = self
                .leaves
                .iter()
                .filter(|l| l.region.starts_with(s.as_str()))
                .count();
            writeln!(f, "    {s}  ({n} pieces)")?;
        }
        if !self.point_checks.is_empty() {
            writeln!(f, "  explicit points:")?;
            for p in &self.point_checks {
                if p.note.is_empty() {
                    writeln!(f, "    {}: {}", p.fraction, p.status)?;
                } else {
                    writeln!(f, "    {}: {} {}", p.fraction, p.status, p.note)?;
                }
            }
        }
        writeln!(f, "  exceptions: [{}]", self.exceptions.join(", "))?;
        if !self.obstructions.is_empty() {
            writeln!(f, "  φ(0) is a power at: [{}]", self.obstructions.join(", "))?;
        }
        if let Some(x) = &self.failure {
            write!(f, "  failed on {}", x.region)?;
            if let Some(m) = x.m {
                write!(f, " at m = {m}")?;
            }
            writeln!(f, ": {}", x.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// ⌈(cc·I_min − dd)/(I_min − 1)⌉ − 1.
pub fn m_max_for(cc: i64, dd: i64, i_min: Q) -> i64 {
    let x = (Q::from_integer(cc) * i_min - Q::from_integer(dd)) / (i_min - Q::one());
    x.ceil().to_integer() - 1
}

/// Whether m_max ≤ (s − t/I_min)(a_min − 2).
pub fn short_words(m: &SymbolicMorphism, i: &RationalInterval, m_max: i64) -> ShortWords {
    let (s, t) = m.st();
    let modulus = m.gcd.iter().product::<i64>().max(1);
    let a_min = i.min_numerator(modulus).unwrap_or(0);
    let bound = (Q::from_integer(s) - Q::from_integer(t) / i.lower) * Q::from_integer(a_min - 2);
    ShortWords {
        a_min,
        bound: fmt_q(&bound),
        holds: Q::from_integer(m_max) <= bound,
    }
}

/// Candidate locating lengths cc·a − dd·b, in the order they are tried.
pub fn locating_candidates(
    m: &SymbolicMorphism,
    i: &RationalInterval,
    bound: i64,
) -> Vec<(i64, i64, i64, ShortWords)> {
    let i_min = i.lower;
    let mut out = Vec::new();
    for cc in 1..=bound {
        for dd in 0..=cc {
            if Q::from_integer(cc) * i_min - Q::from_integer(dd) <= Q::zero() {
                continue;
            }
            let mm = m_max_for(cc, dd, i_min);
            let sw = short_words(m, i, mm);
            if sw.holds {
                out.push((mm, cc, dd, sw));
            }
        }
    }
    out.sort_by_key(|c| (c.0, c.1, c.2));
    out
}

/// Open pieces of the interval with the listed rationals removed.
pub fn roots(i: &RationalInterval, cut: &[Q], moduli: &[i64]) -> Vec<Region> {
    let mut pts: Vec<Q> = cut
        .iter()
        .copied()
        .filter(|&x| x > i.lower && x < i.upper)
        .collect();
    pts.sort();
    pts.dedup();
    let mut bounds = vec![i.lower];
    bounds.extend(pts);
    bounds.push(i.upper);
    bounds
        .windows(2)
        .map(|w| Region::new(w[0], w[1], moduli.to_vec()))
        .collect()
}

/// Points of the closed ends of the interval.
fn closed_ends(i: &RationalInterval) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for (x, closed) in [(i.lower, i.lower_closed), (i.upper, i.upper_closed)] {
        if closed {
            out.push((*x.numer(), *x.denom()));
        }
    }
    out
}

const SECOND: u32 = 1 << 16;

/// Show that distinct windows of one length differ on the region. Returns
/// the number of pairs compared.
pub fn check_locating(m: &SymbolicMorphism, r: &Region, ell: LinearForm) -> std::result::Result<usize, Stop> {
    let img = normalized_image(m, r)?;
    let rows = table::rows(&img, r, &[LinearForm::ZERO, ell])?;
    let words: Vec<SymWord> = rows.iter().map(|row| row.word()).collect();
    let n = rows.len();
    let verdicts: Vec<Option<Stop>> = (0..n)
        .into_par_iter()
        .flat_map_iter(|p| {
            let rows = &rows;
            let words = &words;
            (p..n).map(move |q| {
                let (rp, rq) = (&rows[p], &rows[q]);
                let other = words[q].as_second(SECOND);
                let ctx = if p == q {
                    match sign_of(r, rp.hi - rp.lo) {
                        Ok(POS) => Ctx::ordered(r, rp.lo, rp.hi),
                        Ok(_) => return None,
                        Err(stop) => return Some(stop),
                    }
                } else {
                    Ctx::product(r, (rp.lo, rp.hi), (rq.lo, rq.hi))
                };
                match sym_unequal(&words[p], &other, &ctx) {
                    Verdict::Unequal => None,
                    Verdict::Unknown(obs) => Some(match obs.into_iter().next() {
                        Some(o) => Stop::Refine(o),
                        None => Stop::Fail(format!(
                            "windows {} (at {} + i, {} ≤ i ≤ {}) and {} (at {} + j, {} ≤ j ≤ {}) are not separated",
                            words[p], rp.pos, rp.lo, rp.hi, words[q], rq.pos, rq.lo, rq.hi
                        )),
                    }),
                }
            })
        })
        .collect();
    match verdicts.into_iter().flatten().next() {
        Some(stop) => Err(stop),
        None => Ok(n * (n + 1) / 2),
    }
}

/// Show x ≠ z for every window x|y|z of length mult·a on the region.
/// Returns the number of rows.
fn check_power(m: &SymbolicMorphism, r: &Region, mult: i64) -> std::result::Result<usize, Stop> {
    let img = normalized_image(m, r)?;
    let rows = table::rows(&img, r, &power_cuts(mult))?;
    let verdicts: Vec<Option<Stop>> = rows
        .par_iter()
        .map(|row| {
            let ctx = Ctx::single(r, row.lo, row.hi);
            match sym_unequal(&row.segs[0], &row.segs[2], &ctx) {
                Verdict::Unequal => None,
                Verdict::Unknown(obs) => Some(match obs.into_iter().next() {
                    Some(o) => Stop::Refine(o),
                    None => Stop::Fail(format!(
                        "x = {}, y = {}, z = {} (start {} + i, {} ≤ i ≤ {}) not separated",
                        row.segs[0], row.segs[1], row.segs[2], row.pos, row.lo, row.hi
                    )),
                }),
            }
        })
        .collect();
    match verdicts.into_iter().flatten().next() {
        Some(stop) => Err(stop),
        None => Ok(rows.len()),
    }
}

fn frac(a: i64, b: i64) -> String {
    format!("{a}/{b}")
}

/// Rationals in the interval with denominator ≤ `max_b` at which φ(0) is a
/// perfect power, so that no length is locating.
pub fn power_image_scan(m: &SymbolicMorphism, i: &RationalInterval, max_b: i64) -> Vec<Q> {
    let mut out = Vec::new();
    for b in 1..=max_b {
        let amin = (i.lower * b).floor().to_integer();
        let amax = (i.upper * b).ceil().to_integer();
        for a in amin..=amax {
            if a <= 0 || a.gcd(&b) != 1 || !i.contains(Q::new(a, b)) {
                continue;
            }
            if let Ok(e) = m.at(a, b) {
                if e.perfect_power_image().is_some() {
                    out.push(Q::new(a, b));
                }
            }
        }
    }
    out.sort();
    out
}

/// Rationals kept out of the search for ℓ: those assumed excluded plus
/// stated exceptions at which φ(0) is a perfect power.
fn locating_cuts(m: &SymbolicMorphism) -> Vec<Q> {
    let mut out = m.assume_excluded.clone();
    for &x in &m.exceptions {
        let (a, b) = (*x.numer(), *x.denom());
        if m.at(a, b).is_ok_and(|e| e.perfect_power_image().is_some()) {
            out.push(x);
        }
    }
    out
}

/// The first candidate cc·a − dd·b that locates on the whole interval
/// (apart from the rationals assumed excluded).
pub fn sym_locating_length(
    m: &SymbolicMorphism,
    i: &RationalInterval,
    opts: &ProverOptions,
) -> Result<(LinearForm, LocatingCertificate)> {
    let cands = locating_candidates(m, i, opts.candidate_bound);
    let mut tried = 0;
    for (mm, cc, dd, sw) in cands {
        tried += 1;
        let ell = LinearForm::new(cc, -dd, 0);
        let rts = roots(i, &locating_cuts(m), &[]);
        let res = refine_all(rts, opts.max_depth, |r| check_locating(m, r, ell));
        let Ok((done, mut points)) = res else {
            continue;
        };
        points.extend(closed_ends(i));
        points.sort();
        points.dedup();
        let mut ok = true;
        for &(a, b) in &points {
            if opts.locating_respects_gcd && m.gcd.iter().any(|&g| b.gcd(&g) != 1) {
                continue;
            }
            let e = m.at(a, b)?;
            match locating_length_explicit(&e) {
                Ok(l) if (l.ell as i64) <= ell.eval(a, b) => {}
                Ok(_) => {
                    ok = false;
                    break;
                }
                Err(Error::NoLocatingLength(msg)) => {
                    return Err(Error::NoLocatingLength(format!("at {a}/{b}: {msg}")));
                }
                Err(e) => return Err(e),
            }
        }
        if !ok {
            continue;
        }
        let pairs = done.iter().map(|(_, n)| n).sum();
        return Ok((
            ell,
            LocatingCertificate {
                ell: ell.to_string(),
                cc,
                dd,
                m_max: mm,
                short_words: sw,
                leaves: done.len(),
                pairs_checked: pairs,
                explicit_points: points.iter().map(|&(a, b)| frac(a, b)).collect(),
                candidates_tried: tried,
            },
        ));
    }
    let found = power_image_scan(m, i, opts.scan_denominator);
    let listed: Vec<String> = found.iter().map(fmt_q).collect();
    Err(Error::NoLocatingLength(if listed.is_empty() {
        format!("no candidate among {tried} locates on {i}")
    } else {
        format!("φ(0) is a perfect power at {}", listed.join(", "))
    }))
}

/// Whether (a, b) satisfies the theorem's hypotheses, stated exceptions
/// aside.
fn in_domain(m: &SymbolicMorphism, i: &RationalInterval, a: i64, b: i64) -> bool {
    let x = Q::new(a, b);
    i.contains(x) && m.gcd.iter().all(|&g| b.gcd(&g) == 1) && !m.assume_excluded.contains(&x)
}

/// Prove that the fixed point is a/b-power-free for every a/b in the
/// interval satisfying the hypotheses, discovering the exceptions.
pub fn sym_verify_free(m: &SymbolicMorphism, i: &RationalInterval, opts: &ProverOptions) -> SymbolicProof {
    let mut proof = SymbolicProof::new(m, i);
    let (_, cert) = match sym_locating_length(m, i, opts) {
        Ok(x) => x,
        Err(e) => {
            if let Error::NoLocatingLength(_) = e {
                proof.obstructions = power_image_scan(m, i, opts.scan_denominator)
                    .iter()
                    .map(fmt_q)
                    .collect();
            }
            proof.failure = Some(Failure {
                region: i.to_string(),
                m: None,
                detail: e.to_string(),
            });
            return proof;
        }
    };
    let m_max = cert.m_max;
    proof.m_max = Some(m_max);
    proof.locating = Some(cert);

    let mut leaves: Vec<(Region, Vec<(i64, usize)>)> = roots(i, &m.assume_excluded, &m.gcd)
        .into_iter()
        .map(|r| (r, Vec::new()))
        .collect();
    let mut points: BTreeSet<(i64, i64)> = closed_ends(i).into_iter().collect();
    for mult in 1..=m_max {
        let results: Vec<_> = leaves
            .par_iter()
            .map(|(r, hist)| {
                refine_all(vec![r.clone()], opts.max_depth, |x| check_power(m, x, mult)).map(|(done, pts)| {
                    let kids: Vec<_> = done
                        .into_iter()
                        .map(|(x, n)| {
                            let mut h = hist.clone();
                            h.push((mult, n));
                            (x, h)
                        })
                        .collect();
                    (kids, pts)
                })
            })
            .collect();
        let mut next = Vec::new();
        for res in results {
            match res {
                Ok((kids, pts)) => {
                    next.extend(kids);
                    points.extend(pts);
                }
                Err((r, msg)) => {
                    proof.failure = Some(Failure {
                        region: r.to_string(),
                        m: Some(mult),
                        detail: msg,
                    });
                    proof.status = Status::Inconclusive;
                    return proof;
                }
            }
        }
        leaves = next;
    }
    leaves.sort_by(|x, y| (x.0.lo, x.0.hi).cmp(&(y.0.lo, y.0.hi)));
    let mut subs: Vec<String> = Vec::new();
    for (r, hist) in &leaves {
        let s = format!("({}..{})", fmt_q(&r.lo), fmt_q(&r.hi));
        if subs.last() != Some(&s) {
            subs.push(s);
        }
        proof.leaves.push(LeafRecord {
            region: r.to_string(),
            rows: hist.clone(),
        });
    }
    proof.subintervals = subs;

    let checks: Vec<(i64, i64, Option<Status>, String)> = points
        .par_iter()
        .map(|&(a, b)| {
            if !in_domain(m, i, a, b) {
                return (a, b, None, "outside the hypotheses".to_string());
            }
            let f = match Fraction::new(a as u32, b as u32) {
                Ok(f) => f,
                Err(e) => return (a, b, Some(Status::Inconclusive), e.to_string()),
            };
            match m.at(a, b) {
                Ok(e) => {
                    let rep = verify_morphism_free(&e, f, &VerifyOptions::default());
                    let note = match rep.first_violation() {
                        Some(v) => format!("power of length {} (m = {})", v.m * a as usize, v.m),
                        None => rep.notes.join("; "),
                    };
                    (a, b, Some(rep.status), note)
                }
                Err(e) => (a, b, Some(Status::HypothesisViolation), e.to_string()),
            }
        })
        .collect();
    let mut status = Status::Proved;
    for (a, b, st, note) in checks {
        let x = Q::new(a, b);
        let label = match st {
            None => "skipped".to_string(),
            Some(s) => s.to_string(),
        };
        match st {
            Some(Status::Refuted) | Some(Status::HypothesisViolation) => {
                proof.exceptions.push(fmt_q(&x));
                if !m.exceptions.contains(&x) {
                    status = status.and(Status::Refuted);
                    proof
                        .notes
                        .push(format!("{} fails but is not a stated exception", fmt_q(&x)));
                }
            }
            Some(Status::Inconclusive) => status = status.and(Status::Inconclusive),
            _ => {}
        }
        proof.point_checks.push(PointCheck {
            fraction: frac(a, b),
            status: label,
            note,
        });
    }
    for x in &m.exceptions {
        if !proof.exceptions.contains(&fmt_q(x)) {
            proof
                .notes
                .push(format!("stated exception {} was not needed", fmt_q(x)));
        }
    }
    proof.status = status;
    proof
}

/// The chain from a locating length to m_max and the short-words bound.
pub fn m_max_chain(m: &SymbolicMorphism, i: &RationalInterval, ell: LinearForm) -> (i64, ShortWords) {
    let (cc, dd) = (ell.a, -ell.b);
    let mm = m_max_for(cc, dd, i.lower);
    (mm, short_words(m, i, mm))
}

