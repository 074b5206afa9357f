//! Oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use fracpow::catalog;
use fracpow::symbolic::prover::sym_factor_table;
use fracpow::symbolic::SymLetter;

/// Letters of φ(n₀)φ(n₁)⋯ with the shifted letter kept symbolic.
fn periodic_letter(u: &[u32], d: u32, q: usize) -> SymLetter {
    let k = u.len() + 1;
    if q % k == k - 1 {
        SymLetter::Var { copy: (q / k) as u32, d }
    } else {
        SymLetter::Lit(u[q % k])
    }
}

/// Symbolic factor tables of every bundled theorem, for m = 1 and 2, against
/// the windows of the explicit morphism at `per` rationals sampled inside
/// the table's leaves. Returns the number of (theorem, m, rational) checks.
pub fn factor_tables_agree(per: usize) -> Result<usize, String> {
    let mut compared = 0;
    for (name, m) in catalog::symbolic_theorems() {
        let i = m.interval.interior();
        for mult in 1..=2i64 {
            let (leaves, points) = sym_factor_table(&m, mult, &i).map_err(|(r, e)| format!("{name}: {r}: {e}"))?;
            // the smallest rationals are usually split off as points, so
            // sample inside the leaves themselves
            let mut picks: Vec<(usize, (i64, i64))> = Vec::new();
            for (li, leaf) in leaves.iter().enumerate() {
                let sample = leaf.region.sample(4);
                if let Some(&p) = sample.iter().find(|&&(a, b)| a <= 400 && m.admits(a, b).is_ok()) {
                    if !picks.iter().any(|&(_, q)| q == p) {
                        picks.push((li, p));
                    }
                }
            }
            picks.sort_by_key(|&(_, (a, _))| a);
            for &(li, (a, b)) in picks.iter().take(per) {
                if points.contains(&(a, b)) {
                    return Err(format!("{name}: {a}/{b} is both a leaf point and split off"));
                }
                let e = m.at(a, b).map_err(|e| format!("{name} at {a}/{b}: {e}"))?;
                let u: Vec<u32> = e.u.iter().map(|c| c.value()).collect();
                let len = (mult * a) as usize;
                let mut sym: BTreeMap<usize, Vec<SymLetter>> = BTreeMap::new();
                for row in &leaves[li].raw {
                    let pos = row.pos.eval(a, b);
                    for s in row.lo.eval(a, b)..=row.hi.eval(a, b) {
                        if sym.insert((pos + s) as usize, row.word().expand(a, b, s, 0)).is_some() {
                            return Err(format!("{name} {a}/{b}: start {} listed twice", pos + s));
                        }
                    }
                }
                let explicit: BTreeMap<usize, Vec<SymLetter>> = (0..e.k)
                    .map(|p| (p, (p..p + len).map(|q| periodic_letter(&u, e.d, q)).collect()))
                    .collect();
                if sym != explicit {
                    return Err(format!("{name}: table for m = {mult} differs from the windows at {a}/{b}"));
                }
                compared += 1;
            }
        }
    }
    Ok(compared)
}

/// Whether w[s..s + len] has period p, letter by letter.
fn has_period(w: &[u32], s: usize, len: usize, p: usize) -> bool {
    (s..s + len - p).all(|j| w[j] == w[j + p])
}

/// First a/b-power factor (start, length), by trying every start and every
/// length m·a.
pub fn brute_power(w: &[u32], a: usize, b: usize) -> Option<(usize, usize)> {
    for s in 0..w.len() {
        let mut m = 1;
        while s + m * a <= w.len() {
            if has_period(w, s, m * a, m * b) {
                return Some((s, m * a));
            }
            m += 1;
        }
    }
    None
}

/// Whether some suffix of w is an a/b-power.
pub fn brute_power_suffix(w: &[u32], a: usize, b: usize) -> bool {
    let mut m = 1;
    while m * a <= w.len() {
        if has_period(w, w.len() - m * a, m * a, m * b) {
            return true;
        }
        m += 1;
    }
    false
}

/// First (position, smaller letter) whose substitution leaves the prefix
/// ending there free of a/b-powers, i.e. a place where w is not least.
pub fn brute_not_least(w: &[u32], a: usize, b: usize) -> Option<(usize, u32)> {
    let mut buf = Vec::with_capacity(w.len());
    for (i, &x) in w.iter().enumerate() {
        for c in 0..x {
            buf.push(c);
            let ok = !brute_power_suffix(&buf, a, b);
            buf.pop();
            if ok {
                return Some((i, c));
            }
        }
        buf.push(x);
    }
    None
}
