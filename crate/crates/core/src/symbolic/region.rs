//! Sets of lattice points (a, b) with a/b in an open interval, and exact
//! sign analysis of linear forms over them.
//!
//! With lo = p1/q1 and hi = p2/q2, write D_lo = q1·a − p1·b and
//! D_hi = p2·b − q2·a. Every point of the interval has D_lo, D_hi ≥ 1, and a
//! linear form becomes λ·D_lo + μ·D_hi + γ with rational λ, μ. Signs are
//! decided on that cone; where they are not constant the region reports an
//! obstacle whose refinement removes the ambiguity.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::form::{fmt_q, LinearForm, RationalInterval, Q};

pub const NEG: u8 = 1;
pub const ZERO: u8 = 2;
pub const POS: u8 = 4;

pub fn sign_bit(v: i64) -> u8 {
    match v.signum() {
        -1 => NEG,
        0 => ZERO,
        _ => POS,
    }
}

fn q_bit(v: Q) -> u8 {
    if v.is_zero() {
        ZERO
    } else if v.is_positive() {
        POS
    } else {
        NEG
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Lo,
    Hi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstacle {
    /// The homogeneous root lies strictly inside the interval.
    Split(Q),
    /// The form is constant along lines parallel to an endpoint; lines with
    /// distance ≤ J must be handled one at a time.
    Stratify(Side, i64),
    /// Finitely many points break the sign.
    Exclude(Vec<(i64, i64)>),
}

impl fmt::Display for Obstacle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstacle::Split(r) => write!(f, "split at {}", fmt_q(r)),
            Obstacle::Stratify(s, j) => write!(f, "stratify {s:?} up to {j}"),
            Obstacle::Exclude(p) => {
                let v: Vec<String> = p.iter().map(|(a, b)| format!("{a}/{b}")).collect();
                write!(f, "exclude {}", v.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub lo: Q,
    pub hi: Q,
    pub min_lo: i64,
    pub min_hi: i64,
    pub line: Option<(Side, i64)>,
    pub excluded: BTreeSet<(i64, i64)>,
    /// Points with gcd(b, g) ≠ 1 for some listed g are not members.
    pub moduli: Vec<i64>,
    pub depth: u32,
}

/// Result of refining a region: children plus points that left the
/// symbolic analysis and must be checked explicitly.
#[derive(Clone, Debug, Default)]
pub struct Refinement {
    pub children: Vec<Region>,
    pub points: Vec<(i64, i64)>,
}

impl Region {
    pub fn new(lo: Q, hi: Q, moduli: Vec<i64>) -> Region {
        assert!(lo < hi, "empty region");
        assert!(lo.is_positive());
        Region {
            lo,
            hi,
            min_lo: 1,
            min_hi: 1,
            line: None,
            excluded: BTreeSet::new(),
            moduli,
            depth: 0,
        }
    }

    pub fn from_interval(i: &RationalInterval, moduli: Vec<i64>) -> Region {
        Region::new(i.lower, i.upper, moduli)
    }

    pub fn interval(&self) -> RationalInterval {
        RationalInterval::open(self.lo, self.hi).expect("nonempty")
    }

    pub fn is_line(&self) -> bool {
        self.line.is_some()
    }

    pub fn det(&self) -> i64 {
        let (p1, q1) = (*self.lo.numer(), *self.lo.denom());
        let (p2, q2) = (*self.hi.numer(), *self.hi.denom());
        q1 * p2 - p1 * q2
    }

    /// (D_lo, D_hi) of a point.
    pub fn coords(&self, a: i64, b: i64) -> (i64, i64) {
        let (p1, q1) = (*self.lo.numer(), *self.lo.denom());
        let (p2, q2) = (*self.hi.numer(), *self.hi.denom());
        (q1 * a - p1 * b, p2 * b - q2 * a)
    }

    /// Inverse of `coords`, if integral.
    fn point(&self, dlo: i64, dhi: i64) -> Option<(i64, i64)> {
        let (p1, q1) = (*self.lo.numer(), *self.lo.denom());
        let (p2, q2) = (*self.hi.numer(), *self.hi.denom());
        let det = self.det();
        let an = p2 * dlo + p1 * dhi;
        let bn = q2 * dlo + q1 * dhi;
        (an % det == 0 && bn % det == 0).then(|| (an / det, bn / det))
    }

    /// Whether (a, b) is a point of this region (coprime, in range, not
    /// excluded, passes the moduli, on the line if any).
    pub fn contains(&self, a: i64, b: i64) -> bool {
        if b < 1 || a.gcd(&b) != 1 {
            return false;
        }
        let (dlo, dhi) = self.coords(a, b);
        if dlo < self.min_lo || dhi < self.min_hi {
            return false;
        }
        match self.line {
            Some((Side::Lo, j)) if dlo != j => return false,
            Some((Side::Hi, j)) if dhi != j => return false,
            _ => {}
        }
        if self.moduli.iter().any(|&g| b.gcd(&g) != 1) {
            return false;
        }
        !self.excluded.contains(&(a, b))
    }

    /// λ, μ, γ with f = λ·D_lo + μ·D_hi + γ.
    fn cone_coeffs(&self, f: LinearForm) -> (Q, Q, Q) {
        let (p1, q1) = (*self.lo.numer(), *self.lo.denom());
        let (p2, q2) = (*self.hi.numer(), *self.hi.denom());
        let det = self.det();
        let lam = Q::new(f.a * p2 + f.b * q2, det);
        let mu = Q::new(f.a * p1 + f.b * q1, det);
        (lam, mu, Q::from_integer(f.c))
    }

    /// Member points with D_lo ∈ [lo0, lo1] and D_hi ∈ [hi0, hi1].
    fn points_in(&self, lo0: i64, lo1: i64, hi0: i64, hi1: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for dlo in lo0.max(self.min_lo)..=lo1 {
            for dhi in hi0.max(self.min_hi)..=hi1 {
                if let Some((a, b)) = self.point(dlo, dhi) {
                    if self.contains(a, b) {
                        out.push((a, b));
                    }
                }
            }
        }
        out.sort_by_key(|&(a, b)| (b, a));
        out
    }

    /// Points where the sign differs from `expected`, in a finite box.
    fn offenders(&self, f: LinearForm, expected: u8, lo1: i64, hi1: i64) -> Vec<(i64, i64)> {
        self.points_in(self.min_lo, lo1, self.min_hi, hi1)
            .into_iter()
            .filter(|&(a, b)| sign_bit(f.eval(a, b)) != expected)
            .collect()
    }

    fn finish_exclusion(&self, f: LinearForm, expected: u8, bad: Vec<(i64, i64)>) -> (u8, Option<Obstacle>) {
        if bad.is_empty() {
            return (expected, None);
        }
        let mut set = expected;
        for &(a, b) in &bad {
            set |= sign_bit(f.eval(a, b));
        }
        (set, Some(Obstacle::Exclude(bad)))
    }

    /// The set of signs f takes on the region (as a NEG/ZERO/POS mask) and,
    /// when more than one sign is possible, an obstacle to refine on.
    pub fn signs(&self, f: LinearForm) -> (u8, Option<Obstacle>) {
        let (lam, mu, g) = self.cone_coeffs(f);
        match self.line {
            Some((side, j)) => {
                let (coef, c, min) = match side {
                    Side::Lo => (mu, lam * j + g, self.min_hi),
                    Side::Hi => (lam, mu * j + g, self.min_lo),
                };
                if coef.is_zero() {
                    return (q_bit(c), None);
                }
                let expected = if coef.is_positive() { POS } else { NEG };
                // past the root the sign is `expected`
                let root = -c / coef;
                let last_bad = if coef.is_positive() {
                    root.floor().to_integer()
                } else {
                    root.ceil().to_integer()
                };
                if last_bad < min {
                    return (expected, None);
                }
                let bound = last_bad.max(min);
                let bad = match side {
                    Side::Lo => self.offenders(f, expected, j, bound),
                    Side::Hi => self.offenders(f, expected, bound, j),
                };
                // realizable points only: the line may be sparse
                let bad = match side {
                    Side::Lo => bad.into_iter().filter(|&(a, b)| self.coords(a, b).0 == j).collect(),
                    Side::Hi => bad.into_iter().filter(|&(a, b)| self.coords(a, b).1 == j).collect(),
                };
                self.finish_exclusion(f, expected, bad)
            }
            None => {
                if lam.is_zero() && mu.is_zero() {
                    return (q_bit(g), None);
                }
                let flip = lam <= Q::zero() && mu <= Q::zero();
                if !flip && (lam.is_negative() || mu.is_negative()) {
                    // root strictly inside
                    let r = Q::new(-f.b, f.a);
                    return (NEG | ZERO | POS, Some(Obstacle::Split(r)));
                }
                // make λ, μ ≥ 0 by negation, then translate back
                let (l, m, c) = if flip { (-lam, -mu, -g) } else { (lam, mu, g) };
                let expected = if flip { NEG } else { POS };
                let tr = |s: u8| -> u8 {
                    if !flip {
                        s
                    } else {
                        (if s & NEG != 0 { POS } else { 0 })
                            | (s & ZERO)
                            | (if s & POS != 0 { NEG } else { 0 })
                    }
                };
                let v0 = l * self.min_lo + m * self.min_hi + c;
                if v0.is_positive() {
                    return (expected, None);
                }
                if m.is_zero() || l.is_zero() {
                    let (coef, side, min) = if m.is_zero() {
                        (l, Side::Lo, self.min_lo)
                    } else {
                        (m, Side::Hi, self.min_hi)
                    };
                    let j = (-c / coef).floor().to_integer();
                    let mut set = POS;
                    for d in min..=j {
                        set |= q_bit(coef * d + c);
                    }
                    return (tr(set), Some(Obstacle::Stratify(side, j)));
                }
                let lo1 = ((-c - m * self.min_hi) / l).floor().to_integer();
                let hi1 = ((-c - l * self.min_lo) / m).floor().to_integer();
                let bad = self.offenders(f, expected, lo1, hi1);
                self.finish_exclusion(f, expected, bad)
            }
        }
    }

    pub fn refine(&self, ob: &Obstacle) -> Refinement {
        let mut out = Refinement::default();
        let child = |r: &Region| {
            let mut c = r.clone();
            c.depth += 1;
            c
        };
        match ob {
            Obstacle::Split(r) => {
                let mut left = child(self);
                left.hi = *r;
                left.min_hi = 1;
                let mut right = child(self);
                right.lo = *r;
                right.min_lo = 1;
                for c in [&mut left, &mut right] {
                    let (lo, hi) = (c.lo, c.hi);
                    c.excluded.retain(|&(a, b)| {
                        let x = Q::new(a, b);
                        x > lo && x < hi
                    });
                }
                out.children = vec![left, right];
                let (a, b) = (*r.numer(), *r.denom());
                if self.contains(a, b) {
                    out.points.push((a, b));
                }
            }
            Obstacle::Stratify(side, j) => {
                let min = match side {
                    Side::Lo => self.min_lo,
                    Side::Hi => self.min_hi,
                };
                for d in min..=*j {
                    let mut l = child(self);
                    l.line = Some((*side, d));
                    out.children.push(l);
                }
                let mut rest = child(self);
                match side {
                    Side::Lo => rest.min_lo = j + 1,
                    Side::Hi => rest.min_hi = j + 1,
                }
                out.children.push(rest);
            }
            Obstacle::Exclude(pts) => {
                let mut c = child(self);
                for &p in pts {
                    if c.excluded.insert(p) {
                        out.points.push(p);
                    }
                }
                out.children.push(c);
            }
        }
        out
    }

    /// Up to `n` member points of small height, smallest b first. Walks the
    /// diagonals D_lo + D_hi = s, so thin regions are as cheap as wide ones.
    pub fn sample(&self, n: usize) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        let mut budget = 20_000_000i64;
        if let Some((_, j)) = self.line {
            // membership along a line repeats with this period in D, since
            // gcd(a, b) divides j; n + 1 clean periods give n points or show
            // the line is empty
            let det = self.det();
            let period = self.moduli.iter().fold(det * j.max(1), |p, &g| p.lcm(&(det * g)));
            let rounds = (n + 1 + self.excluded.len()) as i64;
            budget = budget.min(period.saturating_mul(rounds));
        }
        let mut s = self.min_lo + self.min_hi;
        while out.len() < n && budget > 0 {
            let (from, to) = match self.line {
                Some((Side::Lo, j)) => (j, j),
                Some((Side::Hi, j)) => (s - j, s - j),
                None => (self.min_lo, s - self.min_hi),
            };
            for dlo in from.max(self.min_lo)..=to.min(s - self.min_hi) {
                if let Some((a, b)) = self.point(dlo, s - dlo) {
                    if self.contains(a, b) {
                        out.push((a, b));
                    }
                }
            }
            budget -= (to - from + 1).max(1);
            s += 1;
        }
        out.sort_by_key(|&(a, b)| (b, a));
        out.truncate(n);
        out
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}..{})", fmt_q(&self.lo), fmt_q(&self.hi))?;
        match self.line {
            Some((Side::Lo, j)) => write!(f, " on D_lo={j}")?,
            Some((Side::Hi, j)) => write!(f, " on D_hi={j}")?,
            None => {
                if self.min_lo > 1 {
                    write!(f, " D_lo>={}", self.min_lo)?;
                }
                if self.min_hi > 1 {
                    write!(f, " D_hi>={}", self.min_hi)?;
                }
            }
        }
        if !self.excluded.is_empty() {
            let v: Vec<String> = self.excluded.iter().map(|(a, b)| format!("{a}/{b}")).collect();
            write!(f, " minus {{{}}}", v.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(r: &Region, f: LinearForm) -> u8 {
        let mut s = 0;
        for b in 1..400 {
            for a in 1..800 {
                if r.contains(a, b) {
                    s |= sign_bit(f.eval(a, b));
                }
            }
        }
        s
    }

    #[test]
    fn definite_signs_are_sound() {
        let r = Region::new(Q::new(4, 3), Q::new(2, 1), vec![]);
        for f in [
            LinearForm::new(-1, 2, -1),
            LinearForm::new(3, -4, -1),
            LinearForm::new(2, -2, -1),
            LinearForm::new(1, -2, 1),
            LinearForm::new(-5, 8, 0),
            LinearForm::new(1, 0, -7),
        ] {
            let (s, ob) = r.signs(f);
            let truth = brute(&r, f);
            assert_eq!(s & truth, truth, "{f}: claimed {s} truth {truth}");
            if ob.is_none() {
                assert_eq!(s.count_ones(), 1);
            }
        }
    }

    #[test]
    fn stratify_then_lines() {
        let r = Region::new(Q::new(4, 3), Q::new(2, 1), vec![]);
        let f = LinearForm::new(-1, 2, -1);
        let (s, ob) = r.signs(f);
        assert_eq!(s, ZERO | POS);
        assert_eq!(ob, Some(Obstacle::Stratify(Side::Hi, 1)));
        let kids = r.refine(&ob.unwrap()).children;
        assert_eq!(kids.len(), 2);
        assert_eq!(kids[0].signs(f).0, ZERO);
        assert_eq!(kids[1].signs(f).0, POS);
        assert!(kids[0].contains(5, 3));
        assert!(!kids[1].contains(5, 3));
    }

    #[test]
    fn interior_root_splits() {
        let r = Region::new(Q::new(3, 2), Q::new(5, 3), vec![]);
        let (_, ob) = r.signs(LinearForm::new(5, -8, -1));
        assert_eq!(ob, Some(Obstacle::Split(Q::new(8, 5))));
    }

    #[test]
    fn corner_points_are_excluded() {
        let r = Region::new(Q::new(4, 3), Q::new(2, 1), vec![]);
        let f = LinearForm::new(1, 0, -6);
        let (s, ob) = r.signs(f);
        assert_eq!(s, NEG | POS);
        match ob {
            Some(Obstacle::Exclude(p)) => assert_eq!(p, vec![(3, 2), (5, 3)]),
            other => panic!("{other:?}"),
        }
    }
}
