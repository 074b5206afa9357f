//! Factors of φ(n₀)φ(n₁)⋯ with symbolic lengths. A window is described by
//! cut offsets 0 = o₀ < o₁ < ⋯ from its start; sliding the start through one
//! period yields rows, each a family of windows parameterized by a slide
//! variable i over a range on which the block structure is fixed.

use std::fmt;

use super::form::{ExtForm, LinearForm};
use super::region::{Obstacle, Region, NEG, POS, ZERO};
use super::word::{SymLetter, SymWord, SymbolicMorphism};

/// Why a computation on a region stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stop {
    Refine(Obstacle),
    Fail(String),
}

impl From<Obstacle> for Stop {
    fn from(o: Obstacle) -> Stop {
        Stop::Refine(o)
    }
}

/// The single sign of f on the region, or an obstacle.
pub fn sign_of(r: &Region, f: LinearForm) -> Result<u8, Stop> {
    let (s, ob) = r.signs(f);
    if s.count_ones() == 1 {
        return Ok(s);
    }
    match ob {
        Some(o) => Err(Stop::Refine(o)),
        None => Err(Stop::Fail(format!("sign of {f} is undetermined on {r}"))),
    }
}

/// Whether f ≥ 0 on the whole region (false means f < 0 on the whole region).
pub fn nonneg(r: &Region, f: LinearForm) -> Result<bool, Stop> {
    let (s, ob) = r.signs(f);
    if s & NEG == 0 {
        return Ok(true);
    }
    if s == NEG {
        return Ok(false);
    }
    match ob {
        Some(o) => Err(Stop::Refine(o)),
        None => Err(Stop::Fail(format!("sign of {f} is undetermined on {r}"))),
    }
}

/// A block of the normalized image: a letter (copy 0) and a positive length.
pub type ImageBlock = (SymLetter, LinearForm);

/// φ(n) on the region: empty blocks dropped, equal neighbours merged.
pub fn normalized_image(m: &SymbolicMorphism, r: &Region) -> Result<Vec<ImageBlock>, Stop> {
    let mut out: Vec<ImageBlock> = Vec::new();
    for &(e, c) in &m.blocks {
        match sign_of(r, e)? {
            ZERO => continue,
            POS => {}
            _ => return Err(Stop::Fail(format!("exponent {e} is negative on {r}"))),
        }
        match out.last_mut() {
            Some(last) if last.0 == SymLetter::Lit(c) => last.1 = last.1 + e,
            _ => out.push((SymLetter::Lit(c), e)),
        }
    }
    out.push((SymLetter::Var { copy: 0, d: m.d }, LinearForm::ONE));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Cursor {
    t: usize,
    copy: u32,
    e: LinearForm,
}

fn letter(img: &[ImageBlock], t: usize, copy: u32) -> SymLetter {
    match img[t].0 {
        SymLetter::Var { d, .. } => SymLetter::Var { copy, d },
        l => l,
    }
}

/// Position `off` from the start of the periodic word.
fn locate(img: &[ImageBlock], r: &Region, off: LinearForm) -> Result<Cursor, Stop> {
    let mut rem = off;
    let mut c = Cursor {
        t: 0,
        copy: 0,
        e: LinearForm::ZERO,
    };
    let mut steps = 0usize;
    loop {
        let len = img[c.t].1;
        if nonneg(r, rem - len)? {
            rem = rem - len;
            c.t += 1;
            if c.t == img.len() {
                c.t = 0;
                c.copy += 1;
            }
        } else {
            c.e = rem;
            return Ok(c);
        }
        steps += 1;
        if steps > 1_000_000 {
            return Err(Stop::Fail(format!("offset {off} does not resolve on {r}")));
        }
    }
}

/// A family of windows starting at pos + i for i in [lo, hi].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub pos: LinearForm,
    pub lo: LinearForm,
    pub hi: LinearForm,
    /// The subfactors between consecutive cuts, with exponents in i.
    pub segs: Vec<SymWord>,
}

impl Row {
    pub fn fixed(&self) -> bool {
        self.lo == self.hi
    }

    /// The whole window.
    pub fn word(&self) -> SymWord {
        let mut w = SymWord::new();
        for s in &self.segs {
            for &(c, e) in &s.blocks {
                w.push(c, e);
            }
        }
        w
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let segs: Vec<String> = self.segs.iter().map(|s| s.to_string()).collect();
        if self.fixed() {
            write!(f, "{}", segs.join(" | "))
        } else {
            write!(f, "{}    ({} ≤ i ≤ {})", segs.join(" | "), self.lo, self.hi)
        }
    }
}

fn segment(img: &[ImageBlock], from: &Cursor, to: &Cursor, fixed: bool) -> SymWord {
    let mut w = SymWord::new();
    let i = if fixed { 0 } else { 1 };
    let slide = ExtForm {
        base: LinearForm::ZERO,
        i,
        j: 0,
    };
    if from.t == to.t && from.copy == to.copy {
        w.push(letter(img, from.t, from.copy), ExtForm::from(to.e - from.e));
        return w;
    }
    let head = ExtForm::from(img[from.t].1 - from.e) - slide;
    w.push(letter(img, from.t, from.copy), head);
    let (mut t, mut copy) = (from.t, from.copy);
    loop {
        t += 1;
        if t == img.len() {
            t = 0;
            copy += 1;
        }
        if t == to.t && copy == to.copy {
            break;
        }
        w.push(letter(img, t, copy), ExtForm::from(img[t].1));
    }
    let tail = ExtForm::from(to.e) + slide;
    if !(fixed && to.e.is_zero()) {
        w.push(letter(img, t, copy), tail);
    }
    w
}

/// All rows of windows with the given cuts (the last cut is the window
/// length) as the start runs once through φ(n).
pub fn rows(img: &[ImageBlock], r: &Region, cuts: &[LinearForm]) -> Result<Vec<Row>, Stop> {
    let mut cur: Vec<Cursor> = cuts.iter().map(|&o| locate(img, r, o)).collect::<Result<_, _>>()?;
    let n = cur.len();
    let mut pos = LinearForm::ZERO;
    let mut out = Vec::new();
    loop {
        let rem: Vec<LinearForm> = cur.iter().map(|c| img[c.t].1 - c.e).collect();
        let mut best = 0;
        for s in 1..n {
            if sign_of(r, rem[s] - rem[best])? == NEG {
                best = s;
            }
        }
        let step = rem[best];
        let mut movers = Vec::new();
        for (s, &x) in rem.iter().enumerate() {
            match sign_of(r, x - step)? {
                ZERO => movers.push(s),
                POS => {}
                _ => return Err(Stop::Fail("minimum is not minimal".into())),
            }
        }
        let mut zero_end = false;
        for c in &cur[1..] {
            if sign_of(r, c.e)? == ZERO {
                zero_end = true;
            }
        }
        let segs = |fixed: bool| -> Vec<SymWord> {
            (0..n - 1)
                .map(|s| segment(img, &cur[s], &cur[s + 1], fixed))
                .collect()
        };
        if zero_end {
            out.push(Row {
                pos,
                lo: LinearForm::ZERO,
                hi: LinearForm::ZERO,
                segs: segs(true),
            });
            if nonneg(r, step - LinearForm::constant(2))? {
                out.push(Row {
                    pos,
                    lo: LinearForm::ONE,
                    hi: step - LinearForm::ONE,
                    segs: segs(false),
                });
            }
        } else {
            let fixed = sign_of(r, step - LinearForm::ONE)? == ZERO;
            out.push(Row {
                pos,
                lo: LinearForm::ZERO,
                hi: if fixed { LinearForm::ZERO } else { step - LinearForm::ONE },
                segs: segs(fixed),
            });
        }
        pos = pos + step;
        for (s, c) in cur.iter_mut().enumerate() {
            if movers.contains(&s) {
                c.t += 1;
                if c.t == img.len() {
                    c.t = 0;
                    c.copy += 1;
                }
                c.e = LinearForm::ZERO;
            } else {
                c.e = c.e + step;
            }
        }
        if cur[0].t == 0 && cur[0].copy == 1 {
            break;
        }
        if out.len() > 200_000 {
            return Err(Stop::Fail("factor table does not close".into()));
        }
    }
    Ok(out)
}

fn drop_empty(w: &SymWord) -> SymWord {
    let mut out = SymWord::new();
    for &(c, e) in &w.blocks {
        if !(e.base.is_zero() && !e.has_params()) {
            out.push(c, e);
        }
    }
    out
}

fn segs_at(row: &Row, i: LinearForm) -> Vec<SymWord> {
    row.segs
        .iter()
        .map(|s| drop_empty(&s.at(i, LinearForm::ZERO)))
        .collect()
}

fn same_segs(x: &[SymWord], y: &[SymWord]) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(p, q)| drop_empty(p) == drop_empty(q))
}

/// Fold single windows into an adjacent range row when the range row,
/// extended by one step with empty end blocks allowed, reproduces them.
/// The result is for display: blocks may be empty at the ends of a range.
pub fn merge_rows(rows: &[Row]) -> Vec<Row> {
    let one = LinearForm::ONE;
    let mut out: Vec<Row> = Vec::new();
    for row in rows {
        if let Some(prev) = out.last_mut() {
            let next_start = prev.pos + prev.hi + one;
            if !prev.fixed() && row.fixed() && next_start == row.pos + row.lo {
                if same_segs(&segs_at(prev, prev.hi + one), &row.segs) {
                    prev.hi = prev.hi + one;
                    continue;
                }
            }
            if prev.fixed() && !row.fixed() && prev.pos + prev.lo == row.pos + row.lo - one {
                if same_segs(&segs_at(row, row.lo - one), &prev.segs) {
                    let mut r = row.clone();
                    r.lo = r.lo - one;
                    *prev = r;
                    continue;
                }
            }
        }
        out.push(row.clone());
    }
    out
}

/// The prefix of φ(n)φ(n)⋯ of length `len`.
pub fn take(img: &[ImageBlock], r: &Region, len: LinearForm) -> Result<SymWord, Stop> {
    if sign_of(r, len)? == ZERO {
        return Ok(SymWord::new());
    }
    let start = Cursor {
        t: 0,
        copy: 0,
        e: LinearForm::ZERO,
    };
    let end = locate(img, r, len)?;
    Ok(segment(img, &start, &end, true))
}

/// Cuts x | y | x of an a/b-power of length m·a.
pub fn power_cuts(m: i64) -> Vec<LinearForm> {
    vec![
        LinearForm::ZERO,
        LinearForm::new(m, -m, 0),
        LinearForm::new(0, m, 0),
        LinearForm::new(m, 0, 0),
    ]
}

/// Process regions until `f` succeeds on each piece. Returns the final
/// regions with their results, plus the points removed along the way.
pub fn refine_all<T>(
    roots: Vec<Region>,
    max_depth: u32,
    mut f: impl FnMut(&Region) -> Result<T, Stop>,
) -> Result<(Vec<(Region, T)>, Vec<(i64, i64)>), (Region, String)> {
    let mut stack: Vec<Region> = roots;
    stack.reverse();
    let mut done = Vec::new();
    let mut points = Vec::new();
    while let Some(r) = stack.pop() {
        match f(&r) {
            Ok(t) => done.push((r, t)),
            Err(Stop::Fail(msg)) => return Err((r, msg)),
            Err(Stop::Refine(ob)) => {
                if r.depth >= max_depth {
                    return Err((r.clone(), format!("refinement too deep at {ob}")));
                }
                let rf = r.refine(&ob);
                if rf.children.len() == 1 && rf.points.is_empty() && rf.children[0] == r {
                    return Err((r, format!("refinement makes no progress at {ob}")));
                }
                points.extend(rf.points);
                for c in rf.children.into_iter().rev() {
                    stack.push(c);
                }
            }
        }
    }
    Ok((done, points))
}
