//! Criteria showing that two symbolic words differ for every value of the
//! parameters. Equality is never asserted: a pair that no criterion
//! separates is reported as unknown, together with the sign obstacles met
//! along the way (refining on them may let a criterion fire).

use super::form::{ExtForm, LinearForm};
use super::region::{Obstacle, Region, NEG, POS, ZERO};
use super::word::{SymLetter, SymWord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Unequal,
    Unknown(Vec<Obstacle>),
}

impl Verdict {
    pub fn is_unequal(&self) -> bool {
        matches!(self, Verdict::Unequal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Params {
    None,
    /// i ∈ [lo, hi].
    Single(LinearForm, LinearForm),
    /// i ∈ [lo1, hi1] and j ∈ [lo2, hi2] independently.
    Product((LinearForm, LinearForm), (LinearForm, LinearForm)),
    /// lo ≤ i < j ≤ hi.
    Ordered(LinearForm, LinearForm),
}

/// A region plus the polytope of slide parameters (i, j). All forms are
/// affine in i and j, so a sign that holds at every corner holds
/// throughout.
#[derive(Clone, Debug)]
pub struct Ctx<'a> {
    pub region: &'a Region,
    pub params: Params,
}

impl<'a> Ctx<'a> {
    pub fn plain(region: &'a Region) -> Ctx<'a> {
        Ctx {
            region,
            params: Params::None,
        }
    }

    pub fn single(region: &'a Region, lo: LinearForm, hi: LinearForm) -> Ctx<'a> {
        Ctx {
            region,
            params: Params::Single(lo, hi),
        }
    }

    pub fn product(region: &'a Region, i: (LinearForm, LinearForm), j: (LinearForm, LinearForm)) -> Ctx<'a> {
        Ctx {
            region,
            params: Params::Product(i, j),
        }
    }

    /// Requires hi ≥ lo + 1 on the region.
    pub fn ordered(region: &'a Region, lo: LinearForm, hi: LinearForm) -> Ctx<'a> {
        Ctx {
            region,
            params: Params::Ordered(lo, hi),
        }
    }

    pub fn corners(&self) -> Vec<(LinearForm, LinearForm)> {
        let z = LinearForm::ZERO;
        let one = LinearForm::ONE;
        let mut v = match self.params {
            Params::None => vec![(z, z)],
            Params::Single(lo, hi) => vec![(lo, z), (hi, z)],
            Params::Product(i, j) => vec![(i.0, j.0), (i.0, j.1), (i.1, j.0), (i.1, j.1)],
            Params::Ordered(lo, hi) => vec![(lo, lo + one), (lo, hi), (hi - one, hi)],
        };
        v.dedup();
        v
    }

    /// Signs of f over the whole parameter polytope.
    pub fn signs(&self, f: ExtForm, obs: &mut Vec<Obstacle>) -> u8 {
        let mut s = 0;
        for (i, j) in self.corners() {
            let (t, ob) = self.region.signs(f.at(i, j));
            s |= t;
            if let Some(o) = ob {
                if !obs.contains(&o) {
                    obs.push(o);
                }
            }
        }
        s
    }

    fn definite(&self, f: ExtForm, obs: &mut Vec<Obstacle>) -> Option<u8> {
        let s = self.signs(f, obs);
        (s.count_ones() == 1).then_some(s)
    }

    fn lf_sign(&self, f: LinearForm, obs: &mut Vec<Obstacle>) -> Option<u8> {
        self.definite(ExtForm::from(f), obs)
    }

    fn max(&self, x: LinearForm, y: LinearForm, obs: &mut Vec<Obstacle>) -> Option<LinearForm> {
        match self.lf_sign(x - y, obs)? {
            NEG => Some(y),
            _ => Some(x),
        }
    }

    fn min(&self, x: LinearForm, y: LinearForm, obs: &mut Vec<Obstacle>) -> Option<LinearForm> {
        match self.lf_sign(x - y, obs)? {
            NEG => Some(x),
            _ => Some(y),
        }
    }

    /// Restrict to j = i + δ. None if the sign analysis is inconclusive;
    /// Some(None) if no parameters remain.
    fn tie(&self, delta: LinearForm, obs: &mut Vec<Obstacle>) -> Option<Option<Ctx<'a>>> {
        let (lo, hi) = match self.params {
            Params::Product((lo1, hi1), (lo2, hi2)) => {
                (self.max(lo1, lo2 - delta, obs)?, self.min(hi1, hi2 - delta, obs)?)
            }
            Params::Ordered(lo, hi) => {
                if self.lf_sign(delta - LinearForm::ONE, obs)? == NEG {
                    return Some(None);
                }
                (lo, hi - delta)
            }
            _ => return None,
        };
        if self.lf_sign(hi - lo, obs)? == NEG {
            return Some(None);
        }
        Some(Some(Ctx::single(self.region, lo, hi)))
    }

    /// Cut the range of i (or j, with `second`) into the parts below, at
    /// and above `at`. None if the cut is not determined.
    fn split(&self, second: bool, at: LinearForm, obs: &mut Vec<Obstacle>) -> Option<Vec<Ctx<'a>>> {
        let one = LinearForm::ONE;
        let (lo, hi) = match (self.params, second) {
            (Params::Single(lo, hi), false) => (lo, hi),
            (Params::Product(i, _), false) => i,
            (Params::Product(_, j), true) => j,
            _ => return None,
        };
        let below = self.lf_sign(at - lo, obs)?;
        let above = self.lf_sign(hi - at, obs)?;
        if below == NEG || above == NEG {
            return None;
        }
        let mut parts = vec![(at, at)];
        if below == POS {
            parts.push((lo, at - one));
        }
        if above == POS {
            parts.push((at + one, hi));
        }
        Some(
            parts
                .into_iter()
                .map(|r| {
                    let params = match self.params {
                        Params::Single(..) => Params::Single(r.0, r.1),
                        Params::Product(i, _) if second => Params::Product(i, r),
                        Params::Product(_, j) => Params::Product(r, j),
                        p => p,
                    };
                    Ctx {
                        region: self.region,
                        params,
                    }
                })
                .collect(),
        )
    }
}

type Blocks = Vec<(SymLetter, ExtForm)>;

fn tie_words(x: &mut Blocks, z: &mut Blocks, delta: LinearForm) {
    let sub = |e: ExtForm| ExtForm {
        base: e.base + delta * e.j,
        i: e.i + e.j,
        j: 0,
    };
    for b in x.iter_mut().chain(z.iter_mut()) {
        b.1 = sub(b.1);
    }
}

/// Whether block `t` of w is a maximal run: its neighbour on the `rev`
/// side is absent or never equal to it.
fn maximal(w: &Blocks, t: usize, rev: bool) -> bool {
    let next = if rev { t.checked_sub(1) } else { Some(t + 1).filter(|&u| u < w.len()) };
    match next {
        None => true,
        Some(u) => w[u].0.never_equal(w[t].0),
    }
}

enum Strip<'a> {
    Unequal,
    Done,
    /// Decide each piece separately.
    Cases(Vec<Ctx<'a>>),
}

/// Remove a common prefix (or suffix, with `rev`). Where the first runs
/// agree only for j = i + δ, restrict to that case, since otherwise the
/// maximal runs differ.
fn strip<'a>(x: &mut Blocks, z: &mut Blocks, ctx: &mut Ctx<'a>, obs: &mut Vec<Obstacle>, rev: bool) -> Strip<'a> {
    loop {
        if x.is_empty() || z.is_empty() {
            return Strip::Done;
        }
        let (ix, iz) = if rev { (x.len() - 1, z.len() - 1) } else { (0, 0) };
        let (cx, ex) = x[ix];
        let (cz, ez) = z[iz];
        if cx.never_equal(cz) {
            return Strip::Unequal;
        }
        if !cx.same(cz) {
            return Strip::Done;
        }
        let diff = ex - ez;
        match ctx.definite(diff, obs) {
            Some(ZERO) => {
                x.remove(ix);
                z.remove(iz);
            }
            Some(POS) => {
                x[ix].1 = diff;
                z.remove(iz);
            }
            Some(NEG) => {
                z[iz].1 = ez - ex;
                x.remove(ix);
            }
            _ => {
                // one parameter with unit coefficient: split its range at the root
                if (diff.i == 0) != (diff.j == 0) {
                    let k = diff.i + diff.j;
                    if k == 1 || k == -1 {
                        if let Some(parts) = ctx.split(diff.j != 0, -diff.base * k, obs) {
                            return Strip::Cases(parts);
                        }
                    }
                    return Strip::Done;
                }
                // diff = κ(i − j) + g vanishes only at j = i + g/κ
                let k = diff.i;
                if !(k == 1 || k == -1) || diff.j != -k || !maximal(x, ix, rev) || !maximal(z, iz, rev) {
                    return Strip::Done;
                }
                let delta = diff.base * k;
                match ctx.tie(delta, obs) {
                    None => return Strip::Done,
                    Some(None) => return Strip::Unequal,
                    Some(Some(c)) => {
                        *ctx = c;
                        tie_words(x, z, delta);
                    }
                }
            }
        }
    }
}

/// The value of e if it is one integer throughout the parameter polytope.
fn constant_on(ctx: &Ctx, e: ExtForm) -> Option<i64> {
    let mut vals = ctx.corners().into_iter().map(|(i, j)| e.at(i, j));
    let first = vals.next()?;
    let v = if first.is_constant() {
        first.c
    } else {
        let (a, b) = *ctx.region.sample(1).first()?;
        first.eval(a, b)
    };
    let c = LinearForm::constant(v);
    let all = std::iter::once(first).chain(vals).all(|f| f == c || ctx.region.signs(f - c).0 == ZERO);
    all.then_some(v)
}

/// Zero gaps g₀ c₁ g₁ c₂ ⋯ for a word whose nonzero letters all have
/// constant multiplicity. None if that shape does not apply.
fn skeleton(w: &Blocks, ctx: &Ctx) -> Option<(Vec<SymLetter>, Vec<ExtForm>)> {
    let mut letters = Vec::new();
    let mut gaps = vec![ExtForm::default()];
    for &(c, e) in w {
        if c.is_zero() {
            let g = gaps.last_mut().unwrap();
            *g = *g + e;
            continue;
        }
        if !c.is_nonzero() {
            return None;
        }
        let n = constant_on(ctx, e).filter(|&n| n >= 0)?;
        for _ in 0..n {
            letters.push(c);
            gaps.push(ExtForm::default());
        }
    }
    Some((letters, gaps))
}

fn delete_zeros(x: &Blocks, z: &Blocks, ctx: &Ctx, obs: &mut Vec<Obstacle>) -> bool {
    let (Some((lx, gx)), Some((lz, gz))) = (skeleton(x, ctx), skeleton(z, ctx)) else {
        return false;
    };
    if lx.len() != lz.len() {
        return true;
    }
    if lx.iter().zip(&lz).any(|(p, q)| p.never_equal(*q)) {
        return true;
    }
    let diffs: Vec<ExtForm> = gx.iter().zip(&gz).map(|(&g, &h)| g - h).collect();
    for &dd in &diffs {
        if matches!(ctx.definite(dd, obs), Some(POS) | Some(NEG)) {
            return true;
        }
    }
    // eliminate the slide parameters between pairs of equations
    for (p, &d1) in diffs.iter().enumerate() {
        if !d1.has_params() {
            continue;
        }
        for &d2 in &diffs[p + 1..] {
            if !d2.has_params() || d1.i * d2.j != d1.j * d2.i {
                continue;
            }
            let (c1, c2) = if d1.i != 0 { (d2.i, d1.i) } else { (d2.j, d1.j) };
            let e = d1 * c1 - d2 * c2;
            debug_assert!(!e.has_params());
            if matches!(ctx.definite(e, obs), Some(POS) | Some(NEG)) {
                return true;
            }
        }
    }
    false
}

const MAX_CASES: u32 = 8;

fn decide(mut xb: Blocks, mut zb: Blocks, mut ctx: Ctx, obs: &mut Vec<Obstacle>, depth: u32) -> bool {
    for rev in [false, true] {
        match strip(&mut xb, &mut zb, &mut ctx, obs, rev) {
            Strip::Unequal => return true,
            Strip::Done => {}
            Strip::Cases(parts) => {
                return depth < MAX_CASES
                    && parts
                        .into_iter()
                        .all(|c| decide(xb.clone(), zb.clone(), c, obs, depth + 1));
            }
        }
    }
    if xb.is_empty() || zb.is_empty() {
        return false;
    }
    delete_zeros(&xb, &zb, &ctx, obs)
}

/// Decide that x ≠ z for all parameter values in `ctx`, or report unknown.
/// Every block of x and z must have length ≥ 1 throughout `ctx`.
pub fn sym_unequal(x: &SymWord, z: &SymWord, ctx: &Ctx) -> Verdict {
    let mut obs = Vec::new();
    if decide(x.blocks.clone(), z.blocks.clone(), ctx.clone(), &mut obs, 0) {
        Verdict::Unequal
    } else {
        Verdict::Unknown(obs)
    }
}
