//! Where the orbit points `{M alpha}` sit relative to the lattice `k / q_r`.

use std::sync::Arc;

use rug::Integer;
use thiserror::Error;

use crate::cf_engine::QuasiperiodTable;
use crate::numerics::Real;
use crate::ostrowski::{decompose_orbit, represent, OstrowskiError, OstrowskiRep, Triple};
use crate::verdict::{le, lt, same, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error(transparent)]
    Ostrowski(#[from] OstrowskiError),
    #[error("alpha_r00 straddles a half-integer at r = {0}; raise precision")]
    Indeterminate(usize),
    #[error("table depth {depth} too small for top index {n}")]
    Shallow { depth: usize, n: usize },
}

/// Orbit data for one `(alpha, N)`.
#[derive(Clone, Debug)]
pub struct OrbitContext {
    pub table: Arc<QuasiperiodTable>,
    pub rep: OstrowskiRep,
    /// `{alpha_r00}` for `0 <= r <= n`.
    pub alpha_r00: Vec<Real>,
    /// `{{alpha_r00}}` for `0 <= r <= n`.
    pub signed_r00: Vec<Real>,
    /// `1 / (q_r q'_{r+1})` for `0 <= r <= n`.
    inv_qq: Vec<Real>,
}

#[derive(Clone, Debug)]
pub struct EpsilonBounds {
    pub eps: Real,
    pub eps_l: Real,
    pub eps_u: Real,
    pub l: Real,
    pub u: Real,
    /// `eps_L < eps < eps_U`
    pub bracket: Verdict,
    /// `|eps| < 1/q'_r`
    pub renorm: Verdict,
    /// `s != 0 => eps > 0`; `r<n, s=0, t=q_r => eps > 1/q'_{r+2}`; `r = n` closed form
    pub sign: Verdict,
}

#[derive(Clone, Debug)]
pub struct ParityBounds {
    pub l: Real,
    pub u: Real,
    /// true when `l < alpha_rst < u`, false when the claim is about `1 - alpha_rst`
    pub even: bool,
    pub verdict: Verdict,
    /// `1/q'_{r+2} <= l` and `u < 1`
    pub envelope: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalLocation {
    pub k: u64,
    pub sign: i32,
}

/// A triple whose point sits in one of the two cells touching the origin.
#[derive(Clone, Debug)]
pub struct OriginTriple {
    pub triple: Triple,
    /// `+1` for the cell `(0, 1/q_r)`, `-1` for `(1 - 1/q_r, 1)`.
    pub side: i32,
    pub case: u8,
    /// Extra bound attached by the corollary, with its verdict.
    pub bound: Option<(Real, Verdict)>,
}

/// Result of every per-triple rigidity check.
#[derive(Clone, Debug)]
pub struct TripleCheck {
    pub triple: Triple,
    pub bracket: Verdict,
    pub renorm: Verdict,
    pub sign: Verdict,
    pub parity: Verdict,
    pub envelope: Verdict,
    pub backsolve: Verdict,
}

impl TripleCheck {
    pub fn verdict(&self) -> Verdict {
        Verdict::all([self.bracket, self.renorm, self.sign, self.parity, self.envelope, self.backsolve])
    }
}

fn sgn(r: usize) -> i64 {
    if r % 2 == 0 {
        1
    } else {
        -1
    }
}

impl OrbitContext {
    pub fn new(table: Arc<QuasiperiodTable>, n_value: u64) -> Result<OrbitContext, OrbitError> {
        let rep = represent(&table, n_value)?;
        OrbitContext::from_rep(table, rep)
    }

    pub fn from_rep(table: Arc<QuasiperiodTable>, rep: OstrowskiRep) -> Result<OrbitContext, OrbitError> {
        let n = rep.top();
        if !rep.is_empty() && table.depth() < n + 1 {
            return Err(OrbitError::Shallow { depth: table.depth(), n });
        }
        let alpha = table.alpha().clone();
        let mut alpha_r00 = Vec::with_capacity(n + 1);
        let mut signed_r00 = Vec::with_capacity(n + 1);
        let mut inv_qq = Vec::with_capacity(n + 1);
        if !rep.is_empty() {
            for r in 0..=n {
                let m = rep.k00(r as isize);
                let x = alpha.mul_u64(m);
                alpha_r00.push(x.frac().ok_or(OrbitError::Indeterminate(r))?);
                signed_r00.push(x.signed_frac().ok_or(OrbitError::Indeterminate(r))?);
                inv_qq.push(table.inv_q_slash(r + 1).div_u64(rep.q[r]));
            }
        }
        Ok(OrbitContext { table, rep, alpha_r00, signed_r00, inv_qq })
    }

    pub fn n(&self) -> usize {
        self.rep.top()
    }

    pub fn bits(&self) -> u32 {
        self.table.bits()
    }

    pub fn index(&self, tr: Triple) -> u64 {
        crate::ostrowski::value_of(&self.rep, tr)
    }

    /// `{M alpha}` for the index `M` addressed by the triple.
    pub fn alpha_rst(&self, tr: Triple) -> Option<Real> {
        self.table.alpha().mul_u64(self.index(tr)).frac()
    }

    /// `(-1)^r {{alpha_r00}} + s/q'_{r+1} + t/(q_r q'_{r+1})`.
    pub fn epsilon(&self, tr: Triple) -> Real {
        let r = tr.r;
        let base = if r % 2 == 0 { self.signed_r00[r].clone() } else { self.signed_r00[r].neg() };
        let mut e = base;
        if tr.s > 0 {
            e.add_assign(&self.table.inv_q_slash(r + 1).mul_u64(tr.s));
        }
        e.add_assign(&self.inv_qq[r].mul_u64(tr.t));
        e
    }

    /// `t p_r mod q_r` and `{(-1)^r t p_r / q_r}` as an exact numerator over `q_r`.
    fn lattice(&self, tr: Triple) -> (u64, u64) {
        let qr = self.rep.q[tr.r];
        let p = self.table.p(tr.r as isize);
        let k = Integer::from(p * tr.t).div_rem_euc(Integer::from(qr)).1.to_u64().unwrap();
        let signed = if tr.r % 2 == 0 { k } else { (qr - k) % qr };
        (k, signed)
    }

    /// Recovers eps from `alpha_rst = {t p_r/q_r + (-1)^r eps}`.
    pub fn epsilon_backsolved(&self, tr: Triple) -> Option<Real> {
        let a = self.alpha_rst(tr)?;
        let (k, _) = self.lattice(tr);
        let qr = self.rep.q[tr.r];
        let diff = a.sub(&Real::ratio(k as i64, qr as i64, self.bits()));
        let def = self.epsilon(tr).mul_i64(sgn(tr.r));
        // shift the difference by the integer that brings it onto the definition
        let shift = def.sub(&diff).add_ratio(1, 2).floor()?;
        Some(diff.add_integer(&shift).mul_i64(sgn(tr.r)))
    }

    pub fn epsilon_bounds(&self, tr: Triple) -> EpsilonBounds {
        let bits = self.bits();
        let (r, s, t) = (tr.r, tr.s, tr.t);
        let qr = self.rep.q[r];
        let eps = self.epsilon(tr);
        let num = (s as i64 - 1) * qr as i64 + t as i64;
        let eps_l = self.inv_qq[r].mul_i64(num).add(self.table.inv_q_slash(r + 2));
        let eps_u = eps_l.add(self.table.inv_q_slash(r + 1));
        let (_, signed) = self.lattice(tr);
        let l = Real::ratio(signed as i64, qr as i64, bits).add(&eps_l);
        let u = l.add(self.table.inv_q_slash(r + 1));
        let bracket = lt(&eps_l, &eps).and(lt(&eps, &eps_u));
        let renorm = lt(&eps.abs(), self.table.inv_q_slash(r));
        let n = self.n();
        let mut sign = Verdict::Pass;
        if s != 0 {
            sign = sign.and(lt(&Real::zero(bits), &eps));
        }
        if r < n && s == 0 && t == qr {
            sign = sign.and(lt(self.table.inv_q_slash(r + 2), &eps));
        }
        if r == n {
            let closed = self.inv_qq[r].mul_u64(s * qr + t);
            sign = sign.and(same(&closed, &eps));
        }
        EpsilonBounds { eps, eps_l, eps_u, l, u, bracket, renorm, sign }
    }

    pub fn parity_bounds(&self, tr: Triple) -> Option<ParityBounds> {
        let eb = self.epsilon_bounds(tr);
        let a = self.alpha_rst(tr)?;
        let even = tr.even();
        let x = if even { a } else { a.neg().add_i64(1) };
        let verdict = lt(&eb.l, &x).and(lt(&x, &eb.u));
        let bits = self.bits();
        let floor = self.table.inv_q_slash(tr.r + 2);
        // l equals 1/q'_{r+2} exactly at s = 0, t = q_r
        let lower = if tr.s == 0 && tr.t == self.rep.q[tr.r] { same(floor, &eb.l) } else { le(floor, &eb.l) };
        let envelope = lower
            .and(lt(&Real::zero(bits), self.table.inv_q_slash(tr.r + 2)))
            .and(lt(&eb.u, &Real::one(bits)));
        Some(ParityBounds { l: eb.l, u: eb.u, even, verdict, envelope })
    }

    /// Cell of `alpha_rst` in the partition by `k / q_r`.
    pub fn locate_interval(&self, tr: Triple) -> Result<IntervalLocation, Verdict> {
        let eps = self.epsilon(tr);
        let se = eps.sign().filter(|s| *s != 0).ok_or(Verdict::Indeterminate)?;
        let (k, _) = self.lattice(tr);
        let sign = se * sgn(tr.r) as i32;
        let loc = IntervalLocation { k, sign };
        match self.in_cell(tr, loc) {
            Some(true) => Ok(loc),
            Some(false) => Err(Verdict::Fail),
            None => Err(Verdict::Indeterminate),
        }
    }

    /// Whether `alpha_rst` lies in the open cell `sign * I_k` (None if undecided).
    pub fn in_cell(&self, tr: Triple, loc: IntervalLocation) -> Option<bool> {
        let bits = self.bits();
        let qr = self.rep.q[tr.r];
        let a = self.alpha_rst(tr)?;
        let rel = a.sub(&Real::ratio(loc.k as i64, qr as i64, bits)).mul_i64(loc.sign as i64);
        let d = rel.frac()?;
        let width = Real::ratio(1, qr as i64, bits);
        Some(d.is_positive() && d.lt(&width)? )
    }

    /// Cell index `floor(q_r alpha_rst)` if decided.
    pub fn cell_index(&self, tr: Triple) -> Option<u64> {
        let a = self.alpha_rst(tr)?;
        a.mul_u64(self.rep.q[tr.r]).floor()?.to_u64()
    }

    /// Every block of the decomposition hits each of its `q_r` cells exactly once.
    pub fn pigeonhole(&self) -> Verdict {
        let mut v = Verdict::Pass;
        for (r, s, len) in decompose_orbit(&self.rep) {
            let mut seen = vec![false; len as usize];
            for t in 1..=len {
                match self.cell_index(Triple { r, s, t }) {
                    Some(c) if (c as usize) < seen.len() && !seen[c as usize] => seen[c as usize] = true,
                    Some(_) => return Verdict::Fail,
                    None => v = Verdict::Indeterminate,
                }
            }
        }
        v
    }

    /// `-1/q'_{r+1} + 1/q'_{r+2} < (-1)^r {{alpha_r00}} < 1/q'_{r+2}` for `b_r != 0`.
    pub fn r00_rigidity(&self, r: usize) -> Verdict {
        if self.rep.b[r] == 0 {
            return Verdict::Pass;
        }
        let x = self.signed_r00[r].mul_i64(sgn(r));
        let hi = self.table.inv_q_slash(r + 2);
        let lo = hi.sub(self.table.inv_q_slash(r + 1));
        lt(&lo, &x).and(lt(&x, hi))
    }

    /// Triples whose point lies in a cell touching the origin.
    pub fn origin_interval_triples(&self, r: usize) -> Vec<OriginTriple> {
        let mut out = Vec::new();
        let br = self.rep.b[r];
        if br == 0 {
            return out;
        }
        let bits = self.bits();
        let qr = self.rep.q[r];
        let q_prev = self.table.qu(r as isize - 1);
        let n = self.n();
        let even_side = sgn(r) as i32;
        for s in 0..br {
            out.push(OriginTriple { triple: Triple { r, s, t: qr }, side: even_side, case: 1, bound: None });
        }
        if r < n && q_prev < qr {
            let tr = Triple { r, s: 0, t: qr - q_prev };
            if self.epsilon(tr).sign() == Some(-1) {
                let eb = self.epsilon_bounds(tr);
                let half = Real::ratio(1, 2 * qr as i64, bits);
                out.push(OriginTriple { triple: tr, side: even_side, case: 1, bound: Some((half.clone(), lt(&half, &eb.l))) });
            }
        }
        let t2 = q_prev % qr;
        if t2 != 0 {
            for s in 0..br {
                let tr = Triple { r, s, t: t2 };
                if self.epsilon(tr).sign() == Some(1) {
                    let eb = self.epsilon_bounds(tr);
                    // u_{rsq_{r-1}} = 1 - (a_{r+1} - s)/q'_{r+1} exactly
                    let a_next = self.table.a(r + 1) as i64;
                    let bound = self.table.inv_q_slash(r + 1).mul_i64(a_next - s as i64).neg().add_i64(1);
                    let v = same(&bound, &eb.u);
                    out.push(OriginTriple { triple: tr, side: -even_side, case: 2, bound: Some((bound, v)) });
                }
            }
        }
        out
    }

    /// All rigidity checks for one triple.
    pub fn check_triple(&self, tr: Triple) -> TripleCheck {
        let eb = self.epsilon_bounds(tr);
        let (parity, envelope) = match self.parity_bounds(tr) {
            Some(p) => (p.verdict, p.envelope),
            None => (Verdict::Indeterminate, Verdict::Indeterminate),
        };
        let backsolve = match self.epsilon_backsolved(tr) {
            Some(b) => same(&b, &eb.eps),
            None => Verdict::Indeterminate,
        };
        TripleCheck { triple: tr, bracket: eb.bracket, renorm: eb.renorm, sign: eb.sign, parity, envelope, backsolve }
    }
}

trait AddRatio {
    fn add_ratio(&self, num: i64, den: i64) -> Real;
}

impl AddRatio for Real {
    fn add_ratio(&self, num: i64, den: i64) -> Real {
        self.add(&Real::ratio(num, den, self.prec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf_engine::table_for;
    use crate::numerics::Alpha;
    use crate::ostrowski::all_triples;

    fn ctx(spec: &str, n: u64) -> OrbitContext {
        let t = table_for(&Alpha::parse(spec).unwrap(), n, 3, 128, 200).unwrap();
        OrbitContext::new(Arc::new(t), n).unwrap()
    }

    #[test]
    fn golden_ten_points() {
        let c = ctx("golden", 10);
        let a = c.alpha_rst(Triple { r: 5, s: 0, t: 1 }).unwrap();
        assert!((a.to_f64() - 0.6180339887498949).abs() < 1e-15);
        assert_eq!(c.alpha_r00[5].sign(), Some(0));
        let e = c.epsilon(Triple { r: 2, s: 0, t: 1 });
        let direct = c.signed_r00[2].add(&c.table.inv_q_slash(3).div_u64(2));
        assert!(e.overlaps(&direct));
        assert!(e.abs().lt(c.table.inv_q_slash(2)) == Some(true));
    }

    #[test]
    fn top_level_closed_forms() {
        let c = ctx("sqrt2m1", 29);
        let n = c.n();
        let qn = c.rep.q[n];
        let e = c.epsilon(Triple { r: n, s: 0, t: qn });
        assert!(e.overlaps(c.table.inv_q_slash(n + 1)));
        let eb = c.epsilon_bounds(Triple { r: n, s: 0, t: 3 });
        assert_eq!(eb.bracket, Verdict::Pass);
    }

    #[test]
    fn all_checks_golden_ten() {
        let c = ctx("golden", 10);
        for tr in all_triples(&c.rep) {
            let ch = c.check_triple(tr);
            assert_eq!(ch.verdict(), Verdict::Pass, "{tr:?} {ch:?}");
            assert!(c.locate_interval(tr).is_ok());
        }
        assert_eq!(c.pigeonhole(), Verdict::Pass);
        for r in 0..=c.n() {
            assert_eq!(c.r00_rigidity(r), Verdict::Pass);
        }
    }

    #[test]
    fn origin_cells() {
        for (spec, n) in [("golden", 100u64), ("sqrt2m1", 77), ("cf:1,2,[3]", 150), ("cf:2,1,3,[1,4]", 333)] {
            let c = ctx(spec, n);
            for r in 0..=c.n() {
                for o in c.origin_interval_triples(r) {
                    let cell = IntervalLocation { k: 0, sign: o.side };
                    if c.rep.q[r] > 1 {
                        assert_eq!(c.in_cell(o.triple, cell), Some(true), "{spec} {o:?}");
                    }
                    if let Some((_, v)) = &o.bound {
                        assert_eq!(*v, Verdict::Pass, "{spec} {o:?}");
                    }
                }
            }
        }
    }
}
