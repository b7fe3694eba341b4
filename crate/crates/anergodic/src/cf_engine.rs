//! Continued-fraction expansion, convergents, error periods and type functions.

use rug::{Integer, Rational};
use thiserror::Error;

use crate::numerics::{Alpha, Exact, QuadIrr, Real};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfError {
    #[error("digit {0} is indeterminate at the available precision")]
    Indeterminate(usize),
    #[error("depth must be at least {0}")]
    Depth(usize),
    #[error("table too shallow: q_{depth} = {q} <= N = {n}")]
    Shallow { depth: usize, q: String, n: u64 },
    #[error("dual expansion needs alpha < 1/2")]
    DualSide,
    #[error("expansion cap {0} reached before q_n > N")]
    Cap(usize),
}

/// One complete quotient `a'_r`, exact or as a rational bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Complete {
    Quad(QuadIrr),
    Range(Rational, Rational),
}

impl Complete {
    pub fn enclose(&self, prec: u32) -> Real {
        match self {
            Complete::Quad(q) => q.enclose(prec),
            Complete::Range(a, b) => Real::from_rational_range(a, b, prec),
        }
    }
}

/// `alpha = [0; a_1, a_2, ...]` with complete quotients `a'_r = a_r + 1/a'_{r+1}`.
#[derive(Clone, Debug)]
pub struct CfExpansion {
    pub alpha: Alpha,
    pub bits: u32,
    /// `a[0] = 0`, `a[r]` for `1 <= r <= depth`.
    pub a: Vec<u64>,
    /// `complete[r] = a'_r` for `1 <= r <= depth + 1`; slot 0 holds alpha.
    pub complete: Vec<Complete>,
    /// Enclosures of `complete` at `bits`.
    pub a_full: Vec<Real>,
}

impl CfExpansion {
    pub fn depth(&self) -> usize {
        self.a.len() - 1
    }

    pub fn alpha_real(&self) -> &Real {
        &self.a_full[0]
    }
}

fn gauss_range(lo: &Rational, hi: &Rational) -> Option<(Integer, Rational, Rational)> {
    let fl = lo.clone().floor();
    let fh = hi.clone().floor();
    if fl != fh || fl == *lo {
        return None;
    }
    let a = fl.numer().clone();
    let nlo = Rational::from(1) / Rational::from(hi - &fl);
    let nhi = Rational::from(1) / Rational::from(lo - &fl);
    Some((a, nlo, nhi))
}

/// Expands `alpha` to `depth` partial quotients, enclosing complete quotients at `bits`.
pub fn expand(alpha: &Alpha, depth: usize, bits: u32) -> Result<CfExpansion, CfError> {
    if depth < 1 {
        return Err(CfError::Depth(1));
    }
    let mut a = vec![0u64];
    let mut complete = Vec::with_capacity(depth + 2);
    match &alpha.value {
        Exact::Quad(q) => {
            complete.push(Complete::Quad(q.clone()));
            let mut x = q.recip();
            for _ in 0..depth {
                complete.push(Complete::Quad(x.clone()));
                let (d, next) = x.step();
                a.push(d.to_u64().expect("partial quotient fits u64"));
                x = next;
            }
            complete.push(Complete::Quad(x));
        }
        Exact::Range(lo, hi) => {
            complete.push(Complete::Range(lo.clone(), hi.clone()));
            let mut lo_x = Rational::from(1) / hi.clone();
            let mut hi_x = Rational::from(1) / lo.clone();
            for r in 1..=depth {
                complete.push(Complete::Range(lo_x.clone(), hi_x.clone()));
                let (d, nlo, nhi) = gauss_range(&lo_x, &hi_x).ok_or(CfError::Indeterminate(r))?;
                a.push(d.to_u64().ok_or(CfError::Indeterminate(r))?);
                lo_x = nlo;
                hi_x = nhi;
            }
            // the tail must still have an unambiguous floor for a'_{depth+1} > 1
            if lo_x < 1 {
                return Err(CfError::Indeterminate(depth + 1));
            }
            complete.push(Complete::Range(lo_x, hi_x));
        }
    }
    let a_full = complete.iter().map(|c| c.enclose(bits)).collect();
    Ok(CfExpansion { alpha: alpha.clone(), bits, a, complete, a_full })
}

/// Convergents and error periods; negative indices are stored at offset 2.
#[derive(Clone, Debug)]
pub struct QuasiperiodTable {
    pub cf: CfExpansion,
    p: Vec<Integer>,
    q: Vec<Integer>,
    /// `q'_r` for `0 <= r <= depth + 1`.
    q_slash: Vec<Real>,
    inv_q_slash: Vec<Real>,
}

impl QuasiperiodTable {
    pub fn depth(&self) -> usize {
        self.cf.depth()
    }

    pub fn bits(&self) -> u32 {
        self.cf.bits
    }

    pub fn alpha(&self) -> &Real {
        self.cf.alpha_real()
    }

    /// `a_r` (0 for r = 0).
    pub fn a(&self, r: usize) -> u64 {
        self.cf.a[r]
    }

    /// `a'_r`, `1 <= r <= depth + 1`.
    pub fn a_full(&self, r: usize) -> &Real {
        &self.cf.a_full[r]
    }

    /// `p_r` for `r >= -2`.
    pub fn p(&self, r: isize) -> &Integer {
        &self.p[(r + 2) as usize]
    }

    /// `q_r` for `r >= -2`.
    pub fn q(&self, r: isize) -> &Integer {
        &self.q[(r + 2) as usize]
    }

    /// `q_r` as u64 (panics if it does not fit; callers only ask near the N scale).
    pub fn qu(&self, r: isize) -> u64 {
        self.q(r).to_u64().expect("q_r fits in u64")
    }

    pub fn q_fits(&self, r: isize) -> bool {
        self.q(r).to_u64().is_some()
    }

    /// `q'_r`, `0 <= r <= depth + 1`.
    pub fn q_slash(&self, r: usize) -> &Real {
        &self.q_slash[r]
    }

    /// `1 / q'_r`.
    pub fn inv_q_slash(&self, r: usize) -> &Real {
        &self.inv_q_slash[r]
    }

    /// Largest `t` with `q_t <= n`.
    pub fn index_n(&self, n: u64) -> Result<usize, CfError> {
        let d = self.depth();
        if *self.q(d as isize) <= n {
            return Err(CfError::Shallow { depth: d, q: self.q(d as isize).to_string(), n });
        }
        let mut t = 0;
        while *self.q(t as isize + 1) <= n {
            t += 1;
        }
        Ok(t)
    }
}

/// Builds `p_r`, `q_r` and `q'_r = a'_r q_{r-1} + q_{r-2}`.
pub fn quasiperiods(cf: CfExpansion) -> QuasiperiodTable {
    let d = cf.depth();
    let mut p = vec![Integer::from(0), Integer::from(1)];
    let mut q = vec![Integer::from(1), Integer::from(0)];
    for r in 0..=d {
        let ar = Integer::from(cf.a[r]);
        let np = Integer::from(&ar * &p[r + 1]) + &p[r];
        let nq = ar * &q[r + 1] + &q[r];
        p.push(np);
        q.push(nq);
    }
    let bits = cf.bits;
    let mut q_slash = vec![Real::one(bits)];
    for r in 1..=d + 1 {
        let v = cf.a_full[r].mul_integer(&q[r + 1]).add_integer(&q[r]);
        q_slash.push(v);
    }
    let inv_q_slash = q_slash.iter().map(|x| x.recip().expect("q' >= 1")).collect();
    QuasiperiodTable { cf, p, q, q_slash, inv_q_slash }
}

/// Expands until `q_depth > n` (plus `extra` more levels), capped at `cap` digits.
pub fn table_for(alpha: &Alpha, n: u64, extra: usize, bits: u32, cap: usize) -> Result<QuasiperiodTable, CfError> {
    let mut depth = 8usize;
    loop {
        let t = quasiperiods(expand(alpha, depth, bits)?);
        if *t.q(depth as isize) > n {
            let need = t.index_n(n)? + 1 + extra;
            if need <= depth {
                return Ok(t);
            }
            if need > cap {
                return Err(CfError::Cap(cap));
            }
            return Ok(quasiperiods(expand(alpha, need, bits)?));
        }
        if depth >= cap {
            return Err(CfError::Cap(cap));
        }
        depth = (depth * 2).min(cap);
    }
}

/// First index `r < depth` where `p_{r+1} q_r - p_r q_{r+1} != (-1)^r`, if any.
pub fn determinant_failure(p: &[Integer], q: &[Integer]) -> Option<usize> {
    // slices indexed from r = 0
    let n = p.len().min(q.len());
    (0..n.saturating_sub(1)).find(|&r| {
        let lhs = Integer::from(&p[r + 1] * &q[r]) - Integer::from(&p[r] * &q[r + 1]);
        lhs != if r % 2 == 0 { 1 } else { -1 }
    })
}

pub fn verify_determinant(t: &QuasiperiodTable) -> bool {
    let p: Vec<Integer> = (0..=t.depth()).map(|r| t.p(r as isize).clone()).collect();
    let q: Vec<Integer> = (0..=t.depth()).map(|r| t.q(r as isize).clone()).collect();
    determinant_failure(&p, &q).is_none()
}

/// Type functions up to index `n`.
#[derive(Clone, Debug)]
pub struct TypeData {
    /// `a_max[r] = max_{1<=u<=r} a_u` (index 0 unused = 0).
    pub a_max: Vec<u64>,
    /// `A_r = max_{1<=u<=r} q_u / q_{u-1}` exactly.
    pub a_type: Vec<Rational>,
    /// `A'_r = max_{1<=u<=r} q'_u / q_{u-1}`.
    pub a_slash: Vec<Real>,
    pub golden_log: Real,
}

pub fn type_functions(t: &QuasiperiodTable, n: usize) -> TypeData {
    let bits = t.bits();
    let mut a_max = vec![0u64];
    let mut a_type = vec![Rational::new()];
    let mut a_slash = vec![Real::zero(bits)];
    for r in 1..=n {
        let am = a_max[r - 1].max(t.a(r));
        let ratio = Rational::from((t.q(r as isize).clone(), t.q(r as isize - 1).clone()));
        let at = if r == 1 || ratio > a_type[r - 1] { ratio } else { a_type[r - 1].clone() };
        let rs = t.q_slash(r).mul(&Real::from_integer(t.q(r as isize - 1), bits).recip().unwrap());
        let asl = if r == 1 { rs } else { a_slash[r - 1].max(&rs) };
        a_max.push(am);
        a_type.push(at);
        a_slash.push(asl);
    }
    TypeData { a_max, a_type, a_slash, golden_log: golden_log(bits) }
}

/// `log phi` with `phi = (1 + sqrt5)/2`.
pub fn golden_log(bits: u32) -> Real {
    QuadIrr::new(Integer::from(1), Integer::from(2), Integer::from(5)).enclose(bits + 8).ln().unwrap().with_prec(bits)
}

/// Expansion of `1 - alpha` derived from that of `alpha < 1/2`.
pub fn dual_expansion(cf: &CfExpansion) -> Result<CfExpansion, CfError> {
    if cf.depth() < 3 {
        return Err(CfError::Depth(3));
    }
    if cf.a[1] < 2 {
        return Err(CfError::DualSide);
    }
    let d = cf.depth();
    // abar = (0; 1, a_1 - 1, a_2, ..., a_{d}) : depth d + 1
    let mut a = vec![0, 1, cf.a[1] - 1];
    a.extend_from_slice(&cf.a[2..=d]);
    let alpha = cf.alpha.complement();
    let mut complete = Vec::with_capacity(d + 3);
    complete.push(match &alpha.value {
        Exact::Quad(q) => Complete::Quad(q.clone()),
        Exact::Range(l, h) => Complete::Range(l.clone(), h.clone()),
    });
    // abar'_2 = a'_1 - 1, abar'_1 = 1 + 1/abar'_2, abar'_{r+1} = a'_r for r >= 2
    let shifted = match &cf.complete[1] {
        Complete::Quad(q) => Complete::Quad(q.add_int(&Integer::from(-1))),
        Complete::Range(l, h) => Complete::Range(Rational::from(l - 1u32), Rational::from(h - 1u32)),
    };
    let first = match &shifted {
        Complete::Quad(q) => Complete::Quad(q.recip().add_int(&Integer::from(1))),
        Complete::Range(l, h) => {
            Complete::Range(Rational::from(1) / h.clone() + 1u32, Rational::from(1) / l.clone() + 1u32)
        }
    };
    complete.push(first);
    complete.push(shifted);
    for r in 2..=d + 1 {
        complete.push(cf.complete[r].clone());
    }
    let a_full = complete.iter().map(|c| c.enclose(cf.bits)).collect();
    Ok(CfExpansion { alpha, bits: cf.bits, a, complete, a_full })
}

/// `(log q_n / log A_n, log q_n / log phi + 1)`; lower is 0 when `q_n = 1`.
pub fn depth_bounds(t: &QuasiperiodTable, n: usize) -> (Real, Real) {
    let bits = t.bits();
    let qn = Real::from_integer(t.q(n as isize), bits);
    let lq = qn.ln().unwrap();
    let upper = lq.div(&golden_log(bits)).unwrap().add_i64(1);
    if *t.q(n as isize) == 1 || n == 0 {
        return (Real::zero(bits), upper);
    }
    let td = type_functions(t, n);
    let la = Real::from_rational(&td.a_type[n], bits).ln().unwrap();
    let lower = if la.is_positive() { lq.div(&la).unwrap() } else { Real::zero(bits) };
    (lower, upper)
}
