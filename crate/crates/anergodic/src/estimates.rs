//! Closed-form upper and lower estimates for `S_N theta^beta`.

use serde::Serialize;

use crate::bounds::{coeffs, le_or_equal, BoundsContext, BoundsError, CoeffData};
use crate::cf_engine::{golden_log, type_functions};
use crate::numerics::Real;
use crate::observables::{harmonic1, theta_pair_sums, Beta, Observable};
use crate::verdict::{le, lt, Verdict};

/// One labelled check inside a report.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct EstimateReport {
    pub beta: Beta,
    /// Report for `theta_bar` (parities exchanged).
    pub dual: bool,
    pub s1: Real,
    pub s2: Real,
    /// Closed-form bound on the `q_r = 2` mid terms.
    pub x2: Real,
    pub s3_a: Real,
    pub s3_b: Real,
    pub s3_c: Real,
    /// Method C with the worst-case `3q_n + 4q_{n-1}` tail (beta = 1 only).
    pub s3_c_prime: Option<Real>,
    pub total_a: Real,
    pub total_b: Real,
    pub total_c: Real,
    pub total_c_prime: Option<Real>,
    /// `S1 + S2 + X2` evaluated exactly plus `sum_r C_r`.
    pub chain: Real,
    pub lower_single: Option<Real>,
    pub lower_symmetric: Option<Real>,
    pub direct: Real,
    pub direct_symmetric: Option<Real>,
    pub checks: Vec<Check>,
}

impl EstimateReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.checks.iter().map(|c| c.verdict))
    }

    /// Name of the method with the smallest certified total.
    pub fn best_method(&self) -> &'static str {
        let mut best = ("A", self.total_a.hi_f64());
        for (m, v) in [("B", &self.total_b), ("C", &self.total_c)] {
            if v.hi_f64() < best.1 {
                best = (m, v.hi_f64());
            }
        }
        best.0
    }
}

fn even(r: usize) -> bool {
    r % 2 == 0
}

/// `log^+ x = max{0, log x}` for integer `x`.
fn log_plus(x: u64, bits: u32) -> Real {
    if x <= 1 {
        Real::zero(bits)
    } else {
        Real::from_u64(x, bits).ln().unwrap()
    }
}

fn ln_u64(x: u64, bits: u32) -> Real {
    log_plus(x, bits)
}

struct Parts<'a> {
    ctx: &'a BoundsContext,
    beta: Beta,
    bits: u32,
    n: usize,
    /// `E_n` as seen by the observable (swapped for the dual).
    e_n: bool,
}

impl Parts<'_> {
    fn q(&self, r: isize) -> u64 {
        // q_{-2} = 1, q_{-1} = 0
        if r == -2 {
            1
        } else {
            self.ctx.q(r)
        }
    }

    fn qb(&self, r: isize) -> Real {
        match self.q(r) {
            0 => Real::zero(self.bits),
            q => self.beta.pow_u64(q, self.bits),
        }
    }

    fn pow(&self, x: &Real) -> Real {
        self.beta.pow(x).expect("positive")
    }

    fn geo(&self) -> Real {
        // 1 / (1 - 2^-beta)
        let two = self.beta.pow_u64(2, self.bits);
        two.div(&two.add_i64(-1)).unwrap()
    }

    fn qs_beta(&self, r: usize) -> Real {
        self.pow(self.ctx.table().q_slash(r))
    }

    fn s1(&self) -> Real {
        let nb = self.beta.pow_u64(self.ctx.n_value(), self.bits);
        let lg = ln_u64(self.q(self.n as isize), self.bits).add_i64(1);
        let m = match self.beta.zeta(self.bits) {
            Some(z) => z.min(&lg),
            None => lg,
        };
        nb.mul(&m)
    }

    fn s2(&self) -> Real {
        let n = self.n as isize;
        let g = self.geo();
        let pick = |hi: isize, lo: isize| g.mul(&self.qb(lo)).min(&self.qb(hi));
        let inner = if self.e_n { pick(n - 1, n - 2) } else { pick(n, n - 1) };
        self.beta.pow_u64(2, self.bits).mul(&inner)
    }

    fn x2(&self) -> Real {
        let qn = self.q(self.n as isize);
        let per = self.beta.pow_u64(3, self.bits).sub(&self.beta.pow_u64(2, self.bits));
        let mut acc = Real::zero(self.bits);
        for r in 0..=self.n {
            let gated = self.ctx.b(r as isize) > 0 && self.ctx.q(r as isize) == 2 && 2 < qn;
            if gated && (even(r) == !self.dual_flip()) {
                acc.add_assign(&per);
            }
        }
        acc
    }

    fn dual_flip(&self) -> bool {
        self.e_n != even(self.n)
    }

    /// `Q_n` in the observable's parity.
    fn q_n(&self) -> Real {
        let n = self.n;
        let b = self.ctx.b(n as isize);
        if self.e_n {
            harmonic1(self.beta, b as i64, self.bits)
        } else {
            let mut a = self.ctx.table().a_full(n + 1).clone();
            if n == 0 && self.dual_flip() {
                // level 0 of the reflection: a'_2 of 1 - alpha is a'_1 - 1
                a = a.add_i64(-1);
            }
            let mut acc = Real::from_u64((self.ctx.b(n as isize - 1) > 0) as u64, self.bits);
            for s in 0..b {
                acc.add_assign(&self.beta.pow_neg(&a.add_i64(-(s as i64))).unwrap());
            }
            acc
        }
    }

    /// `sum_{r<n} q'^beta_{r+1}`.
    fn tail_sum(&self) -> Real {
        let mut acc = Real::zero(self.bits);
        for r in 0..self.n {
            acc.add_assign(&self.qs_beta(r + 1));
        }
        acc
    }

    fn method_a(&self, head: &Real) -> Real {
        if self.n == 0 {
            return head.clone();
        }
        let qn = self.q(self.n as isize);
        let lq = ln_u64(qn, self.bits);
        let qsn = self.qs_beta(self.n);
        let second = self.tail_sum().add(&qsn.mul(&lq));
        let k = golden_log(self.bits).recip().unwrap().add_i64(1);
        let third = qsn.mul(&k.mul(&lq).add_i64(1));
        let mut m = second.min(&third);
        if let Some(z) = self.beta.zeta(self.bits) {
            m = m.min(&z.mul(&qsn).mul_u64(self.n as u64));
        }
        head.add(&m)
    }

    fn method_b(&self, q_l: u64) -> Real {
        let t = type_functions(self.ctx.table(), self.n + 1);
        let a = self.pow(&t.a_slash[self.n + 1]);
        let nb = self.beta.pow_u64(self.ctx.n_value(), self.bits);
        let half = Real::ratio(1, 2, self.bits);
        let g = self.geo();
        let n = self.n as isize;
        let parity = if self.e_n {
            half.mul(&self.qb(n)).add(&g.mul(&self.qb(n - 1)))
        } else {
            g.mul(&self.qb(n))
        };
        let first = half.mul(&nb).add(&parity);
        let ql = if q_l == 0 { Real::zero(self.bits) } else { self.beta.pow_u64(q_l, self.bits) };
        let second = nb.add(&ql);
        a.mul(&first.min(&second))
    }

    fn method_c(&self, head: &Real, c_max: u64, tail: &Real) -> Real {
        let lg = log_plus(c_max, self.bits).add_i64(1);
        let m = match self.beta.zeta(self.bits) {
            Some(z) => z.min(&lg),
            None => lg,
        };
        head.add(&tail.mul(&m))
    }

    fn lower(&self, symmetric: bool) -> Option<Real> {
        let n = self.n;
        let qn = self.q(n as isize);
        if qn <= 1 {
            return None;
        }
        let b = self.ctx.b(n as isize);
        let hq = harmonic1(self.beta, qn as i64 - 1, self.bits).add_i64(-1);
        let first = self.qb(n as isize).mul(&hq).mul_u64(b);
        let head = self.qs_beta(n + 1).mul(&harmonic1(self.beta, b as i64, self.bits));
        let mid = self.qs_beta(n).mul_u64(b);
        Some(if symmetric {
            first.mul_u64(2).add(&head).add(&mid).add_i64(2 * b as i64)
        } else if self.e_n {
            first.add(&head).add_i64(b as i64)
        } else {
            first.add(&mid).add_i64(b as i64)
        })
    }
}

/// Exact `S1 + S2 + X2` of the split for the given observable.
fn exact_single(ctx: &BoundsContext, beta: Beta, phi: &Observable, dual: bool) -> Result<(Real, Real, Real), BoundsError> {
    let bits = ctx.bits();
    let n = ctx.n();
    let qn = ctx.q(n as isize);
    let (mut s1, mut s2, mut x2) = (Real::zero(bits), Real::zero(bits), Real::zero(bits));
    for r in 0..=n {
        let b = ctx.b(r as isize);
        if b == 0 {
            continue;
        }
        let qr = ctx.q(r as isize);
        let qp = ctx.q(r as isize - 1);
        s1.add_assign(&crate::observables::partition_sum_theta(beta, qr, bits).mul_u64(b));
        if even(r) != dual && qr < qn && qr >= 2 {
            let bar1 = phi.bar_at(1, qr as i64, bits).ok_or(BoundsError::Eval(r))?;
            if qr > 2 {
                s2.add_assign(&ctx.phi_rst(phi, r, 0, qr - qp)?.sub(&bar1));
            } else if qr == 2 {
                x2.add_assign(&ctx.phi_rst(phi, r, 0, qp)?.sub(&bar1));
            }
        }
    }
    Ok((s1, s2, x2))
}

/// `sum_r sum_s (E_r phi_{rsq_r} + O_r phi_{rsq_{r-1}})`, parities swapped for the dual.
fn s3_exact(ctx: &BoundsContext, phi: &Observable, dual: bool) -> Result<Real, BoundsError> {
    let mut acc = Real::zero(ctx.bits());
    for r in 0..=ctx.n() {
        // the reflected expansion has q_0 = 1 where ours has q_{-1} = 0
        let t = match (even(r) != dual, r) {
            (true, _) => ctx.q(r as isize),
            (false, 0) if dual => 1,
            (false, _) => ctx.q(r as isize - 1),
        };
        if t == 0 {
            continue;
        }
        for s in 0..ctx.b(r as isize) {
            acc.add_assign(&ctx.phi_rst(phi, r, s, t)?);
        }
    }
    Ok(acc)
}

fn check(checks: &mut Vec<Check>, name: &str, verdict: Verdict) {
    checks.push(Check { name: name.into(), verdict });
}

/// `(S1, S2)` closed-form uppers.
pub fn split_components(ctx: &BoundsContext, beta: Beta) -> (Real, Real) {
    let p = parts(ctx, beta, false);
    (p.s1(), p.s2())
}

fn parts(ctx: &BoundsContext, beta: Beta, dual: bool) -> Parts<'_> {
    let n = ctx.n();
    Parts { ctx, beta, bits: ctx.bits(), n, e_n: even(n) != dual }
}

pub fn method_a(ctx: &BoundsContext, beta: Beta) -> Result<Real, BoundsError> {
    let p = parts(ctx, beta, false);
    Ok(p.method_a(&head(&p)))
}

pub fn method_b(ctx: &BoundsContext, beta: Beta) -> Result<Real, BoundsError> {
    let d = coeffs(ctx, beta)?;
    Ok(parts(ctx, beta, false).method_b(d.q_l))
}

pub fn method_c(ctx: &BoundsContext, beta: Beta) -> Result<Real, BoundsError> {
    let d = coeffs(ctx, beta)?;
    let p = parts(ctx, beta, false);
    Ok(p.method_c(&head(&p), c_max_summary(ctx, &d, false), &p.tail_sum()))
}

pub fn lower_bound(ctx: &BoundsContext, beta: Beta, symmetric: bool) -> Option<Real> {
    parts(ctx, beta, false).lower(symmetric)
}

fn head(p: &Parts) -> Real {
    p.q_n().mul(&p.qs_beta(p.n + 1))
}

/// `max_{r<n}` of the summary coefficient `E_r(b_r - [b_r>0]) + O_r min(b_r+1, a_{r+1})`,
/// which dominates both coefficient conventions.
fn c_max_summary(ctx: &BoundsContext, d: &CoeffData, dual: bool) -> u64 {
    let mut m = 0;
    for r in 0..ctx.n() {
        let b = ctx.b(r as isize);
        let c = if even(r) != dual { b - (b > 0) as u64 } else { (b + 1).min(ctx.table().a(r + 1)) };
        let exact = if dual { d.rows[r].c_bar } else { d.rows[r].c };
        m = m.max(c).max(exact);
    }
    m
}

fn direct_pair(ctx: &BoundsContext, beta: Beta) -> Result<(Real, Real), BoundsError> {
    theta_pair_sums(ctx.table().alpha(), beta, ctx.n_value()).ok_or(BoundsError::Eval(ctx.n()))
}

/// Full report for `theta^beta` (or its reflection when `dual`).
pub fn estimate(ctx: &BoundsContext, beta: Beta, dual: bool) -> Result<EstimateReport, BoundsError> {
    estimate_with(ctx, beta, dual, &direct_pair(ctx, beta)?)
}

/// Reports for `theta^beta` and `theta_bar^beta`, sharing one pass over the orbit.
pub fn estimate_both(ctx: &BoundsContext, beta: Beta) -> Result<(EstimateReport, EstimateReport), BoundsError> {
    let d = direct_pair(ctx, beta)?;
    Ok((estimate_with(ctx, beta, false, &d)?, estimate_with(ctx, beta, true, &d)?))
}

fn estimate_with(ctx: &BoundsContext, beta: Beta, dual: bool, sums: &(Real, Real)) -> Result<EstimateReport, BoundsError> {
    let bits = ctx.bits();
    let n = ctx.n();
    let phi = if dual { Observable::theta_bar(beta) } else { Observable::theta(beta) };
    let p = parts(ctx, beta, dual);
    let d = coeffs(ctx, beta)?;
    let mut checks = Vec::new();

    let (direct, direct_other) = if dual { (sums.1.clone(), sums.0.clone()) } else { (sums.0.clone(), sums.1.clone()) };
    let direct_sym = direct.add(&direct_other);

    let s1 = p.s1();
    let s2 = p.s2();
    let x2 = p.x2();
    let (e1, e2, ex2) = exact_single(ctx, beta, &phi, dual)?;
    check(&mut checks, "s1_closed", lt(&e1, &s1));
    check(&mut checks, "s2_closed", le(&e2, &s2));
    check(&mut checks, "x2_closed", le_or_equal(&ex2, &x2, true));

    let s3e = s3_exact(ctx, &phi, dual)?;
    let head = head(&p);
    let tail = p.tail_sum();
    let q_l = if dual { ctx.q(n as isize) } else { d.q_l };
    let c_max = c_max_summary(ctx, &d, dual);
    let s3_a = p.method_a(&head);
    let s3_b = p.method_b(q_l);
    let s3_c = p.method_c(&head, c_max, &tail);
    let s3_c_prime = beta.is_one().then(|| {
        let w = ctx.q(n as isize) * 3 + ctx.q(n as isize - 1) * 4;
        p.method_c(&head, c_max, &Real::from_u64(w, bits))
    });
    if beta.is_one() {
        let mut all = Real::zero(bits);
        for r in 0..=n {
            all.add_assign(ctx.table().q_slash(r));
        }
        let w = Real::from_u64(ctx.q(n as isize) * 3 + ctx.q(n as isize - 1) * 4, bits);
        check(&mut checks, "q_slash_sum", lt(&all, &w));
    }
    for (name, v) in [("s3_a", &s3_a), ("s3_b", &s3_b), ("s3_c", &s3_c)] {
        check(&mut checks, name, le_or_equal(&s3e, v, true));
    }

    let base = s1.add(&s2).add(&x2);
    let total_a = base.add(&s3_a);
    let total_b = base.add(&s3_b);
    let total_c = base.add(&s3_c);
    let total_c_prime = s3_c_prime.as_ref().map(|v| base.add(v));
    let chain = e1.add(&e2).add(&ex2).add(&s3e);
    check(&mut checks, "chain", le_or_equal(&direct, &chain, true));
    check(&mut checks, "total_a", le(&direct, &total_a));
    check(&mut checks, "total_b", le(&direct, &total_b));
    check(&mut checks, "total_c", le(&direct, &total_c));
    if let Some(t) = &total_c_prime {
        check(&mut checks, "total_c_prime", le(&direct, t));
    }
    if !dual {
        check(&mut checks, "coefficients", d.verdict);
    }

    let lower_single = p.lower(false);
    let lower_symmetric = p.lower(true);
    if let Some(l) = &lower_single {
        check(&mut checks, "lower_single", le(l, &direct));
    }
    if let Some(l) = &lower_symmetric {
        check(&mut checks, "lower_symmetric", le(l, &direct_sym));
    }

    Ok(EstimateReport {
        beta,
        dual,
        s1,
        s2,
        x2,
        s3_a,
        s3_b,
        s3_c,
        s3_c_prime,
        total_a,
        total_b,
        total_c,
        total_c_prime,
        chain,
        lower_single,
        lower_symmetric,
        direct,
        direct_symmetric: Some(direct_sym),
        checks,
    })
}

/// The `beta = 1` report.
pub fn beta1_summary(ctx: &BoundsContext) -> Result<EstimateReport, BoundsError> {
    estimate(ctx, Beta::ONE, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Alpha;

    fn ctx(spec: &str, n: u64, beta: Beta) -> BoundsContext {
        BoundsContext::for_beta(&Alpha::parse(spec).unwrap(), n, beta).unwrap()
    }

    #[test]
    fn golden_ten_s1() {
        let c = ctx("golden", 10, Beta::ONE);
        let (s1, _) = split_components(&c, Beta::ONE);
        let want = 10.0 * (1.0 + 8f64.ln());
        assert!((s1.to_f64() - want).abs() < 1e-12);
    }

    #[test]
    fn golden_sweep_sound() {
        for n in 1..=300 {
            for dual in [false, true] {
                let c = ctx("golden", n, Beta::ONE);
                let rep = estimate(&c, Beta::ONE, dual).unwrap();
                assert_eq!(rep.verdict(), Verdict::Pass, "N={n} dual={dual} {:?}", rep.checks);
            }
        }
    }

    #[test]
    fn beta_two_sound() {
        let b = Beta::new(2, 1).unwrap();
        let b32 = Beta::new(3, 2).unwrap();
        for spec in ["sqrt2m1", "cf:1,2,[3]"] {
            for n in [1, 2, 3, 7, 50, 99, 144, 233] {
                for beta in [b, b32] {
                    let c = ctx(spec, n, beta);
                    let rep = estimate(&c, beta, false).unwrap();
                    assert_eq!(rep.verdict(), Verdict::Pass, "{spec} N={n} {beta} {:?}", rep.checks);
                }
            }
        }
    }
}
