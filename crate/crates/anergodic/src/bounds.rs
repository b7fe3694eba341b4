//! Bounds functionals for monotone observables, primitive refinements and the `C_r`, `Q_r`, `c_r`
//! coefficient data for `theta^beta`.

use std::sync::Arc;

use thiserror::Error;

use crate::cf_engine::{table_for, CfError, QuasiperiodTable};
use crate::numerics::{Alpha, Real};
use crate::observables::{direct_bits, harmonic1, partition_sum, partition_sum_theta, Beta, Observable};
use crate::orbit::{OrbitContext, OrbitError};
use crate::ostrowski::{OstrowskiRep, Triple};
use crate::verdict::{le, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("observable undecided at level r = {0}; raise precision")]
    Eval(usize),
    #[error("observable must be declared decreasing")]
    NotDecreasing,
    #[error("N must be positive")]
    Empty,
}

/// Largest digit count accepted when expanding `alpha`.
pub const DEPTH_CAP: usize = 4096;

/// Everything needed to evaluate bounds for one `(alpha, N)`.
#[derive(Clone, Debug)]
pub struct BoundsContext {
    pub orbit: OrbitContext,
}

fn even(r: usize) -> bool {
    r % 2 == 0
}

impl BoundsContext {
    pub fn new(alpha: &Alpha, n_value: u64, bits: u32) -> Result<BoundsContext, BoundsError> {
        let t = table_for(alpha, n_value, 3, bits, DEPTH_CAP)?;
        BoundsContext::from_table(Arc::new(t), n_value)
    }

    /// Context sized for `theta^beta` sums up to `N`.
    pub fn for_beta(alpha: &Alpha, n_value: u64, beta: Beta) -> Result<BoundsContext, BoundsError> {
        BoundsContext::new(alpha, n_value, direct_bits(n_value, Some(beta), 128))
    }

    pub fn from_table(table: Arc<QuasiperiodTable>, n_value: u64) -> Result<BoundsContext, BoundsError> {
        if n_value == 0 {
            return Err(BoundsError::Empty);
        }
        Ok(BoundsContext { orbit: OrbitContext::new(table, n_value)? })
    }

    pub fn table(&self) -> &QuasiperiodTable {
        &self.orbit.table
    }

    pub fn rep(&self) -> &OstrowskiRep {
        &self.orbit.rep
    }

    pub fn n(&self) -> usize {
        self.orbit.n()
    }

    pub fn n_value(&self) -> u64 {
        self.orbit.rep.n_value
    }

    pub fn bits(&self) -> u32 {
        self.orbit.bits()
    }

    pub fn b(&self, r: isize) -> u64 {
        self.orbit.rep.digit(r)
    }

    pub fn q(&self, r: isize) -> u64 {
        self.table().qu(r)
    }

    /// `phi(alpha_rst)`.
    pub fn phi_rst(&self, phi: &Observable, r: usize, s: u64, t: u64) -> Result<Real, BoundsError> {
        let x = self.orbit.alpha_rst(Triple { r, s, t }).ok_or(BoundsError::Eval(r))?;
        phi.eval(&x).ok_or(BoundsError::Eval(r))
    }

    fn at(&self, phi: &Observable, num: i64, den: i64, r: usize) -> Result<Real, BoundsError> {
        phi.at(num, den, self.bits()).ok_or(BoundsError::Eval(r))
    }

    fn bar_at(&self, phi: &Observable, num: i64, den: i64, r: usize) -> Result<Real, BoundsError> {
        phi.bar_at(num, den, self.bits()).ok_or(BoundsError::Eval(r))
    }

    fn partition(&self, phi: &Observable, k: u64, r: usize) -> Result<Real, BoundsError> {
        if phi.is_theta() {
            return Ok(partition_sum_theta(phi.beta().unwrap(), k, self.bits()));
        }
        partition_sum(phi, k, self.bits()).ok_or(BoundsError::Eval(r))
    }

    /// `sum_s (phi_{rsq_r} + [q_r>1] phi_{rsq_{r-1}})`.
    fn origin_terms(&self, phi: &Observable, r: usize) -> Result<Real, BoundsError> {
        let (qr, qp) = (self.q(r as isize), self.q(r as isize - 1));
        let mut acc = Real::zero(self.bits());
        for s in 0..self.b(r as isize) {
            acc.add_assign(&self.phi_rst(phi, r, s, qr)?);
            if qr > 1 {
                acc.add_assign(&self.phi_rst(phi, r, s, qp)?);
            }
        }
        Ok(acc)
    }

    fn mid_gate(&self, r: usize) -> bool {
        let qr = self.q(r as isize);
        2 < qr && qr < self.q(self.n() as isize)
    }

    fn both_bounds(&self, phi: &Observable, r: usize) -> Result<(Real, Real), BoundsError> {
        let bits = self.bits();
        let br = self.b(r as isize);
        if br == 0 {
            return Ok((Real::zero(bits), Real::zero(bits)));
        }
        let qr = self.q(r as isize);
        let qp = self.q(r as isize - 1);
        let tail = self.origin_terms(phi, r)?;
        let mut up = tail.clone();
        let mut lo = tail;
        if qr > 1 {
            let p = self.partition(phi, qr, r)?;
            up.add_assign(&p.sub(&self.bar_at(phi, 1, qr as i64, r)?).mul_u64(br));
            lo.add_assign(&p.sub(&self.at(phi, 1, qr as i64, r)?).mul_u64(br));
        }
        if self.mid_gate(r) {
            let mid = self.phi_rst(phi, r, 0, qr - qp)?;
            if even(r) {
                up.add_assign(&mid.sub(&self.bar_at(phi, 2, qr as i64, r)?));
            } else {
                lo.add_assign(&mid.sub(&self.at(phi, 2, qr as i64, r)?));
            }
        }
        Ok((lo, up))
    }
}

/// `B_r phi`, the upper bounds functional.
pub fn b_upper(ctx: &BoundsContext, r: usize, phi: &Observable) -> Result<Real, BoundsError> {
    Ok(ctx.both_bounds(phi, r)?.1)
}

/// The double-dual lower functional.
pub fn b_lower(ctx: &BoundsContext, r: usize, phi: &Observable) -> Result<Real, BoundsError> {
    Ok(ctx.both_bounds(phi, r)?.0)
}

/// `sum_{s<b_r} sum_{t=1}^{q_r} phi(alpha_rst)`.
pub fn segment_sum(ctx: &BoundsContext, r: usize, phi: &Observable) -> Result<Real, BoundsError> {
    let qr = ctx.q(r as isize);
    let mut acc = Real::zero(ctx.bits());
    for s in 0..ctx.b(r as isize) {
        for t in 1..=qr {
            acc.add_assign(&ctx.phi_rst(phi, r, s, t)?);
        }
    }
    Ok(acc)
}

/// `a <= b`, accepting overlapping enclosures where the two sides are known to coincide.
pub fn le_or_equal(a: &Real, b: &Real, may_be_equal: bool) -> Verdict {
    match le(a, b) {
        Verdict::Indeterminate if may_be_equal && a.overlaps(b) => Verdict::Pass,
        v => v,
    }
}

#[derive(Clone, Debug)]
pub struct BoundsRow {
    pub r: usize,
    pub b: u64,
    pub q: u64,
    pub lower: Real,
    pub segment: Real,
    pub upper: Real,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct SandwichReport {
    pub rows: Vec<BoundsRow>,
    pub lower_total: Real,
    pub direct: Real,
    pub upper_total: Real,
    pub total_verdict: Verdict,
}

impl SandwichReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.rows.iter().map(|r| r.verdict)).and(self.total_verdict)
    }
}

/// Per-level sandwich `lower <= segment <= upper` and the aggregate for `S_N`.
pub fn verify_sandwich(ctx: &BoundsContext, phi: &Observable) -> Result<SandwichReport, BoundsError> {
    if !phi.is_decreasing() {
        return Err(BoundsError::NotDecreasing);
    }
    let bits = ctx.bits();
    let constant = phi.label.starts_with("const:");
    let mut rows = Vec::new();
    let (mut lt, mut st, mut ut) = (Real::zero(bits), Real::zero(bits), Real::zero(bits));
    for r in (0..=ctx.n()).rev() {
        let (lower, upper) = ctx.both_bounds(phi, r)?;
        let segment = segment_sum(ctx, r, phi)?;
        let b = ctx.b(r as isize);
        let q = ctx.q(r as isize);
        // q_r <= 2 and b_r = 0 make both functionals identities; at q_r = 3 every point
        // of the segment is an origin or mid term on one side
        let eq = constant || q <= 3 || b == 0;
        let verdict = le_or_equal(&lower, &segment, eq).and(le_or_equal(&segment, &upper, eq));
        lt.add_assign(&lower);
        st.add_assign(&segment);
        ut.add_assign(&upper);
        rows.push(BoundsRow { r, b, q, lower, segment, upper, verdict });
    }
    let all_eq = constant || rows.iter().all(|r| r.q <= 3 || r.b == 0);
    let total_verdict = le_or_equal(&lt, &st, all_eq).and(le_or_equal(&st, &ut, all_eq));
    Ok(SandwichReport { rows, lower_total: lt, direct: st, upper_total: ut, total_verdict })
}

/// Refined upper bound for a positive decreasing primitive.
pub fn primitive_upper_refined(ctx: &BoundsContext, r: usize, phi: &Observable) -> Result<Real, BoundsError> {
    let bits = ctx.bits();
    let br = ctx.b(r as isize);
    if br == 0 {
        return Ok(Real::zero(bits));
    }
    let t = ctx.table();
    let qr = ctx.q(r as isize);
    let mut acc = Real::zero(bits);
    if qr == 1 {
        let inv1 = t.inv_q_slash(r + 1);
        let inv2 = t.inv_q_slash(r + 2);
        for s in 0..br {
            let x = if even(r) {
                inv1.mul_u64(s).add(inv2)
            } else {
                inv1.mul_u64(s + 1).add(inv2).neg().add_i64(1)
            };
            acc.add_assign(&phi.eval(&x).ok_or(BoundsError::Eval(r))?);
        }
        return Ok(acc);
    }
    let qp = ctx.q(r as isize - 1);
    acc.add_assign(&ctx.partition(phi, qr, r)?.mul_u64(br));
    if even(r) && qr < ctx.q(ctx.n() as isize) && qr >= 2 {
        // mid term for q_r > 2; the X_r term for q_r = 2 is always kept
        let t_mid = if qr == 2 { qp } else { qr - qp };
        acc.add_assign(&ctx.phi_rst(phi, r, 0, t_mid)?.sub(&ctx.bar_at(phi, 1, qr as i64, r)?));
    }
    for s in 0..br {
        let tt = if even(r) { qr } else { qp };
        acc.add_assign(&ctx.phi_rst(phi, r, s, tt)?);
    }
    Ok(acc)
}

/// Sign of `sum_s (phi_{rsq_r} + phi_{rsq_{r-1}})` for decreasing antisymmetric `phi`:
/// non-negative for even `r`, non-positive for odd `r`.
pub fn antisym_sign(ctx: &BoundsContext, r: usize, phi: &Observable) -> Result<Verdict, BoundsError> {
    if ctx.q(r as isize) <= 1 || ctx.b(r as isize) == 0 {
        return Ok(Verdict::Pass);
    }
    let v = ctx.origin_terms(phi, r)?;
    let z = Real::zero(ctx.bits());
    Ok(if even(r) { le(&z, &v) } else { le(&v, &z) })
}

/// Coefficient data for one level.
#[derive(Clone, Debug)]
pub struct CoeffRow {
    pub r: usize,
    /// Grouped upper value `C_r(theta^beta)`.
    pub c_group: Real,
    /// `Q_r = C_r / q'^beta_{r+1}`.
    pub q_coef: Real,
    pub c: u64,
    pub c_bar: u64,
    /// `Q_r <= H_{c_r}`
    pub main: Verdict,
    /// `Q_r <= H_{c'_r} - O_r [b_{r-1}=0][b_r<a_{r+1}]` with `c'_r` using `min(b_r+1, a_{r+1})`
    pub refined: Verdict,
    /// `Q_r <= min{zeta, 1 + log a_{r+1}}`
    pub log: Verdict,
    /// beta = 1, r < n: `Q_r <= O_r + b_r/2`
    pub half: Verdict,
}

#[derive(Clone, Debug)]
pub struct CoeffData {
    pub beta: Beta,
    pub rows: Vec<CoeffRow>,
    /// `L` (may be -1).
    pub l: isize,
    pub q_l: u64,
    /// `max_{r <= n-1} c_r` (0 when n = 0).
    pub c_max_prev: u64,
    /// `sum_r C_r`.
    pub s3_grouped: Real,
    /// `sum_r sum_s (E_r theta_{rsq_r} + O_r theta_{rsq_{r-1}})` on the orbit.
    pub s3_direct: Real,
    pub verdict: Verdict,
}

impl CoeffData {
    pub fn q_n(&self) -> &Real {
        &self.rows.last().expect("n >= 0").q_coef
    }
}

/// `c_r = E_r(b_r - [b_r>0] + [r=n]) + O_r min(b_r + [b_{r-1}>0], a_{r+1})`.
pub fn c_r(ctx: &BoundsContext, r: usize) -> u64 {
    let b = ctx.b(r as isize);
    let a = ctx.table().a(r + 1);
    if even(r) {
        b - (b > 0) as u64 + (r == ctx.n()) as u64
    } else {
        (b + (ctx.b(r as isize - 1) > 0) as u64).min(a)
    }
}

/// `c_r` of the dual rotation: parities exchanged.
pub fn c_bar_r(ctx: &BoundsContext, r: usize) -> u64 {
    let b = ctx.b(r as isize);
    let a = ctx.table().a(r + 1);
    if !even(r) {
        b - (b > 0) as u64 + (r == ctx.n()) as u64
    } else {
        (b + (ctx.b(r as isize - 1) > 0) as u64).min(a)
    }
}

/// `L = max odd r <= n with r = -1 or b_{r-1} > 0`.
pub fn l_index(ctx: &BoundsContext) -> isize {
    let n = ctx.n() as isize;
    let mut r = if n % 2 == 0 { n - 1 } else { n };
    while r > -1 && ctx.b(r - 1) == 0 {
        r -= 2;
    }
    r
}

/// `C_r(theta^beta)` from the grouping by error period.
pub fn c_group(ctx: &BoundsContext, r: usize, beta: Beta) -> Real {
    let bits = ctx.bits();
    let t = ctx.table();
    let n = ctx.n();
    let b = ctx.b(r as isize);
    let inv = t.inv_q_slash(r + 1);
    let th = |x: &Real| beta.pow_neg(x).expect("positive point");
    let mut acc = Real::zero(bits);
    if even(r) {
        if r == n {
            for s in 1..=b {
                acc.add_assign(&th(&inv.mul_u64(s)));
            }
        } else {
            let shift = t.a_full(r + 1).add_i64(-(t.a(r + 1) as i64));
            for s in 1..b {
                acc.add_assign(&th(&shift.add_i64(s as i64).mul(inv)));
            }
        }
    } else {
        let top = if r == n { t.a_full(r + 1).clone() } else { Real::from_u64(t.a(r + 1), bits) };
        for s in 0..b {
            acc.add_assign(&th(&top.add_i64(-(s as i64)).mul(inv)));
        }
        if ctx.b(r as isize - 1) > 0 {
            acc.add_assign(&th(inv));
        }
    }
    acc
}

pub fn coeffs(ctx: &BoundsContext, beta: Beta) -> Result<CoeffData, BoundsError> {
    let bits = ctx.bits();
    let n = ctx.n();
    let t = ctx.table();
    let zeta = beta.zeta(bits);
    let theta = Observable::theta(beta);
    let mut rows = Vec::with_capacity(n + 1);
    let mut s3_grouped = Real::zero(bits);
    let mut s3_direct = Real::zero(bits);
    let mut verdict = Verdict::Pass;
    for r in 0..=n {
        let b = ctx.b(r as isize);
        let a_next = t.a(r + 1);
        let cg = c_group(ctx, r, beta);
        s3_grouped.add_assign(&cg);
        let qs = beta.pow(t.q_slash(r + 1)).expect("q' > 0");
        let q_coef = cg.div(&qs).expect("q' > 0");
        for s in 0..b {
            let tt = if even(r) { ctx.q(r as isize) } else { ctx.q(r as isize - 1) };
            s3_direct.add_assign(&ctx.phi_rst(&theta, r, s, tt)?);
        }
        let c = c_r(ctx, r);
        let c_bar = c_bar_r(ctx, r);
        let equal_ok = true;
        let main = le_or_equal(&q_coef, &harmonic1(beta, c as i64, bits), equal_ok);
        let c_alt = if even(r) { c } else { (b + 1).min(a_next) };
        let minus = (!even(r) && ctx.b(r as isize - 1) == 0 && b < a_next) as i64;
        let refined = le_or_equal(&q_coef, &harmonic1(beta, c_alt as i64, bits).add_i64(-minus), equal_ok);
        let one_log = Real::from_u64(a_next, bits).ln().unwrap().add_i64(1);
        let cap = match &zeta {
            Some(z) => one_log.min(z),
            None => one_log,
        };
        let log = le_or_equal(&q_coef, &cap, true);
        let half = if beta.is_one() && r < n {
            let rhs = Real::ratio(b as i64, 2, bits).add_i64((!even(r)) as i64);
            le_or_equal(&q_coef, &rhs, true)
        } else {
            Verdict::Pass
        };
        let bound_c = if c <= b + 1 { Verdict::Pass } else { Verdict::Fail };
        verdict = verdict.and(main).and(refined).and(log).and(half).and(bound_c);
        rows.push(CoeffRow { r, c_group: cg, q_coef, c, c_bar, main, refined, log, half });
    }
    let l = l_index(ctx);
    let q_l = if l < 0 { 0 } else { ctx.q(l) };
    let cap_l = if n % 2 == 1 { ctx.q(n as isize) } else { ctx.q(n as isize - 1) };
    if q_l > cap_l {
        verdict = Verdict::Fail;
    }
    verdict = verdict.and(le_or_equal(&s3_direct, &s3_grouped, true));
    let c_max_prev = rows.iter().take(n).map(|r| r.c).max().unwrap_or(0);
    Ok(CoeffData { beta, rows, l, q_l, c_max_prev, s3_grouped, s3_direct, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn ctx(spec: &str, n: u64) -> BoundsContext {
        BoundsContext::for_beta(&Alpha::parse(spec).unwrap(), n, Beta::ONE).unwrap()
    }

    #[test]
    fn golden_ten_sandwich() {
        let c = ctx("golden", 10);
        let th = Observable::theta(Beta::ONE);
        let rep = verify_sandwich(&c, &th).unwrap();
        assert_eq!(rep.verdict(), Verdict::Pass, "{rep:?}");
        let seg: Vec<_> = rep.rows.iter().filter(|r| r.b > 0).map(|r| r.r).collect();
        assert_eq!(seg, vec![5, 2]);
        let s = crate::observables::birkhoff_sum_direct(
            &Alpha::parse("golden").unwrap(),
            &th,
            10,
            &Rational::from((1, 1u64 << 40)),
            &Default::default(),
        )
        .unwrap();
        assert!(s.overlaps(&rep.direct));
        for r in 0..=c.n() {
            // q_r <= 2 gives equality
            let eq = c.q(r as isize) <= 2 || c.b(r as isize) == 0;
            let v = le_or_equal(&segment_sum(&c, r, &th).unwrap(), &primitive_upper_refined(&c, r, &th).unwrap(), eq);
            assert_eq!(v, Verdict::Pass, "r={r}");
        }
    }

    #[test]
    fn constant_is_exact() {
        let c = ctx("sqrt2m1", 40);
        let k = Observable::constant(Rational::from((3, 2)));
        let rep = verify_sandwich(&c, &k).unwrap();
        assert_eq!(rep.verdict(), Verdict::Pass);
        for row in &rep.rows {
            let want = Rational::from((3 * row.b * row.q, 2));
            assert!(row.upper.contains_rational(&want) && row.lower.contains_rational(&want));
        }
    }

    #[test]
    fn coefficients_golden() {
        for n in 1..=500 {
            let c = ctx("golden", n);
            let d = coeffs(&c, Beta::ONE).unwrap();
            assert_eq!(d.verdict, Verdict::Pass, "N={n} {d:?}");
            for row in &d.rows {
                assert!(row.c <= 2);
            }
        }
    }

    #[test]
    fn l_index_parity() {
        let c = ctx("golden", 10);
        // b = [0,0,1,0,0,1]; b_4 = 0, b_2 = 1
        assert_eq!(l_index(&c), 3);
        let c2 = ctx("golden", 8);
        assert_eq!(l_index(&c2), -1);
        let c2 = ctx("golden", 12);
        let b = &c2.rep().b;
        let l = l_index(&c2);
        assert!(l == -1 || (l % 2 != 0 && b[(l - 1) as usize] > 0));
    }
}
