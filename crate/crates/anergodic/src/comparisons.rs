//! Comparisons with published bounds, antisymmetric scans, weighted series and the double
//! exponential sum.

use rug::Rational;
use serde::Serialize;

use crate::bounds::{BoundsContext, BoundsError};
use crate::cf_engine::type_functions;
use crate::estimates::estimate;
use crate::numerics::{Alpha, Policy, Real};
use crate::observables::{birkhoff_prefix, denjoy_koksma_psi, direct_bits, orbit_sum, Beta, ObsError, Observable};
use crate::verdict::{le, lt, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Obs(#[from] ObsError),
    #[error("{0}")]
    Input(String),
    #[error("enclosure too wide at N = {0}; raise precision")]
    Precision(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Lang,
    BeresnevichUpper,
    BeresnevichLower,
    Antisym,
    Weighted,
    Exp2,
    Conjecture,
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::Lang => "lang",
            Target::BeresnevichUpper => "beresnevich_upper",
            Target::BeresnevichLower => "beresnevich_lower",
            Target::Antisym => "antisym",
            Target::Weighted => "weighted",
            Target::Exp2 => "exp2",
            Target::Conjecture => "conjecture",
        }
    }
}

/// How a row's value relates to its reference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Certified `value >= reference`.
    Upper,
    /// Certified `value <= reference`.
    Lower,
    /// Certified `|reference - centre| <= radius` style checks, or enclosure agreement.
    Check,
    /// Reported only.
    Info,
}

#[derive(Clone, Debug)]
pub struct CompRow {
    pub label: String,
    pub role: Role,
    pub n: u64,
    pub value: Real,
    pub reference: Option<Real>,
    pub verdict: Verdict,
}

impl CompRow {
    fn info(label: &str, n: u64, value: Real) -> CompRow {
        CompRow { label: label.into(), role: Role::Info, n, value, reference: None, verdict: Verdict::Exploratory }
    }

    fn upper(label: &str, n: u64, value: Real, reference: &Real) -> CompRow {
        let verdict = le(reference, &value);
        CompRow { label: label.into(), role: Role::Upper, n, value, reference: Some(reference.clone()), verdict }
    }

    fn lower(label: &str, n: u64, value: Real, reference: &Real) -> CompRow {
        let verdict = le(&value, reference);
        CompRow { label: label.into(), role: Role::Lower, n, value, reference: Some(reference.clone()), verdict }
    }

    fn check(label: &str, n: u64, value: Real, reference: Option<Real>, verdict: Verdict) -> CompRow {
        CompRow { label: label.into(), role: Role::Check, n, value, reference, verdict }
    }
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub target: Target,
    pub alpha: String,
    pub params: Vec<(String, String)>,
    pub rows: Vec<CompRow>,
    pub notes: Vec<String>,
}

impl ComparisonReport {
    fn new(target: Target, alpha: &Alpha) -> ComparisonReport {
        ComparisonReport { target, alpha: alpha.to_string(), params: vec![], rows: vec![], notes: vec![] }
    }

    fn param(&mut self, k: &str, v: impl ToString) {
        self.params.push((k.into(), v.to_string()));
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.rows.iter().map(|r| r.verdict))
    }

    pub fn row(&self, label: &str) -> Option<&CompRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

fn ln(x: u64, bits: u32) -> Real {
    Real::from_u64(x, bits).ln().expect("positive")
}

/// `log* x = max{1, log x}`.
pub fn log_star(x: &Real) -> Real {
    let p = x.prec();
    x.ln().expect("positive").max(&Real::one(p))
}

fn ctx_for(alpha: &Alpha, n: u64, policy: &Policy) -> Result<BoundsContext, BoundsError> {
    let bits = direct_bits(n, Some(Beta::ONE), policy.initial_bits);
    BoundsContext::new(alpha, n, bits)
}

/// `A_{n+1}` as an enclosure.
fn type_a(ctx: &BoundsContext) -> Real {
    let t = type_functions(ctx.table(), ctx.n() + 1);
    Real::from_rational(&t.a_type[ctx.n() + 1], ctx.bits())
}

/// Lang's `2N log N + 20 N A_{n+1}` against `N log q_n + (N+q_n)A_{n+1} + 2N + 3q_n`.
pub fn lang_compare(alpha: &Alpha, n: u64, policy: &Policy) -> Result<ComparisonReport, CompareError> {
    let ctx = ctx_for(alpha, n, policy)?;
    let bits = ctx.bits();
    let qn = ctx.q(ctx.n() as isize);
    let a = type_a(&ctx);
    let direct = orbit_sum(ctx.table().alpha(), &Observable::theta(Beta::ONE), 1, n).ok_or(CompareError::Precision(n))?;
    let nn = Real::from_u64(n, bits);
    let theirs = nn.mul(&ln(n.max(1), bits)).mul_u64(2).add(&nn.mul(&a).mul_u64(20));
    let ours = nn
        .mul(&ln(qn, bits))
        .add(&a.mul_u64(n + qn))
        .add(&Real::from_u64(2 * n + 3 * qn, bits));
    let mut rep = ComparisonReport::new(Target::Lang, alpha);
    rep.param("n", n);
    rep.param("q_n", qn);
    rep.param("a_next_type", format!("{}", type_functions(ctx.table(), ctx.n() + 1).a_type[ctx.n() + 1]));
    rep.rows.push(CompRow::upper("theirs", n, theirs.clone(), &direct));
    rep.rows.push(CompRow::upper("ours", n, ours.clone(), &direct));
    rep.rows.push(CompRow::info("ratio", n, ours.div(&theirs).expect("positive")));
    rep.rows.push(CompRow::info("direct", n, direct));
    Ok(rep)
}

/// `LB1` for `q_n > 1`.
pub fn lb1(ctx: &BoundsContext) -> Option<Real> {
    let bits = ctx.bits();
    let n = ctx.n();
    let qn = ctx.q(n as isize);
    if qn <= 1 {
        return None;
    }
    let b = ctx.b(n as isize);
    let first = ctx.table().q_slash(n + 1).mul(&log_star(&Real::from_u64(1 + b, bits)));
    let k = log_star(&Real::from_u64(qn, bits)).mul_u64(2).sub(&Real::ln2(bits).mul_u64(2).add_i64(1));
    Some(first.add(&k.mul_u64(b * qn)))
}

/// `LB2` with `floor(N/q_n)`, or with `N/q_n` when `floored` is false.
pub fn lb2(ctx: &BoundsContext, floored: bool) -> Real {
    let bits = ctx.bits();
    let n = ctx.n();
    let nv = ctx.n_value();
    let qn = ctx.q(n as isize);
    let ratio = if floored { Real::from_u64(nv / qn, bits) } else { Real::ratio(nv as i64, qn as i64, bits) };
    let q_next = Real::from_integer(ctx.table().q(n as isize + 1), bits);
    let first = q_next.mul(&ratio.add_i64(1).ln().unwrap());
    let second = Real::from_u64(nv, bits).mul(&ln(qn, bits)).div_u64(24);
    let q2 = ctx.table().qu(2);
    let third = ln(q2, bits).div_u64(3).add(&Real::ratio(1, 2, bits)).mul_u64(nv);
    first.add(&second).sub(&third)
}

/// `LB3 = N log N + N(1 - log 2) + 2`.
pub fn lb3(n: u64, bits: u32) -> Real {
    let nn = Real::from_u64(n, bits);
    nn.mul(&ln(n, bits)).add(&nn.mul(&Real::ln2(bits).neg().add_i64(1))).add_i64(2)
}

/// Upper bound on the half sum `1/2 sum 1/||r alpha||` from the published estimate.
pub fn velani_upper(ctx: &BoundsContext) -> Real {
    let bits = ctx.bits();
    let n = ctx.n();
    let nv = ctx.n_value();
    let qn = ctx.q(n as isize);
    let q_next = Real::from_integer(ctx.table().q(n as isize + 1), bits);
    let first = q_next.mul(&Real::ratio(nv as i64, qn as i64, bits).add_i64(1).ln().unwrap().add_i64(1)).mul_u64(2);
    let second = ln(qn, bits).mul_u64(32 * nv);
    let third = Real::from_u64(ctx.table().qu(3) * nv, bits);
    first.add(&second).add(&third)
}

/// Upper and lower bounds for `sum 1/||r alpha||` and its half.
pub fn sum_nearest_bounds(alpha: &Alpha, n: u64, policy: &Policy) -> Result<ComparisonReport, CompareError> {
    let ctx = ctx_for(alpha, n, policy)?;
    let bits = ctx.bits();
    let full = orbit_sum(ctx.table().alpha(), &Observable::recip_nearest(), 1, n).ok_or(CompareError::Precision(n))?;
    let half = full.div_u64(2);
    let mut rep = ComparisonReport::new(Target::BeresnevichLower, alpha);
    rep.param("n", n);
    rep.param("q_n", ctx.q(ctx.n() as isize));
    rep.param("b_n", ctx.b(ctx.n() as isize));
    rep.rows.push(CompRow::info("direct_full", n, full.clone()));
    rep.rows.push(CompRow::info("direct_half", n, half.clone()));

    // upper bounds on the half sum
    rep.rows.push(CompRow::upper("velani_upper_half", n, velani_upper(&ctx), &half));
    let t = estimate(&ctx, Beta::ONE, false)?;
    let tb = estimate(&ctx, Beta::ONE, true)?;
    let best = |r: &crate::estimates::EstimateReport| r.total_a.min(&r.total_b).min(&r.total_c);
    let d = ctx.rep().digit_sum();
    let ours = best(&t)
        .add(&best(&tb))
        .sub(&Real::ln2(bits).mul_u64(2 * n))
        .add(&Real::from_u64(2 * d, bits))
        .div_u64(2);
    rep.rows.push(CompRow::upper("ours_upper_half", n, ours, &half));

    // lower bounds on the full sum
    if let Some(l1) = lb1(&ctx) {
        rep.rows.push(CompRow::lower("lb1", n, l1.clone(), &full));
        let mut r = CompRow::info("lb1_vs_half", n, l1);
        r.reference = Some(half.clone());
        rep.rows.push(r);
    }
    rep.rows.push(CompRow::lower("lb2", n, lb2(&ctx, true), &full));
    rep.rows.push(CompRow::lower("lb2_unfloored", n, lb2(&ctx, false), &full));
    if n >= 2 {
        rep.rows.push(CompRow::lower("lb3", n, lb3(n, bits), &full));
    }
    let band = denjoy_koksma_psi(alpha, n, d, policy);
    match band {
        Ok(b) => {
            let r = Real::from_u64(b.radius, bits);
            rep.rows.push(CompRow::check("dk_psi", n, b.direct.sub(&b.center).abs(), Some(r), b.verdict));
        }
        Err(ObsError::Theory(m)) => {
            rep.rows.push(CompRow::check("dk_psi", n, Real::zero(bits), None, Verdict::Fail));
            rep.notes.push(m);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(rep)
}

/// One cell of the `LB1 > LB3` grid.
#[derive(Clone, Debug, Serialize)]
pub struct Lb13Cell {
    pub n_value: u64,
    pub q_n: u64,
    pub b_n: u64,
    pub lb1: f64,
    pub lb3: f64,
    pub verdict: Verdict,
}

/// `LB1 > LB3` at `N = b_n q_n` for every level with `b_n > 1`, `q_n >= 27`, `N <= n_cap`.
/// Also counts `N` strictly inside `(b_n q_n, (b_n+1) q_n)` where the inequality fails.
pub fn lb1_vs_lb3(alpha: &Alpha, n_cap: u64, policy: &Policy) -> Result<(Vec<Lb13Cell>, u64), CompareError> {
    let bits = direct_bits(n_cap, Some(Beta::ONE), policy.initial_bits);
    let t = crate::cf_engine::table_for(alpha, n_cap, 3, bits, crate::bounds::DEPTH_CAP).map_err(BoundsError::from)?;
    let mut cells = Vec::new();
    let mut inner_failures = 0;
    let mut r = 0usize;
    while t.q_fits(r as isize + 1) && t.qu(r as isize) <= n_cap {
        let qn = t.qu(r as isize);
        if qn >= 27 {
            for b in 2..=t.a(r + 1) {
                let nv = b * qn;
                if nv > n_cap {
                    break;
                }
                let ctx = BoundsContext::new(alpha, nv, bits)?;
                if ctx.n() != r {
                    continue;
                }
                let l1 = lb1(&ctx).expect("q_n > 1");
                let l3 = lb3(nv, bits);
                cells.push(Lb13Cell { n_value: nv, q_n: qn, b_n: b, lb1: l1.to_f64(), lb3: l3.to_f64(), verdict: lt(&l3, &l1) });
                for m in nv + 1..((b + 1) * qn).min(n_cap + 1) {
                    if lb3(m, bits).lt(&l1) != Some(true) {
                        inner_failures += 1;
                    }
                }
            }
        }
        r += 1;
    }
    Ok((cells, inner_failures))
}

/// `|S_N phi| / N` at `N = 2^k`, `k <= k_max`, and the envelope-stability heuristic.
pub fn antisym_scan(alpha: &Alpha, phi: &Observable, k_max: u32, policy: &Policy) -> Result<ComparisonReport, CompareError> {
    let n = 1u64 << k_max;
    let bits = direct_bits(n, Some(Beta::ONE), policy.initial_bits);
    let a = alpha.enclose(bits);
    let pre = birkhoff_prefix(&a, phi, n).ok_or(CompareError::Precision(n))?;
    let mut rep = ComparisonReport::new(Target::Antisym, alpha);
    rep.param("phi", &phi.label);
    rep.param("k_max", k_max);
    rep.notes.push("constant type is a declared precondition; the envelope test is a heuristic".into());
    let mut ratios = Vec::new();
    for k in 0..=k_max {
        let m = 1u64 << k;
        let ratio = pre[(m - 1) as usize].abs().div_u64(m);
        ratios.push(ratio.hi_f64());
        rep.rows.push(CompRow::info("ratio", m, ratio));
    }
    let split = (k_max / 2 + k_max % 2).max(k_max.saturating_sub(4)).min(10) as usize;
    let early = ratios[..=split].iter().cloned().fold(0.0, f64::max);
    let late = ratios[split..].iter().cloned().fold(0.0, f64::max);
    let ok = late <= 3.0 * early;
    rep.rows.push(CompRow::check(
        "envelope",
        n,
        Real::from_f64(late, bits),
        Some(Real::from_f64(3.0 * early, bits)),
        if ok { Verdict::Pass } else { Verdict::Fail },
    ));
    Ok(rep)
}

/// Growth classes for weighted series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    Bounded,
    Log,
    Power,
}

/// `sum_{r<=N} phi(r alpha) / r^gamma` with a dyadic growth check against the class predicted
/// by partial summation from `S_N phi = O(N^beta)`.
pub fn weighted_series(
    alpha: &Alpha,
    phi: &Observable,
    gamma: &Rational,
    beta: &Rational,
    n: u64,
    policy: &Policy,
) -> Result<ComparisonReport, CompareError> {
    if *gamma < 0 {
        return Err(CompareError::Input("gamma must be non-negative".into()));
    }
    let bits = direct_bits(n, Some(Beta::ONE), policy.initial_bits);
    let a = alpha.enclose(bits);
    let g = (gamma.numer().to_u32().unwrap_or(u32::MAX), gamma.denom().to_u32().unwrap_or(1));
    let class = match gamma.cmp(beta) {
        std::cmp::Ordering::Greater => Growth::Bounded,
        std::cmp::Ordering::Equal => Growth::Log,
        std::cmp::Ordering::Less => Growth::Power,
    };
    let mut rep = ComparisonReport::new(Target::Weighted, alpha);
    rep.param("phi", &phi.label);
    rep.param("gamma", gamma);
    rep.param("beta", beta);
    rep.param("class", format!("{class:?}").to_lowercase());
    let mut acc = Real::zero(bits);
    let mut marks = Vec::new();
    let mut next = 1u64;
    for r in 1..=n {
        let x = a.mul_u64(r).frac().ok_or(CompareError::Precision(r))?;
        let v = phi.eval(&x).ok_or(CompareError::Precision(r))?;
        let w = if g.0 == 0 { v } else { v.mul(&Real::from_u64(r, bits).pow_neg_ratio(g.0, g.1).unwrap()) };
        acc.add_assign(&w);
        if r == next || r == n {
            marks.push((r, acc.clone()));
            rep.rows.push(CompRow::info("partial", r, acc.clone()));
            next = next.saturating_mul(2);
        }
    }
    // normalised dyadic increments
    let excess = beta.to_f64() - gamma.to_f64();
    let mut inc = Vec::new();
    for w in marks.windows(2) {
        let d = w[1].1.sub(&w[0].1).abs().hi_f64();
        let scale = if class == Growth::Power { (w[1].0 as f64).powf(excess) } else { 1.0 };
        inc.push(d / scale);
    }
    if inc.len() >= 4 {
        let h = inc.len() / 2;
        let early = inc[..h].iter().cloned().fold(0.0, f64::max);
        let late = inc[h..].iter().cloned().fold(0.0, f64::max);
        let ok = late <= 3.0 * early.max(f64::MIN_POSITIVE);
        rep.rows.push(CompRow::check(
            "dyadic_envelope",
            n,
            Real::from_f64(late, bits),
            Some(Real::from_f64(3.0 * early, bits)),
            if ok { Verdict::Pass } else { Verdict::Fail },
        ));
    }
    Ok(rep)
}

/// Complex enclosure.
#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Real,
    pub im: Real,
}

impl Cx {
    pub fn zero(bits: u32) -> Cx {
        Cx { re: Real::zero(bits), im: Real::zero(bits) }
    }

    /// `e(x) = exp(2 pi i x)`.
    pub fn e(x: &Real) -> Cx {
        let (s, c) = x.sin_cos_2pi();
        Cx { re: c, im: s }
    }

    pub fn add_assign(&mut self, o: &Cx) {
        self.re.add_assign(&o.re);
        self.im.add_assign(&o.im);
    }

    pub fn scale(&self, k: &Real) -> Cx {
        Cx { re: self.re.mul(k), im: self.im.mul(k) }
    }

    pub fn abs(&self) -> Real {
        self.re.sqr().add(&self.im.sqr()).sqrt().expect("non-negative")
    }

    pub fn overlaps(&self, o: &Cx) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }
}

/// `Exp2(N) = N + sum_{u=1}^{N-1} (1 - e(uN alpha)) / (1 - e(u alpha))`, using
/// `1/(1 - e(x)) = (1 + i cot(pi x)) / 2`.
pub fn exp2_at(a: &Real, n: u64) -> Option<Cx> {
    let bits = a.prec();
    let mut acc = Cx { re: Real::from_u64(n, bits), im: Real::zero(bits) };
    for u in 1..n {
        let x = a.mul_u64(u).frac()?;
        let ct = x.cot_pi()?;
        let y = a.mul_u64(u * n).frac()?;
        let (s, c) = y.sin_cos_2pi();
        let one_c = c.neg().add_i64(1);
        // (1 - c - i s)(1 + i ct)/2
        let re = one_c.add(&s.mul(&ct)).div_u64(2);
        let im = one_c.mul(&ct).sub(&s).div_u64(2);
        acc.add_assign(&Cx { re, im });
    }
    Some(acc)
}

/// `Exp2(N)` for `N = 1..=n_max` by the incremental double sum.
pub fn exp2_double(a: &Real, n_max: u64) -> Option<Vec<Cx>> {
    let bits = a.prec();
    let mut out = Vec::with_capacity(n_max as usize);
    let mut s = Cx { re: Real::one(bits), im: Real::zero(bits) };
    out.push(s.clone());
    for n in 1..n_max {
        // S(n+1) = S(n) + 2 sum_{u<n} e(u n alpha) + e(n^2 alpha)
        let mut row = Cx::zero(bits);
        for u in 0..n {
            row.add_assign(&Cx::e(&a.mul_u64(u * n).frac()?));
        }
        s.add_assign(&row.scale(&Real::from_u64(2, bits)));
        s.add_assign(&Cx::e(&a.mul_u64(n * n).frac()?));
        out.push(s.clone());
    }
    Some(out)
}

fn exp2_bits(n: u64, policy: &Policy) -> u32 {
    direct_bits(n.saturating_mul(n), Some(Beta::ONE), policy.initial_bits)
}

/// `|Exp2(q_r)| / q_r` for `1 <= r <= n_max`, with the envelope heuristic.
pub fn exp2_scan(alpha: &Alpha, n_max: usize, policy: &Policy) -> Result<ComparisonReport, CompareError> {
    let t = crate::cf_engine::table_for(alpha, 1, n_max + 2, 64, crate::bounds::DEPTH_CAP).map_err(BoundsError::from)?;
    let top = t.qu(n_max as isize);
    let bits = exp2_bits(top, policy);
    let a = alpha.enclose(bits);
    let mut rep = ComparisonReport::new(Target::Exp2, alpha);
    rep.param("n_max", n_max);
    let mut ratios = Vec::new();
    for r in 1..=n_max {
        let q = t.qu(r as isize);
        let v = exp2_at(&a, q).ok_or(CompareError::Precision(q))?;
        let ratio = v.abs().div_u64(q);
        ratios.push(ratio.hi_f64());
        rep.rows.push(CompRow::info("ratio", q, ratio));
    }
    if n_max >= 2 {
        let h = n_max / 2;
        let early = ratios[..h].iter().cloned().fold(0.0, f64::max);
        let late = ratios[h..].iter().cloned().fold(0.0, f64::max);
        rep.rows.push(CompRow::check(
            "envelope",
            top,
            Real::from_f64(late, bits),
            Some(Real::from_f64(3.0 * early, bits)),
            if late <= 3.0 * early { Verdict::Pass } else { Verdict::Fail },
        ));
    }
    Ok(rep)
}

/// Geometric formula against the double sum for every `N <= n_max`.
pub fn exp2_agreement(alpha: &Alpha, n_max: u64, policy: &Policy) -> Result<ComparisonReport, CompareError> {
    let bits = exp2_bits(n_max, policy);
    let a = alpha.enclose(bits);
    let dbl = exp2_double(&a, n_max).ok_or(CompareError::Precision(n_max))?;
    let mut rep = ComparisonReport::new(Target::Exp2, alpha);
    rep.param("n_max", n_max);
    let mut worst = Verdict::Pass;
    let mut first_bad = None;
    for n in 1..=n_max {
        let g = exp2_at(&a, n).ok_or(CompareError::Precision(n))?;
        if !g.overlaps(&dbl[(n - 1) as usize]) {
            worst = Verdict::Fail;
            first_bad.get_or_insert(n);
        }
    }
    let last = &dbl[(n_max - 1) as usize];
    rep.rows.push(CompRow::check("agreement", n_max, last.abs(), None, worst));
    if let Some(n) = first_bad {
        rep.notes.push(format!("first disagreement at N = {n}"));
    }
    Ok(rep)
}

/// `|sum_{r<=N} e(M r alpha) phi(r alpha)|` and `max_{r<=N} |S_r phi| / r`.
fn twisted(a: &Real, phi: &Observable, m: u64, n: u64) -> Option<(Real, Real)> {
    let bits = a.prec();
    let mut acc = Cx::zero(bits);
    let mut s = Real::zero(bits);
    let mut b = Real::zero(bits);
    for r in 1..=n {
        let x = a.mul_u64(r).frac()?;
        let v = phi.eval(&x)?;
        s.add_assign(&v);
        b = b.max(&s.abs().div_u64(r));
        acc.add_assign(&Cx::e(&a.mul_u64(r * m).frac()?).scale(&v));
    }
    Some((acc.abs(), b))
}

/// Partial Birkhoff summation bound `B N (C ||M alpha|| (N-1)/2 + sup|psi|)` with `C = 2 pi`.
pub fn partial_birkhoff_lipschitz(
    alpha: &Alpha,
    m: u64,
    n: u64,
    phi: &Observable,
    policy: &Policy,
) -> Result<ComparisonReport, CompareError> {
    let bits = exp2_bits(n.max(m), policy);
    let a = alpha.enclose(bits);
    let (direct, b) = twisted(&a, phi, m, n).ok_or(CompareError::Precision(n))?;
    let dist = a.mul_u64(m).dist_nearest().ok_or(CompareError::Precision(m))?;
    let c = Real::pi(bits).mul_u64(2);
    // B is the observed sup, so the bound is only as good as the scan that produced it
    let b_up = Real::from_bounds(b.hi().clone(), b.hi().clone());
    let bound = b_up.mul_u64(n).mul(&c.mul(&dist).mul_u64(n - 1).div_u64(2).add_i64(1));
    let mut rep = ComparisonReport::new(Target::Exp2, alpha);
    rep.param("m", m);
    rep.param("phi", &phi.label);
    rep.rows.push(CompRow::info("b_scan", n, b_up));
    rep.rows.push(CompRow::info("m_alpha_dist", n, dist));
    rep.rows.push(CompRow::upper("partial_birkhoff", n, bound, &direct));
    Ok(rep)
}

/// `|S_N(e(M.) phi)| / N` over `M` in the grid; exploratory only.
pub fn conjecture_scan(alpha: &Alpha, ms: &[u64], n: u64, phi: &Observable, policy: &Policy) -> Result<ComparisonReport, CompareError> {
    let top = ms.iter().copied().max().unwrap_or(1).max(n);
    let bits = exp2_bits(top, policy);
    let a = alpha.enclose(bits);
    let mut rep = ComparisonReport::new(Target::Conjecture, alpha);
    rep.param("n", n);
    rep.param("phi", &phi.label);
    rep.notes.push("EXPLORATORY: numerical exploration only, no claim is asserted".into());
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &m in ms {
        let (v, _) = twisted(&a, phi, m, n).ok_or(CompareError::Precision(n))?;
        let ratio = v.div_u64(n);
        lo = lo.min(ratio.to_f64());
        hi = hi.max(ratio.to_f64());
        rep.rows.push(CompRow::info(&format!("m={m}"), n, ratio));
    }
    rep.rows.push(CompRow::info("min_ratio", n, Real::from_f64(lo, bits)));
    rep.rows.push(CompRow::info("max_ratio", n, Real::from_f64(hi, bits)));
    Ok(rep)
}
