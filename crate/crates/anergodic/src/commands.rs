//! Table builders behind each CLI subcommand.

use std::sync::Arc;

use rug::Rational;
use thiserror::Error;

use crate::bounds::{verify_sandwich, BoundsContext, BoundsError, DEPTH_CAP};
use crate::cf_engine::{expand, quasiperiods, table_for, CfError};
use crate::comparisons::{
    antisym_scan, conjecture_scan, exp2_agreement, exp2_scan, lang_compare, lb1_vs_lb3, partial_birkhoff_lipschitz,
    sum_nearest_bounds, weighted_series, CompareError, ComparisonReport,
};
use crate::estimates::{estimate, EstimateReport};
use crate::numerics::{Alpha, Policy, Real};
use crate::observables::{birkhoff_sum_direct, direct_bits, Beta, ObsError, Observable};
use crate::orbit::{OrbitContext, OrbitError};
use crate::ostrowski::{all_triples, represent, violation, OstrowskiError};
use crate::report::{Cell, Kind, Table};
use crate::verdict::Verdict;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Ostrowski(#[from] OstrowskiError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Obs(#[from] ObsError),
    #[error(transparent)]
    Compare(#[from] CompareError),
}

impl CommandError {
    /// Usage errors exit 3; numerical failures that leave a claim undecided exit 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Usage(_) => 3,
            CommandError::Compare(CompareError::Input(_)) => 3,
            CommandError::Obs(ObsError::Beta(_) | ObsError::Name(_)) => 3,
            CommandError::Bounds(BoundsError::NotDecreasing | BoundsError::Empty) => 3,
            _ => 1,
        }
    }
}

/// A table plus free-form notes for the JSON meta block.
#[derive(Clone, Debug, Default)]
pub struct Output {
    pub table: Table,
    pub notes: Vec<String>,
}

impl Output {
    pub fn verdict(&self) -> Verdict {
        self.table.verdict()
    }
}

fn out(table: Table) -> Output {
    Output { table, notes: vec![] }
}

/// `r, a_r, p_r, q_r, q'_r` for `1 <= r <= depth`.
pub fn cf_table(alpha: &Alpha, depth: usize, bits: u32) -> Result<Output, CommandError> {
    if depth == 0 {
        return Err(CommandError::Usage("--depth must be positive".into()));
    }
    let t = quasiperiods(expand(alpha, depth + 2, bits)?);
    let mut tab = Table::new(&[
        ("r", Kind::Plain),
        ("a_r", Kind::Plain),
        ("p_r", Kind::Plain),
        ("q_r", Kind::Plain),
        ("q_slash_r", Kind::Interval),
    ]);
    for r in 1..=depth {
        tab.push(vec![
            r.into(),
            t.a(r).into(),
            t.p(r as isize).to_string().into(),
            t.q(r as isize).to_string().into(),
            t.q_slash(r).into(),
        ]);
    }
    Ok(out(tab))
}

/// Greedy Ostrowski digits of `N`.
pub fn ostrowski_table(alpha: &Alpha, n: u64, bits: u32) -> Result<Output, CommandError> {
    let t = table_for(alpha, n, 3, bits, DEPTH_CAP)?;
    let rep = represent(&t, n)?;
    let mut tab = Table::new(&[
        ("r", Kind::Plain),
        ("q_r", Kind::Plain),
        ("a_next", Kind::Plain),
        ("b_r", Kind::Plain),
        ("verdict", Kind::Plain),
    ]);
    let v = if violation(&rep).is_none() { Verdict::Pass } else { Verdict::Fail };
    for r in (0..rep.b.len()).rev() {
        tab.push(vec![r.into(), rep.q[r].into(), rep.a_next[r].into(), rep.b[r].into(), v.into()]);
    }
    let mut o = out(tab);
    o.notes.push(format!("digit_sum={}", rep.digit_sum()));
    if let Some(msg) = violation(&rep) {
        o.notes.push(msg);
    }
    Ok(o)
}

/// Per-index rigidity checks for every canonical triple up to `N`.
pub fn orbit_table(alpha: &Alpha, n: u64, bits: u32) -> Result<Output, CommandError> {
    let t = Arc::new(table_for(alpha, n, 3, bits, DEPTH_CAP)?);
    let ctx = OrbitContext::new(t, n)?;
    let mut tab = Table::new(&[
        ("m", Kind::Plain),
        ("r", Kind::Plain),
        ("s", Kind::Plain),
        ("t", Kind::Plain),
        ("alpha_rst", Kind::Interval),
        ("bracket", Kind::Plain),
        ("renorm", Kind::Plain),
        ("sign", Kind::Plain),
        ("parity", Kind::Plain),
        ("envelope", Kind::Plain),
        ("backsolve", Kind::Plain),
        ("verdict", Kind::Plain),
    ]);
    for (i, tr) in all_triples(&ctx.rep).into_iter().enumerate() {
        let c = ctx.check_triple(tr);
        tab.push(vec![
            (i as u64 + 1).into(),
            tr.r.into(),
            tr.s.into(),
            tr.t.into(),
            ctx.alpha_rst(tr).into(),
            c.bracket.into(),
            c.renorm.into(),
            c.sign.into(),
            c.parity.into(),
            c.envelope.into(),
            c.backsolve.into(),
            c.verdict().into(),
        ]);
    }
    let mut o = out(tab);
    o.notes.push(format!("pigeonhole={}", ctx.pigeonhole()));
    Ok(o)
}

/// Direct enclosure of `S_N phi`.
pub fn sum_table(alpha: &Alpha, phi: &Observable, n: u64, policy: &Policy) -> Result<Output, CommandError> {
    let s = birkhoff_sum_direct(alpha, phi, n, policy.target_width(), policy)?;
    let mut tab = Table::new(&[("phi", Kind::Plain), ("n", Kind::Plain), ("sum", Kind::Interval), ("verdict", Kind::Plain)]);
    tab.push(vec![phi.label.clone().into(), n.into(), s.into(), Verdict::Pass.into()]);
    Ok(out(tab))
}

pub fn bounds_context(alpha: &Alpha, n: u64, phi: &Observable, policy: &Policy) -> Result<BoundsContext, CommandError> {
    let bits = direct_bits(n, phi.beta().or(Some(Beta::ONE)), policy.initial_bits);
    Ok(BoundsContext::new(alpha, n, bits)?)
}

/// Per-level sandwich rows plus the aggregate row.
pub fn bounds_table(alpha: &Alpha, phi: &Observable, n: u64, policy: &Policy) -> Result<Output, CommandError> {
    let ctx = bounds_context(alpha, n, phi, policy)?;
    let rep = verify_sandwich(&ctx, phi)?;
    let mut tab = Table::new(&[
        ("r", Kind::Plain),
        ("b_r", Kind::Plain),
        ("q_r", Kind::Plain),
        ("lower", Kind::Interval),
        ("segment", Kind::Interval),
        ("upper", Kind::Interval),
        ("verdict", Kind::Plain),
    ]);
    for row in &rep.rows {
        tab.push(vec![
            row.r.to_string().into(),
            row.b.into(),
            row.q.into(),
            (&row.lower).into(),
            (&row.segment).into(),
            (&row.upper).into(),
            row.verdict.into(),
        ]);
    }
    tab.push(vec![
        "total".into(),
        Cell::Empty,
        Cell::Empty,
        (&rep.lower_total).into(),
        (&rep.direct).into(),
        (&rep.upper_total).into(),
        rep.total_verdict.into(),
    ]);
    Ok(out(tab))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    A,
    B,
    C,
    All,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Method, String> {
        match s {
            "A" | "a" => Ok(Method::A),
            "B" | "b" => Ok(Method::B),
            "C" | "c" => Ok(Method::C),
            "all" => Ok(Method::All),
            _ => Err(format!("unknown method `{s}` (A|B|C|all)")),
        }
    }
}

fn keep(method: Method, name: &str) -> bool {
    let tag = |m: &str| name.ends_with(&format!("_{m}")) || name.contains(&format!("_{m}_"));
    match method {
        Method::All => true,
        Method::A => !(tag("b") || tag("c")),
        Method::B => !(tag("a") || tag("c")),
        Method::C => !(tag("a") || tag("b")),
    }
}

pub fn estimate_rows(rep: &EstimateReport, method: Method) -> Table {
    let mut tab = Table::new(&[
        ("observable", Kind::Plain),
        ("item", Kind::Plain),
        ("value", Kind::Interval),
        ("verdict", Kind::Plain),
    ]);
    let obs = if rep.dual { "theta_bar" } else { "theta" };
    let mut vals: Vec<(&str, Option<&Real>)> = vec![
        ("s1", Some(&rep.s1)),
        ("s2", Some(&rep.s2)),
        ("x2", Some(&rep.x2)),
        ("s3_a", Some(&rep.s3_a)),
        ("s3_b", Some(&rep.s3_b)),
        ("s3_c", Some(&rep.s3_c)),
        ("s3_c_prime", rep.s3_c_prime.as_ref()),
        ("total_a", Some(&rep.total_a)),
        ("total_b", Some(&rep.total_b)),
        ("total_c", Some(&rep.total_c)),
        ("total_c_prime", rep.total_c_prime.as_ref()),
        ("chain", Some(&rep.chain)),
        ("lower_single", rep.lower_single.as_ref()),
        ("lower_symmetric", rep.lower_symmetric.as_ref()),
        ("direct", Some(&rep.direct)),
        ("direct_symmetric", rep.direct_symmetric.as_ref()),
    ];
    vals.retain(|(n, v)| v.is_some() && keep(method, n));
    for (name, v) in vals {
        tab.push(vec![obs.into(), name.into(), v.cloned().into(), Cell::Empty]);
    }
    for c in &rep.checks {
        if keep(method, &c.name) {
            tab.push(vec![obs.into(), format!("check:{}", c.name).into(), Cell::Empty, c.verdict.into()]);
        }
    }
    tab
}

/// Estimate report for `theta^beta` and, when `dual`, for `theta_bar^beta` too.
pub fn estimate_table(alpha: &Alpha, beta: Beta, n: u64, method: Method, dual: bool, policy: &Policy) -> Result<Output, CommandError> {
    let bits = direct_bits(n, Some(beta), policy.initial_bits);
    let ctx = BoundsContext::new(alpha, n, bits)?;
    let rep = estimate(&ctx, beta, false)?;
    let mut tab = estimate_rows(&rep, method);
    let mut o = Output::default();
    o.notes.push(format!("best_method={}", rep.best_method()));
    if dual {
        tab.extend(estimate_rows(&estimate(&ctx, beta, true)?, method));
    }
    o.table = tab;
    Ok(o)
}

pub fn comparison_rows(rep: &ComparisonReport) -> Table {
    let mut tab = Table::new(&[
        ("target", Kind::Plain),
        ("label", Kind::Plain),
        ("role", Kind::Plain),
        ("n", Kind::Plain),
        ("value", Kind::Interval),
        ("reference", Kind::Interval),
        ("verdict", Kind::Plain),
    ]);
    for r in &rep.rows {
        let role = serde_json::to_value(r.role).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        tab.push(vec![
            rep.target.as_str().into(),
            r.label.clone().into(),
            role.into(),
            r.n.into(),
            (&r.value).into(),
            r.reference.clone().into(),
            r.verdict.into(),
        ]);
    }
    tab
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareTarget {
    Lang,
    Beresnevich,
    Sinai,
    Antisym,
    Weighted,
    Conjecture,
}

impl std::str::FromStr for CompareTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<CompareTarget, String> {
        Ok(match s {
            "lang" => CompareTarget::Lang,
            "beresnevich" => CompareTarget::Beresnevich,
            "sinai" => CompareTarget::Sinai,
            "antisym" => CompareTarget::Antisym,
            "weighted" => CompareTarget::Weighted,
            "conjecture" => CompareTarget::Conjecture,
            _ => return Err(format!("unknown target `{s}` (lang|beresnevich|sinai|antisym|weighted|conjecture)")),
        })
    }
}

/// Parameters for `compare`; unset values fall back to per-target defaults.
#[derive(Clone, Debug, Default)]
pub struct CompareArgs {
    pub n: Option<u64>,
    pub n_max: Option<u64>,
    pub gamma: Option<Rational>,
    pub phi: Option<Observable>,
}

pub fn compare_table(target: CompareTarget, alpha: &Alpha, args: &CompareArgs, policy: &Policy) -> Result<Output, CommandError> {
    let need_n = || args.n.ok_or_else(|| CommandError::Usage("--n is required for this target".into()));
    let phi = args.phi.clone().unwrap_or_else(Observable::cot_pi);
    let mut reports = Vec::new();
    let mut o = Output::default();
    match target {
        CompareTarget::Lang => reports.push(lang_compare(alpha, need_n()?, policy)?),
        CompareTarget::Beresnevich => {
            let n = need_n()?;
            reports.push(sum_nearest_bounds(alpha, n, policy)?);
            if let Some(cap) = args.n_max {
                let (cells, inner) = lb1_vs_lb3(alpha, cap, policy)?;
                for c in cells {
                    o.notes.push(format!("lb1>lb3 N={} q_n={} b_n={}: {}", c.n_value, c.q_n, c.b_n, c.verdict));
                }
                o.notes.push(format!("lb1<=lb3 inside (b_n q_n, (b_n+1) q_n): {inner} values of N"));
            }
        }
        CompareTarget::Sinai => {
            let n_max = args.n_max.unwrap_or(20) as usize;
            reports.push(exp2_scan(alpha, n_max, policy)?);
            reports.push(exp2_agreement(alpha, args.n.unwrap_or(64).min(512), policy)?);
            let t = table_for(alpha, 1, n_max.min(12) + 2, 64, DEPTH_CAP)?;
            let q = t.qu(n_max.min(12) as isize);
            reports.push(partial_birkhoff_lipschitz(alpha, q, q, &phi, policy)?);
        }
        CompareTarget::Antisym => {
            let k = args.n_max.unwrap_or(14) as u32;
            if k > 24 {
                return Err(CommandError::Usage("--n-max is the dyadic exponent for antisym (at most 24)".into()));
            }
            reports.push(antisym_scan(alpha, &phi, k, policy)?);
        }
        CompareTarget::Weighted => {
            let g = args.gamma.clone().unwrap_or_else(|| Rational::from(1));
            reports.push(weighted_series(alpha, &phi, &g, &Rational::from(1), need_n()?, policy)?);
        }
        CompareTarget::Conjecture => {
            let m_max = args.n_max.unwrap_or(64);
            let ms: Vec<u64> = (1..=m_max).collect();
            let n = match args.n {
                Some(n) => n,
                None => table_for(alpha, 1, 14, 64, DEPTH_CAP)?.qu(12),
            };
            reports.push(conjecture_scan(alpha, &ms, n, &phi, policy)?);
        }
    }
    let mut tab: Option<Table> = None;
    for r in &reports {
        o.notes.extend(r.notes.iter().cloned());
        let t = comparison_rows(r);
        match &mut tab {
            None => tab = Some(t),
            Some(acc) => acc.extend(t),
        }
    }
    o.table = tab.unwrap_or_default();
    Ok(o)
}
