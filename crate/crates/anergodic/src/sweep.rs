//! Grid sweeps driven by a `key = value` configuration file.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Rational;

use crate::bounds::{verify_sandwich, BoundsContext, DEPTH_CAP};
use crate::cf_engine::table_for;
use crate::commands::CommandError;
use crate::comparisons::{lang_compare, sum_nearest_bounds};
use crate::estimates::estimate;
use crate::numerics::{Alpha, Policy};
use crate::observables::{direct_bits, Beta, Observable};
use crate::orbit::OrbitContext;
use crate::ostrowski::all_triples;
use crate::report::{Format, Kind, Table};
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Sandwich,
    Methods,
    Lower,
    Epsilon,
    Parity,
    Priorart,
}

impl Check {
    pub fn as_str(self) -> &'static str {
        match self {
            Check::Sandwich => "sandwich",
            Check::Methods => "methods",
            Check::Lower => "lower",
            Check::Epsilon => "epsilon",
            Check::Parity => "parity",
            Check::Priorart => "priorart",
        }
    }

    fn parse(s: &str) -> Option<Check> {
        Some(match s {
            "sandwich" => Check::Sandwich,
            "methods" => Check::Methods,
            "lower" => Check::Lower,
            "epsilon" => Check::Epsilon,
            "parity" => Check::Parity,
            "priorart" => Check::Priorart,
            _ => return None,
        })
    }

    /// Checks that depend on beta and phi.
    fn per_observable(self) -> bool {
        matches!(self, Check::Sandwich | Check::Methods | Check::Lower)
    }
}

/// One term of the `ns` grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NTerm {
    List(Vec<u64>),
    Range { lo: u64, hi: u64, stride: u64 },
    /// `q_r, q_r +- 1` and `b q_r` for `b <= a_{r+1}`, for `r <= level`.
    Quasiperiods(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub alphas: Vec<String>,
    pub ns: Vec<NTerm>,
    pub betas: Vec<Beta>,
    pub phis: Vec<String>,
    pub checks: Vec<Check>,
    pub output: Option<String>,
    pub format: Format,
    pub seed: u64,
}

fn usage(msg: impl Into<String>) -> CommandError {
    CommandError::Usage(msg.into())
}

fn items(v: &str) -> Vec<String> {
    v.split(';').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn parse_n_term(s: &str) -> Result<NTerm, CommandError> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| usage(format!("bad integer `{t}` in ns")));
    if let Some(level) = s.strip_prefix("quasiperiods:") {
        return Ok(NTerm::Quasiperiods(num(level)? as usize));
    }
    if let Some((range, stride)) = s.split_once("..") {
        let (hi, stride) = match stride.split_once(':') {
            Some((h, st)) => (h, num(st)?),
            None => (stride, 1),
        };
        let (lo, hi) = (num(range)?, num(hi)?);
        if stride == 0 || lo == 0 || lo > hi {
            return Err(usage(format!("bad range `{s}`")));
        }
        return Ok(NTerm::Range { lo, hi, stride });
    }
    let v = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
    if v.contains(&0) {
        return Err(usage("N must be positive"));
    }
    Ok(NTerm::List(v))
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<SweepConfig, CommandError> {
        let mut cfg = SweepConfig {
            alphas: vec![],
            ns: vec![],
            betas: vec![Beta::ONE],
            phis: vec!["theta".into()],
            checks: vec![],
            output: None,
            format: Format::Csv,
            seed: 0,
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| usage(format!("line {}: expected key = value", i + 1)))?;
            let v = v.trim();
            match k.trim() {
                "alphas" => cfg.alphas = items(v),
                "ns" => cfg.ns = items(v).iter().map(|s| parse_n_term(s)).collect::<Result<_, _>>()?,
                "betas" => {
                    cfg.betas = items(v)
                        .iter()
                        .map(|s| s.parse::<Beta>().map_err(|e| usage(e.to_string())))
                        .collect::<Result<_, _>>()?
                }
                "phis" => cfg.phis = items(v),
                "checks" => {
                    cfg.checks = items(v)
                        .iter()
                        .map(|s| Check::parse(s).ok_or_else(|| usage(format!("unknown check `{s}`"))))
                        .collect::<Result<_, _>>()?
                }
                "output" => cfg.output = Some(v.to_string()),
                "format" => cfg.format = v.parse().map_err(usage)?,
                "seed" => cfg.seed = v.parse().map_err(|_| usage("seed must be an integer"))?,
                other => return Err(usage(format!("line {}: unknown key `{other}`", i + 1))),
            }
        }
        if cfg.alphas.is_empty() || cfg.ns.is_empty() || cfg.betas.is_empty() || cfg.phis.is_empty() || cfg.checks.is_empty() {
            return Err(usage("alphas, ns, betas, phis and checks must be non-empty"));
        }
        Ok(cfg)
    }
}

/// `count` random periodic continued fractions with small digits, as `cf:` specs.
pub fn random_periodic(seed: u64, count: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let pre: Vec<String> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(1..=5u64).to_string()).collect();
            let per: Vec<String> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(1..=5u64).to_string()).collect();
            let mut s = String::from("cf:");
            for p in &pre {
                s.push_str(p);
                s.push(',');
            }
            s.push('[');
            s.push_str(&per.join(","));
            s.push(']');
            s
        })
        .collect()
}

/// Expands `random:K` entries using the seed.
pub fn expand_alphas(cfg: &SweepConfig) -> Result<Vec<Alpha>, CommandError> {
    let mut out = Vec::new();
    let mut salt = 0u64;
    for a in &cfg.alphas {
        if let Some(k) = a.strip_prefix("random:") {
            let k: usize = k.parse().map_err(|_| usage(format!("bad count in `{a}`")))?;
            for spec in random_periodic(cfg.seed.wrapping_add(salt), k) {
                out.push(Alpha::parse(&spec).map_err(|e| usage(e.to_string()))?);
            }
            salt += 1;
        } else {
            out.push(Alpha::parse(a).map_err(|e| usage(format!("{a}: {e}")))?);
        }
    }
    Ok(out)
}

/// The grid `{q_r, q_r +- 1, b q_r : b <= a_{r+1}}` for `1 <= r <= level`.
pub fn quasiperiod_grid(alpha: &Alpha, level: usize) -> Result<Vec<u64>, CommandError> {
    let t = table_for(alpha, 1, level + 2, 64, DEPTH_CAP)?;
    let top = t.qu(level as isize);
    let mut s = BTreeSet::new();
    for r in 1..=level {
        let q = t.qu(r as isize);
        s.insert(q);
        s.insert(q + 1);
        if q > 1 {
            s.insert(q - 1);
        }
        for b in 2..=t.a(r + 1) {
            if b * q > top {
                break;
            }
            s.insert(b * q);
        }
    }
    Ok(s.into_iter().filter(|&n| n <= top + 1).collect())
}

pub fn expand_ns(terms: &[NTerm], alpha: &Alpha) -> Result<Vec<u64>, CommandError> {
    let mut s = BTreeSet::new();
    for t in terms {
        match t {
            NTerm::List(v) => s.extend(v.iter().copied()),
            NTerm::Range { lo, hi, stride } => s.extend((*lo..=*hi).step_by(*stride as usize)),
            NTerm::Quasiperiods(level) => s.extend(quasiperiod_grid(alpha, *level)?),
        }
    }
    Ok(s.into_iter().collect())
}

fn phi_variants(name: &str, betas: &[Beta]) -> Vec<String> {
    match name {
        "theta" | "theta_bar" | "antisym_theta" => betas.iter().map(|b| format!("{name}:{b}")).collect(),
        _ => vec![name.to_string()],
    }
}

#[derive(Clone, Debug)]
struct Cell {
    alpha: usize,
    n: u64,
    check: Check,
    phi: Option<String>,
}

#[derive(Clone, Debug)]
struct Outcome {
    verdict: Verdict,
    detail: String,
}

fn run_cell(alpha: &Alpha, n: u64, check: Check, phi: Option<&str>, policy: &Policy) -> Outcome {
    match eval_cell(alpha, n, check, phi, policy) {
        Ok(o) => o,
        Err(e) => Outcome { verdict: Verdict::Indeterminate, detail: format!("error: {e}") },
    }
}

fn eval_cell(alpha: &Alpha, n: u64, check: Check, phi: Option<&str>, policy: &Policy) -> Result<Outcome, CommandError> {
    let obs: Option<Observable> = phi.map(|p| p.parse()).transpose()?;
    let beta = obs.as_ref().and_then(|o| o.beta()).unwrap_or(Beta::ONE);
    let bits = direct_bits(n, Some(beta), policy.initial_bits);
    match check {
        Check::Sandwich => {
            let phi = obs.expect("per-observable");
            let ctx = BoundsContext::new(alpha, n, bits)?;
            let rep = verify_sandwich(&ctx, &phi)?;
            let bad: Vec<String> = rep.rows.iter().filter(|r| r.verdict != Verdict::Pass).map(|r| format!("r={}", r.r)).collect();
            Ok(Outcome { verdict: rep.verdict(), detail: bad.join(" ") })
        }
        Check::Methods | Check::Lower => {
            let phi = obs.expect("per-observable");
            let ctx = BoundsContext::new(alpha, n, bits)?;
            let dual = phi.label.starts_with("theta_bar");
            let rep = estimate(&ctx, beta, dual)?;
            let want_lower = check == Check::Lower;
            let mut v = Verdict::Pass;
            let mut bad = Vec::new();
            for c in &rep.checks {
                if c.name.starts_with("lower") == want_lower {
                    v = v.and(c.verdict);
                    if c.verdict != Verdict::Pass {
                        bad.push(c.name.clone());
                    }
                }
            }
            Ok(Outcome { verdict: v, detail: bad.join(" ") })
        }
        Check::Epsilon | Check::Parity => {
            let t = Arc::new(table_for(alpha, n, 3, bits, DEPTH_CAP)?);
            let ctx = OrbitContext::new(t, n)?;
            let (mut fail, mut indet, mut total) = (0u64, 0u64, 0u64);
            for tr in all_triples(&ctx.rep) {
                let c = ctx.check_triple(tr);
                let v = if check == Check::Epsilon {
                    Verdict::all([c.bracket, c.renorm, c.sign, c.backsolve])
                } else {
                    c.parity.and(c.envelope)
                };
                total += 1;
                match v {
                    Verdict::Fail => fail += 1,
                    Verdict::Indeterminate => indet += 1,
                    _ => {}
                }
            }
            let verdict = if fail > 0 {
                Verdict::Fail
            } else if indet > 0 {
                Verdict::Indeterminate
            } else {
                Verdict::Pass
            };
            Ok(Outcome { verdict, detail: format!("triples={total} fail={fail} indeterminate={indet}") })
        }
        Check::Priorart => {
            let l = lang_compare(alpha, n, policy)?;
            let s = sum_nearest_bounds(alpha, n, policy)?;
            let ratio = l.row("ratio").map(|r| format!("lang_ratio={:.6}", r.value.to_f64())).unwrap_or_default();
            Ok(Outcome { verdict: l.verdict().and(s.verdict()), detail: ratio })
        }
    }
}

pub fn sweep_columns() -> Table {
    Table::new(&[
        ("alpha", Kind::Plain),
        ("n", Kind::Plain),
        ("check", Kind::Plain),
        ("phi", Kind::Plain),
        ("verdict", Kind::Plain),
        ("detail", Kind::Plain),
    ])
}

/// Runs every grid cell in parallel; rows come back in grid order.
pub fn run_sweep(cfg: &SweepConfig, policy: &Policy) -> Result<Table, CommandError> {
    let alphas = expand_alphas(cfg)?;
    let mut cells = Vec::new();
    for (ai, a) in alphas.iter().enumerate() {
        for n in expand_ns(&cfg.ns, a)? {
            for &check in &cfg.checks {
                if check.per_observable() {
                    for name in &cfg.phis {
                        for p in phi_variants(name, &cfg.betas) {
                            let o: Observable = p.parse().map_err(|e: crate::observables::ObsError| usage(e.to_string()))?;
                            let ok = match check {
                                Check::Sandwich => o.is_decreasing(),
                                _ => o.is_theta() || p.starts_with("theta_bar"),
                            };
                            if ok {
                                cells.push(Cell { alpha: ai, n, check, phi: Some(p) });
                            }
                        }
                    }
                } else {
                    cells.push(Cell { alpha: ai, n, check, phi: None });
                }
            }
        }
    }
    let outcomes: Vec<Outcome> =
        cells.par_iter().map(|c| run_cell(&alphas[c.alpha], c.n, c.check, c.phi.as_deref(), policy)).collect();
    let mut tab = sweep_columns();
    for (c, o) in cells.iter().zip(outcomes) {
        tab.push(vec![
            alphas[c.alpha].to_string().into(),
            c.n.into(),
            c.check.as_str().into(),
            c.phi.clone().unwrap_or_else(|| "-".into()).into(),
            o.verdict.into(),
            o.detail.into(),
        ]);
    }
    Ok(tab)
}

/// Parses a rational `p/q` or integer.
pub fn parse_rational(s: &str) -> Result<Rational, CommandError> {
    s.trim().parse::<Rational>().map_err(|_| usage(format!("bad rational `{s}`")))
}
