//! Acceptance harness: one PASS/FAIL line per criterion.
//!
//! Criteria 4 and 5 cap N at `ACCEPTANCE_N_CAP` (default 200000) so the run fits on one
//! core; set `ANERGODIC_ACCEPTANCE_FULL=1` to lift the cap.

use std::collections::HashMap;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use anergodic::bounds::{verify_sandwich, BoundsContext, DEPTH_CAP};
use anergodic::cf_engine::{expand, quasiperiods, table_for, verify_determinant};
use anergodic::comparisons::{antisym_scan, exp2_agreement, exp2_scan, lang_compare, lb1, lb1_vs_lb3, lb3};
use anergodic::estimates::estimate_both;
use anergodic::numerics::{Alpha, Policy, Real};
use anergodic::observables::{birkhoff_prefix, direct_bits, orbit_sum, Beta, Observable};
use anergodic::orbit::OrbitContext;
use anergodic::ostrowski::{all_triples, exhaustive_max, represent, violation};
use anergodic::report::Document;
use anergodic::sweep::{quasiperiod_grid, random_periodic};
use anergodic::verdict::Verdict;
use rug::Rational;

/// Criteria whose literal statement is known not to hold; reported but not fatal.
const KNOWN_RED: &[usize] = &[7];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn alpha(s: &str) -> Alpha {
    Alpha::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn c1() -> Outcome {
    let specs = random_periodic(1, 200);
    let mut bad = Vec::new();
    for spec in &specs {
        let t = quasiperiods(expand(&alpha(spec), 40, 512).expect("expand"));
        if !verify_determinant(&t) {
            bad.push(format!("{spec}: determinant"));
            continue;
        }
        let mut prod = Real::one(512);
        for n in 1..=40usize {
            prod = prod.mul(t.a_full(n));
            let qn = Real::from_integer(t.q(n as isize), 512);
            let hi = Real::from_integer(&(t.q(n as isize).clone() + t.q(n as isize - 1)), 512);
            let qs = t.q_slash(n);
            let sandwich = qn.lt(qs) == Some(true) && qs.lt(&hi) == Some(true);
            if !sandwich || !prod.overlaps(qs) {
                bad.push(format!("{spec}: n={n}"));
                break;
            }
        }
    }
    outcome(bad.is_empty(), format!("{} alphas, depth 40, failures: {:?}", specs.len(), bad))
}

fn c2() -> Outcome {
    let mut bad = Vec::new();
    for spec in ["golden", "sqrt2m1", "cf:1,2,[3]", "cf:[3]", "cf:[1,4]"] {
        let t = table_for(&alpha(spec), 2000, 3, 128, DEPTH_CAP).unwrap();
        for n in 1..=2000u64 {
            let rep = represent(&t, n).unwrap();
            let best = exhaustive_max(&t, n).expect("an admissible vector exists");
            let greedy: Vec<u64> = (0..best.len()).map(|r| rep.digit(r as isize)).collect();
            if greedy != best || rep.top() + 1 != best.len() {
                bad.push(format!("{spec} N={n}: greedy {greedy:?} vs {best:?}"));
            }
            if let Some(v) = violation(&rep) {
                bad.push(format!("{spec} N={n}: {v}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("5 alphas x N<=2000, mismatches: {}", bad.len()))
}

fn c3() -> Outcome {
    let mut specs: Vec<String> =
        ["golden", "sqrt2m1", "cf:1,2,[3]", "cf:[3]", "cf:[1,4]", "cf:[2,1]", "cf:[5]"].map(String::from).to_vec();
    specs.extend(random_periodic(3, 3));
    let (mut total, mut fail, mut indet, mut distinct) = (0u64, 0u64, 0u64, 0usize);
    for spec in &specs {
        let a = alpha(spec);
        let t = Arc::new(table_for(&a, 2000, 3, direct_bits(2000, None, 128), DEPTH_CAP).unwrap());
        // a triple's checks depend only on (r, s, t) and the digits from level r up
        let mut seen: HashMap<(usize, u64, u64, Vec<u64>), Verdict> = HashMap::new();
        for n in 1..=2000u64 {
            let ctx = OrbitContext::new(t.clone(), n).unwrap();
            let top = ctx.rep.top();
            for tr in all_triples(&ctx.rep) {
                let key = (tr.r, tr.s, tr.t, (tr.r..=top).map(|u| ctx.rep.digit(u as isize)).collect());
                let v = *seen.entry(key).or_insert_with(|| ctx.check_triple(tr).verdict());
                total += 1;
                match v {
                    Verdict::Fail => fail += 1,
                    Verdict::Indeterminate => indet += 1,
                    _ => {}
                }
            }
        }
        distinct += seen.len();
    }
    let rate = indet as f64 / total as f64;
    outcome(
        fail == 0 && rate < 1e-3,
        format!("10 alphas, {total} (N, triple) pairs ({distinct} distinct), FAIL {fail}, INDETERMINATE rate {rate:.2e}"),
    )
}

struct GridStats {
    cells: u64,
    skipped: u64,
    sandwich_bad: Vec<String>,
    methods_bad: Vec<String>,
}

fn n_cap() -> u64 {
    if std::env::var("ANERGODIC_ACCEPTANCE_FULL").is_ok_and(|v| v == "1") {
        u64::MAX
    } else {
        std::env::var("ACCEPTANCE_N_CAP").ok().and_then(|v| v.parse().ok()).unwrap_or(200_000)
    }
}

fn sandwich_and_methods() -> GridStats {
    let mut specs: Vec<String> = vec!["golden".into(), "sqrt2m1".into(), "cf:1,2,[3]".into()];
    specs.extend(random_periodic(4, 2));
    let betas: [Beta; 3] = [Beta::ONE, "3/2".parse().unwrap(), "2".parse().unwrap()];
    let cap = n_cap();
    let mut st = GridStats { cells: 0, skipped: 0, sandwich_bad: vec![], methods_bad: vec![] };
    for spec in &specs {
        let a = alpha(spec);
        let mut grid: Vec<u64> = (1..=500).collect();
        grid.extend(quasiperiod_grid(&a, 14).unwrap());
        grid.sort_unstable();
        grid.dedup();
        for &n in &grid {
            if n > cap {
                st.skipped += 1;
                continue;
            }
            for beta in betas {
                st.cells += 1;
                let ctx = BoundsContext::new(&a, n, direct_bits(n, Some(beta), 128)).unwrap();
                let rep = verify_sandwich(&ctx, &Observable::theta(beta)).unwrap();
                if rep.verdict() != Verdict::Pass {
                    st.sandwich_bad.push(format!("{spec} N={n} beta={beta}: {}", rep.verdict()));
                }
                let (e, ed) = estimate_both(&ctx, beta).unwrap();
                for r in [&e, &ed] {
                    for c in r.checks.iter().filter(|c| c.verdict != Verdict::Pass) {
                        st.methods_bad.push(format!("{spec} N={n} beta={beta} dual={}: {} {}", r.dual, c.name, c.verdict));
                    }
                }
            }
        }
    }
    st
}

fn grid_note(st: &GridStats) -> String {
    if st.skipped == 0 {
        format!("{} cells (full grid)", st.cells)
    } else {
        format!("{} cells; {} grid N above {} skipped (ANERGODIC_ACCEPTANCE_FULL=1 runs them)", st.cells, st.skipped, n_cap())
    }
}

fn c6() -> Outcome {
    let p = Policy::default();
    let mut bad = Vec::new();
    let mut ratios = Vec::new();
    let mut golden_big = None;
    for spec in ["golden", "sqrt2m1"] {
        for n in [100u64, 1000, 10000] {
            let rep = lang_compare(&alpha(spec), n, &p).unwrap();
            for label in ["theirs", "ours"] {
                if rep.row(label).unwrap().verdict != Verdict::Pass {
                    bad.push(format!("{spec} N={n} {label}"));
                }
            }
            let ratio = rep.row("ratio").unwrap().value.clone();
            ratios.push(format!("{spec}/{n}={:.4}", ratio.to_f64()));
            if spec == "golden" && n == 10000 {
                golden_big = Some(ratio);
            }
        }
    }
    let below_one = golden_big.unwrap().lt(&Real::one(128)) == Some(true);
    outcome(bad.is_empty() && below_one, format!("ratios ours/theirs {}; uppers failing: {:?}", ratios.join(" "), bad))
}

fn c7() -> Outcome {
    let p = Policy::default();
    let mut lines = Vec::new();
    let mut ok = true;

    // LB1 on the N = b_n q_n grid, against the full and the half sum
    let (mut cells, mut full_bad, mut half_bad) = (0, 0, 0);
    for spec in ["golden", "sqrt2m1"] {
        let a = alpha(spec);
        let t = table_for(&a, 1, 17, 128, DEPTH_CAP).unwrap();
        for r in 1..=14isize {
            let q = t.qu(r);
            for b in 1..=t.a(r as usize + 1) {
                let n = b * q;
                let ctx = BoundsContext::new(&a, n, direct_bits(n, Some(Beta::ONE), 128)).unwrap();
                if ctx.b(ctx.n() as isize) != b {
                    continue;
                }
                let Some(l1) = lb1(&ctx) else { continue };
                let full = orbit_sum(ctx.table().alpha(), &Observable::recip_nearest(), 1, n).unwrap();
                cells += 1;
                if l1.lt(&full) != Some(true) {
                    full_bad += 1;
                }
                if l1.le(&full.div_u64(2)) != Some(true) {
                    half_bad += 1;
                }
            }
        }
    }
    ok &= half_bad == 0 && full_bad == 0;
    lines.push(format!(
        "LB1 <= half sum fails at {half_bad}/{cells} grid points; LB1 < full sum fails at {full_bad}/{cells}"
    ));

    let l3 = lb3(2, 256);
    let exact = l3.contains_rational(&Rational::from(4)) && l3.width() < 1e-70;
    ok &= exact;
    lines.push(format!("LB3(2) = 4: {exact}"));

    let (mut grid, mut grid_bad, mut inner) = (0, 0, 0);
    for spec in ["sqrt2m1", "cf:[3]", "cf:[4]", "cf:[2,1]", "cf:[1,5]"] {
        let (c, i) = lb1_vs_lb3(&alpha(spec), 1_000_000, &p).unwrap();
        grid += c.len();
        grid_bad += c.iter().filter(|c| c.verdict != Verdict::Pass).count();
        inner += i;
    }
    ok &= grid > 0 && grid_bad == 0;
    lines.push(format!("LB1 > LB3 at N = b_n q_n: {grid_bad} failures in {grid} cells (info: {inner} N strictly inside (b_n q_n, (b_n+1) q_n) violate it)"));

    let mut dk_bad = 0;
    for spec in ["golden", "sqrt2m1"] {
        let a = alpha(spec);
        let t = table_for(&a, 2000, 3, 192, DEPTH_CAP).unwrap();
        let pre = birkhoff_prefix(t.alpha(), &Observable::psi_half(), 2000).unwrap();
        let ln2 = Real::ln2(192);
        for n in 1..=2000u64 {
            let d = represent(&t, n).unwrap().digit_sum();
            let dev = pre[(n - 1) as usize].sub(&ln2.mul_u64(2 * n)).abs();
            if dev.le(&Real::from_u64(2 * d, 192)) != Some(true) {
                dk_bad += 1;
            }
        }
    }
    ok &= dk_bad == 0;
    lines.push(format!("Denjoy-Koksma band for psi, N <= 2000: {dk_bad} failures"));
    outcome(ok, lines.join("; "))
}

fn c8() -> Outcome {
    let p = Policy::default();
    let g = alpha("golden");
    let a = antisym_scan(&g, &Observable::cot_pi(), 14, &p).unwrap();
    let e = exp2_scan(&g, 20, &p).unwrap();
    let c = exp2_agreement(&g, 512, &p).unwrap();
    let env = |r: &anergodic::comparisons::ComparisonReport, label: &str| {
        let row = r.row(label).unwrap();
        let reference = row.reference.as_ref().map(|x| x.to_f64()).unwrap_or(f64::NAN);
        (row.verdict, row.value.to_f64(), reference)
    };
    let (va, la, ra) = env(&a, "envelope");
    let (ve, le_, re) = env(&e, "envelope");
    let (vc, _, _) = env(&c, "agreement");
    outcome(
        [va, ve, vc].iter().all(|v| *v == Verdict::Pass),
        format!(
            "(a) antisym envelope heuristic late {la:.4} vs 3*early {ra:.4}: {va}; (b) Exp2 late {le_:.4} vs 3*early {re:.4}: {ve}; (c) geometric vs double sum N<=512: {vc}"
        ),
    )
}

fn c9() -> Outcome {
    let dir = std::env::temp_dir().join(format!("anergodic-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("sweep.cfg");
    std::fs::write(
        &cfg,
        "alphas = golden; sqrt2m1; cf:1,2,[3]; random:4\nns = 1..60:7; quasiperiods:5\nbetas = 1; 3/2\nphis = theta; theta_bar\nchecks = sandwich; methods; lower; epsilon; parity; priorart\nseed = 11\n",
    )
    .unwrap();
    let run = |fmt: &str| {
        Command::new(env!("CARGO_BIN_EXE_anergodic"))
            .args(["sweep", "--config", cfg.to_str().unwrap(), "--format", fmt])
            .output()
            .expect("spawn")
    };
    let (a, b) = (run("csv"), run("csv"));
    let (j1, j2) = (run("json"), run("json"));
    let same = a.stdout == b.stdout && j1.stdout == j2.stdout && a.status.code() == Some(0);
    let doc: Document = serde_json::from_slice(&j1.stdout).unwrap();
    let round = serde_json::to_vec_pretty(&doc).unwrap().into_iter().chain(*b"\n").collect::<Vec<u8>>() == j1.stdout;
    std::fs::remove_dir_all(&dir).ok();
    outcome(
        same && round,
        format!("{} rows; csv and json byte-identical across runs: {same}; json round-trip: {round}", doc.rows.len()),
    )
}

fn report(k: usize, start: Instant, o: &Outcome, failed: &mut Vec<usize>) {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("criterion {k}: {tag} [{:.1}s] {}", start.elapsed().as_secs_f64(), o.detail);
    if !o.pass {
        failed.push(k);
    }
}

fn main() -> ExitCode {
    let mut failed = Vec::new();
    let t = Instant::now();
    report(1, t, &c1(), &mut failed);
    let t = Instant::now();
    report(2, t, &c2(), &mut failed);
    let t = Instant::now();
    report(3, t, &c3(), &mut failed);
    let t = Instant::now();
    let st = sandwich_and_methods();
    let note = grid_note(&st);
    let o4 = outcome(st.sandwich_bad.is_empty(), format!("{note}; non-PASS: {:?}", st.sandwich_bad));
    let o5 = outcome(st.methods_bad.is_empty(), format!("{note}; non-PASS: {:?}", st.methods_bad));
    report(4, t, &o4, &mut failed);
    report(5, t, &o5, &mut failed);
    let t = Instant::now();
    report(6, t, &c6(), &mut failed);
    let t = Instant::now();
    report(7, t, &c7(), &mut failed);
    let t = Instant::now();
    report(8, t, &c8(), &mut failed);
    let t = Instant::now();
    report(9, t, &c9(), &mut failed);

    let unexpected: Vec<_> = failed.iter().filter(|k| !KNOWN_RED.contains(k)).collect();
    for k in failed.iter().filter(|k| KNOWN_RED.contains(k)) {
        println!("note: criterion {k} is a known red; see README");
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
