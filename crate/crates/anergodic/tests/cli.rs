//! End-to-end runs of the binary.

use std::process::{Command, Output};

use anergodic::report::Document;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anergodic")).args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn cf_ten_rows() {
    let o = run(&["cf", "--alpha", "golden", "--depth", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<_> = s.lines().collect();
    assert_eq!(lines[0], "r,a_r,p_r,q_r,q_slash_r.lo,q_slash_r.hi");
    assert_eq!(lines.len(), 11);
    assert!(lines[10].starts_with("10,1,55,89,"));
}

#[test]
fn bounds_golden_ten() {
    let o = run(&["bounds", "--alpha", "golden", "--phi", "theta:1", "--n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().skip(1).all(|l| l.ends_with(",PASS")));
    assert!(s.lines().any(|l| l.starts_with("total,")));
}

#[test]
fn compare_lang_json() {
    let o = run(&["compare", "--target", "lang", "--alpha", "golden", "--n", "100", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let doc: Document = serde_json::from_str(&s).unwrap();
    assert_eq!(doc.meta.command, "compare");
    assert_eq!(doc.meta.alpha, "golden");
    let labels: Vec<_> = doc.rows.iter().map(|r| r["label"].as_str().unwrap().to_string()).collect();
    for want in ["theirs", "ours", "ratio", "direct"] {
        assert!(labels.iter().any(|l| l == want), "{want} missing");
    }
    assert_eq!(serde_json::to_string_pretty(&doc).unwrap() + "\n", s);
}

#[test]
fn every_subcommand_runs() {
    for args in [
        &["ostrowski", "--alpha", "sqrt2m1", "--n", "7"][..],
        &["orbit", "--alpha", "golden", "--n", "10"],
        &["sum", "--alpha", "golden", "--phi", "cot", "--n", "1000"],
        &["estimate", "--alpha", "cf:1,2,[3]", "--n", "300", "--beta", "3/2", "--dual"],
        &["compare", "--target", "beresnevich", "--alpha", "golden", "--n", "89"],
        &["compare", "--target", "antisym", "--alpha", "golden", "--n-max", "10"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn usage_errors_exit_three() {
    for args in [
        &["cf"][..],
        &["bounds", "--alpha", "golden"],
        &["cf", "--alpha", "1/2"],
        &["estimate", "--alpha", "golden", "--n", "5", "--beta", "1/2"],
        &["compare", "--alpha", "golden", "--target", "nobody"],
        &["nonsense"],
        &["sweep"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(3), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn sweep_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("anergodic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("grid.cfg");
    std::fs::write(
        &cfg,
        "alphas = golden; random:3\nns = 1..40:3; quasiperiods:6\nbetas = 1; 2\nphis = theta; theta_bar\nchecks = sandwich; methods; lower; epsilon; parity\nseed = 5\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let a = run(&["sweep", "--config", c]);
    let b = run(&["sweep", "--config", c]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let other = run(&["sweep", "--config", c, "--seed", "6"]);
    assert_ne!(a.stdout, other.stdout);
    let out = dir.join("out.json");
    let j = run(&["sweep", "--config", c, "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(j.status.code(), Some(0));
    let doc: Document = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.rows.len() + 1, stdout(&a).lines().count());
    std::fs::remove_dir_all(&dir).ok();
}
