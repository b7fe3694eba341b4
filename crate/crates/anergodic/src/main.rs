use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rug::Rational;

use anergodic::commands::{
    bounds_table, cf_table, compare_table, estimate_table, orbit_table, ostrowski_table, sum_table, CommandError,
    CompareArgs, CompareTarget, Method, Output,
};
use anergodic::numerics::{Alpha, Policy};
use anergodic::observables::{Beta, Observable};
use anergodic::report::{Format, Meta, DEFAULT_DIGITS};
use anergodic::sweep::{parse_rational, run_sweep, SweepConfig};
use anergodic::verdict::Verdict;

#[derive(Parser, Debug)]
#[command(name = "anergodic", version, about = "Certified Birkhoff-sum bounds for irrational rotations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Partial quotients, convergents and q'_r
    Cf,
    /// Ostrowski digits of N
    Ostrowski,
    /// Orbit triples with their certified checks
    Orbit,
    /// Direct enclosure of S_N phi
    Sum,
    /// Per-level sandwich of S_N phi
    Bounds,
    /// Methods A, B, C for theta^beta
    Estimate,
    /// Comparisons with earlier bounds
    Compare,
    /// Grid sweep from a config file
    Sweep,
}

#[derive(Args, Debug)]
struct Opts {
    #[arg(long, global = true)]
    alpha: Option<String>,
    #[arg(long, global = true, default_value_t = 10)]
    depth: usize,
    #[arg(long, global = true)]
    n: Option<u64>,
    #[arg(long = "n-max", global = true)]
    n_max: Option<u64>,
    #[arg(long, global = true, default_value = "1")]
    beta: String,
    #[arg(long, global = true)]
    phi: Option<String>,
    #[arg(long, global = true, default_value = "all")]
    method: String,
    #[arg(long, global = true)]
    target: Option<String>,
    #[arg(long, global = true)]
    gamma: Option<String>,
    #[arg(long, global = true, default_value_t = 128)]
    bits: u32,
    #[arg(long = "max-bits", global = true, default_value_t = 8192)]
    max_bits: u32,
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_DIGITS)]
    digits: usize,
    /// Also report the dual observable (estimate)
    #[arg(long, global = true)]
    dual: bool,
}

fn usage(msg: impl Into<String>) -> CommandError {
    CommandError::Usage(msg.into())
}

impl Opts {
    fn alpha(&self) -> Result<Alpha, CommandError> {
        let s = self.alpha.as_deref().ok_or_else(|| usage("--alpha is required"))?;
        Alpha::parse(s).map_err(|e| usage(e.to_string()))
    }

    fn n(&self) -> Result<u64, CommandError> {
        match self.n {
            Some(0) => Err(usage("--n must be positive")),
            Some(n) => Ok(n),
            None => Err(usage("--n is required")),
        }
    }

    fn beta(&self) -> Result<Beta, CommandError> {
        self.beta.parse().map_err(|e: anergodic::observables::ObsError| usage(e.to_string()))
    }

    fn phi(&self) -> Result<Option<Observable>, CommandError> {
        self.phi.as_deref().map(|p| p.parse().map_err(|e: anergodic::observables::ObsError| usage(e.to_string()))).transpose()
    }

    fn policy(&self) -> Result<Policy, CommandError> {
        let d = Policy::default();
        Policy::new(self.bits, self.max_bits, d.target_width().clone()).map_err(|e| usage(e.to_string()))
    }

    fn format(&self) -> Result<Option<Format>, CommandError> {
        self.format.as_deref().map(|f| f.parse().map_err(usage)).transpose()
    }
}

fn run(cmd: Cmd, o: &Opts) -> Result<Verdict, CommandError> {
    let policy = o.policy()?;
    let mut format = o.format()?.unwrap_or(Format::Csv);
    let mut out_path = o.out.clone();
    let (name, alpha_text, output): (&str, String, Output) = match cmd {
        Cmd::Sweep => {
            let path = o.config.as_ref().ok_or_else(|| usage("sweep needs --config"))?;
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let mut cfg = SweepConfig::parse(&text)?;
            if let Some(s) = o.seed {
                cfg.seed = s;
            }
            if o.format.is_none() {
                format = cfg.format;
            }
            if out_path.is_none() {
                out_path = cfg.output.as_ref().map(PathBuf::from);
            }
            let table = run_sweep(&cfg, &policy)?;
            ("sweep", cfg.alphas.join(";"), Output { table, notes: vec![format!("seed={}", cfg.seed)] })
        }
        _ => {
            let alpha = o.alpha()?;
            let out = match cmd {
                Cmd::Cf => cf_table(&alpha, o.depth, o.bits)?,
                Cmd::Ostrowski => ostrowski_table(&alpha, o.n()?, o.bits)?,
                Cmd::Orbit => orbit_table(&alpha, o.n()?, o.bits)?,
                Cmd::Sum | Cmd::Bounds => {
                    let phi = match o.phi()? {
                        Some(p) => p,
                        None => Observable::theta(o.beta()?),
                    };
                    if matches!(cmd, Cmd::Sum) {
                        sum_table(&alpha, &phi, o.n()?, &policy)?
                    } else {
                        bounds_table(&alpha, &phi, o.n()?, &policy)?
                    }
                }
                Cmd::Estimate => {
                    let method: Method = o.method.parse().map_err(usage)?;
                    estimate_table(&alpha, o.beta()?, o.n()?, method, o.dual, &policy)?
                }
                Cmd::Compare => {
                    let target: CompareTarget =
                        o.target.as_deref().ok_or_else(|| usage("--target is required"))?.parse().map_err(usage)?;
                    let gamma: Option<Rational> = o.gamma.as_deref().map(parse_rational).transpose()?;
                    let args = CompareArgs { n: o.n, n_max: o.n_max, gamma, phi: o.phi()? };
                    compare_table(target, &alpha, &args, &policy)?
                }
                Cmd::Sweep => unreachable!(),
            };
            (cmd_name(cmd), alpha.to_string(), out)
        }
    };
    let verdict = output.verdict();
    let mut meta = Meta::new(name, &alpha_text, &policy, o.digits, verdict);
    meta.notes = output.notes.clone();
    let text = output.table.render(format, meta, o.digits);
    match out_path {
        Some(p) => std::fs::write(&p, text).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(verdict)
}

fn cmd_name(c: Cmd) -> &'static str {
    match c {
        Cmd::Cf => "cf",
        Cmd::Ostrowski => "ostrowski",
        Cmd::Orbit => "orbit",
        Cmd::Sum => "sum",
        Cmd::Bounds => "bounds",
        Cmd::Estimate => "estimate",
        Cmd::Compare => "compare",
        Cmd::Sweep => "sweep",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd, &cli.opts) {
        Ok(v) => ExitCode::from(v.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
