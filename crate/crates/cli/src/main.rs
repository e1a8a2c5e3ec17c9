use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ri_core::functions::{log_grid, step_from_path, EvalFunction, StepFunction};
use ri_core::harness::{run_suite, SuiteConfig};
use ri_core::operators::{apply_gi, apply_h_aux, apply_hi, apply_r_prime, apply_ri, apply_si, apply_ti};
use ri_core::optimal::{domain_norm, target_assoc_norm, target_norm, target_warnings};
use ri_core::profiles::{
    check_average, check_cond1, check_cond4, check_delta2, check_quasiconcave, class_q_constants, DEFAULT_GRID,
};
use ri_core::parse::{parse_norm, parse_profile};
use ri_core::Profile;

#[derive(Parser)]
#[command(name = "ri", version, about = "Rearrangement-invariant norms, profiles and Sobolev target spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Condition checks and class-Q constants for a profile, as JSON.
    CheckProfile {
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Evaluate a norm (`--norm`) or an operator (`--op`) on a step function.
    Eval {
        #[arg(long, conflicts_with = "op")]
        norm: Option<String>,
        #[arg(long, requires = "profile")]
        op: Option<Op>,
        #[arg(long)]
        profile: Option<String>,
        /// CSV with header `breakpoint,value`.
        #[arg(long = "fn")]
        function: PathBuf,
        /// Comma-separated evaluation points; default is 50 log-spaced points.
        #[arg(long, value_delimiter = ',')]
        at: Vec<f64>,
        /// Order of `HI`.
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
    /// Optimal target or domain norm of a step function, as JSON.
    Optimal {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        space: String,
        #[arg(long)]
        profile: String,
        #[arg(long = "fn")]
        function: PathBuf,
    },
    /// Run a verification suite; exits non-zero if any assertion fails.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        size: usize,
        /// Write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Record wall time in the report.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    #[value(name = "SI")]
    Si,
    #[value(name = "TI")]
    Ti,
    #[value(name = "HI")]
    Hi,
    #[value(name = "RI")]
    Ri,
    #[value(name = "GI")]
    Gi,
    #[value(name = "H")]
    H,
    #[value(name = "Rprime")]
    RPrime,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Target,
    Domain,
    TargetAssoc,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<StepFunction> {
    step_from_path(path).with_context(|| format!("reading {}", path.display()))
}

fn profile(spec: &str) -> Result<Profile> {
    parse_profile(spec).with_context(|| format!("profile '{spec}'"))
}

fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

fn profile_report(p: &Profile, grid: usize) -> Value {
    let mut out = json!({
        "profile": p.name(),
        "quasiconcave": check_quasiconcave(p, grid),
        "delta2": check_delta2(p, grid),
        "cond1": check_cond1(p, grid),
        "average": check_average(p, grid),
        "cond4": check_cond4(p, grid),
    });
    out["class_q"] = match class_q_constants(p, grid) {
        Ok(q) => json!({"c": num(q.c), "d": num(q.d), "member_q": q.member_q, "stable": q.stable}),
        Err(e) => json!({"error": e.to_string()}),
    };
    out
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::CheckProfile { profile: spec, grid } => {
            let p = profile(&spec)?;
            println!("{}", serde_json::to_string_pretty(&profile_report(&p, grid))?);
            Ok(true)
        }
        Cmd::Eval { norm, op, profile: pspec, function, at, order } => {
            let f = load(&function)?;
            if let Some(spec) = norm {
                let n = parse_norm(&spec).with_context(|| format!("norm '{spec}'"))?;
                let v = n.eval(&f)?;
                println!("{}", json!({"norm": n.to_string(), "value": num(v.value), "admissible": v.admissible}));
                return Ok(true);
            }
            let Some(op) = op else { bail!("give either --norm or --op") };
            let p = profile(pspec.as_deref().unwrap_or_default())?;
            let g: EvalFunction = match op {
                Op::Si => apply_si(&p, &f),
                Op::Ti => apply_ti(&p, &f)?,
                Op::Hi => apply_hi(&p, &f, order)?,
                Op::Ri => apply_ri(&p, &f),
                Op::Gi => apply_gi(&p, &f),
                Op::H => apply_h_aux(&p, &f),
                Op::RPrime => apply_r_prime(&p, &f),
            };
            let pts = if at.is_empty() { log_grid(1e-3, 0.999, 50) } else { at };
            println!("t,value");
            for t in pts {
                match g.eval(t) {
                    Some(v) => println!("{t},{v}"),
                    None => bail!("evaluation point {t} outside (0, 1)"),
                }
            }
            Ok(true)
        }
        Cmd::Optimal { mode, space, profile: pspec, function } => {
            let f = load(&function)?;
            let x = parse_norm(&space).with_context(|| format!("norm '{space}'"))?;
            let p = profile(&pspec)?;
            let value = match mode {
                Mode::Target => target_norm(&x, &p, &f)?,
                Mode::Domain => domain_norm(&x, &p, &f)?,
                Mode::TargetAssoc => target_assoc_norm(&x, &p, &f)?,
            };
            let warnings = match mode {
                Mode::Domain if !x.admissible() => vec![format!("{x} is not an admissible r.i. norm")],
                Mode::Domain => vec![],
                _ => target_warnings(&x, &p),
            };
            let out = json!({"value": num(value), "warnings": warnings, "profile_report": profile_report(&p, 2000)});
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(true)
        }
        Cmd::Verify { suite, seed, size, json: out, timing } => {
            let r = run_suite(&suite, &SuiteConfig { seed, size, timing })?;
            let text = serde_json::to_string_pretty(&r)?;
            match out.as_ref().and_then(|p| p.to_str()) {
                Some("-") => println!("{text}"),
                Some(_) => {
                    let path = out.expect("checked");
                    std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?
                }
                None => {}
            }
            for a in &r.assertions {
                let tag = if a.pass { "ok  " } else { "FAIL" };
                eprintln!("{tag} {} measured={} tolerance={}", a.id, a.measured, a.tolerance);
            }
            let failed = r.failures().count();
            eprintln!("{}: {} assertions, {failed} failed", r.suite, r.assertions.len());
            Ok(r.passed())
        }
    }
}
