//! Command-line front end for the `deltascale` library.

use std::fs;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use deltascale::companion::{companion_function, verify, DEFAULT_HORIZON_CAP};
use deltascale::convergence::{default_epsilons, delta_limit, is_delta_cauchy};
use deltascale::density::{density, ratio_trajectory, CSV_DIGITS};
use deltascale::equivalence::{check_equivalence, run_suite, EquivalenceOptions, SUITES};
use deltascale::lemma::{run_clause, ClauseReport, CLAUSES, EXTRA};
use deltascale::measure::{measure, measure_up_to};
use deltascale::rational::{self, Rational};
use deltascale::{input, oracle, DeltaSet, Error, ScaleFunction, TimeScale};
use log::info;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "deltascale", version, about = "Δ-measure, Δ-density and Δ-convergence on time scales")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Δ-measure of a set, or of its part up to a horizon.
    Measure {
        #[command(flatten)]
        input: SetInput,
        /// Measure `A ∩ [a, t]` instead of the whole set.
        #[arg(long)]
        upto: Option<String>,
        /// Count by brute-force enumeration (needs --upto).
        #[arg(long, requires = "upto")]
        oracle: bool,
    },
    /// Δ-density of a set.
    Density {
        #[command(flatten)]
        input: SetInput,
    },
    /// Ratios μ_Δ(A(t))/(σ(t) − a) at a list of horizons, as CSV.
    Trajectory {
        #[command(flatten)]
        input: SetInput,
        /// `t1,t2,…`, `geom:<base>:<count>` or `spread:<until>:<count>`.
        #[arg(long, default_value = "geom:2:12")]
        horizons: String,
        /// Compute the ratios by brute-force enumeration.
        #[arg(long)]
        oracle: bool,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<String>,
    },
    /// Decide Δ-convergence and report the Δ-limit.
    Limit {
        #[command(flatten)]
        input: FnInput,
    },
    /// Decide the Δ-Cauchy property.
    Cauchy {
        #[command(flatten)]
        input: FnInput,
    },
    /// Build a classically convergent companion g = f Δ-almost everywhere.
    Companion {
        #[command(flatten)]
        input: FnInput,
        #[arg(long, default_value_t = 8)]
        m_max: u32,
        #[arg(long, default_value_t = DEFAULT_HORIZON_CAP)]
        horizon_cap: u64,
    },
    /// Randomized checks of the density properties.
    CheckLemma {
        #[command(flatten)]
        run: RunOptions,
    },
    /// Check the three equivalent convergence conditions on one function or on a generated suite.
    CheckTheorem {
        #[command(flatten)]
        run: RunOptions,
        /// Check this function instead of generated ones.
        #[arg(long = "fn")]
        function: Option<String>,
        #[arg(long)]
        scale: Option<String>,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value_t = 8)]
        m_max: u32,
        #[arg(long, default_value_t = DEFAULT_HORIZON_CAP)]
        horizon_cap: u64,
    },
}

#[derive(Debug, Args)]
pub struct SetInput {
    /// `nat`, `ray0`, `ray:<a>`, `grid:<h>`, JSON, or `@file`.
    #[arg(long)]
    pub scale: Option<String>,
    /// Set shorthand such as `evens` or `[2,5)`, JSON, or `@file`.
    #[arg(long)]
    pub set: String,
}

#[derive(Debug, Args)]
pub struct FnInput {
    #[arg(long)]
    pub scale: Option<String>,
    /// `const:<c>`, `indicator:<set>`, JSON, or `@file`.
    #[arg(long = "fn")]
    pub function: String,
    /// Comma-separated ε grid.
    #[arg(long)]
    pub eps: Option<String>,
}

#[derive(Debug, Args)]
pub struct RunOptions {
    /// One clause name, or `all`.
    #[arg(long, default_value = "all")]
    pub clause: String,
    #[arg(long)]
    pub cases: Option<u64>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

/// What a command prints, and how the process should exit.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

/// Exit status for an error: 2 for bad input, 1 when a decider gives up.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Domain(_) | Error::Construction(_) => 2,
        Error::NotCauchy(_) | Error::Undecided(_) => 1,
    }
}

fn read_arg(text: &str) -> Result<String, Error> {
    match text.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Domain(format!("cannot read {path}: {e}"))),
        None => Ok(text.to_string()),
    }
}

fn scale_arg(text: &Option<String>) -> Result<Option<Arc<TimeScale>>, Error> {
    text.as_deref()
        .map(|t| input::parse_scale(&read_arg(t)?).map(Arc::new))
        .transpose()
}

fn set_arg(i: &SetInput) -> Result<DeltaSet, Error> {
    input::parse_set(&read_arg(&i.set)?, scale_arg(&i.scale)?.as_ref())
}

fn fn_arg(function: &str, scale: &Option<String>) -> Result<ScaleFunction, Error> {
    input::parse_function(&read_arg(function)?, scale_arg(scale)?.as_ref())
}

fn eps_arg(eps: &Option<String>) -> Result<Vec<Rational>, Error> {
    match eps {
        None => Ok(default_epsilons()),
        Some(text) => {
            let list = input::parse_list(text)?;
            if list.is_empty() || list.iter().any(|e| e <= &Rational::from_integer(0.into())) {
                return Err(Error::Domain("every ε must be positive".into()));
            }
            Ok(list)
        }
    }
}

fn point_arg(scale: &TimeScale, text: &str) -> Result<Rational, Error> {
    let t = input::parse_list(text)?;
    match t.as_slice() {
        [t] if scale.contains(t) => Ok(t.clone()),
        [t] => Err(Error::Domain(format!("{} is not a point of the scale", rational::format(t)))),
        _ => Err(Error::Domain(format!("expected one horizon, found {text:?}"))),
    }
}

fn horizons_arg(scale: &TimeScale, text: &str) -> Result<Vec<Rational>, Error> {
    let count = |s: &str| s.trim().parse::<u32>().map_err(|_| Error::Domain(format!("bad count {s:?}")));
    if let Some(rest) = text.strip_prefix("geom:") {
        let (b, n) = rest.split_once(':').ok_or_else(|| Error::Domain("use geom:<base>:<count>".into()))?;
        let b = count(b)?;
        if b < 2 {
            return Err(Error::Domain("geometric base must be at least 2".into()));
        }
        return Ok(oracle::geometric_horizons(scale, b, count(n)?));
    }
    if let Some(rest) = text.strip_prefix("spread:") {
        let (u, n) = rest.split_once(':').ok_or_else(|| Error::Domain("use spread:<until>:<count>".into()))?;
        return Ok(oracle::spread_horizons(scale, &rational::parse(u)?, count(n)? as usize));
    }
    input::parse_list(text)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable output")
}

fn ok(stdout: String) -> Outcome {
    Outcome { stdout, code: 0 }
}

fn report_runs(reports: Vec<ClauseReport>) -> Outcome {
    let failures: u64 = reports.iter().map(|r| r.failures).sum();
    let code = i32::from(failures > 0);
    let stdout = match reports.as_slice() {
        [one] => to_json(one),
        _ => to_json(&json!({ "failures": failures, "clauses": reports })),
    };
    Outcome { stdout, code }
}

fn runs(
    run: &RunOptions,
    known: &[&str],
    default_cases: u64,
    go: impl Fn(&str, u64, u64) -> deltascale::Result<ClauseReport>,
) -> Result<Outcome, Error> {
    let names: Vec<&str> = if run.clause == "all" { known.to_vec() } else { vec![run.clause.as_str()] };
    let cases = run.cases.unwrap_or(default_cases);
    let mut reports = Vec::new();
    for name in names {
        let rep = go(name, cases, run.seed)?;
        info!("{name}: {} of {} cases failed", rep.failures, rep.cases);
        reports.push(rep);
    }
    Ok(report_runs(reports))
}

/// Runs one command.
pub fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Measure { input, upto, oracle: brute } => {
            let set = set_arg(input)?;
            let value: Value = match upto {
                None => json!(measure(&set)?.to_string()),
                Some(t) => {
                    let t = point_arg(set.scale(), t)?;
                    let v = if *brute { oracle::enumerate_up_to(&set, &t)? } else { measure_up_to(&set, &t)? };
                    json!(rational::format(&v))
                }
            };
            Ok(ok(to_json(&json!({ "value": value }))))
        }
        Command::Density { input } => Ok(ok(to_json(&density(&set_arg(input)?)))),
        Command::Trajectory { input, horizons, oracle: brute, out } => {
            let set = set_arg(input)?;
            let hs = horizons_arg(set.scale(), horizons)?;
            let traj = if *brute { oracle::trajectory(&set, &hs)? } else { ratio_trajectory(&set, &hs)? };
            let csv = traj.to_csv(CSV_DIGITS);
            match out {
                None => Ok(ok(csv.trim_end().to_string())),
                Some(path) => {
                    fs::write(path, csv).map_err(|e| Error::Domain(format!("cannot write {path}: {e}")))?;
                    let last = traj.samples.last().map(|s| rational::format(&s.ratio));
                    Ok(ok(to_json(&json!({ "samples": traj.samples.len(), "last_ratio": last }))))
                }
            }
        }
        Command::Limit { input } => {
            let f = fn_arg(&input.function, &input.scale)?;
            Ok(ok(to_json(&delta_limit(&f, &eps_arg(&input.eps)?)?)))
        }
        Command::Cauchy { input } => {
            let f = fn_arg(&input.function, &input.scale)?;
            Ok(ok(to_json(&is_delta_cauchy(&f, &eps_arg(&input.eps)?)?)))
        }
        Command::Companion { input, m_max, horizon_cap } => {
            let f = fn_arg(&input.function, &input.scale)?;
            let trace = companion_function(&f, *m_max, *horizon_cap)?;
            let check = verify(&f, &trace)?;
            let code = i32::from(!check.ok());
            Ok(Outcome { stdout: to_json(&json!({ "trace": trace, "check": check })), code })
        }
        Command::CheckLemma { run } => {
            let known: Vec<&str> = CLAUSES.iter().chain(EXTRA.iter()).copied().collect();
            runs(run, &known, 1000, run_clause)
        }
        Command::CheckTheorem { run, function, scale, eps, m_max, horizon_cap } => match function {
            Some(text) => {
                let f = fn_arg(text, scale)?;
                let opts = EquivalenceOptions { epsilons: eps_arg(eps)?, m_max: *m_max, horizon_cap: *horizon_cap };
                let rep = check_equivalence(&f, &opts)?;
                Ok(Outcome { stdout: to_json(&rep), code: i32::from(rep.failed()) })
            }
            None => runs(run, &SUITES, 200, run_suite),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Result<Outcome, Error> {
        let cli = Cli::try_parse_from(std::iter::once("deltascale").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn measure_and_density_one_liners() {
        assert_eq!(exec(&["measure", "--scale", "nat", "--set", "[2,5)"]).unwrap().stdout, r#"{"value":"3"}"#);
        assert_eq!(
            exec(&["density", "--scale", "nat", "--set", "evens"]).unwrap().stdout,
            r#"{"outcome":"exists","value":"1/2"}"#
        );
        let up = exec(&["measure", "--scale", "nat", "--set", "evens", "--upto", "7", "--oracle"]).unwrap();
        assert_eq!(up.stdout, r#"{"value":"4"}"#);
    }

    #[test]
    fn bad_input_exits_with_two() {
        let e = exec(&["density", "--scale", "nat", "--set", "[1,x)"]).unwrap_err();
        assert_eq!(exit_code(&e), 2);
        let e = exec(&["measure", "--scale", "nat", "--set", "evens", "--upto", "1/2"]).unwrap_err();
        assert_eq!(exit_code(&e), 2);
        let e = exec(&["limit", "--scale", "nat", "--fn", "const:1", "--eps", "0"]).unwrap_err();
        assert_eq!(exit_code(&e), 2);
    }

    #[test]
    fn not_cauchy_functions_exit_with_one() {
        let e = exec(&["companion", "--scale", "nat", "--fn", "indicator:evens"]).unwrap_err();
        assert_eq!(exit_code(&e), 1);
    }

    #[test]
    fn theorem_check_on_one_function() {
        let out = exec(&["check-theorem", "--scale", "nat", "--fn", "indicator:evens"]).unwrap();
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains(r#""status":"ok""#), "{}", out.stdout);
    }
}
