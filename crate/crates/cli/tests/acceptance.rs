//! Acceptance criteria, one PASS/FAIL line each. Runs sequentially so the
//! timing budgets are not shared with other tests.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use deltascale::density::{density, ratio_trajectory};
use deltascale::equivalence::run_suite;
use deltascale::gen::{case_rng, Universe};
use deltascale::lemma::{non_measure_witness, run_clause, CLAUSES};
use deltascale::measure::measure_interval;
use deltascale::oracle::{enumerate_up_to, reports};
use deltascale::rational::{format, frac, int};
use deltascale::{DeltaSet, Interval, IntervalKind, Rational, TimeScale};
use num_traits::Signed;
use rand::Rng;

const SEED: u64 = 7;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn within(elapsed: Duration, budget: Duration) -> bool {
    elapsed < budget
}

fn blocks(l: i64, r: i64) -> DeltaSet {
    let ray = Arc::new(TimeScale::ray(int(0)));
    DeltaSet::periodic_pattern(&ray, int(0), int(l + r), vec![Interval::closed(int(0), int(l))]).unwrap()
}

fn exact_half() -> Verdict {
    let start = Instant::now();
    let n = Arc::new(TimeScale::naturals());
    let evens = DeltaSet::periodic_pattern(&n, int(2), int(2), vec![Interval::point(int(0))]).unwrap();
    let d = density(&evens);
    let took = start.elapsed();
    let ok = d.value() == Some(&frac(1, 2)) && within(took, Duration::from_secs(1));
    verdict(ok, format!("δ({{2,4,6,…}}) = {:?} in {took:.2?}", d.value().map(format)))
}

fn block_densities() -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for ((l, r), frozen) in [((1, 1), frac(1, 2)), ((1, 2), frac(1, 3)), ((3, 2), frac(3, 5))] {
        let set = blocks(l, r);
        let exact = density(&set).value().cloned();
        let horizon = int(300 * (l + r));
        let ratio = reports(&set, std::slice::from_ref(&horizon)).unwrap()[0].ratio.clone();
        ok &= exact.as_ref() == Some(&frac(l, l + r)) && frac(l, l + r) == frozen;
        ok &= (&ratio - &frozen).abs() <= frac(1, 100);
        parts.push(format!("l={l},r={r}: δ = {}, oracle {} at t = {horizon}", format(&frozen), format(&ratio)));
    }
    let took = start.elapsed();
    ok &= within(took, Duration::from_secs(5));
    verdict(ok, format!("{} in {took:.2?}", parts.join("; ")))
}

/// `μ_Δ(A(t))`: `t − n·r` inside block `n`, `(n+1)·l` in the gap after it.
fn piecewise(l: i64, r: i64, t: &Rational) -> Rational {
    let n = (t / int(l + r)).floor();
    if t - &n * int(l + r) <= int(l) {
        t - &n * int(r)
    } else {
        (n + int(1)) * int(l)
    }
}

fn trajectory_fidelity() -> Verdict {
    let hs: Vec<Rational> = (1..=50).map(|k| frac(13 * k, 7)).collect();
    let tr = ratio_trajectory(&blocks(1, 1), &hs).unwrap();
    let bad: Vec<String> = tr
        .samples
        .iter()
        .filter(|s| s.mu != piecewise(1, 1, &s.t) || s.den != s.t || s.ratio != piecewise(1, 1, &s.t) / &s.t)
        .map(|s| format(&s.t))
        .collect();
    verdict(tr.samples.len() == 50 && bad.is_empty(), format!("50 horizons up to {}, mismatches at {bad:?}", format(&hs[49])))
}

fn interval_identities() -> Verdict {
    let mut failures = Vec::new();
    for index in 0..1000u64 {
        let mut rng = case_rng(SEED, "intervals", index);
        let u = Universe::random(&mut rng);
        let s = &u.scale;
        let min = s.min_point().clone();
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
            s.first_point_at_or_after(&(&min + frac(rng.gen_range(0..400), rng.gen_range(1..=4))))
        };
        let (mut a, mut b) = (pick(&mut rng), pick(&mut rng));
        while a == b {
            b = pick(&mut rng);
        }
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let (sa, sb) = (s.sigma(&a).unwrap(), s.sigma(&b).unwrap());
        let expected = [
            (IntervalKind::Closed, &sb - &a),
            (IntervalKind::ClosedOpen, &b - &a),
            (IntervalKind::OpenClosed, &sb - &sa),
            (IntervalKind::Open, (&b - &sa).max(int(0))),
        ];
        let mut ok = (&b - &a) + (&sb - &b) == &sb - &a;
        let m = |kind| measure_interval(s, kind, &a, &b).unwrap().finite().cloned().unwrap();
        ok &= m(IntervalKind::ClosedOpen) + (&sb - &b) == m(IntervalKind::Closed);
        for (kind, want) in expected {
            let brute = enumerate_up_to(&DeltaSet::interval(s, kind, a.clone(), b.clone()), &b).unwrap();
            ok &= m(kind) == want && brute == want;
        }
        if !ok {
            failures.push(format!("{} on {} [{}, {}]", index, u.name, format(&a), format(&b)));
        }
    }
    verdict(failures.is_empty(), format!("1000 triples, {} failures {:?}", failures.len(), failures.first()))
}

fn lemma_suite() -> Verdict {
    let start = Instant::now();
    let mut failures = 0;
    let mut first = None;
    for clause in CLAUSES.iter().copied().chain(["non-measure"]) {
        let rep = run_clause(clause, 1000, SEED).unwrap();
        failures += rep.failures;
        if first.is_none() {
            first = rep.first_failure;
        }
    }
    let regression = [(1, 1), (1, 2), (3, 2)].iter().all(|&(l, r)| non_measure_witness(l, r, 100).is_ok());
    let took = start.elapsed();
    let ok = failures == 0 && regression && within(took, Duration::from_secs(60));
    verdict(ok, format!("12 × 1000 cases, {failures} failures {first:?}, Σδ(Aₙ) = 0 < δ(A) holds: {regression}, in {took:.2?}"))
}

fn suite(name: &str, cases: u64, budget: u64) -> Verdict {
    let start = Instant::now();
    let rep = run_suite(name, cases, SEED).unwrap();
    let took = start.elapsed();
    let ok = rep.failures == 0 && within(took, Duration::from_secs(budget));
    verdict(ok, format!("{cases} cases, {} failures {:?}, in {took:.2?}", rep.failures, rep.first_failure))
}

const SPIKY: &str = r#"{"scale":{"tail":{"ray":{"start":"0"}}},
 "cases":[{"region":{"pieces":[{"sparse":{"c2":"1","c1":"0","c0":"0"}}]},"rule":"constant","c":"5"}],
 "default":{"rule":"reciprocal","c":"1","d":"1","offset":"0"}}"#;

fn cli_suite() -> Vec<Vec<String>> {
    let runs: &[&[&str]] = &[
        &["measure", "--scale", "nat", "--set", "[2,5)"],
        &["measure", "--scale", "ray0", "--set", "[0,1] u [3,9/2)", "--upto", "4"],
        &["density", "--scale", "nat", "--set", "evens"],
        &["trajectory", "--scale", "ray0", "--set", "[0,1] u (5/2,inf)", "--horizons", "geom:3:8"],
        &["limit", "--fn", SPIKY],
        &["cauchy", "--scale", "nat", "--fn", "indicator:evens"],
        &["companion", "--fn", SPIKY, "--m-max", "6"],
        &["check-lemma", "--cases", "30", "--seed", "7"],
        &["check-theorem", "--cases", "15", "--seed", "7"],
        &["check-theorem", "--fn", SPIKY],
    ];
    runs.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

fn run_cli(args: &[String]) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_deltascale")).args(args).output().expect("run the CLI");
    (out.stdout, out.status.code())
}

fn determinism() -> Verdict {
    let suite = cli_suite();
    let first: Vec<_> = suite.iter().map(|a| run_cli(a)).collect();
    let second: Vec<_> = suite.iter().map(|a| run_cli(a)).collect();
    let identical = first == second;
    let all_ok = first.iter().all(|(_, code)| *code == Some(0));
    let json_ok = first
        .iter()
        .zip(&suite)
        .filter(|(_, args)| args[0] != "trajectory")
        .all(|((out, _), _)| serde_json::from_slice::<serde_json::Value>(out).is_ok());
    let bytes: usize = first.iter().map(|(o, _)| o.len()).sum();
    verdict(identical && all_ok && json_ok, format!("{} invocations twice, {bytes} bytes, identical: {identical}, exit 0: {all_ok}", suite.len()))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Verdict)> = vec![
        ("1 exact density of the evens", exact_half),
        ("2 block densities l/(l+r)", block_densities),
        ("3 trajectory matches the piecewise formula", trajectory_fidelity),
        ("4 interval formulas and enumeration", interval_identities),
        ("5 density property suite", lemma_suite),
        ("6 equivalence of the three conditions", || suite("equivalence", 200, 120)),
        ("7 classical limits are Δ-limits", || suite("upgrade", 100, 10)),
        ("8 deterministic CLI output", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let v = check();
        println!("{} criterion {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
