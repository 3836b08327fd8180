//! Acceptance criteria 1–7: one PASS/FAIL line each.
//!
//! Criteria 1–6 run one verification suite each (seed 7) under a wall-clock
//! budget; criterion 7 runs `buildinglab verify --seed 7` twice and compares
//! the output byte for byte. Runs without the test harness so the lines are
//! always printed.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use buildinglab::verify::{self, Suite};

struct Outcome {
    criterion: u8,
    name: String,
    passed: bool,
    detail: String,
}

fn budget(suite: Suite) -> Duration {
    match suite {
        Suite::RootData => Duration::from_secs(1),
        Suite::Hull => Duration::from_secs(30),
        Suite::Treeconv => Duration::from_secs(300),
        Suite::Counting => Duration::from_secs(120),
        Suite::Prolim => Duration::from_secs(60),
        Suite::Boundary => Duration::from_secs(300),
    }
}

fn run_suite(suite: Suite, workers: usize) -> Outcome {
    let start = Instant::now();
    let report = verify::run(&[suite], 7, workers);
    let elapsed = start.elapsed();
    let failed: Vec<String> = report.suites[0]
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.failures.first().map(String::as_str).unwrap_or("failed")))
        .collect();
    let within = elapsed <= budget(suite);
    let checks = report.suites[0].checks.len();
    let detail = if failed.is_empty() {
        format!("{checks} checks in {:.2?} (budget {:?})", elapsed, budget(suite))
    } else {
        format!("{} of {checks} checks failed: {}", failed.len(), failed.join("; "))
    };
    let detail = if within { detail } else { format!("{detail}; exceeded budget {:?}", budget(suite)) };
    Outcome { criterion: suite.criterion(), name: suite.name().to_string(), passed: report.passed && within, detail }
}

fn verify_twice() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_buildinglab"))
            .args(["verify", "--seed", "7", "--json"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let passed = a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    let detail = format!(
        "exit {:?}/{:?}, {} bytes, identical: {}",
        a.status.code(),
        b.status.code(),
        a.stdout.len(),
        a.stdout == b.stdout
    );
    Outcome { criterion: 7, name: "deterministic verify".into(), passed, detail }
}

fn main() -> ExitCode {
    let workers = match verify::workers_from_env() {
        Ok(w) => w,
        Err(e) => {
            eprintln!("acceptance: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut outcomes: Vec<Outcome> = Suite::ALL.iter().map(|&s| run_suite(s, workers)).collect();
    outcomes.push(verify_twice());
    for o in &outcomes {
        println!("{} criterion {} ({}): {}", if o.passed { "PASS" } else { "FAIL" }, o.criterion, o.name, o.detail);
    }
    if outcomes.iter().all(|o| o.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
