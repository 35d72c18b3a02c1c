//! Runs acceptance criteria 1-9 and prints one line per criterion.
//!
//! Set `QTK_ACCEPTANCE_ONLY=5` (comma-separated) to run a subset.

use std::process::ExitCode;

use qtk::checks::{run, CheckConfig, CRITERIA};

fn main() -> ExitCode {
    let only: Option<Vec<u8>> = std::env::var("QTK_ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let cfg = CheckConfig::default();
    let mut failed = 0;
    for (id, _) in CRITERIA {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let result = run(id, &cfg).expect("known criterion");
        println!("{}", result.line());
        for extra in result.failures.iter().skip(1).take(9) {
            println!("    also: {extra}");
        }
        if !result.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
