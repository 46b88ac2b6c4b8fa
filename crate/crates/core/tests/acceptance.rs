//! Runs without the libtest harness so the per-criterion lines are always
//! shown.

use std::process::ExitCode;

use normcalc::suite::{format_line, run, CRITERIA};

fn main() -> ExitCode {
    let ids: Vec<u8> = CRITERIA.iter().map(|c| c.0).collect();
    let results = run(&ids, 0);
    for r in &results {
        println!("{}", format_line(r));
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
