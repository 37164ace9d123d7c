//! Prints one line per acceptance criterion and fails if any criterion fails.

use std::process::ExitCode;

fn main() -> ExitCode {
    let mut failed = 0;
    for id in 1..=circnet::verify::CRITERIA {
        let r = circnet::verify::run_criterion(id);
        println!("{}", r.line());
        if !r.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria pass", circnet::verify::CRITERIA - failed, circnet::verify::CRITERIA);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
