use std::process::ExitCode;

use subshift::acceptance::{criteria, KNOWN_SHORTFALLS};

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    let mut failed = 0;
    for criterion in criteria() {
        let outcome = criterion.run();
        println!("{}", outcome.line());
        if !outcome.passed {
            failed += 1;
            if !KNOWN_SHORTFALLS.contains(&outcome.id) {
                unexpected.push(outcome.id);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria().len() - failed, criteria().len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures {unexpected:?}");
        ExitCode::FAILURE
    }
}
