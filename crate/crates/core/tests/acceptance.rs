use std::process::ExitCode;

use k3lat::acceptance::{criterion_count, run_criterion};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for id in 1..=criterion_count() as u8 {
        match run_criterion(id) {
            Ok(r) => {
                println!("{r}");
                if !r.passed {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("[FAIL] {id}: {e}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criterion_count());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
