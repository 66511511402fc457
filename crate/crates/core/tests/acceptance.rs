//! One line per acceptance criterion; exits nonzero if any fails.
//! Every comparison is exact rational equality, so there is no tolerance to pin.

use std::process::ExitCode;
use std::time::Instant;

use gwverify::selftest;
use gwverify::DataSource;

fn main() -> ExitCode {
    let started = Instant::now();
    let results = match selftest::run_from(DataSource::embedded()) {
        Ok(r) => r,
        Err(e) => {
            println!("ERROR loading shipped data: {e}");
            return ExitCode::FAILURE;
        }
    };
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed in {} ms",
        results.len() - failed,
        started.elapsed().as_millis()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
