//! One line per acceptance criterion; exits nonzero if any fails.
//! `KS_BENCH_MS` sets the benchmark threshold, and criterion ids given as
//! arguments restrict the run.

use std::process::ExitCode;

use ks_cli::acceptance::{run_criterion, AcceptanceConfig, CRITERIA};

fn main() -> ExitCode {
    let cfg = AcceptanceConfig::from_env();
    let picked: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids = if picked.is_empty() { CRITERIA.to_vec() } else { picked };
    let mut failed = 0;
    for id in ids {
        let o = run_criterion(id, &cfg);
        println!("{}", o.line());
        failed += usize::from(!o.passed);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
