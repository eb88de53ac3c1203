//! Run one of the verification suites in-process, as `nsbl verify` does.

use nsbl::cli::{run_suite, SuiteOptions};

fn main() -> nsbl::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "gronwall".into());
    let report = run_suite(&name, SuiteOptions::default())?;
    print!("{}", report.table());
    Ok(())
}
