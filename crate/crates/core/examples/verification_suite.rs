//! Runs a suite and prints the markdown report.
//!
//! ```text
//! cargo run --example verification_suite -- pdo 7
//! ```

use nctorus::harness::{run_suite, RunConfig, Suite};

fn main() -> nctorus::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("core").parse()?;
    let seed = args.next().map(|s| s.parse().expect("seed is an integer")).unwrap_or(42);
    let cfg = RunConfig {
        seed,
        trials: 20,
        ..RunConfig::from_env()?
    };
    let report = run_suite(suite, &cfg)?;
    print!("{}", report.to_markdown());
    let failed = report.failures().count();
    println!("\n{} checks, {failed} failed", report.checks.len());
    Ok(())
}
