//! Run the randomized criterion-versus-oracle suite in process and inspect
//! the aggregate report. The same configuration always produces the same
//! report bytes.
//!
//! Run with `cargo run --example randomized_suite`.

use mtto::suite::{run_suite, SuiteConfig};

fn main() -> mtto::Result<()> {
    let cfg = SuiteConfig::new(0xFEED, 40, 8, 4, 1e-9);
    let report = run_suite(&cfg)?;

    println!(
        "suite over {} trials (N <= {}, d <= {}): passed = {}",
        cfg.trials, cfg.max_model_degree, cfg.max_dim, report.passed
    );
    println!("\nchecks and worst residuals:");
    for (check, count) in &report.counts {
        match report.worst_residuals.get(check) {
            Some(worst) => println!("  {check:32} x{count:<4} worst {worst:.2e}"),
            None => println!("  {check:32} x{count:<4} (exactness check)"),
        }
    }
    println!(
        "\noff-hypothesis probes (no claim made): {} total, criterion/oracle split: \
         both true {}, both false {}, criterion only {}, oracle only {}",
        report.off_hypothesis.probes,
        report.off_hypothesis.both_true,
        report.off_hypothesis.both_false,
        report.off_hypothesis.criterion_only,
        report.off_hypothesis.oracle_only
    );
    for failure in &report.failures {
        println!(
            "FAILURE trial {} seed {}: {} ({})",
            failure.trial, failure.seed, failure.check, failure.detail
        );
    }
    Ok(())
}
