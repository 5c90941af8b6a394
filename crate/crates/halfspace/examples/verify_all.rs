//! Run the complete verification checklist in-process.
//!
//! This is the library form of the `verify-all` subcommand: ten criteria
//! covering the bubble identity, the Gaussian eigenvalue, the
//! trace-coefficient identity, threshold chains, closed-form vs
//! quadrature dual routes, expansion fits, the fiber sign-flip, the Hardy
//! inequality, region soundness, and determinism.

use halfspace::verify::{run_all, DEFAULT_SEED};
use halfspace::{QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    let results = run_all(DEFAULT_SEED, &spec)?;
    for r in &results {
        println!(
            "[{}] {:>2}. {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.index,
            r.name
        );
        println!("         {}", r.detail);
    }
    let all = results.iter().all(|r| r.passed);
    println!(
        "\n{} of {} criteria passed",
        results.iter().filter(|r| r.passed).count(),
        results.len()
    );
    std::process::exit(if all { 0 } else { 2 });
}
