//! Tabulate the existence thresholds and verify the bound chains that
//! bracket them.
//!
//! `lambda_bar` (interior critical term on) and `lambda_hat` (boundary
//! term only) mark the proven lower edges of the existence window at
//! `mu = 0`; both sit strictly between `N/4` and `N/2`. For `N >= 5` the
//! shared value `lambda_star` also satisfies a chain of strict
//! inequalities that certify `N/4 < lambda_star < (N-2)/2`.

use halfspace::thresholds::{lambda_bar, lambda_hat, verify_threshold_chain};
use halfspace::{QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();

    println!(
        "{:>2}  {:>12}  {:>12}  {:>12}",
        "N", "lambda_bar", "lambda_hat", "lambda_star"
    );
    for n in 3..=9 {
        let bar = lambda_bar(n, &spec)?;
        let hat = lambda_hat(n)?;
        if n >= 5 {
            let chain = verify_threshold_chain(n, &spec)?;
            println!(
                "{n:>2}  {bar:>12.7}  {hat:>12.7}  {:>12.7}",
                chain.lambda_star
            );
        } else {
            println!("{n:>2}  {bar:>12.7}  {hat:>12.7}  {:>12}", "-");
        }
    }

    let chain = verify_threshold_chain(5, &spec)?;
    println!("\nchain inequalities at N = 5:");
    for check in &chain.chain_checks {
        println!(
            "  [{}] {}: {:.10} < {:.10}",
            if check.satisfied { "ok" } else { "FAIL" },
            check.name,
            check.lhs,
            check.rhs
        );
    }
    println!(
        "all satisfied: {} (N/4 = {}, (N-2)/2 = {})",
        chain.all_satisfied(),
        chain.lower_bound,
        chain.upper_bound
    );
    Ok(())
}
