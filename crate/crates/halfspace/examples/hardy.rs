//! Spot-check the Hardy-type inequality `(N^2/4) int u^2 <= int (x . grad u)^2`.
//!
//! The inequality underpins coercivity of the quadratic part of the
//! functional. For the Gaussian the two sides have the exact ratio
//! `(N+2)/N`, and a deterministic randomized suite of concentration
//! bubbles and Gaussian-polynomial combinations probes it away from the
//! extremal direction.

use halfspace::spectral::{hardy_check, hardy_suite};
use halfspace::testfun::TestFunction;
use halfspace::{QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();

    for n in [3u32, 4, 5] {
        let check = hardy_check(&TestFunction::gaussian(n)?, &spec)?;
        let want = (n as f64 + 2.0) / n as f64;
        println!(
            "N = {n}: Gaussian lhs {:.9}, rhs {:.9}, ratio {:.9} (exact {want:.9})",
            check.lhs,
            check.rhs,
            check.rhs / check.lhs
        );
    }

    let suite = hardy_suite(20260815)?;
    let mut failures = 0;
    for u in &suite {
        if !hardy_check(u, &spec)?.holds {
            failures += 1;
        }
    }
    println!(
        "\nrandomized suite: {} functions, {failures} violations",
        suite.len()
    );
    Ok(())
}
