//! Verify the two-sided energy and mass bounds of the dimension-3
//! Gaussian-envelope family.
//!
//! At `N = 3` the cutoff construction degenerates, so the theory works
//! with a shifted Gaussian envelope instead. Its energy admits an upper
//! bound linear in `eps` with an explicit slope, and its weighted mass a
//! lower bound whose deficit is `O(eps^2 |ln eps|)`. Both bounds hinge on
//! the auxiliary integral `J`, which has a closed form to check the
//! quadrature against.

use halfspace::asymptotics::{verify_envelope_bounds, DEFAULT_GRID};
use halfspace::{QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    let report = verify_envelope_bounds(&DEFAULT_GRID, &spec)?;

    println!(
        "J quadrature {:.9} vs closed form {:.9} (gap {:.2e})",
        report.j_quadrature,
        report.j_closed,
        (report.j_quadrature - report.j_closed).abs() / report.j_closed
    );
    println!(
        "psi mass {:.9}, identity gap {:.2e}",
        report.psi_mass, report.mass_ratio_gap
    );

    println!("\nenergy upper bound (lhs < rhs):");
    for row in &report.upper {
        println!(
            "  eps = {:>5}: {:>12.7} < {:>12.7}  [{}]",
            row.eps,
            row.lhs,
            row.rhs,
            if row.holds { "ok" } else { "FAIL" }
        );
    }

    println!(
        "\nmass lower bound (lhs > rhs), deficit coefficients d1 = {:.4}, d2 = {:.4}:",
        report.d1, report.d2
    );
    for row in &report.lower {
        println!(
            "  eps = {:>5}: {:>12.7} > {:>12.7}  [{}]",
            row.eps,
            row.lhs,
            row.rhs,
            if row.holds { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}
