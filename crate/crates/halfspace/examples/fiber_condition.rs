//! Evaluate the fiber-map level condition on both sides of the existence
//! threshold and watch the verdict flip.
//!
//! For each scale the supremum of `t -> I(t u_eps)` is compared with the
//! compactness target `A`; the condition `sup < A` holds for small `eps`
//! exactly when `lambda` exceeds the threshold `lambda_star`. The `met`
//! verdict additionally checks that the eps^2-normalized margin is not
//! collapsing, which guards against reading a not-yet-resolved sign.

use halfspace::fiber::check_condition_a1;
use halfspace::thresholds::lambda_star;
use halfspace::{QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    let n = 6;
    let star = lambda_star(n, &spec)?;
    println!("N = {n}, lambda_star = {star:.6}");

    for (label, lambda) in [("above", star + 0.05), ("below", star - 0.05)] {
        let report = check_condition_a1(n, lambda, 0.0, 2.0, &[0.05, 0.03, 0.02], &spec)?;
        println!(
            "\nlambda = {lambda:.6} ({label} the threshold), target A = {:.6}:",
            report.target
        );
        for row in &report.rows {
            println!(
                "  eps = {:>4}: sup = {:.9}  [{}]",
                row.eps,
                row.sup_value,
                if row.passes { "sup < A" } else { "sup >= A" }
            );
        }
        println!("  condition met asymptotically: {}", report.met);
    }
    Ok(())
}
