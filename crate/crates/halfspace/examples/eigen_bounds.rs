//! Check the known volume eigenvalue and shrink a certified upper bound
//! for the boundary eigenvalue `mu_1`.
//!
//! The Gaussian `e^{-|x|^2/4}` is the first eigenfunction of the weighted
//! volume problem with eigenvalue exactly `N/2`, which makes it a sharp
//! test of the quadrature stack. The boundary eigenvalue has no closed
//! form; the Rayleigh-Ritz values over growing spans of
//! Gaussian-times-polynomial trial functions form a nonincreasing
//! sequence of certified upper bounds.

use halfspace::spectral::{estimate_mu1, rayleigh_volume};
use halfspace::testfun::TestFunction;
use halfspace::{QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();

    for n in [3u32, 4, 5] {
        let quotient = rayleigh_volume(&TestFunction::gaussian(n)?, &spec)?;
        println!(
            "N = {n}: Gaussian volume quotient {quotient:.12} (exact {})",
            n as f64 / 2.0
        );
    }

    let n = 3;
    let est = estimate_mu1(n, 8, &spec)?;
    println!("\nmu_1 upper bounds at N = {n}:");
    for &(size, value) in &est.history {
        println!("  basis size {size}: mu_1 <= {value:.9}");
    }
    println!("best certified bound: mu_1 <= {:.9}", est.value);
    Ok(())
}
