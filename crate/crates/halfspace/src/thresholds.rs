//! Existence thresholds for the volume parameter `lambda` and numerical
//! verification of the bracketing chain `N/4 < lambda_star < (N-2)/2`.
//!
//! Three thresholds appear in the theory:
//!
//! * [`lambda_star`] (`N >= 5`): the proven sufficient bound for the
//!   critical-volume problem, assembled from the second-order expansion
//!   coefficients as `alpha/d + (2/2*) beta/d + (2/2_*) gamma/d`.
//! * [`lambda_bar`]: the piecewise threshold `(3+sqrt 5)/4` at `N = 3`,
//!   `1` at `N = 4`, `lambda_star` for `N >= 5`.
//! * [`lambda_hat`]: the trace-dominated analogue, exact arithmetic
//!   `(3+sqrt 5)/4` at `N = 3` and `N/4 + (N-4)/8` for `N >= 4`.
//!
//! [`verify_threshold_chain`] evaluates every intermediate inequality of the
//! bracketing proof with raw left/right values, so a failed row is
//! diagnosable rather than a bare boolean: the sharpened upper bound
//! subtracts an explicit trace-gap term from `(N-2)/2`, and the lower bound
//! goes through a dimension-specific closed form (one for `N = 5`, one for
//! `N = 6`, a uniform one for `N >= 7`).

use crate::constants::expansion_coefficients;
use crate::error::{Error, Result};
use crate::numerics::{gamma_fn, sphere_area, QuadratureSpec};
use crate::testfun::Exponents;

/// One inequality of the bracketing chain, with the raw values on each side.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainCheck {
    /// Human-readable statement of the inequality (`lhs < rhs` form).
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Whether `lhs < rhs` holds.
    pub satisfied: bool,
}

impl ChainCheck {
    fn less(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        ChainCheck {
            name: name.into(),
            lhs,
            rhs,
            satisfied: lhs < rhs,
        }
    }
}

/// Thresholds and the full bracketing chain for one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub n: u32,
    pub lambda_star: f64,
    pub lambda_bar: f64,
    pub lambda_hat: f64,
    /// `N/4`.
    pub lower_bound: f64,
    /// `(N-2)/2`.
    pub upper_bound: f64,
    pub chain_checks: Vec<ChainCheck>,
}

impl ThresholdReport {
    /// True when every chain row is satisfied.
    pub fn all_satisfied(&self) -> bool {
        self.chain_checks.iter().all(|c| c.satisfied)
    }
}

/// The proven sufficient threshold for `N >= 5`:
/// `alpha_N/d_N + (2/2*) beta_N/d_N + (2/2_*) gamma_N/d_N`.
pub fn lambda_star(n: u32, spec: &QuadratureSpec) -> Result<f64> {
    if n < 5 {
        return Err(Error::Domain(format!(
            "lambda_star requires N >= 5, got {n}"
        )));
    }
    let exps = Exponents::new(n)?;
    let c = expansion_coefficients(n, spec)?;
    let d = c.d_n.expect("d_N defined for N >= 5");
    let alpha = c.alpha_n.expect("alpha_N defined for N >= 5");
    let beta = c.beta_n.expect("beta_N defined for N >= 5");
    let gamma = c.gamma_n.expect("gamma_N defined for N >= 4");
    let value = alpha / d + 2.0 / exps.two_star * beta / d + 2.0 / exps.two_lower * gamma / d;
    debug_assert!(value > 0.0);
    Ok(value)
}

/// Piecewise threshold for the critical-volume case:
/// `(3+sqrt 5)/4` at `N = 3`, `1` at `N = 4`, [`lambda_star`] for `N >= 5`.
pub fn lambda_bar(n: u32, spec: &QuadratureSpec) -> Result<f64> {
    Exponents::new(n)?;
    match n {
        3 => Ok((3.0 + 5f64.sqrt()) / 4.0),
        4 => Ok(1.0),
        _ => lambda_star(n, spec),
    }
}

/// Piecewise threshold for the trace-dominated case, exact arithmetic:
/// `(3+sqrt 5)/4` at `N = 3`, `N/4 + (N-4)/8` for `N >= 4`.
pub fn lambda_hat(n: u32) -> Result<f64> {
    Exponents::new(n)?;
    match n {
        3 => Ok((3.0 + 5f64.sqrt()) / 4.0),
        _ => {
            let nf = n as f64;
            Ok(nf / 4.0 + (nf - 4.0) / 8.0)
        }
    }
}

// Trace-gap term of the sharpened upper bound:
// sqrt(N(N-2)) omega_{N-1} Gamma((N-1)/2)^2 / (8 (N-3) b^{N-3} C4 Gamma(N-1)).
fn upper_gap(n: u32, c4: f64) -> Result<f64> {
    let nf = n as f64;
    let exps = Exponents::new(n)?;
    let gamma0 = gamma_fn((nf - 1.0) / 2.0)?;
    Ok(
        (nf * (nf - 2.0)).sqrt() * sphere_area(n - 1)? * gamma0 * gamma0
            / (8.0 * (nf - 3.0) * exps.b().powi(n as i32 - 3) * c4 * gamma_fn(nf - 1.0)?),
    )
}

// Dimension-specific closed lower bound for lambda_star.
fn closed_lower_bound(n: u32) -> f64 {
    let nf = n as f64;
    match n {
        5 => 1.5 - 11.0 * 5f64.sqrt() / (80.0 * 2f64.sqrt()) + 1.0 / 32.0,
        6 => 2.0 - 7.0 * 3f64.sqrt() / (12.0 * 5f64.sqrt()) + 3.0 / 40.0,
        _ => {
            (nf - 2.0) / 2.0 - 3.0 * nf.sqrt() * (nf - 4.0) / (8.0 * (2.0 * nf - 2.0).sqrt())
                + (nf - 3.0) * (nf - 4.0) / (8.0 * (2.0 * nf - 2.0))
        }
    }
}

/// Evaluates every intermediate inequality of the bracketing chain
/// `N/4 < lambda_star < (N-2)/2` for one dimension `N >= 5`, with raw
/// left/right values per row.
pub fn verify_threshold_chain(n: u32, spec: &QuadratureSpec) -> Result<ThresholdReport> {
    if n < 5 {
        return Err(Error::Domain(format!(
            "threshold chain requires N >= 5, got {n}"
        )));
    }
    let nf = n as f64;
    let star = lambda_star(n, spec)?;
    let bar = lambda_bar(n, spec)?;
    let hat = lambda_hat(n)?;
    let lower = nf / 4.0;
    let upper = (nf - 2.0) / 2.0;

    let c = expansion_coefficients(n, spec)?;
    let sharpened = upper - upper_gap(n, c.c4.expect("C4 defined for N >= 5"))?;
    let low = closed_lower_bound(n);

    let chain_checks = vec![
        ChainCheck::less("N/4 < lambda_star", lower, star),
        ChainCheck::less("lambda_star < (N-2)/2", star, upper),
        ChainCheck::less("lambda_star < sharpened upper bound", star, sharpened),
        ChainCheck::less("sharpened upper bound < (N-2)/2", sharpened, upper),
        ChainCheck::less("closed lower bound < lambda_star", low, star),
        ChainCheck::less("N/4 < closed lower bound", lower, low),
    ];

    Ok(ThresholdReport {
        n,
        lambda_star: star,
        lambda_bar: bar,
        lambda_hat: hat,
        lower_bound: lower,
        upper_bound: upper,
        chain_checks,
    })
}
