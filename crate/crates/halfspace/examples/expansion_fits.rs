//! Sweep the concentration families over a scale grid and fit the
//! predicted expansion coefficients.
//!
//! Quantities of the cutoff bubble family expand as `c0 + c eps^2` for
//! `N >= 5` and as `c0 + c eps^2 |ln eps| + c' eps^2` at `N = 4`; the
//! boundary q-mass follows a pure power law whose log-log slope is
//! `theta = N - 1 - (N-2) q / 2`. A literal fit of the truncated model is
//! biased by the next remainder order at reachable scales, so each fit is
//! repeated with remainder columns appended; the corrected coefficient is
//! the one compared against the prediction.

use halfspace::asymptotics::{
    fit, fit_with_remainder, sweep, ExpansionModel, ModelKind, Quantity, DEFAULT_GRID,
};
use halfspace::constants::expansion_coefficients;
use halfspace::fiber::TestFamily;
use halfspace::{QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();

    // N = 5: the weighted L2 mass grows as d_N eps^2 above the bubble value.
    let d5 = expansion_coefficients(5, &spec)?.d_n.unwrap();
    let data = sweep(
        TestFamily::Cutoff,
        Quantity::P,
        5,
        2.0,
        &DEFAULT_GRID,
        &spec,
    )?;
    let model = ExpansionModel::new(ModelKind::C0PlusC2Eps2).with_predicted(d5);
    let literal = fit(&data, &model)?;
    let corrected = fit_with_remainder(&data, &model, &[3.0, 4.0])?;
    println!("N = 5, quantity P, predicted d_5 = {d5:.6}");
    println!(
        "  literal   fit: {:.6} (rel dev {:.4})",
        literal.fitted,
        literal.rel_dev.unwrap()
    );
    println!(
        "  corrected fit: {:.6} (rel dev {:.4})",
        corrected.fitted,
        corrected.rel_dev.unwrap()
    );

    // N = 4: the same quantity picks up a logarithm; the eps^2 |ln eps|
    // coefficient is 8 pi^2 for both the energy and the mass.
    let predicted = 8.0 * std::f64::consts::PI.powi(2);
    let data = sweep(
        TestFamily::Cutoff,
        Quantity::E,
        4,
        2.0,
        &DEFAULT_GRID,
        &spec,
    )?;
    let model = ExpansionModel::new(ModelKind::C0PlusClog).with_predicted(predicted);
    let corrected = fit_with_remainder(&data, &model, &[3.0])?;
    println!("\nN = 4, quantity E, predicted log coefficient = {predicted:.6}");
    println!(
        "  corrected fit: {:.6} (rel dev {:.4})",
        corrected.fitted,
        corrected.rel_dev.unwrap()
    );

    // Boundary q-mass: log-log slope vs theta, with the leading
    // correction at eps^{(N-2) q - (N-1)}.
    for (n, q) in [(4u32, 2.5f64), (3, 3.0)] {
        let theta = 0.5;
        let correction = (n as f64 - 2.0) * q - (n as f64 - 1.0);
        let data = sweep(TestFamily::Cutoff, Quantity::Q, n, q, &DEFAULT_GRID, &spec)?;
        let model = ExpansionModel::new(ModelKind::PurePower).with_theta(theta);
        let corrected = fit_with_remainder(&data, &model, &[correction])?;
        println!(
            "\n(N, q) = ({n}, {q}): log-log slope {:.6} vs theta = {theta} (rel dev {:.4})",
            corrected.fitted,
            corrected.rel_dev.unwrap()
        );
    }
    Ok(())
}
