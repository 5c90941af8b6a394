//! The full verification checklist behind `verify-all`: ten independent
//! criteria covering identities, eigenvalue checks, threshold chains,
//! dual-route constants, expansion fits, fiber sign-flips, the Hardy
//! inequality, region soundness, and determinism.
//!
//! Each criterion reports pass/fail with a one-line detail; an
//! infrastructure failure (quadrature non-convergence, singular algebra)
//! propagates as an error instead of a fail verdict, so exit codes can
//! distinguish "the claim is false" from "the computation broke".

use crate::asymptotics::{
    fit_with_remainder, sweep, ExpansionModel, ModelKind, Quantity, DEFAULT_GRID,
};
use crate::cli::{Report, Value};
use crate::constants::{bubble_constants, expansion_coefficients, xi_n};
use crate::error::{Error, Result};
use crate::fiber::{check_condition_a0, check_condition_a1, ConditionReport, TestFamily};
use crate::numerics::QuadratureSpec;
use crate::region::{existence_edge, grid_rows, GridRow, Mu1Bracket, Verdict};
use crate::spectral::{estimate_mu1, hardy_check, hardy_suite, rayleigh_volume};
use crate::testfun::TestFunction;
use crate::thresholds::{lambda_hat, verify_threshold_chain};

/// Seed of the randomized Hardy suite when none is given. Fixed so that
/// repeated `verify-all` runs are byte-identical.
pub const DEFAULT_SEED: u64 = 20260815;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(index: usize, name: &'static str, passed: bool, detail: String) -> Self {
        CriterionResult {
            index,
            name,
            passed,
            detail,
        }
    }
}

/// Tabular form of a criterion list (columns `criterion, name, passed,
/// detail`).
pub fn criteria_report(results: &[CriterionResult]) -> Report {
    let mut report = Report::new(vec!["criterion", "name", "passed", "detail"]);
    for c in results {
        report.push(vec![
            Value::I(c.index as i64),
            Value::S(c.name.into()),
            Value::B(c.passed),
            Value::S(c.detail.clone()),
        ]);
    }
    report
}

/// Runs all ten criteria in order. `seed` feeds the Hardy suite only.
pub fn run_all(seed: u64, spec: &QuadratureSpec) -> Result<Vec<CriterionResult>> {
    let mut out = Vec::with_capacity(10);
    out.push(criterion_bubble_identity(spec)?);
    out.push(criterion_gaussian_eigenvalue(spec)?);
    out.push(criterion_xi_identity(spec)?);
    out.push(criterion_threshold_chains(spec)?);
    out.push(criterion_dual_routes(spec)?);
    out.push(criterion_expansion_fits(spec)?);
    out.push(criterion_sign_flip(spec)?);
    out.push(criterion_hardy(seed, spec)?);
    out.push(criterion_region_soundness(spec)?);
    let determinism = criterion_determinism(&out, spec)?;
    out.push(determinism);
    Ok(out)
}

// Tolerances finer than the default quadrature target need a tighter
// spec; never loosen what the caller asked for.
fn tight(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: spec.abs_tol.min(1e-12),
        rel_tol: spec.rel_tol.min(1e-10),
        max_subdivisions: spec.max_subdivisions,
    }
}

fn criterion_bubble_identity(spec: &QuadratureSpec) -> Result<CriterionResult> {
    let mut worst = 0.0f64;
    for n in 3..=8u32 {
        let b = bubble_constants(n, spec)?;
        worst = worst.max((b.k1 - b.k2 - b.k3).abs() / b.k1);
    }
    Ok(CriterionResult::new(
        1,
        "bubble identity K1 = K2 + K3 for N in 3..8",
        worst <= 1e-6,
        format!("max relative residual {worst:.2e} (tolerance 1e-6)"),
    ))
}

fn criterion_gaussian_eigenvalue(spec: &QuadratureSpec) -> Result<CriterionResult> {
    let tight = tight(spec);
    let mut worst = 0.0f64;
    for n in 3..=8u32 {
        let quotient = rayleigh_volume(&TestFunction::gaussian(n)?, &tight)?;
        let want = n as f64 / 2.0;
        worst = worst.max((quotient - want).abs() / want);
    }
    Ok(CriterionResult::new(
        2,
        "Gaussian Rayleigh quotient equals N/2 for N in 3..8",
        worst <= 1e-8,
        format!("max relative deviation {worst:.2e} (tolerance 1e-8)"),
    ))
}

fn criterion_xi_identity(spec: &QuadratureSpec) -> Result<CriterionResult> {
    let mut worst = 0.0f64;
    for n in 5..=9u32 {
        let c = expansion_coefficients(n, spec)?;
        let alpha = c.alpha_hat.expect("alpha_hat for N >= 5").value();
        let d = c.d_hat.expect("d_hat for N >= 5").value();
        let xi = xi_n(n, spec)?;
        let lhs = (alpha + xi) / d;
        let rhs = n as f64 / 4.0 + (n as f64 - 4.0) / 8.0;
        worst = worst.max((lhs - rhs).abs() / rhs);
    }
    Ok(CriterionResult::new(
        3,
        "trace-coefficient identity (alpha_hat + xi)/d_hat = N/4 + (N-4)/8 for N in 5..9",
        worst <= 1e-4,
        format!("max relative deviation {worst:.2e} (tolerance 1e-4)"),
    ))
}

fn criterion_threshold_chains(spec: &QuadratureSpec) -> Result<CriterionResult> {
    let mut pass = true;
    let mut stars = String::new();
    for n in 5..=12u32 {
        let chain = verify_threshold_chain(n, spec)?;
        pass &= chain.all_satisfied();
        pass &= chain.lower_bound < chain.lambda_star && chain.lambda_star < chain.upper_bound;
        if n == 5 {
            pass &= chain.lambda_star > 1.31384;
        }
        if n <= 7 {
            if !stars.is_empty() {
                stars.push_str(", ");
            }
            stars.push_str(&format!("lambda*_{n} = {:.6}", chain.lambda_star));
        }
    }
    Ok(CriterionResult::new(
        4,
        "threshold bounds N/4 < lambda* < (N-2)/2 and chain inequalities for N in 5..12",
        pass,
        stars,
    ))
}

fn criterion_dual_routes(spec: &QuadratureSpec) -> Result<CriterionResult> {
    let mut worst = 0.0f64;
    let mut pass = true;
    for n in 5..=9u32 {
        let c = expansion_coefficients(n, spec)?;
        for route in [c.alpha_hat, c.d_hat, c.gamma_hat] {
            let gap = route.expect("dual routes for N >= 5").rel_gap();
            worst = worst.max(gap);
            pass &= gap <= 1e-6;
        }
    }
    let c3 = expansion_coefficients(5, spec)?.c3.expect("C3 for N = 5");
    let want = std::f64::consts::PI.powi(2) / 8.0;
    let c3_gap = (c3 - want).abs() / want;
    pass &= c3_gap <= 1e-8;
    Ok(CriterionResult::new(
        5,
        "closed Beta forms vs quadrature for alpha_hat, d_hat, gamma_hat (N in 5..9) and C3 at N = 5",
        pass,
        format!("max dual-route gap {worst:.2e} (tol 1e-6); C3 vs pi^2/8 gap {c3_gap:.2e} (tol 1e-8)"),
    ))
}

// One corrected fit: sweep the quantity, fit the model with the given
// remainder powers, return (literal rel_dev, corrected rel_dev).
fn fit_pair(
    family: TestFamily,
    quantity: Quantity,
    n: u32,
    q: f64,
    model: &ExpansionModel,
    powers: &[f64],
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let data = sweep(family, quantity, n, q, &DEFAULT_GRID, spec)?;
    let literal = fit_with_remainder(&data, model, &[])?;
    let corrected = fit_with_remainder(&data, model, powers)?;
    let dev = |f: &crate::asymptotics::ExpansionFit| f.rel_dev.expect("model has a target");
    Ok((dev(&literal), dev(&corrected)))
}

fn criterion_expansion_fits(spec: &QuadratureSpec) -> Result<CriterionResult> {
    let mut pass = true;
    let mut detail = String::new();
    let mut note = |label: &str, lit: f64, corr: f64, tol: f64, pass: &mut bool| {
        *pass &= corr <= tol;
        if !detail.is_empty() {
            detail.push_str("; ");
        }
        detail.push_str(&format!("{label} {corr:.4} (literal {lit:.4})"));
    };

    // Interior family at N = 5: second-order coefficients against the
    // four predicted constants. The pass verdict is keyed to the
    // remainder-corrected fit; the literal fit is reported alongside.
    let c5 = expansion_coefficients(5, spec)?;
    let targets = [
        (Quantity::E, c5.alpha_n.expect("alpha_5")),
        (Quantity::P, c5.d_n.expect("d_5")),
        (Quantity::V, -c5.beta_n.expect("beta_5")),
        (Quantity::T, -c5.gamma_n.expect("gamma_5")),
    ];
    for (quantity, predicted) in targets {
        let model = ExpansionModel::new(ModelKind::C0PlusC2Eps2).with_predicted(predicted);
        let (lit, corr) = fit_pair(
            TestFamily::Cutoff,
            quantity,
            5,
            2.0,
            &model,
            &[3.0, 4.0],
            spec,
        )?;
        note(
            &format!("N=5 {} dev", quantity.label()),
            lit,
            corr,
            0.05,
            &mut pass,
        );
    }

    // Log-dimension N = 4: the eps^2 |ln eps| coefficients of energy and
    // mass share the predicted value 8 pi^2.
    let predicted = 8.0 * std::f64::consts::PI.powi(2);
    for quantity in [Quantity::E, Quantity::P] {
        let model = ExpansionModel::new(ModelKind::C0PlusClog).with_predicted(predicted);
        let (lit, corr) = fit_pair(TestFamily::Cutoff, quantity, 4, 2.0, &model, &[3.0], spec)?;
        note(
            &format!("N=4 log {} dev", quantity.label()),
            lit,
            corr,
            0.10,
            &mut pass,
        );
    }

    // Boundary q-mass slopes: theta = 0.5 at both sample points; the
    // leading correction enters at eps^{(N-2)q - (N-1)}.
    for (n, q) in [(4u32, 2.5f64), (3, 3.0)] {
        let correction = (n as f64 - 2.0) * q - (n as f64 - 1.0);
        let model = ExpansionModel::new(ModelKind::PurePower).with_theta(0.5);
        let (lit, corr) = fit_pair(
            TestFamily::Cutoff,
            Quantity::Q,
            n,
            q,
            &model,
            &[correction],
            spec,
        )?;
        note(&format!("Q({n},{q}) slope dev"), lit, corr, 0.03, &mut pass);
    }

    Ok(CriterionResult::new(
        6,
        "expansion fits: N=5 E/P/V/T within 5%, N=4 log coefficients within 10%, Q slopes within 3%",
        pass,
        detail,
    ))
}

// Outcome of the two smallest scales of a condition report.
fn tail_passes(report: &ConditionReport) -> (bool, bool) {
    let k = report.rows.len();
    (report.rows[k - 2].passes, report.rows[k - 1].passes)
}

fn criterion_sign_flip(spec: &QuadratureSpec) -> Result<CriterionResult> {
    // At N = 5 the eps^2 margin coefficient is small on the failing side,
    // so the flip only resolves below the default grid; finer scales are
    // appended and the two smallest rows are the keyed ones.
    let cases: [(u32, u8, &[f64]); 5] = [
        (5, 1, &[0.03, 0.02, 0.012, 0.008]),
        (6, 1, &[0.03, 0.02]),
        (7, 1, &[0.03, 0.02]),
        (5, 0, &[0.03, 0.02, 0.015, 0.01]),
        (7, 0, &[0.03, 0.02]),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (n, a, eps) in cases {
        let edge = existence_edge(n, a, spec)?;
        let check = |lambda: f64| -> Result<ConditionReport> {
            match a {
                1 => check_condition_a1(n, lambda, 0.0, 2.0, eps, spec),
                _ => check_condition_a0(n, lambda, 0.0, 2.0, eps, spec),
            }
        };
        let above = check(edge + 0.05)?;
        let below = check(edge - 0.05)?;
        let (up1, up2) = tail_passes(&above);
        let (dn1, dn2) = tail_passes(&below);
        let ok = up1 && up2 && !dn1 && !dn2;
        pass &= ok;
        if !detail.is_empty() {
            detail.push_str("; ");
        }
        detail.push_str(&format!(
            "N={n} a={a} eps {:?}: above {}{}, below {}{}",
            &eps[eps.len() - 2..],
            up1 as u8,
            up2 as u8,
            dn1 as u8,
            dn2 as u8
        ));
    }
    Ok(CriterionResult::new(
        7,
        "fiber condition passes at Lambda* + 0.05 and fails at Lambda* - 0.05 at the two smallest scales",
        pass,
        detail,
    ))
}

fn criterion_hardy(seed: u64, spec: &QuadratureSpec) -> Result<CriterionResult> {
    let suite = hardy_suite(seed)?;
    let mut pass = suite.len() == 30;
    for u in &suite {
        pass &= hardy_check(u, spec)?.holds;
    }
    let tight = tight(spec);
    let mut worst = 0.0f64;
    for n in 3..=5u32 {
        let check = hardy_check(&TestFunction::gaussian(n)?, &tight)?;
        let ratio = check.rhs / check.lhs;
        let want = (n as f64 + 2.0) / n as f64;
        worst = worst.max((ratio - want).abs() / want);
    }
    pass &= worst <= 1e-6;
    Ok(CriterionResult::new(
        8,
        "Hardy inequality on a 30-function suite (N in 3..5) and Gaussian ratio (N+2)/N",
        pass,
        format!("suite size 30, max Gaussian ratio deviation {worst:.2e} (tolerance 1e-6)"),
    ))
}

// The mu = 0 axis of a grid, in ascending lambda order.
fn mu_zero_axis(rows: &[GridRow]) -> Vec<(f64, Verdict)> {
    rows.iter()
        .filter(|r| r.mu == 0.0)
        .map(|r| (r.lambda, r.verdict))
        .collect()
}

// Checks the three-breakpoint pattern none -> unknown -> exists -> none
// with transitions within one grid step of the predicted edges.
fn axis_pattern_ok(axis: &[(f64, Verdict)], n: u32, edge: f64, step: f64) -> bool {
    let mut pattern = Vec::new();
    for &(lambda, v) in axis {
        if pattern.last().map(|&(_, p)| p) != Some(v) {
            pattern.push((lambda, v));
        }
    }
    let shape: Vec<Verdict> = pattern.iter().map(|&(_, v)| v).collect();
    if shape
        != [
            Verdict::NoPositive,
            Verdict::Unknown,
            Verdict::ExistsPositive,
            Verdict::NoPositive,
        ]
    {
        return false;
    }
    let quarter = n as f64 / 4.0;
    let half = n as f64 / 2.0;
    let tol = step + 1e-12;
    (pattern[1].0 - quarter).abs() <= tol
        && (pattern[2].0 - edge).abs() <= tol
        && (pattern[3].0 - half).abs() <= tol
}

fn criterion_region_soundness(spec: &QuadratureSpec) -> Result<CriterionResult> {
    let cases = [(4u32, 1u8, 2.5f64), (5, 1, 2.0), (7, 0, 2.2)];
    let mut pass = true;
    let mut detail = String::new();
    for (n, a, q) in cases {
        let upper = estimate_mu1(n, 6, spec)?.value;
        let bracket = Mu1Bracket::from_upper(upper)?;
        let edge = existence_edge(n, a, spec)?;
        let half = n as f64 / 2.0;
        let outcome = grid_rows(n, a, q, (0.0, half), (-0.5, 1.5), 51, 41, &bracket, edge);
        let note = match outcome {
            Ok(rows) => {
                let axis = mu_zero_axis(&rows);
                let ok = axis.len() == 51 && axis_pattern_ok(&axis, n, edge, half / 50.0);
                pass &= ok;
                format!(
                    "(N,a,q)=({n},{a},{q}) grid sound, axis pattern {}",
                    if ok { "ok" } else { "WRONG" }
                )
            }
            Err(Error::Domain(msg)) => {
                pass = false;
                format!("(N,a,q)=({n},{a},{q}) OVERLAP: {msg}")
            }
            Err(e) => return Err(e),
        };
        if !detail.is_empty() {
            detail.push_str("; ");
        }
        detail.push_str(&note);
    }
    // The supercritical boundary exponent must be refused outright: at
    // N = 7 the trace-critical exponent is 2.4, so q = 2.5 is out of
    // range and no grid may be produced for it.
    let bracket = Mu1Bracket::from_upper(1.0)?;
    let refused = matches!(
        grid_rows(
            7,
            0,
            2.5,
            (0.0, 3.5),
            (-0.5, 1.5),
            51,
            41,
            &bracket,
            lambda_hat(7)?
        ),
        Err(Error::Domain(_))
    );
    pass &= refused;
    detail.push_str(&format!("; q=2.5 at N=7 refused: {refused}"));
    Ok(CriterionResult::new(
        9,
        "region grids are overlap-free and the mu = 0 axis shows the three-breakpoint pattern",
        pass,
        detail,
    ))
}

fn criterion_determinism(
    previous: &[CriterionResult],
    spec: &QuadratureSpec,
) -> Result<CriterionResult> {
    let first = criteria_report(previous).to_csv()?;
    let second = criteria_report(previous).to_csv()?;
    let mut pass = first == second;

    // Re-run uncached pipelines and compare bitwise: classification has
    // no cache at all, and the least-squares path is rebuilt per call.
    let bracket = Mu1Bracket::from_upper(1.5)?;
    let edge = existence_edge(4, 1, spec)?;
    let grid_a = grid_rows(4, 1, 2.5, (0.0, 2.0), (-0.5, 1.5), 11, 9, &bracket, edge)?;
    let grid_b = grid_rows(4, 1, 2.5, (0.0, 2.0), (-0.5, 1.5), 11, 9, &bracket, edge)?;
    pass &= grid_a == grid_b;

    let data = sweep(
        TestFamily::Cutoff,
        Quantity::P,
        5,
        2.0,
        &[0.1, 0.05, 0.03],
        spec,
    )?;
    let model = ExpansionModel::new(ModelKind::C0PlusC2Eps2);
    let fit_a = fit_with_remainder(&data, &model, &[3.0])?;
    let fit_b = fit_with_remainder(&data, &model, &[3.0])?;
    pass &= fit_a.fitted.to_bits() == fit_b.fitted.to_bits();

    Ok(CriterionResult::new(
        10,
        "deterministic re-evaluation (report rendering, grid classification, least squares)",
        pass,
        "in-process double evaluation bitwise identical; the binary-level double run is \
         exercised by the acceptance suite"
            .into(),
    ))
}
