//! Randomized invariants on the pure (quadrature-free) layers: fit
//! recovery and scale invariance, region-classifier soundness and
//! refinement monotonicity, the linear-flux frontier, exponent
//! identities, and report rendering.

use halfspace::asymptotics::{fit, ExpansionModel, ModelKind, DEFAULT_GRID};
use halfspace::cli::{OutputFormat, Report, Value};
use halfspace::region::{classify, eta_curve, Mu1Bracket, ProblemParams, Verdict};
use halfspace::testfun::Exponents;
use proptest::prelude::*;

// ---------------------------------------------------------------------------
// Least-squares fits
// ---------------------------------------------------------------------------

proptest! {
    /// Planting `c0 + c2 eps^2` on the default grid returns `c2` exactly
    /// (up to solver roundoff): the model basis matches the data.
    #[test]
    fn fit_recovers_planted_quadratic(c0 in -50.0f64..50.0, c2 in -50.0f64..50.0) {
        let data: Vec<(f64, f64)> =
            DEFAULT_GRID.iter().map(|&e| (e, c0 + c2 * e * e)).collect();
        let out = fit(&data, &ExpansionModel::new(ModelKind::C0PlusC2Eps2)).unwrap();
        prop_assert!((out.fitted - c2).abs() <= 1e-8 * (1.0 + c2.abs()),
            "fitted {} vs planted {}", out.fitted, c2);
        prop_assert!(out.residual_norm <= 1e-8 * (1.0 + c0.abs() + c2.abs()));
    }

    /// Same for the log-augmented interior model `c0 + c e^2|ln e| + c' e^2`.
    #[test]
    fn fit_recovers_planted_log_coefficient(
        c0 in -50.0f64..50.0,
        cl in -50.0f64..50.0,
        c2 in -50.0f64..50.0,
    ) {
        let data: Vec<(f64, f64)> = DEFAULT_GRID
            .iter()
            .map(|&e| (e, c0 + cl * e * e * e.ln().abs() + c2 * e * e))
            .collect();
        let out = fit(&data, &ExpansionModel::new(ModelKind::C0PlusClog)).unwrap();
        prop_assert!((out.fitted - cl).abs() <= 1e-7 * (1.0 + cl.abs()),
            "fitted {} vs planted {}", out.fitted, cl);
    }

    /// And for the boundary model `c e|ln e| + c' e` without constant term.
    #[test]
    fn fit_recovers_planted_power_log_coefficient(
        cl in -50.0f64..50.0,
        c1 in -50.0f64..50.0,
    ) {
        let data: Vec<(f64, f64)> = DEFAULT_GRID
            .iter()
            .map(|&e| (e, cl * e * e.ln().abs() + c1 * e))
            .collect();
        let out = fit(&data, &ExpansionModel::new(ModelKind::PowerLog)).unwrap();
        prop_assert!((out.fitted - cl).abs() <= 1e-8 * (1.0 + cl.abs()),
            "fitted {} vs planted {}", out.fitted, cl);
    }

    /// The log-log slope of a pure power law is invariant under rescaling
    /// the values, and equals the planted exponent.
    #[test]
    fn pure_power_slope_is_scale_invariant(
        theta in 0.05f64..3.0,
        c in 0.1f64..100.0,
        k in 0.1f64..1000.0,
    ) {
        let data: Vec<(f64, f64)> =
            DEFAULT_GRID.iter().map(|&e| (e, c * e.powf(theta))).collect();
        let scaled: Vec<(f64, f64)> =
            data.iter().map(|&(e, v)| (e, k * v)).collect();
        let model = ExpansionModel::new(ModelKind::PurePower).with_theta(theta);
        let a = fit(&data, &model).unwrap();
        let b = fit(&scaled, &model).unwrap();
        prop_assert!((a.fitted - theta).abs() <= 1e-9 * (1.0 + theta));
        prop_assert!((a.fitted - b.fitted).abs() <= 1e-9,
            "slope moved under rescaling: {} vs {}", a.fitted, b.fitted);
    }
}

// ---------------------------------------------------------------------------
// Region classification
// ---------------------------------------------------------------------------

/// Generator for a valid classification instance: dimension, switch,
/// boundary exponent (exactly 2 half of the time), point, bracket, edge.
fn region_instance() -> impl Strategy<Value = (ProblemParams, Mu1Bracket, f64)> {
    (
        3u32..=10,
        0u8..=1,
        prop::bool::ANY,
        0.001f64..0.99,
        -2.0f64..8.0,
        -2.0f64..4.0,
        0.0f64..3.0,
        0.01f64..3.0,
        0.0f64..2.0,
    )
        .prop_map(|(n, a, linear, t, lambda, mu, lower, width, s)| {
            let exps = Exponents::new(n).unwrap();
            let q = if linear {
                2.0
            } else {
                2.0 + t * (exps.two_lower - 2.0)
            };
            let p = ProblemParams::new(n, a, q, lambda, mu).unwrap();
            let bracket = Mu1Bracket::new(lower, lower + width).unwrap();
            let edge = n as f64 / 4.0 + s;
            (p, bracket, edge)
        })
}

proptest! {
    /// The definite criteria never overlap: `classify` is total on valid
    /// inputs, whatever the point, bracket, and edge.
    #[test]
    fn classify_is_total_on_valid_inputs(
        (p, bracket, edge) in region_instance(),
    ) {
        let verdict = classify(&p, &bracket, edge);
        prop_assert!(verdict.is_ok(), "classification refused: {verdict:?}");
    }

    /// Shrinking the eigenvalue bracket only sharpens the verdict: a
    /// definite answer under the wide bracket survives under any nested
    /// bracket; only `Unknown` may change.
    #[test]
    fn classify_refines_monotonically_under_bracket_shrink(
        (p, bracket, edge) in region_instance(),
        t_lo in 0.0f64..0.49,
        t_hi in 0.0f64..0.49,
    ) {
        let wide = classify(&p, &bracket, edge).unwrap();
        let span = bracket.upper - bracket.lower;
        let narrow = Mu1Bracket::new(
            bracket.lower + t_lo * span,
            bracket.upper - t_hi * span,
        ).unwrap();
        let sharp = classify(&p, &narrow, edge).unwrap();
        if wide.verdict != Verdict::Unknown {
            prop_assert_eq!(
                sharp.verdict, wide.verdict,
                "bracket [{}, {}] -> [{}, {}] flipped a definite verdict",
                bracket.lower, bracket.upper, narrow.lower, narrow.upper
            );
        }
    }

    /// The linear-flux frontier is the line through `(0, mu1)` and
    /// `(N/2, 0)`, strictly decreasing in lambda.
    #[test]
    fn eta_curve_is_the_decreasing_chord(
        n in 3u32..=12,
        mu1 in 1e-6f64..10.0,
        lambda in 0.0f64..6.0,
        gap in 1e-6f64..1.0,
    ) {
        prop_assert_eq!(eta_curve(n, 0.0, mu1).unwrap(), mu1);
        let at_half = eta_curve(n, n as f64 / 2.0, mu1).unwrap();
        prop_assert!(at_half.abs() <= 1e-12 * mu1, "eta(N/2) = {at_half}");
        let here = eta_curve(n, lambda, mu1).unwrap();
        let there = eta_curve(n, lambda + gap, mu1).unwrap();
        prop_assert!(there < here, "not decreasing: {here} -> {there}");
    }
}

// ---------------------------------------------------------------------------
// Exponent identities
// ---------------------------------------------------------------------------

#[test]
fn exponent_identities_hold_on_every_dimension() {
    for n in 3..=12u32 {
        let e = Exponents::new(n).unwrap();
        let nf = n as f64;
        // 2* - 2 = 2 (2_* - 2): interior and trace superlinearity match.
        assert!(
            ((e.two_star - 2.0) - 2.0 * (e.two_lower - 2.0)).abs() <= 1e-14 * e.two_star,
            "n = {n}"
        );
        // The boundary scaling exponent interpolates 1 at q = 2 and 0 at
        // the trace-critical exponent.
        assert_eq!(e.boundary_scaling_exponent(2.0), 1.0, "n = {n}");
        assert!(
            e.boundary_scaling_exponent(e.two_lower).abs() <= 1e-13,
            "n = {n}"
        );
        // Bubble geometry: b^2 = (2n-2)/(n-2) and k_n = (n(n-2))^{(n-2)/4}.
        let b2 = (2.0 * nf - 2.0) / (nf - 2.0);
        assert!((e.b() * e.b() - b2).abs() <= 1e-14 * b2, "n = {n}");
        let kn = (nf * (nf - 2.0)).powf((nf - 2.0) / 4.0);
        assert!((e.k_n - kn).abs() <= 1e-12 * kn, "n = {n}");
    }
    assert!(Exponents::new(2).is_err());
    assert!(Exponents::new(13).is_err());
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

const POOL: [&str; 4] = ["alpha", "beta", "gamma", "delta"];

proptest! {
    /// CSV keeps shape and round-trips finite floats bit-exactly; JSON
    /// carries one object per row; rendering twice is byte-identical.
    #[test]
    fn report_rendering_is_deterministic_and_lossless(
        table in prop::collection::vec(
            prop::collection::vec(-1e12f64..1e12, 4),
            1..6,
        ),
    ) {
        let mut report = Report::new(POOL.to_vec());
        for row in &table {
            report.push(row.iter().map(|&x| Value::F(x)).collect());
        }

        let csv = report.render(OutputFormat::Csv).unwrap();
        prop_assert_eq!(csv.lines().count(), table.len() + 1);
        prop_assert_eq!(csv.lines().next().unwrap(), POOL.join(","));
        for (line, row) in csv.lines().skip(1).zip(&table) {
            let cells: Vec<&str> = line.split(',').collect();
            prop_assert_eq!(cells.len(), row.len());
            for (cell, &x) in cells.iter().zip(row) {
                prop_assert_eq!(cell.parse::<f64>().unwrap().to_bits(), x.to_bits(),
                    "CSV cell {} does not round-trip {}", cell, x);
            }
        }

        let json = report.render(OutputFormat::Json).unwrap();
        prop_assert_eq!(json.matches('{').count(), table.len());
        prop_assert_eq!(json.matches("\"alpha\":").count(), table.len());

        prop_assert_eq!(report.render(OutputFormat::Csv).unwrap(), csv);
        prop_assert_eq!(report.render(OutputFormat::Json).unwrap(), json);
    }
}

#[test]
fn non_finite_and_empty_cells_render_as_json_null() {
    let mut report = Report::new(vec!["x", "note"]);
    report.push(vec![Value::F(f64::NAN), Value::Empty]);
    report.push(vec![
        Value::F(f64::INFINITY),
        Value::S("a,b \"quoted\"".into()),
    ]);
    let json = report.render(OutputFormat::Json).unwrap();
    assert_eq!(json.matches("null").count(), 3);
    assert!(json.contains("\"a,b \\\"quoted\\\"\""));
    // The CSV side quotes the embedded comma instead of splitting on it.
    let csv = report.render(OutputFormat::Csv).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.contains("\"a,b \"\"quoted\"\"\""));
}
