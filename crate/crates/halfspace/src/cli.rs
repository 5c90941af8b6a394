//! Library side of the command-line surface: structured reports with CSV
//! and JSON rendering, and one entry point per subcommand.
//!
//! Every command produces a [`Report`] (uniform columns, typed cells) plus
//! an `all_pass` flag that drives the process exit code: 0 when every
//! internal check in the report holds, 2 otherwise. Rendering is
//! deterministic: CSV cells use the shortest round-trip float form, JSON
//! uses 17 significant digits.

use std::fmt::Write as _;

use crate::asymptotics::{
    fit, fit_with_remainder, sweep, verify_envelope_bounds, ExpansionModel, ModelKind, Quantity,
    DEFAULT_GRID,
};
use crate::constants::{
    bubble_constants, c3_closed, c6_closed, expansion_coefficients, theta_of_tau, trace_constants,
    xi_n,
};
use crate::error::{Error, Result};
use crate::fiber::{check_condition_a0, check_condition_a1, ConditionReport, TestFamily};
use crate::numerics::QuadratureSpec;
use crate::region::{existence_edge, grid_rows, Mu1Bracket};
use crate::spectral::{estimate_mu1, rayleigh_volume};
use crate::testfun::{Exponents, TestFunction};
use crate::thresholds::{lambda_bar, lambda_hat, verify_threshold_chain};

/// One report cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    F(f64),
    I(i64),
    S(String),
    B(bool),
    Empty,
}

impl Value {
    fn csv_cell(&self) -> String {
        match self {
            Value::F(x) => format!("{x}"),
            Value::I(k) => format!("{k}"),
            Value::S(s) => s.clone(),
            Value::B(b) => format!("{b}"),
            Value::Empty => String::new(),
        }
    }

    fn json_cell(&self) -> String {
        match self {
            Value::F(x) if x.is_finite() => format!("{x:.16e}"),
            Value::F(_) => "null".into(),
            Value::I(k) => format!("{k}"),
            Value::S(s) => serde_json::to_string(s).expect("string serialization"),
            Value::B(b) => format!("{b}"),
            Value::Empty => "null".into(),
        }
    }
}

/// Output format of a rendered report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Domain(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

/// A uniform table of results.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Report {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)
            .map_err(|e| Error::Io(e.to_string()))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::csv_cell).collect();
            w.write_record(&cells)
                .map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("\n  {");
            for (k, (col, cell)) in self.columns.iter().zip(row).enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "\"{col}\": {}", cell.json_cell());
            }
            out.push('}');
        }
        out.push_str("\n]\n");
        out
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => Ok(self.to_json()),
        }
    }
}

/// A rendered-ready result: the table plus whether every check in it held.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub report: Report,
    pub all_pass: bool,
}

fn pass_row(
    name: &str,
    value: f64,
    cross: Option<f64>,
    rel_gap: Option<f64>,
    pass: Option<bool>,
) -> Vec<Value> {
    vec![
        Value::S(name.into()),
        Value::F(value),
        cross.map_or(Value::Empty, Value::F),
        rel_gap.map_or(Value::Empty, Value::F),
        pass.map_or(Value::Empty, Value::B),
    ]
}

fn cross_check(report: &mut Report, all: &mut bool, name: &str, value: f64, cross: f64, tol: f64) {
    let gap = (value - cross).abs() / cross.abs().max(f64::MIN_POSITIVE);
    let ok = gap <= tol;
    *all &= ok;
    report.push(pass_row(name, value, Some(cross), Some(gap), Some(ok)));
}

/// `constants --dim N`: every computable constant for one dimension, with
/// cross-route checks where a second route exists.
pub fn constants_report(n: u32, spec: &QuadratureSpec) -> Result<CommandOutput> {
    let mut report = Report::new(vec!["name", "value", "cross_value", "rel_gap", "pass"]);
    let mut all = true;

    let bubble = bubble_constants(n, spec)?;
    report.push(pass_row("K1", bubble.k1, None, None, None));
    report.push(pass_row("K2", bubble.k2, None, None, None));
    report.push(pass_row("K3", bubble.k3, None, None, None));
    {
        let delta = bubble.k1 - bubble.k2 - bubble.k3;
        let gap = delta.abs() / bubble.k1;
        let ok = gap <= 1e-6;
        all &= ok;
        report.push(pass_row("K1-K2-K3", delta, Some(0.0), Some(gap), Some(ok)));
    }
    report.push(pass_row("A_target", bubble.a, None, None, None));

    let trace = trace_constants(n, spec)?;
    // The trace bubble is harmonic: its energy equals (N-2) times its
    // boundary mass, so A_N has an exact cross route.
    let mass = trace.b_n.powf(Exponents::new(n)?.two_lower / 2.0);
    cross_check(
        &mut report,
        &mut all,
        "A_N",
        trace.a_n,
        (n as f64 - 2.0) * mass,
        1e-6,
    );
    report.push(pass_row("B_N", trace.b_n, None, None, None));
    report.push(pass_row("S0", trace.s0, None, None, None));

    let c = expansion_coefficients(n, spec)?;
    if let (Some(alpha), Some(d)) = (c.alpha_n, c.d_n) {
        cross_check(
            &mut report,
            &mut all,
            "alpha_N",
            alpha,
            n as f64 / 4.0 * d,
            1e-6,
        );
        report.push(pass_row("d_N", d, None, None, None));
    }
    if let Some(beta) = c.beta_n {
        report.push(pass_row("beta_N", beta, None, None, None));
    }
    if let Some(gamma) = c.gamma_n {
        report.push(pass_row("gamma_N", gamma, None, None, None));
    }
    for (name, route) in [
        ("alpha_hat", c.alpha_hat),
        ("d_hat", c.d_hat),
        ("gamma_hat", c.gamma_hat),
    ] {
        if let Some(route) = route {
            let gap = route.rel_gap();
            let ok = gap <= 1e-6;
            all &= ok;
            report.push(pass_row(
                name,
                route.closed_form,
                Some(route.quadrature),
                Some(gap),
                Some(ok),
            ));
        }
    }
    for (name, value) in [
        ("C1", c.c1),
        ("C2", c.c2),
        ("C4", c.c4),
        ("C5", c.c5),
        ("D1", c.d1),
        ("D2", c.d2),
        ("D3", c.d3),
        ("D4", c.d4),
    ] {
        if let Some(value) = value {
            report.push(pass_row(name, value, None, None, None));
        }
    }
    if let Some(c3) = c.c3 {
        cross_check(&mut report, &mut all, "C3", c3, c3_closed(n)?, 1e-6);
    }
    if let Some(c6) = c.c6 {
        cross_check(&mut report, &mut all, "C6", c6, c6_closed(n)?, 1e-6);
    }
    if let (Some(route), Some(d_hat)) = (c.alpha_hat, c.d_hat) {
        let xi = xi_n(n, spec)?;
        let cross = (3.0 * n as f64 - 4.0) / 8.0 * d_hat.value() - route.value();
        cross_check(&mut report, &mut all, "xi_N", xi, cross, 1e-4);
    }
    report.push(pass_row(
        "theta_of_tau(1)",
        theta_of_tau(n, 1.0, spec)?,
        None,
        None,
        None,
    ));

    Ok(CommandOutput {
        report,
        all_pass: all,
    })
}

/// `thresholds --dim-range LO..HI`: one row per dimension; with `detail`,
/// one row per chain inequality instead.
pub fn thresholds_report(
    lo: u32,
    hi: u32,
    detail: bool,
    spec: &QuadratureSpec,
) -> Result<CommandOutput> {
    if !(3 <= lo && lo <= hi && hi <= 12) {
        return Err(Error::Domain(format!(
            "dimension range must satisfy 3 <= LO <= HI <= 12, got {lo}..{hi}"
        )));
    }
    let mut all = true;
    if detail {
        let mut report = Report::new(vec!["n", "check", "lhs", "rhs", "satisfied"]);
        for n in lo.max(5)..=hi {
            let chain = verify_threshold_chain(n, spec)?;
            for c in &chain.chain_checks {
                all &= c.satisfied;
                report.push(vec![
                    Value::I(n as i64),
                    Value::S(c.name.clone()),
                    Value::F(c.lhs),
                    Value::F(c.rhs),
                    Value::B(c.satisfied),
                ]);
            }
        }
        return Ok(CommandOutput {
            report,
            all_pass: all,
        });
    }
    let mut report = Report::new(vec![
        "n",
        "lambda_bar",
        "lambda_hat",
        "lambda_star",
        "lower_bound",
        "upper_bound",
        "chain_satisfied",
    ]);
    for n in lo..=hi {
        let bar = lambda_bar(n, spec)?;
        let hat = lambda_hat(n)?;
        let (star, chain_ok) = if n >= 5 {
            let chain = verify_threshold_chain(n, spec)?;
            all &= chain.all_satisfied();
            (Some(chain.lambda_star), Some(chain.all_satisfied()))
        } else {
            (None, None)
        };
        // The N/4 and (N-2)/2 brackets pertain to lambda_star only.
        let bound = |v: f64| {
            if star.is_some() {
                Value::F(v)
            } else {
                Value::Empty
            }
        };
        report.push(vec![
            Value::I(n as i64),
            Value::F(bar),
            Value::F(hat),
            star.map_or(Value::Empty, Value::F),
            bound(n as f64 / 4.0),
            bound((n as f64 - 2.0) / 2.0),
            chain_ok.map_or(Value::Empty, Value::B),
        ]);
    }
    Ok(CommandOutput {
        report,
        all_pass: all,
    })
}

// Model, prediction, remainder powers, and pass tolerance for one
// (family, dimension, quantity) combination.
struct FitPlan {
    model: ExpansionModel,
    powers: Vec<f64>,
    tolerance: Option<f64>,
}

fn fit_plan(
    family: TestFamily,
    n: u32,
    quantity: Quantity,
    q: f64,
    spec: &QuadratureSpec,
) -> Result<FitPlan> {
    let exps = Exponents::new(n)?;
    if quantity == Quantity::Q {
        let theta = exps.boundary_scaling_exponent(q);
        let correction = (n as f64 - 2.0) * q - (n as f64 - 1.0);
        return Ok(FitPlan {
            model: ExpansionModel::new(ModelKind::PurePower).with_theta(theta),
            powers: if correction > 0.0 {
                vec![correction]
            } else {
                Vec::new()
            },
            tolerance: Some(0.03),
        });
    }
    if n == 3 {
        return Ok(FitPlan {
            model: ExpansionModel::new(ModelKind::PowerLog),
            powers: Vec::new(),
            tolerance: None,
        });
    }
    if n == 4 {
        let predicted = match (family, quantity) {
            (TestFamily::Cutoff, Quantity::E) | (TestFamily::Cutoff, Quantity::P) => {
                Some(8.0 * std::f64::consts::PI.powi(2))
            }
            (TestFamily::CutoffTrace, Quantity::P) => Some(std::f64::consts::PI.powi(2)),
            _ => None,
        };
        let mut model = ExpansionModel::new(ModelKind::C0PlusClog);
        if let Some(p) = predicted {
            model = model.with_predicted(p);
        }
        return Ok(FitPlan {
            model,
            powers: vec![3.0],
            tolerance: predicted.map(|_| 0.10),
        });
    }
    let c = expansion_coefficients(n, spec)?;
    let predicted = match (family, quantity) {
        (TestFamily::Cutoff, Quantity::E) => c.alpha_n,
        (TestFamily::Cutoff, Quantity::P) => c.d_n,
        (TestFamily::Cutoff, Quantity::V) => c.beta_n.map(|b| -b),
        (TestFamily::Cutoff, Quantity::T) => c.gamma_n.map(|g| -g),
        (TestFamily::CutoffTrace, Quantity::E) => c.alpha_hat.map(|r| r.value()),
        (TestFamily::CutoffTrace, Quantity::P) => c.d_hat.map(|r| r.value()),
        (TestFamily::CutoffTrace, Quantity::T) => c.gamma_hat.map(|r| -r.value()),
        _ => None,
    };
    let mut model = ExpansionModel::new(ModelKind::C0PlusC2Eps2);
    if let Some(p) = predicted {
        model = model.with_predicted(p);
    }
    Ok(FitPlan {
        model,
        powers: vec![3.0, 4.0],
        tolerance: predicted.map(|_| 0.05),
    })
}

fn model_label(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::C0PlusC2Eps2 => "c0 + c2 eps^2",
        ModelKind::C0PlusClog => "c0 + c eps^2|ln eps| + c' eps^2",
        ModelKind::PurePower => "c eps^theta (log-log)",
        ModelKind::PowerLog => "c eps|ln eps| + c' eps",
    }
}

/// `asymptotics --dim N --family F --quantity Q`: sweep, fit literally and
/// with remainder correction, and compare against the prediction.
/// For the dimension-3 envelope family the energy-bound report is emitted
/// instead.
pub fn asymptotics_report(
    n: u32,
    family: TestFamily,
    quantity: Quantity,
    q: f64,
    eps: &[f64],
    spec: &QuadratureSpec,
) -> Result<CommandOutput> {
    if family == TestFamily::Envelope && n == 3 && matches!(quantity, Quantity::E | Quantity::P) {
        return envelope_bounds_output(eps, spec);
    }
    let plan = fit_plan(family, n, quantity, q, spec)?;
    let data = sweep(family, quantity, n, q, eps, spec)?;
    let literal = fit(&data, &plan.model)?;
    let corrected = fit_with_remainder(&data, &plan.model, &plan.powers)?;

    let mut report = Report::new(vec![
        "fit",
        "model",
        "fitted",
        "predicted",
        "rel_dev",
        "residual_norm",
        "pass",
    ]);
    // The pass verdict is keyed to the remainder-corrected fit: the
    // literal model's truncation bias at reachable scales is a property
    // of the test family, not of the predicted coefficient.
    let pass = match (plan.tolerance, corrected.rel_dev) {
        (Some(tol), Some(dev)) => Some(dev <= tol),
        _ => None,
    };
    for (label, f, p) in [
        ("literal", &literal, None),
        ("remainder-corrected", &corrected, pass),
    ] {
        report.push(vec![
            Value::S(label.into()),
            Value::S(model_label(plan.model.kind).into()),
            Value::F(f.fitted),
            f.predicted.map_or(Value::Empty, Value::F),
            f.rel_dev.map_or(Value::Empty, Value::F),
            Value::F(f.residual_norm),
            p.map_or(Value::Empty, Value::B),
        ]);
    }
    Ok(CommandOutput {
        report,
        all_pass: pass.unwrap_or(true),
    })
}

fn envelope_bounds_output(eps: &[f64], spec: &QuadratureSpec) -> Result<CommandOutput> {
    let eps = if eps.is_empty() { &DEFAULT_GRID } else { eps };
    let b = verify_envelope_bounds(eps, spec)?;
    let mut report = Report::new(vec!["check", "eps", "lhs", "rhs", "holds"]);
    let mut all = true;
    let j_ok = (b.j_quadrature - b.j_closed).abs() <= 1e-7 * b.j_closed;
    all &= j_ok;
    report.push(vec![
        Value::S("J quadrature vs closed".into()),
        Value::Empty,
        Value::F(b.j_quadrature),
        Value::F(b.j_closed),
        Value::B(j_ok),
    ]);
    let mass_ok = b.mass_ratio_gap <= 1e-7;
    all &= mass_ok;
    report.push(vec![
        Value::S("mass identity int psi^2 = 2 sqrt5 J".into()),
        Value::Empty,
        Value::F(b.psi_mass),
        Value::F(2.0 * 5f64.sqrt() * b.j_quadrature),
        Value::B(mass_ok),
    ]);
    for (name, rows) in [
        ("energy upper bound", &b.upper),
        ("mass lower bound", &b.lower),
    ] {
        for row in rows {
            all &= row.holds;
            report.push(vec![
                Value::S(name.into()),
                Value::F(row.eps),
                Value::F(row.lhs),
                Value::F(row.rhs),
                Value::B(row.holds),
            ]);
        }
    }
    for (name, value) in [("fitted d1", b.d1), ("fitted d2", b.d2)] {
        let ok = value > 0.0;
        all &= ok;
        report.push(vec![
            Value::S(name.into()),
            Value::Empty,
            Value::F(value),
            Value::F(0.0),
            Value::B(ok),
        ]);
    }
    Ok(CommandOutput {
        report,
        all_pass: all,
    })
}

fn condition_output(cr: &ConditionReport) -> CommandOutput {
    let mut report = Report::new(vec![
        "family",
        "a",
        "lambda",
        "mu",
        "q",
        "eps",
        "sup_value",
        "target",
        "passes",
        "met",
    ]);
    for row in &cr.rows {
        report.push(vec![
            Value::S(cr.family.label().into()),
            Value::I(cr.a as i64),
            Value::F(cr.lambda),
            Value::F(cr.mu),
            Value::F(cr.q),
            Value::F(row.eps),
            Value::F(row.sup_value),
            Value::F(row.target),
            Value::B(row.passes),
            Value::B(cr.met),
        ]);
    }
    // The level condition not holding is a finding, not a failure; the
    // command exits 0 whenever the sweep itself succeeded.
    CommandOutput {
        report,
        all_pass: true,
    }
}

/// `fiber --dim N --a {0|1} --lambda --mu --q --eps`: level-condition
/// sweep for the requested interior/boundary case.
pub fn fiber_report(
    n: u32,
    a: u8,
    lambda: f64,
    mu: f64,
    q: f64,
    eps: &[f64],
    spec: &QuadratureSpec,
) -> Result<CommandOutput> {
    let cr = match a {
        1 => check_condition_a1(n, lambda, mu, q, eps, spec)?,
        0 => check_condition_a0(n, lambda, mu, q, eps, spec)?,
        _ => return Err(Error::Domain(format!("a must be 0 or 1, got {a}"))),
    };
    Ok(condition_output(&cr))
}

/// `eigen --dim N --basis-size M`: the Gaussian volume-eigenvalue check
/// and the Ritz upper-bound history for `mu_1`.
pub fn eigen_report(n: u32, basis_size: usize, spec: &QuadratureSpec) -> Result<CommandOutput> {
    let mut report = Report::new(vec!["check", "size", "value", "reference", "pass"]);
    let mut all = true;

    let tight = spec.tightened();
    let lambda1 = rayleigh_volume(&TestFunction::gaussian(n)?, &tight)?;
    let want = n as f64 / 2.0;
    let ok = (lambda1 - want).abs() <= 1e-8 * want;
    all &= ok;
    report.push(vec![
        Value::S("gaussian volume quotient".into()),
        Value::I(1),
        Value::F(lambda1),
        Value::F(want),
        Value::B(ok),
    ]);

    let est = estimate_mu1(n, basis_size, spec)?;
    let mut previous = f64::INFINITY;
    for &(size, value) in &est.history {
        let ok = value <= previous * (1.0 + 1e-9);
        all &= ok;
        previous = value;
        report.push(vec![
            Value::S("mu1 upper bound".into()),
            Value::I(size as i64),
            Value::F(value),
            Value::Empty,
            Value::B(ok),
        ]);
    }
    Ok(CommandOutput {
        report,
        all_pass: all,
    })
}

/// Inclusive range parsed from `lo:hi:step`.
pub fn parse_range(text: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Domain(format!(
            "range must be lo:hi:step, got '{text}'"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Domain(format!("bad range bound '{}'", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Domain(format!("bad range bound '{}'", parts[1])))?;
    let step: f64 = parts[2]
        .parse()
        .map_err(|_| Error::Domain(format!("bad range step '{}'", parts[2])))?;
    if !(step > 0.0 && lo < hi) {
        return Err(Error::Domain(format!(
            "range needs lo < hi and step > 0, got '{text}'"
        )));
    }
    let steps = ((hi - lo) / step).round() as usize + 1;
    Ok((lo, hi, steps.max(2)))
}

/// `region --dim N --a --q --lambda-range --mu-range [--mu1-lower
/// --mu1-upper]`: classified grid. Without an explicit bracket the upper
/// end comes from the Ritz estimate and the lower end is 0.
#[allow(clippy::too_many_arguments)]
pub fn region_report(
    n: u32,
    a: u8,
    q: f64,
    lambda_range: (f64, f64, usize),
    mu_range: (f64, f64, usize),
    mu1_lower: f64,
    mu1_upper: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<CommandOutput> {
    let upper = match mu1_upper {
        Some(u) => u,
        None => estimate_mu1(n, 6, spec)?.value,
    };
    let bracket = Mu1Bracket::new(mu1_lower, upper)?;
    let edge = existence_edge(n, a, spec)?;
    let rows = grid_rows(
        n,
        a,
        q,
        (lambda_range.0, lambda_range.1),
        (mu_range.0, mu_range.1),
        lambda_range.2,
        mu_range.2,
        &bracket,
        edge,
    )?;
    let mut report = Report::new(vec!["N", "a", "q", "lambda", "mu", "verdict", "clause"]);
    for row in rows {
        report.push(vec![
            Value::I(row.n as i64),
            Value::I(row.a as i64),
            Value::F(row.q),
            Value::F(row.lambda),
            Value::F(row.mu),
            Value::S(row.verdict.label().into()),
            Value::S(row.clause.into()),
        ]);
    }
    Ok(CommandOutput {
        report,
        all_pass: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: QuadratureSpec = QuadratureSpec {
        abs_tol: 1e-10,
        rel_tol: 1e-8,
        max_subdivisions: 2000,
    };

    #[test]
    fn report_renders_csv_and_json_deterministically() {
        let mut r = Report::new(vec!["name", "x", "ok"]);
        r.push(vec![
            Value::S("alpha, \"quoted\"".into()),
            Value::F(0.1),
            Value::B(true),
        ]);
        r.push(vec![Value::S("beta".into()), Value::Empty, Value::B(false)]);
        let csv = r.to_csv().unwrap();
        assert!(csv.starts_with("name,x,ok\n"));
        assert!(csv.contains("\"alpha, \"\"quoted\"\"\",0.1,true"));
        let json = r.to_json();
        assert!(json.contains("\"x\": 1.0000000000000001e-1"));
        assert!(json.contains("\"x\": null"));
        assert_eq!(csv, r.to_csv().unwrap());
        assert_eq!(json, r.to_json());
    }

    #[test]
    fn constants_command_passes_for_dimension_five() {
        let out = constants_report(5, &SPEC).unwrap();
        assert!(out.all_pass);
        let names: Vec<String> = out
            .report
            .rows
            .iter()
            .map(|r| match &r[0] {
                Value::S(s) => s.clone(),
                _ => unreachable!(),
            })
            .collect();
        for want in ["K1-K2-K3", "alpha_hat", "xi_N", "C3", "theta_of_tau(1)"] {
            assert!(names.iter().any(|n| n == want), "missing row {want}");
        }
    }

    #[test]
    fn thresholds_command_rejects_reversed_range() {
        assert!(matches!(
            thresholds_report(4, 3, false, &SPEC),
            Err(Error::Domain(_))
        ));
        let out = thresholds_report(3, 6, false, &SPEC).unwrap();
        assert!(out.all_pass);
        assert_eq!(out.report.rows.len(), 4);
        // Dimensions 3 and 4 carry no lambda_star column entry.
        assert_eq!(out.report.rows[0][3], Value::Empty);
        assert!(matches!(out.report.rows[2][3], Value::F(_)));
    }

    #[test]
    fn asymptotics_command_keys_pass_to_corrected_fit() {
        let out = asymptotics_report(
            5,
            TestFamily::Cutoff,
            Quantity::P,
            2.0,
            &DEFAULT_GRID,
            &SPEC,
        )
        .unwrap();
        assert!(out.all_pass);
        assert_eq!(out.report.rows.len(), 2);
        assert_eq!(out.report.rows[0][0], Value::S("literal".into()));
        assert_eq!(out.report.rows[0][6], Value::Empty);
        assert_eq!(out.report.rows[1][6], Value::B(true));
    }

    #[test]
    fn envelope_command_reports_bound_rows() {
        let out = asymptotics_report(
            3,
            TestFamily::Envelope,
            Quantity::E,
            2.0,
            &[0.1, 0.05],
            &SPEC,
        )
        .unwrap();
        assert!(out.all_pass);
        // J row + mass row + 2 upper + 2 lower + d1 + d2.
        assert_eq!(out.report.rows.len(), 8);
    }

    #[test]
    fn fiber_command_reports_without_failing_exit() {
        let out = fiber_report(5, 1, 1.45, 0.0, 2.0, &[0.05, 0.02], &SPEC).unwrap();
        assert!(out.all_pass);
        assert_eq!(out.report.rows.len(), 2);
    }

    #[test]
    fn eigen_command_checks_gaussian_and_history() {
        let out = eigen_report(4, 4, &SPEC).unwrap();
        assert!(out.all_pass);
        assert_eq!(out.report.rows.len(), 5);
    }

    #[test]
    fn region_command_emits_spec_columns() {
        let out = region_report(
            4,
            1,
            2.5,
            (0.0, 2.0, 5),
            (0.0, 1.0, 3),
            0.0,
            Some(1.0),
            &SPEC,
        )
        .unwrap();
        assert_eq!(
            out.report.columns,
            vec!["N", "a", "q", "lambda", "mu", "verdict", "clause"]
        );
        assert_eq!(out.report.rows.len(), 15);
    }

    #[test]
    fn range_parsing_round_trips_the_spec_example() {
        let (lo, hi, steps) = parse_range("0:2.5:0.1").unwrap();
        assert_eq!((lo, hi), (0.0, 2.5));
        assert_eq!(steps, 26);
        assert!(parse_range("0:2.5").is_err());
        assert!(parse_range("2:1:0.5").is_err());
    }
}
