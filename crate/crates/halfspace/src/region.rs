//! Sound classification of parameter points `(lambda, mu)` into
//! existence, nonexistence, and unknown regions, and emission of
//! region-picture grids.
//!
//! Each verdict cites the criterion that fired. The classifier is sound
//! rather than complete: the boundary eigenvalue `mu_1` is only known
//! through a bracket, so criteria involving it certify one-sidedly
//! (nonexistence via the bracket's upper end, existence via its lower
//! end), and points between the two certifications stay [`Verdict::Unknown`].
//! Boundary points of open parameter intervals are likewise `Unknown`.

use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;
use crate::testfun::Exponents;
use crate::thresholds::{lambda_bar, lambda_hat};

/// Data of one problem instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub n: u32,
    /// Interior critical term switch (`1` on, `0` off).
    pub a: u8,
    /// Boundary perturbation exponent, in `[2, 2_*)`.
    pub q: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl ProblemParams {
    pub fn new(n: u32, a: u8, q: f64, lambda: f64, mu: f64) -> Result<Self> {
        if a > 1 {
            return Err(Error::Domain(format!("a must be 0 or 1, got {a}")));
        }
        if !(lambda.is_finite() && mu.is_finite()) {
            return Err(Error::Domain(format!(
                "lambda and mu must be finite, got ({lambda}, {mu})"
            )));
        }
        let exps = Exponents::new(n)?;
        exps.check_q(q)?;
        Ok(ProblemParams {
            n,
            a,
            q,
            lambda,
            mu,
        })
    }
}

/// Two-sided enclosure of the boundary eigenvalue `mu_1`.
///
/// The Ritz computation certifies only an upper bound; `lower = 0` is the
/// honest default when nothing better is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mu1Bracket {
    pub lower: f64,
    pub upper: f64,
}

impl Mu1Bracket {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower >= 0.0 && lower < upper && upper.is_finite()) {
            return Err(Error::Domain(format!(
                "mu_1 bracket requires 0 <= lower < upper < inf, got [{lower}, {upper}]"
            )));
        }
        Ok(Mu1Bracket { lower, upper })
    }

    /// Bracket from a certified upper bound alone.
    pub fn from_upper(upper: f64) -> Result<Self> {
        Mu1Bracket::new(0.0, upper)
    }
}

/// Classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    ExistsPositive,
    NoPositive,
    Unknown,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::ExistsPositive => "exists",
            Verdict::NoPositive => "none",
            Verdict::Unknown => "unknown",
        }
    }
}

/// A verdict together with the criterion that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionVerdict {
    pub verdict: Verdict,
    pub clause: &'static str,
}

const NO_FLUX_SUBCRITICAL: &str = "mu = 0 and lambda < N/4";
const NEGATIVE_FLUX: &str = "mu < 0 and lambda <= N/4";
const SUPERCRITICAL_LAMBDA: &str = "lambda >= N/2 and mu >= 0";
const LINEAR_FLUX_ABOVE_MU1: &str = "q = 2 and lambda >= 0 and mu >= mu1 (upper bound)";
const NO_FLUX_WINDOW: &str = "mu = 0 and lambda in (Lambda*, N/2)";
const SUPERLINEAR_FLUX: &str = "2 < q < 2_* and mu > 0 and 0 <= lambda < N/2";
const LINEAR_FLUX_UNDER_ETA: &str = "q = 2 and 0 < mu under eta curve (lower bound)";
const NOT_CERTIFIED: &str = "outside every certified region";

/// The linear-flux existence frontier `mu = mu1 (1 - 2 lambda / N)`.
pub fn eta_curve(n: u32, lambda: f64, mu1_value: f64) -> Result<f64> {
    if !(mu1_value > 0.0) {
        return Err(Error::Domain(format!(
            "eta curve requires a positive mu_1 value, got {mu1_value}"
        )));
    }
    Ok(mu1_value * (1.0 - 2.0 * lambda / n as f64))
}

/// The proven lower edge `Lambda*` of the `mu = 0` existence window:
/// `lambda_bar` when the interior critical term is on, `lambda_hat` when
/// only the boundary one is.
pub fn existence_edge(n: u32, a: u8, spec: &QuadratureSpec) -> Result<f64> {
    match a {
        1 => lambda_bar(n, spec),
        0 => lambda_hat(n),
        _ => Err(Error::Domain(format!("a must be 0 or 1, got {a}"))),
    }
}

// All criteria evaluated independently; `classify` then checks that the
// two definite kinds never overlap.
fn matching_clauses(
    p: &ProblemParams,
    mu1: &Mu1Bracket,
    edge: f64,
) -> (Vec<&'static str>, Vec<&'static str>) {
    let n_quarter = p.n as f64 / 4.0;
    let n_half = p.n as f64 / 2.0;
    let mut no = Vec::new();
    let mut yes = Vec::new();

    if p.mu == 0.0 && p.lambda < n_quarter {
        no.push(NO_FLUX_SUBCRITICAL);
    }
    if p.mu < 0.0 && p.lambda <= n_quarter {
        no.push(NEGATIVE_FLUX);
    }
    if p.lambda >= n_half && p.mu >= 0.0 {
        no.push(SUPERCRITICAL_LAMBDA);
    }
    if p.q == 2.0 && p.lambda >= 0.0 && p.mu >= mu1.upper {
        no.push(LINEAR_FLUX_ABOVE_MU1);
    }

    if p.mu == 0.0 && edge < p.lambda && p.lambda < n_half {
        yes.push(NO_FLUX_WINDOW);
    }
    if p.q > 2.0 && p.mu > 0.0 && (0.0..n_half).contains(&p.lambda) {
        yes.push(SUPERLINEAR_FLUX);
    }
    if p.q == 2.0
        && mu1.lower > 0.0
        && (0.0..n_half).contains(&p.lambda)
        && p.mu > 0.0
        && p.mu < mu1.lower * (1.0 - 2.0 * p.lambda / p.n as f64)
    {
        yes.push(LINEAR_FLUX_UNDER_ETA);
    }
    (no, yes)
}

/// Classifies one parameter point. `edge` is the proven lower limit of the
/// `mu = 0` existence window for the instance's `a` (see
/// [`existence_edge`]). Sound for every `mu_1` inside the bracket.
pub fn classify(p: &ProblemParams, mu1: &Mu1Bracket, edge: f64) -> Result<RegionVerdict> {
    let exps = Exponents::new(p.n)?;
    exps.check_q(p.q)?;
    if p.a > 1 {
        return Err(Error::Domain(format!("a must be 0 or 1, got {}", p.a)));
    }
    if !(edge >= p.n as f64 / 4.0) {
        return Err(Error::Domain(format!(
            "existence edge {edge} below N/4; not a valid Lambda*"
        )));
    }
    let (no, yes) = matching_clauses(p, mu1, edge);
    match (no.first(), yes.first()) {
        (Some(_), Some(_)) => Err(Error::Domain(format!(
            "criteria overlap at (lambda, mu) = ({}, {}): {:?} vs {:?}",
            p.lambda, p.mu, no, yes
        ))),
        (Some(clause), None) => Ok(RegionVerdict {
            verdict: Verdict::NoPositive,
            clause,
        }),
        (None, Some(clause)) => Ok(RegionVerdict {
            verdict: Verdict::ExistsPositive,
            clause,
        }),
        (None, None) => Ok(RegionVerdict {
            verdict: Verdict::Unknown,
            clause: NOT_CERTIFIED,
        }),
    }
}

/// One grid point of a region picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub n: u32,
    pub a: u8,
    pub q: f64,
    pub lambda: f64,
    pub mu: f64,
    pub verdict: Verdict,
    pub clause: &'static str,
}

/// Classifies an inclusive `lambda_steps x mu_steps` grid over the given
/// ranges, rows ordered lambda-major. Requires at least 2 steps per axis.
#[allow(clippy::too_many_arguments)]
pub fn grid_rows(
    n: u32,
    a: u8,
    q: f64,
    lambda_range: (f64, f64),
    mu_range: (f64, f64),
    lambda_steps: usize,
    mu_steps: usize,
    mu1: &Mu1Bracket,
    edge: f64,
) -> Result<Vec<GridRow>> {
    if lambda_steps < 2 || mu_steps < 2 {
        return Err(Error::Domain(format!(
            "grid needs at least 2 steps per axis, got {lambda_steps} x {mu_steps}"
        )));
    }
    for (lo, hi) in [lambda_range, mu_range] {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain(format!(
                "grid range must be finite with lo < hi, got [{lo}, {hi}]"
            )));
        }
    }
    let coord = |range: (f64, f64), i: usize, steps: usize| {
        range.0 + (range.1 - range.0) * i as f64 / (steps - 1) as f64
    };
    let mut rows = Vec::with_capacity(lambda_steps * mu_steps);
    for i in 0..lambda_steps {
        let lambda = coord(lambda_range, i, lambda_steps);
        for k in 0..mu_steps {
            let mu = coord(mu_range, k, mu_steps);
            let p = ProblemParams::new(n, a, q, lambda, mu)?;
            let rv = classify(&p, mu1, edge)?;
            rows.push(GridRow {
                n,
                a,
                q,
                lambda,
                mu,
                verdict: rv.verdict,
                clause: rv.clause,
            });
        }
    }
    Ok(rows)
}
