//! Fiber-map analysis: measure the five `eps`-dependent norms of a test
//! family, maximize the one-variable energy `t -> g(t)` along the ray
//! through the function, and check the two mountain-pass level conditions.
//!
//! The fiber of the functional through a fixed `u` is
//!
//! ```text
//! g(t) = 1/2 (E - lambda P) t^2 - a V/2* t^{2*} - T/2_* t^{2_*} - mu Q/q t^q
//! ```
//!
//! with `E = int K |grad u|^2`, `P = int K u^2`, `V = int K |u|^{2*}`,
//! `T = int_bdy K |u|^{2_*}`, `Q = int_bdy K |u|^q`. Because
//! `2* - 2 = 2 (2_* - 2)`, the stationarity equation is a quadratic in
//! `s = t^{2_* - 2}` whenever `mu = 0`, which gives a closed-form maximizer
//! ([`closed_form_root`]); the general case uses a bracketed safeguarded
//! Newton iteration on the strictly decreasing `g'(t)/t`.
//!
//! The two level conditions compare the fiber supremum against compactness
//! targets: [`check_condition_a1`] (volume term present, `a = 1`) against
//! the bubble target `A`, and [`check_condition_a0`] (`a = 0`) against the
//! trace target `S0^{N-1}/(2(N-1))` (quotient form against `S0` for the
//! dimension-3 envelope family).

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use crate::constants::{bubble_constants, expansion_coefficients, trace_constants, xi_n};
use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;
use crate::testfun::{norm_grad_k, norm_lp_k_boundary, norm_lp_k_volume, Exponents, TestFunction};

/// Default concentration scales for the level-condition sweeps, descending.
pub const DEFAULT_EPS: [f64; 5] = [0.1, 0.07, 0.05, 0.03, 0.02];

/// The four weighted test families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestFamily {
    /// Cutoff interior family `u_eps` (any dimension).
    Cutoff,
    /// Gaussian-envelope interior family `v_eps` (dimension 3 only).
    Envelope,
    /// Cutoff trace family `uhat_eps` (any dimension).
    CutoffTrace,
    /// Gaussian-envelope trace family `vhat_eps` (dimension 3 only).
    EnvelopeTrace,
}

impl TestFamily {
    /// Short label used in reports (`u`, `v`, `uhat`, `vhat`).
    pub fn label(&self) -> &'static str {
        match self {
            TestFamily::Cutoff => "u",
            TestFamily::Envelope => "v",
            TestFamily::CutoffTrace => "uhat",
            TestFamily::EnvelopeTrace => "vhat",
        }
    }

    /// Whether the family concentrates on the boundary (`a = 0` checks).
    pub fn is_trace(&self) -> bool {
        matches!(self, TestFamily::CutoffTrace | TestFamily::EnvelopeTrace)
    }

    fn build(&self, n: u32, eps: f64) -> Result<TestFunction> {
        match self {
            TestFamily::Cutoff => TestFunction::u_eps(n, eps),
            TestFamily::Envelope => TestFunction::v_eps(n, eps),
            TestFamily::CutoffTrace => TestFunction::uhat_eps(n, eps),
            TestFamily::EnvelopeTrace => TestFunction::vhat_eps(n, eps),
        }
    }

    fn tag(&self) -> u8 {
        match self {
            TestFamily::Cutoff => 0,
            TestFamily::Envelope => 1,
            TestFamily::CutoffTrace => 2,
            TestFamily::EnvelopeTrace => 3,
        }
    }
}

impl FromStr for TestFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u" => Ok(TestFamily::Cutoff),
            "v" => Ok(TestFamily::Envelope),
            "uhat" => Ok(TestFamily::CutoffTrace),
            "vhat" => Ok(TestFamily::EnvelopeTrace),
            other => Err(Error::Domain(format!(
                "unknown family '{other}' (expected u, v, uhat, vhat)"
            ))),
        }
    }
}

/// The measured norms of one test function together with the fiber
/// parameters `(a, q, lambda, mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberCoefficients {
    /// `E = int K |grad u|^2`.
    pub e: f64,
    /// `P = int K u^2`.
    pub p: f64,
    /// `V = int K |u|^{2*}`.
    pub v: f64,
    /// `T = int_bdy K |u|^{2_*}`.
    pub t: f64,
    /// `Q = int_bdy K |u|^q`.
    pub q_power: f64,
    /// Volume-term switch, 0 or 1.
    pub a: u8,
    /// Boundary perturbation exponent `q in [2, 2_*)`.
    pub q: f64,
    pub lambda: f64,
    pub mu: f64,
    pub exps: Exponents,
}

impl FiberCoefficients {
    /// Returns a copy with the volume parameter set.
    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// Returns a copy with the boundary perturbation weight set.
    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    /// Returns a copy with the volume-term switch set (must be 0 or 1).
    pub fn with_a(mut self, a: u8) -> Result<Self> {
        if a > 1 {
            return Err(Error::Domain(format!("a must be 0 or 1, got {a}")));
        }
        self.a = a;
        Ok(self)
    }

    // Effective quadratic coefficient E - lambda P, absorbing the q-term
    // when q = 2 (it is then itself quadratic).
    fn quad_coeff(&self) -> f64 {
        let mut c = self.e - self.lambda * self.p;
        if self.q == 2.0 {
            c -= self.mu * self.q_power;
        }
        c
    }

    // Coefficient of the t^q term after the q = 2 absorption.
    fn q_coeff(&self) -> f64 {
        if self.q == 2.0 {
            0.0
        } else {
            self.mu * self.q_power
        }
    }

    /// The fiber energy `g(t)` at ray parameter `t >= 0`.
    pub fn fiber_value(&self, t: f64) -> f64 {
        let volume = if self.a == 1 {
            self.v / self.exps.two_star * t.powf(self.exps.two_star)
        } else {
            0.0
        };
        0.5 * (self.e - self.lambda * self.p) * t * t
            - volume
            - self.t / self.exps.two_lower * t.powf(self.exps.two_lower)
            - self.mu * self.q_power / self.q * t.powf(self.q)
    }

    /// `g'(t)/t`, strictly decreasing on `(0, inf)` when `mu >= 0` and at
    /// least one saturating term is positive; its unique zero is the fiber
    /// maximizer.
    pub fn slope_over_t(&self, t: f64) -> f64 {
        let volume = if self.a == 1 {
            self.v * t.powf(self.exps.two_star - 2.0)
        } else {
            0.0
        };
        self.quad_coeff()
            - volume
            - self.t * t.powf(self.exps.two_lower - 2.0)
            - self.q_coeff() * t.powf(self.q - 2.0)
    }

    // d/dt of slope_over_t.
    fn slope_over_t_deriv(&self, t: f64) -> f64 {
        let two_star = self.exps.two_star;
        let two_lower = self.exps.two_lower;
        let volume = if self.a == 1 {
            self.v * (two_star - 2.0) * t.powf(two_star - 3.0)
        } else {
            0.0
        };
        let q_term = if self.q == 2.0 {
            0.0
        } else {
            self.q_coeff() * (self.q - 2.0) * t.powf(self.q - 3.0)
        };
        -volume - self.t * (two_lower - 2.0) * t.powf(two_lower - 3.0) - q_term
    }
}

/// The maximizer of one fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberMax {
    /// Unique positive stationary point.
    pub t_star: f64,
    /// `g(t_star)`, the fiber supremum.
    pub value: f64,
    /// Initial sign-change bracket handed to the Newton iteration.
    pub bracket: (f64, f64),
    /// Newton/bisection steps taken.
    pub iterations: u32,
}

/// Measures the five norms of `family` at scale `eps` with boundary
/// exponent `q`. The fiber parameters start at `lambda = mu = 0` and
/// `a = 1` for interior families, `a = 0` for trace families; adjust with
/// the `with_*` builders. Results are cached per
/// `(family, n, eps, q, spec)`.
pub fn measure_coefficients(
    family: TestFamily,
    n: u32,
    eps: f64,
    q: f64,
    spec: &QuadratureSpec,
) -> Result<FiberCoefficients> {
    type NormKey = (u8, u32, u64, u64, (u64, u64, usize));
    static STORE: OnceLock<Mutex<HashMap<NormKey, [f64; 5]>>> = OnceLock::new();
    spec.validate()?;
    let exps = Exponents::new(n)?;
    exps.check_q(q)?;
    let key = (
        family.tag(),
        n,
        eps.to_bits(),
        q.to_bits(),
        spec.cache_key(),
    );
    let map = STORE.get_or_init(|| Mutex::new(HashMap::new()));
    let cached = map.lock().unwrap().get(&key).copied();
    let norms = match cached {
        Some(hit) => hit,
        None => {
            let tf = family.build(n, eps)?;
            let computed = [
                norm_grad_k(&tf, spec)?,
                norm_lp_k_volume(&tf, 2.0, spec)?,
                norm_lp_k_volume(&tf, exps.two_star, spec)?,
                norm_lp_k_boundary(&tf, exps.two_lower, spec)?,
                norm_lp_k_boundary(&tf, q, spec)?,
            ];
            *map.lock().unwrap().entry(key).or_insert(computed)
        }
    };
    Ok(FiberCoefficients {
        e: norms[0],
        p: norms[1],
        v: norms[2],
        t: norms[3],
        q_power: norms[4],
        a: if family.is_trace() { 0 } else { 1 },
        q,
        lambda: 0.0,
        mu: 0.0,
        exps,
    })
}

/// Closed-form fiber maximizer, available when the `t^q` term is absent
/// (`mu = 0`, or `q = 2` where it merges with the quadratic term): with
/// `s = t^{2_* - 2}` the stationarity equation reads
/// `a V s^2 + T s = E - lambda P`, solved by the positive quadratic root.
/// Returns `None` when a genuine `t^q` term is present.
pub fn closed_form_root(coeffs: &FiberCoefficients) -> Result<Option<f64>> {
    if coeffs.q_coeff() != 0.0 {
        return Ok(None);
    }
    let c2 = coeffs.quad_coeff();
    if c2 <= 0.0 {
        return Err(Error::Geometry(format!(
            "no mountain-pass structure: E - lambda P = {c2} <= 0"
        )));
    }
    let v = if coeffs.a == 1 { coeffs.v } else { 0.0 };
    let s = if v > 0.0 {
        (-coeffs.t + (coeffs.t * coeffs.t + 4.0 * v * c2).sqrt()) / (2.0 * v)
    } else if coeffs.t > 0.0 {
        c2 / coeffs.t
    } else {
        return Err(Error::Geometry(
            "fiber is unbounded above: no saturating term".into(),
        ));
    };
    Ok(Some(s.powf(1.0 / (coeffs.exps.two_lower - 2.0))))
}

/// Maximizes the fiber by bracketed safeguarded Newton on `g'(t)/t`.
/// Errors with [`Error::Geometry`] when `E - lambda P <= 0` (the fiber has
/// no mountain-pass structure) or no term saturates the growth.
pub fn maximize_fiber(coeffs: &FiberCoefficients) -> Result<FiberMax> {
    let c2 = coeffs.quad_coeff();
    if c2 <= 0.0 {
        return Err(Error::Geometry(format!(
            "no mountain-pass structure: E - lambda P = {c2} <= 0"
        )));
    }
    let saturating = (coeffs.a == 1 && coeffs.v > 0.0)
        || coeffs.t > 0.0
        || (coeffs.q_coeff() > 0.0 && coeffs.q > 2.0);
    if !saturating {
        return Err(Error::Geometry(
            "fiber is unbounded above: no saturating term".into(),
        ));
    }

    let tol = 1e-12 * c2;
    let mut lo = 1e-6;
    let mut grow = 0u32;
    while coeffs.slope_over_t(lo) <= 0.0 {
        lo /= 4.0;
        grow += 1;
        if grow > 200 {
            return Err(Error::Geometry(
                "could not bracket the fiber maximizer from below".into(),
            ));
        }
    }
    let mut hi = lo.max(1.0);
    while coeffs.slope_over_t(hi) > 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(Error::NonConvergence {
                value: hi,
                error_estimate: coeffs.slope_over_t(hi),
                tolerance: tol,
                subdivisions: grow as usize,
            });
        }
    }
    let bracket = (lo, hi);

    let mut t = 0.5 * (lo + hi);
    let mut iterations = 0u32;
    loop {
        let h = coeffs.slope_over_t(t);
        if h.abs() <= tol {
            break;
        }
        if h > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let dh = coeffs.slope_over_t_deriv(t);
        let newton = t - h / dh;
        t = if dh < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        iterations += 1;
        if iterations > 200 {
            return Err(Error::NonConvergence {
                value: t,
                error_estimate: h,
                tolerance: tol,
                subdivisions: iterations as usize,
            });
        }
    }

    Ok(FiberMax {
        t_star: t,
        value: coeffs.fiber_value(t),
        bracket,
        iterations,
    })
}

/// One row of a level-condition sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionRow {
    pub eps: f64,
    /// Fiber supremum (or trace quotient in the dimension-3 form).
    pub sup_value: f64,
    /// Compactness target the supremum must stay below.
    pub target: f64,
    /// `sup_value < target`.
    pub passes: bool,
}

/// Result of a level-condition sweep over a list of concentration scales.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub family: TestFamily,
    pub a: u8,
    pub lambda: f64,
    pub mu: f64,
    pub q: f64,
    pub target: f64,
    /// Rows in descending `eps` order.
    pub rows: Vec<ConditionRow>,
    /// Asymptotic verdict: the two smallest scales pass and the
    /// `eps^2`-normalized margin is not shrinking (factor 0.8 guard).
    pub met: bool,
}

fn sorted_descending(eps_list: &[f64]) -> Result<Vec<f64>> {
    if eps_list.is_empty() {
        return Err(Error::Domain("eps list must be nonempty".into()));
    }
    let mut eps: Vec<f64> = eps_list.to_vec();
    if eps.iter().any(|e| !e.is_finite()) {
        return Err(Error::Domain("eps list must be finite".into()));
    }
    eps.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eps.dedup();
    Ok(eps)
}

fn asymptotic_verdict(rows: &[ConditionRow]) -> bool {
    match rows {
        [] => false,
        [only] => only.passes,
        [.., second, last] => {
            let m_second = (second.target - second.sup_value) / (second.eps * second.eps);
            let m_last = (last.target - last.sup_value) / (last.eps * last.eps);
            second.passes && last.passes && m_last >= 0.8 * m_second
        }
    }
}

/// Sweeps the volume-term level condition `sup_t g(t) < A` over `eps_list`
/// (descending), with `a = 1` and the interior family (Gaussian-envelope
/// variant when `N = 3` and `mu = 0`, matching the theory's case split).
pub fn check_condition_a1(
    n: u32,
    lambda: f64,
    mu: f64,
    q: f64,
    eps_list: &[f64],
    spec: &QuadratureSpec,
) -> Result<ConditionReport> {
    let family = if n == 3 && mu == 0.0 {
        TestFamily::Envelope
    } else {
        TestFamily::Cutoff
    };
    let target = bubble_constants(n, spec)?.a;
    let mut rows = Vec::new();
    for eps in sorted_descending(eps_list)? {
        let coeffs = measure_coefficients(family, n, eps, q, spec)?
            .with_lambda(lambda)
            .with_mu(mu);
        let sup_value = maximize_fiber(&coeffs)?.value;
        rows.push(ConditionRow {
            eps,
            sup_value,
            target,
            passes: sup_value < target,
        });
    }
    let met = asymptotic_verdict(&rows);
    Ok(ConditionReport {
        family,
        a: 1,
        lambda,
        mu,
        q,
        target,
        rows,
        met,
    })
}

/// Sweeps the trace-term level condition over `eps_list` (descending) with
/// `a = 0` and the trace family. For `N >= 4` the fiber supremum is
/// compared against `S0^{N-1}/(2(N-1))`; for `N = 3` with `mu = 0` the
/// equivalent quotient form `(E - lambda P)/T^{2/2_*} < S0` is reported
/// (the envelope trace family is used there).
pub fn check_condition_a0(
    n: u32,
    lambda: f64,
    mu: f64,
    q: f64,
    eps_list: &[f64],
    spec: &QuadratureSpec,
) -> Result<ConditionReport> {
    let quotient_form = n == 3 && mu == 0.0;
    let family = if quotient_form {
        TestFamily::EnvelopeTrace
    } else {
        TestFamily::CutoffTrace
    };
    let trace = trace_constants(n, spec)?;
    let nf = n as f64;
    let target = if quotient_form {
        trace.s0
    } else {
        trace.s0.powi(n as i32 - 1) / (2.0 * (nf - 1.0))
    };
    let mut rows = Vec::new();
    for eps in sorted_descending(eps_list)? {
        let coeffs = measure_coefficients(family, n, eps, q, spec)?
            .with_lambda(lambda)
            .with_mu(mu);
        let sup_value = if quotient_form {
            let c2 = coeffs.e - lambda * coeffs.p;
            if c2 <= 0.0 {
                return Err(Error::Geometry(format!(
                    "no mountain-pass structure: E - lambda P = {c2} <= 0"
                )));
            }
            c2 / coeffs.t.powf(2.0 / coeffs.exps.two_lower)
        } else {
            maximize_fiber(&coeffs)?.value
        };
        rows.push(ConditionRow {
            eps,
            sup_value,
            target,
            passes: sup_value < target,
        });
    }
    let met = asymptotic_verdict(&rows);
    Ok(ConditionReport {
        family,
        a: 0,
        lambda,
        mu,
        q,
        target,
        rows,
        met,
    })
}

/// Predicted `eps^2` coefficient of `sup_t g(t) - A` for the cutoff
/// interior family at `mu = 0`:
/// `(alpha/2 + beta/2* + gamma/2_*) - lambda d/2 = (d/2)(lambda_star - lambda)`.
/// Its sign flips exactly at `lambda = lambda_star`. Requires `N >= 5`.
pub fn predicted_margin_coefficient(n: u32, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    if n < 5 {
        return Err(Error::Domain(format!(
            "margin coefficient requires N >= 5, got {n}"
        )));
    }
    let exps = Exponents::new(n)?;
    let c = expansion_coefficients(n, spec)?;
    Ok(c.alpha_n.expect("alpha_N for N >= 5") / 2.0
        + c.beta_n.expect("beta_N for N >= 5") / exps.two_star
        + c.gamma_n.expect("gamma_N for N >= 4") / exps.two_lower
        - lambda * c.d_n.expect("d_N for N >= 5") / 2.0)
}

/// Predicted `eps^2` coefficient of the trace-family level margin at
/// `mu = 0`: `(alpha_hat - lambda d_hat + xi)/B_N`, which flips sign
/// exactly at `lambda = lambda_hat = N/4 + (N-4)/8`. Requires `N >= 5`.
pub fn predicted_margin_coefficient_trace(
    n: u32,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if n < 5 {
        return Err(Error::Domain(format!(
            "trace margin coefficient requires N >= 5, got {n}"
        )));
    }
    let c = expansion_coefficients(n, spec)?;
    let trace = trace_constants(n, spec)?;
    let alpha_hat = c.alpha_hat.expect("alpha_hat for N >= 5").value();
    let d_hat = c.d_hat.expect("d_hat for N >= 5").value();
    Ok((alpha_hat - lambda * d_hat + xi_n(n, spec)?) / trace.b_n)
}
