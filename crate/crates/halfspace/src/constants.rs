//! The scale-invariant constants of the theory: bubble norms, the
//! mountain-pass target, the trace pair, and all expansion coefficients.
//!
//! Everything here is independent of the concentration scale `eps` (the
//! defining integrals are evaluated at `eps = 1`; scale invariance is
//! enforced by tests). Three groups:
//!
//! * [`BubbleConstants`]: the interior-bubble energies `K1, K2, K3` and the
//!   compactness target `A = K1/2 - K2/2* - K3/2_*`. The identity
//!   `K1 = K2 + K3` pins the three quadratures against each other.
//! * [`TraceConstants`]: the trace-bubble Dirichlet energy `A_N`, the
//!   boundary mass `B_N`, and the trace quotient `S0 = A_N / B_N`. Because
//!   the trace bubble is harmonic, `A_N = (N-2) B_N^{2_*/2}` exactly, an
//!   oracle the tests exploit.
//! * [`ExpansionCoefficients`]: the second-order coefficients
//!   `alpha_N, beta_N, gamma_N, d_N` (cutoff interior family) and
//!   `alpha_hat, d_hat, gamma_hat` (cutoff trace family) together with the
//!   auxiliary integrals `C1..C6`, `D1..D4`. The hat coefficients carry both
//!   a defining-integral quadrature route and a closed Beta-function route
//!   ([`DualRoute`]); the two must agree to about 1e-6.
//!
//! Results are cached in an immutable table keyed by `(N, quadrature spec)`;
//! concurrent readers are safe and always observe identical values.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::numerics::{
    beta_fn, gamma_fn, integrate_boundary, integrate_halfspace, sphere_area, QuadratureSpec,
};
use crate::testfun::{BubbleProfile, Exponents};

/// A constant computed along two independent routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualRoute {
    /// Adaptive quadrature of the defining integral.
    pub quadrature: f64,
    /// Closed Beta-function form.
    pub closed_form: f64,
}

impl DualRoute {
    /// Canonical value (the closed form; it is exact up to `gamma_fn`
    /// accuracy, which exceeds quadrature accuracy).
    pub fn value(&self) -> f64 {
        self.closed_form
    }

    /// Relative gap between the two routes.
    pub fn rel_gap(&self) -> f64 {
        (self.quadrature - self.closed_form).abs() / self.closed_form.abs()
    }
}

/// Interior-bubble norms and the mountain-pass target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleConstants {
    /// `K1 = int |grad U_1|^2` over the half-space.
    pub k1: f64,
    /// `K2 = int U_1^{2*}` over the half-space.
    pub k2: f64,
    /// `K3 = int U_1^{2_*}` over the boundary.
    pub k3: f64,
    /// Compactness target `A = K1/2 - K2/2* - K3/2_*`.
    pub a: f64,
}

/// Trace-bubble energy, boundary mass, and trace quotient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConstants {
    /// `A_N = int |grad Uhat_1|^2` over the half-space.
    pub a_n: f64,
    /// `B_N = (int Uhat_1^{2_*} dx')^{2/2_*}`.
    pub b_n: f64,
    /// Trace quotient `S0 = A_N / B_N`.
    pub s0: f64,
}

/// Second-order expansion coefficients and auxiliary integrals for
/// dimension `n`. Fields are `None` below their validity dimension
/// (`N >= 5` for most, `N >= 4` for the `gamma` family and `c3`, `d3`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCoefficients {
    pub n: u32,
    /// Energy correction of the cutoff interior family, `N >= 5`.
    pub alpha_n: Option<f64>,
    /// Volume-norm correction, `N >= 5`.
    pub beta_n: Option<f64>,
    /// Boundary-norm correction, `N >= 4`.
    pub gamma_n: Option<f64>,
    /// Weighted L2 coefficient, `N >= 5`.
    pub d_n: Option<f64>,
    /// Energy correction of the cutoff trace family, `N >= 5` (dual route).
    pub alpha_hat: Option<DualRoute>,
    /// Weighted L2 coefficient of the trace family, `N >= 5` (dual route).
    pub d_hat: Option<DualRoute>,
    /// Boundary-norm correction of the trace family, `N >= 4` (dual route).
    pub gamma_hat: Option<DualRoute>,
    /// `C1 = int (|y'|^2 + y_N (y_N + x0)) / (1 + |y'|^2 + (y_N + x0)^2)^{N-1}`.
    pub c1: Option<f64>,
    /// `C2 = int |y|^2 / (1 + |y'|^2 + (y_N + x0)^2)^N`.
    pub c2: Option<f64>,
    /// `C3 = int_{boundary} |y'|^2 / (b^2 + |y'|^2)^{N-1}`.
    pub c3: Option<f64>,
    /// `C4 = int 1 / (1 + |y'|^2 + (y_N + x0)^2)^{N-2}`.
    pub c4: Option<f64>,
    /// `C5 = int 1 / (1 + |y'|^2 + (y_N + x0)^2)^{N-1}`.
    pub c5: Option<f64>,
    /// `C6 = int x0 (y_N + x0) / (1 + |y'|^2 + (y_N + x0)^2)^{N-1}`.
    pub c6: Option<f64>,
    /// `D1 = int |y'|^2 / (|y'|^2 + (y_N + 1)^2)^{N-1}` (trace-family analogue).
    pub d1: Option<f64>,
    /// `D2 = int y_N (y_N + 1) / (|y'|^2 + (y_N + 1)^2)^{N-1}`.
    pub d2: Option<f64>,
    /// `D3 = int_{boundary} |y'|^2 / (1 + |y'|^2)^{N-1}`.
    pub d3: Option<f64>,
    /// `D4 = int 1 / (|y'|^2 + (y_N + 1)^2)^{N-2}`.
    pub d4: Option<f64>,
    /// Boundary denominator scale `b = sqrt((2N-2)/(N-2))`.
    pub b: f64,
    /// `Gamma((N-1)/2)`.
    pub gamma0: f64,
}

type CacheKey = (u32, (u64, u64, usize));

fn cache<T: Copy>(
    store: &OnceLock<Mutex<HashMap<CacheKey, T>>>,
    key: CacheKey,
    compute: impl FnOnce() -> Result<T>,
) -> Result<T> {
    let map = store.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = map.lock().unwrap().get(&key) {
        return Ok(*hit);
    }
    let value = compute()?;
    Ok(*map.lock().unwrap().entry(key).or_insert(value))
}

// Bare (unweighted) Dirichlet energy of a bubble over the half-space.
fn bare_grad_sq(profile: &BubbleProfile, exps: &Exponents, spec: &QuadratureSpec) -> Result<f64> {
    Ok(integrate_halfspace(
        |r, xn| {
            let (_, dr, dxn) = profile.eval(exps, r, xn);
            dr * dr + dxn * dxn
        },
        exps.n,
        spec,
    )?
    .value)
}

// Bare p-th power volume mass of a bubble.
fn bare_volume_power(
    profile: &BubbleProfile,
    exps: &Exponents,
    p: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok(integrate_halfspace(|r, xn| profile.eval(exps, r, xn).0.powf(p), exps.n, spec)?.value)
}

// Bare p-th power boundary mass of a bubble.
fn bare_boundary_power(
    profile: &BubbleProfile,
    exps: &Exponents,
    p: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok(integrate_boundary(|r| profile.eval(exps, r, 0.0).0.powf(p), exps.n, spec)?.value)
}

/// Interior-bubble constants `K1, K2, K3` and the target `A` for
/// dimension `n` (computed at `eps = 1`; the values are scale invariant).
pub fn bubble_constants(n: u32, spec: &QuadratureSpec) -> Result<BubbleConstants> {
    static STORE: OnceLock<Mutex<HashMap<CacheKey, BubbleConstants>>> = OnceLock::new();
    spec.validate()?;
    let exps = Exponents::new(n)?;
    cache(&STORE, (n, spec.cache_key()), || {
        let bubble = BubbleProfile::interior(1.0, 1.0)?;
        let k1 = bare_grad_sq(&bubble, &exps, spec)?;
        let k2 = bare_volume_power(&bubble, &exps, exps.two_star, spec)?;
        let k3 = bare_boundary_power(&bubble, &exps, exps.two_lower, spec)?;
        let a = 0.5 * k1 - k2 / exps.two_star - k3 / exps.two_lower;
        Ok(BubbleConstants { k1, k2, k3, a })
    })
}

/// Trace-bubble constants `A_N, B_N, S0` for dimension `n`.
pub fn trace_constants(n: u32, spec: &QuadratureSpec) -> Result<TraceConstants> {
    static STORE: OnceLock<Mutex<HashMap<CacheKey, TraceConstants>>> = OnceLock::new();
    spec.validate()?;
    let exps = Exponents::new(n)?;
    cache(&STORE, (n, spec.cache_key()), || {
        let bubble = BubbleProfile::trace(1.0)?;
        let a_n = bare_grad_sq(&bubble, &exps, spec)?;
        let mass = bare_boundary_power(&bubble, &exps, exps.two_lower, spec)?;
        let b_n = mass.powf(2.0 / exps.two_lower);
        Ok(TraceConstants {
            a_n,
            b_n,
            s0: a_n / b_n,
        })
    })
}

// Closed Beta forms for the hat coefficients and two C integrals.

fn alpha_hat_closed(n: u32) -> Result<f64> {
    let nf = n as f64;
    Ok(sphere_area(n - 1)? * (nf - 2.0) / (4.0 * (nf - 4.0))
        * (beta_fn((nf + 1.0) / 2.0, (nf - 3.0) / 2.0)?
            + beta_fn((nf - 1.0) / 2.0, (nf - 1.0) / 2.0)? / (nf - 3.0)))
}

fn d_hat_closed(n: u32) -> Result<f64> {
    let nf = n as f64;
    Ok(sphere_area(n - 1)? / (2.0 * (nf - 4.0)) * beta_fn((nf - 1.0) / 2.0, (nf - 3.0) / 2.0)?)
}

fn gamma_hat_closed(n: u32) -> Result<f64> {
    let nf = n as f64;
    Ok(sphere_area(n - 1)? / (8.0 * (nf - 2.0)) * beta_fn((nf + 1.0) / 2.0, (nf - 3.0) / 2.0)?)
}

/// Closed form of `C3`: `omega_{N-1} / (2 b^{N-3}) * B((N+1)/2, (N-3)/2)`.
pub fn c3_closed(n: u32) -> Result<f64> {
    if n < 4 {
        return Err(Error::Domain(format!("c3 requires N >= 4, got {n}")));
    }
    let exps = Exponents::new(n)?;
    let nf = n as f64;
    Ok(sphere_area(n - 1)? / (2.0 * exps.b().powi(n as i32 - 3))
        * beta_fn((nf + 1.0) / 2.0, (nf - 3.0) / 2.0)?)
}

/// Closed form of `C6`: `x0 omega_{N-1} / (2 (N-3) b^{N-3}) * B((N-1)/2, (N-1)/2)`.
pub fn c6_closed(n: u32) -> Result<f64> {
    if n < 5 {
        return Err(Error::Domain(format!(
            "c6 closed form requires N >= 5, got {n}"
        )));
    }
    let exps = Exponents::new(n)?;
    let nf = n as f64;
    Ok(
        exps.x_n0 * sphere_area(n - 1)? / (2.0 * (nf - 3.0) * exps.b().powi(n as i32 - 3))
            * beta_fn((nf - 1.0) / 2.0, (nf - 1.0) / 2.0)?,
    )
}

/// All expansion coefficients for dimension `n` (each by quadrature of its
/// defining integral; the hat coefficients also via closed Beta forms).
pub fn expansion_coefficients(n: u32, spec: &QuadratureSpec) -> Result<ExpansionCoefficients> {
    static STORE: OnceLock<Mutex<HashMap<CacheKey, ExpansionCoefficients>>> = OnceLock::new();
    spec.validate()?;
    let exps = Exponents::new(n)?;
    cache(&STORE, (n, spec.cache_key()), || {
        compute_expansion(&exps, spec)
    })
}

fn compute_expansion(exps: &Exponents, spec: &QuadratureSpec) -> Result<ExpansionCoefficients> {
    let n = exps.n;
    let nf = n as f64;
    let x0 = exps.x_n0;
    let b = exps.b();
    let k2 = exps.k_n * exps.k_n;
    let p_vol = n as i32; // boundary/volume exponents are integers
    let shifted = move |r: f64, xn: f64| {
        let z = xn + x0;
        1.0 + r * r + z * z
    };

    // C3/D3 exist for N >= 4; everything else needs N >= 5 integrability.
    let (mut c3, mut d3, mut gamma_n, mut gamma_hat) = (None, None, None, None);
    if n >= 4 {
        let c3_v = integrate_boundary(|r| r * r / (b * b + r * r).powi(p_vol - 1), n, spec)?.value;
        let d3_v = integrate_boundary(|r| r * r / (1.0 + r * r).powi(p_vol - 1), n, spec)?.value;
        gamma_n = Some(exps.k_n.powf(exps.two_lower) / (4.0 * (nf - 2.0)) * c3_v);
        gamma_hat = Some(DualRoute {
            quadrature: d3_v / (4.0 * (nf - 2.0)),
            closed_form: gamma_hat_closed(n)?,
        });
        c3 = Some(c3_v);
        d3 = Some(d3_v);
    }

    let mut coeffs = ExpansionCoefficients {
        n,
        alpha_n: None,
        beta_n: None,
        gamma_n,
        d_n: None,
        alpha_hat: None,
        d_hat: None,
        gamma_hat,
        c1: None,
        c2: None,
        c3,
        c4: None,
        c5: None,
        c6: None,
        d1: None,
        d2: None,
        d3,
        d4: None,
        b,
        gamma0: gamma_fn((nf - 1.0) / 2.0)?,
    };
    if n < 5 {
        return Ok(coeffs);
    }

    let c1 = integrate_halfspace(
        move |r, xn| (r * r + xn * (xn + x0)) / shifted(r, xn).powi(p_vol - 1),
        n,
        spec,
    )?
    .value;
    let c2 = integrate_halfspace(
        move |r, xn| (r * r + xn * xn) / shifted(r, xn).powi(p_vol),
        n,
        spec,
    )?
    .value;
    let c4 = integrate_halfspace(move |r, xn| shifted(r, xn).powi(2 - p_vol), n, spec)?.value;
    let c5 = integrate_halfspace(move |r, xn| shifted(r, xn).powi(1 - p_vol), n, spec)?.value;
    let c6 = integrate_halfspace(
        move |r, xn| x0 * (xn + x0) / shifted(r, xn).powi(p_vol - 1),
        n,
        spec,
    )?
    .value;

    let unit = move |r: f64, xn: f64| {
        let z = xn + 1.0;
        r * r + z * z
    };
    let d1 = integrate_halfspace(move |r, xn| r * r / unit(r, xn).powi(p_vol - 1), n, spec)?.value;
    let d2 = integrate_halfspace(
        move |r, xn| xn * (xn + 1.0) / unit(r, xn).powi(p_vol - 1),
        n,
        spec,
    )?
    .value;
    let d4 = integrate_halfspace(move |r, xn| unit(r, xn).powi(2 - p_vol), n, spec)?.value;

    coeffs.alpha_n = Some(0.5 * (nf - 2.0) * k2 * c1);
    coeffs.beta_n = Some(exps.k_n.powf(exps.two_star) / (2.0 * (nf - 2.0)) * c2);
    coeffs.d_n = Some(k2 * c4);
    coeffs.alpha_hat = Some(DualRoute {
        quadrature: 0.5 * (nf - 2.0) * (d1 + d2),
        closed_form: alpha_hat_closed(n)?,
    });
    coeffs.d_hat = Some(DualRoute {
        quadrature: d4,
        closed_form: d_hat_closed(n)?,
    });
    coeffs.c1 = Some(c1);
    coeffs.c2 = Some(c2);
    coeffs.c4 = Some(c4);
    coeffs.c5 = Some(c5);
    coeffs.c6 = Some(c6);
    coeffs.d1 = Some(d1);
    coeffs.d2 = Some(d2);
    coeffs.d4 = Some(d4);
    Ok(coeffs)
}

/// `xi_N = (2/2_*) A_N B_N^{-2_*/2} gamma_hat`, assembled from the trace
/// constants and the (closed-form) trace-family boundary coefficient.
/// Requires `N >= 5`.
pub fn xi_n(n: u32, spec: &QuadratureSpec) -> Result<f64> {
    if n < 5 {
        return Err(Error::Domain(format!("xi requires N >= 5, got {n}")));
    }
    let exps = Exponents::new(n)?;
    let trace = trace_constants(n, spec)?;
    let coeffs = expansion_coefficients(n, spec)?;
    let gamma_hat = coeffs
        .gamma_hat
        .expect("gamma_hat defined for N >= 5")
        .value();
    Ok(2.0 / exps.two_lower * trace.a_n * trace.b_n.powf(-exps.two_lower / 2.0) * gamma_hat)
}

/// Interpolation weight `theta(tau)` of the `tau`-flux bubble,
/// `theta = m / (m + tau t)` with `m = (int U^{2*})^{(2*-2)/2*}` and
/// `t = (int_bdy U^{2_*})^{(2_*-2)/2_*}`; independent of `eps`.
pub fn theta_of_tau(n: u32, tau: f64, spec: &QuadratureSpec) -> Result<f64> {
    theta_of_tau_at(n, tau, 1.0, spec)
}

// eps-parameterized variant; exposed to tests to verify scale invariance.
fn theta_of_tau_at(n: u32, tau: f64, eps: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let exps = Exponents::new(n)?;
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::Domain(format!("tau must be >= 0, got {tau}")));
    }
    if tau == 0.0 {
        return Ok(1.0);
    }
    let bubble = BubbleProfile::interior(eps, tau)?;
    let vol = bare_volume_power(&bubble, &exps, exps.two_star, spec)?;
    let bdy = bare_boundary_power(&bubble, &exps, exps.two_lower, spec)?;
    let m = vol.powf((exps.two_star - 2.0) / exps.two_star);
    let t = bdy.powf((exps.two_lower - 2.0) / exps.two_lower);
    Ok(m / (m + tau * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const SPEC: QuadratureSpec = QuadratureSpec {
        abs_tol: 1e-10,
        rel_tol: 1e-8,
        max_subdivisions: 2000,
    };

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn bubble_identity_and_target() {
        for n in 3..=8u32 {
            let k = bubble_constants(n, &SPEC).unwrap();
            assert!(
                (k.k1 - k.k2 - k.k3).abs() <= 1e-6 * k.k1,
                "K1 - K2 - K3 violated at N = {n}: {} vs {} + {}",
                k.k1,
                k.k2,
                k.k3
            );
            assert!(k.a > 0.0);
            let exps = Exponents::new(n).unwrap();
            let alt = (0.5 - 1.0 / exps.two_star) * k.k2 + (0.5 - 1.0 / exps.two_lower) * k.k3;
            assert!(rel(k.a, alt) < 1e-6, "A mismatch at N = {n}");
        }
    }

    #[test]
    fn bubble_k1_scale_invariant() {
        let k = bubble_constants(4, &SPEC).unwrap();
        let exps = Exponents::new(4).unwrap();
        let half = BubbleProfile::interior(0.5, 1.0).unwrap();
        let k1_half = bare_grad_sq(&half, &exps, &SPEC).unwrap();
        assert!(rel(k.k1, k1_half) < 1e-6);
    }

    #[test]
    fn trace_ratio_scale_invariant_and_harmonic() {
        for n in 3..=8u32 {
            let t = trace_constants(n, &SPEC).unwrap();
            assert!(t.a_n > 0.0 && t.b_n > 0.0 && t.s0 > 0.0);
            // Harmonicity of the trace bubble forces A_N = (N-2) * mass,
            // i.e. S0 = (N-2) mass^{1/(N-1)}.
            let exps = Exponents::new(n).unwrap();
            let mass = t.b_n.powf(exps.two_lower / 2.0);
            assert!(
                rel(t.a_n, (n as f64 - 2.0) * mass) < 1e-6,
                "harmonic identity failed at N = {n}: {} vs {}",
                t.a_n,
                (n as f64 - 2.0) * mass
            );
        }
        // eps invariance of the quotient at N = 5.
        let exps = Exponents::new(5).unwrap();
        let half = BubbleProfile::trace(0.5).unwrap();
        let a_half = bare_grad_sq(&half, &exps, &SPEC).unwrap();
        let mass_half = bare_boundary_power(&half, &exps, exps.two_lower, &SPEC).unwrap();
        let s0_half = a_half / mass_half.powf(2.0 / exps.two_lower);
        let t5 = trace_constants(5, &SPEC).unwrap();
        assert!(rel(t5.s0, s0_half) < 1e-6);
    }

    #[test]
    fn trace_quotient_n3_frozen_and_riemann() {
        // At N = 3 the boundary mass is pi and the energy is pi, so
        // S0 = pi / sqrt(pi) = sqrt(pi).
        let t = trace_constants(3, &SPEC).unwrap();
        assert!(rel(t.s0, PI.sqrt()) < 1e-7, "S0(3) = {} vs sqrt(pi)", t.s0);

        // Independent coarse midpoint-Riemann oracle on the compactified
        // square (r = s/(1-s), x_N = u/(1-u)).
        let m = 800usize;
        let h = 1.0 / m as f64;
        let mut energy = 0.0;
        for i in 0..m {
            let s = (i as f64 + 0.5) * h;
            let r = s / (1.0 - s);
            let jr = 1.0 / ((1.0 - s) * (1.0 - s));
            for j in 0..m {
                let u = (j as f64 + 0.5) * h;
                let x = u / (1.0 - u);
                let ju = 1.0 / ((1.0 - u) * (1.0 - u));
                let d = r * r + (x + 1.0) * (x + 1.0);
                energy += r * (1.0 / (d * d)) * jr * ju * h * h;
            }
        }
        energy *= 2.0 * PI;
        let mut mass = 0.0;
        for i in 0..m {
            let s = (i as f64 + 0.5) * h;
            let r = s / (1.0 - s);
            let jr = 1.0 / ((1.0 - s) * (1.0 - s));
            mass += r / ((r * r + 1.0) * (r * r + 1.0)) * jr * h;
        }
        mass *= 2.0 * PI;
        let s0_riemann = energy / mass.powf(0.5);
        assert!(
            rel(t.s0, s0_riemann) < 1e-3,
            "Riemann oracle {} vs {}",
            s0_riemann,
            t.s0
        );
    }

    #[test]
    fn hat_coefficients_closed_vs_quadrature() {
        for n in 5..=9u32 {
            let c = expansion_coefficients(n, &SPEC).unwrap();
            for (name, dual) in [
                ("alpha_hat", c.alpha_hat.unwrap()),
                ("d_hat", c.d_hat.unwrap()),
                ("gamma_hat", c.gamma_hat.unwrap()),
            ] {
                assert!(
                    dual.rel_gap() < 1e-6,
                    "{name} routes disagree at N = {n}: {} vs {}",
                    dual.quadrature,
                    dual.closed_form
                );
            }
        }
    }

    #[test]
    fn hat_coefficients_frozen_values() {
        let c5 = expansion_coefficients(5, &SPEC).unwrap();
        assert!(rel(c5.alpha_hat.unwrap().value(), 5.0 * PI * PI / 8.0) < 1e-12);
        assert!(rel(c5.d_hat.unwrap().value(), PI * PI / 2.0) < 1e-12);
        assert!(rel(c5.gamma_hat.unwrap().value(), PI * PI / 36.0) < 1e-12);
        let c7 = expansion_coefficients(7, &SPEC).unwrap();
        let pi3 = PI.powi(3);
        assert!(rel(c7.alpha_hat.unwrap().value(), 7.0 * pi3 / 288.0) < 1e-12);
        assert!(rel(c7.d_hat.unwrap().value(), pi3 / 72.0) < 1e-12);
        assert!(rel(c7.gamma_hat.unwrap().value(), pi3 / 800.0) < 1e-12);
        let c4 = expansion_coefficients(4, &SPEC).unwrap();
        assert!(rel(c4.gamma_hat.unwrap().value(), 3.0 * PI * PI / 32.0) < 1e-12);
        assert!(c4.alpha_hat.is_none() && c4.d_hat.is_none() && c4.d_n.is_none());
    }

    #[test]
    fn c_integral_identities() {
        for n in [5u32, 6, 7, 9] {
            let c = expansion_coefficients(n, &SPEC).unwrap();
            let (c1, c4, c5, c6) = (c.c1.unwrap(), c.c4.unwrap(), c.c5.unwrap(), c.c6.unwrap());
            assert!(
                rel(c1, c4 - c5 - c6) < 1e-6,
                "C1 = C4 - C5 - C6 failed at N = {n}"
            );
            assert!(c5 < c6, "C5 < C6 failed at N = {n}");
            assert!(
                rel(c6, c6_closed(n).unwrap()) < 1e-6,
                "C6 closed vs quadrature, N = {n}"
            );
            assert!(
                rel(c.c3.unwrap(), c3_closed(n).unwrap()) < 1e-7,
                "C3 closed vs quadrature, N = {n}"
            );
        }
        let c5n = expansion_coefficients(5, &SPEC).unwrap();
        assert!(
            (c5n.c3.unwrap() - PI * PI / 8.0).abs() < 1e-8,
            "C3 at N = 5 should be pi^2/8, got {}",
            c5n.c3.unwrap()
        );
    }

    #[test]
    fn interior_coefficient_identities() {
        // alpha_N = (N/4) d_N: the energy differs from (N/4) * L2 mass only
        // at o(eps^2); checked here as an exact coefficient identity.
        for n in [5u32, 6, 7] {
            let c = expansion_coefficients(n, &SPEC).unwrap();
            let (alpha, beta, gamma, d) = (
                c.alpha_n.unwrap(),
                c.beta_n.unwrap(),
                c.gamma_n.unwrap(),
                c.d_n.unwrap(),
            );
            assert!(
                rel(alpha, n as f64 / 4.0 * d) < 1e-6,
                "alpha = (N/4) d failed at N = {n}: {alpha} vs {}",
                n as f64 / 4.0 * d
            );
            // Ratio identities tying the named coefficients to the C integrals.
            let exps = Exponents::new(n).unwrap();
            let nf = n as f64;
            let lhs_beta = 2.0 / exps.two_star * beta / d;
            let rhs_beta = (nf - 2.0) / 2.0 * c.c2.unwrap() / c.c4.unwrap();
            assert!(
                rel(lhs_beta, rhs_beta) < 1e-6,
                "beta ratio failed at N = {n}"
            );
            let lhs_gamma = 2.0 / exps.two_lower * gamma / d;
            let rhs_gamma =
                (nf * (nf - 2.0)).sqrt() / (4.0 * (nf - 1.0)) * c.c3.unwrap() / c.c4.unwrap();
            assert!(
                rel(lhs_gamma, rhs_gamma) < 1e-6,
                "gamma ratio failed at N = {n}"
            );
        }
    }

    #[test]
    fn xi_identity() {
        for n in 5..=9u32 {
            let xi = xi_n(n, &SPEC).unwrap();
            assert!(xi > 0.0);
            let c = expansion_coefficients(n, &SPEC).unwrap();
            let lhs = (c.alpha_hat.unwrap().value() + xi) / c.d_hat.unwrap().value();
            let target = n as f64 / 4.0 + (n as f64 - 4.0) / 8.0;
            assert!(
                rel(lhs, target) < 1e-4,
                "xi identity failed at N = {n}: {lhs} vs {target}"
            );
        }
        // Frozen: N = 7 target is 7/4 + 3/8 = 2.125.
        let c7 = expansion_coefficients(7, &SPEC).unwrap();
        let lhs7 =
            (c7.alpha_hat.unwrap().value() + xi_n(7, &SPEC).unwrap()) / c7.d_hat.unwrap().value();
        assert!((lhs7 - 2.125).abs() < 1e-4 * 2.125);
        // xi_5 = pi^2/16 via xi = (2/2_*)(N-2) gamma_hat.
        assert!(rel(xi_n(5, &SPEC).unwrap(), PI * PI / 16.0) < 1e-6);
    }

    #[test]
    fn theta_of_tau_behavior() {
        assert_eq!(theta_of_tau(4, 0.0, &SPEC).unwrap(), 1.0);
        let t1 = theta_of_tau(4, 1.0, &SPEC).unwrap();
        assert!(t1 > 0.0 && t1 < 1.0);
        let t1_half = theta_of_tau_at(4, 1.0, 0.5, &SPEC).unwrap();
        assert!(
            rel(t1, t1_half) < 1e-6,
            "theta not eps-invariant: {t1} vs {t1_half}"
        );
        let t_large = theta_of_tau(4, 1e3, &SPEC).unwrap();
        assert!(t_large < 0.01);
        assert!(theta_of_tau(4, -0.5, &SPEC).is_err());
    }

    #[test]
    fn cache_returns_identical_values() {
        let a = bubble_constants(6, &SPEC).unwrap();
        let b = bubble_constants(6, &SPEC).unwrap();
        assert_eq!(a, b);
        let tight = QuadratureSpec {
            abs_tol: 1e-11,
            rel_tol: 1e-9,
            max_subdivisions: 4000,
        };
        let c = bubble_constants(6, &tight).unwrap();
        // Different spec, different cache slot, still the same mathematics.
        assert!(rel(a.k1, c.k1) < 1e-7);
    }
}
