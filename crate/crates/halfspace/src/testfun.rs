//! Bubble and envelope test families with analytic gradients.
//!
//! All functions here are cylindrically symmetric: they depend on `(r, x_N)`
//! with `r = |x'|`, and [`TestFunction::eval`] returns the value together with
//! the exact partial derivatives `(d/dr, d/dx_N)` assembled by the product
//! rule (no finite differences anywhere).
//!
//! Families:
//!
//! * the bare interior bubble `U_eps` and its `tau`-shifted generalization
//!   ([`BubbleProfile`]), whose norms are taken *unweighted*;
//! * the weighted concentration families `u_eps` (smooth cutoff),
//!   `v_eps` (Gaussian envelope, dimension 3), and their trace-bubble
//!   counterparts `uhat_eps`, `vhat_eps`;
//! * the Gaussian `e^{-|x|^2/4}` and Gaussian-times-polynomial profiles used
//!   for Rayleigh quotients and randomized suites;
//! * arbitrary custom profiles supplied as closures.
//!
//! The exponential weight is `K(x) = e^{|x|^2/4}`; the weighted families carry
//! a `K^{-1/2}` factor so their weighted norms stay finite. The three norm
//! evaluators at the bottom integrate `K |grad u|^2`, `K |u|^p` (volume), and
//! `K |u|^p` (boundary trace); for the bare bubble the weight is replaced by 1.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{integrate_boundary, integrate_halfspace, QuadratureSpec};

/// Critical exponents and bubble geometry for dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    /// Space dimension, `3 <= n <= 12`.
    pub n: u32,
    /// Critical Sobolev exponent `2* = 2n/(n-2)`.
    pub two_star: f64,
    /// Critical trace exponent `2_* = 2(n-1)/(n-2)`.
    pub two_lower: f64,
    /// Bubble normalization `k_n = (sqrt(n(n-2)))^{(n-2)/2}`.
    pub k_n: f64,
    /// Interior-bubble offset `x_n^0 = sqrt(n/(n-2))`.
    pub x_n0: f64,
}

impl Exponents {
    /// Exponents for dimension `n`; dimensions outside `3..=12` are rejected
    /// (the quadrature-backed constants are only certified on that range).
    pub fn new(n: u32) -> Result<Self> {
        if !(3..=12).contains(&n) {
            return Err(Error::Domain(format!(
                "dimension must be in 3..=12, got {n}"
            )));
        }
        let nf = n as f64;
        let nm2 = nf - 2.0;
        Ok(Exponents {
            n,
            two_star: 2.0 * nf / nm2,
            two_lower: 2.0 * (nf - 1.0) / nm2,
            k_n: (nf * nm2).sqrt().powf(nm2 / 2.0),
            x_n0: (nf / nm2).sqrt(),
        })
    }

    /// `b = sqrt(1 + (x_n^0)^2) = sqrt((2n-2)/(n-2))`, the denominator scale
    /// of the boundary-restricted bubble.
    pub fn b(&self) -> f64 {
        (1.0 + self.x_n0 * self.x_n0).sqrt()
    }

    /// Boundary `L^q` scaling exponent `theta_n = n - 1 - (n-2) q / 2` of the
    /// weighted families as `eps -> 0`.
    pub fn boundary_scaling_exponent(&self, q: f64) -> f64 {
        (self.n as f64 - 1.0) - (self.n as f64 - 2.0) * q / 2.0
    }

    /// Validates a boundary exponent `q in [2, 2_*)`.
    pub fn check_q(&self, q: f64) -> Result<()> {
        if !(2.0..self.two_lower).contains(&q) {
            return Err(Error::Domain(format!(
                "q must lie in [2, {}) for n = {}, got {q}",
                self.two_lower, self.n
            )));
        }
        Ok(())
    }
}

/// The exponential weight `K(x) = e^{|x|^2/4}` at `(r, x_N)`.
pub fn weight_k(r: f64, xn: f64) -> f64 {
    ((r * r + xn * xn) / 4.0).exp()
}

// C-infinity smoothstep s(t) = f(t) / (f(t) + f(1-t)) with f(t) = e^{-1/t}.
// Returns (s, s'). Identically 0 for t <= 0 and 1 for t >= 1.
fn smoothstep(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0);
    }
    let f = (-1.0 / t).exp();
    let g = (-1.0 / (1.0 - t)).exp();
    let fp = f / (t * t);
    let gp = -g / ((1.0 - t) * (1.0 - t));
    let denom = f + g;
    let s = f / denom;
    let ds = (fp * denom - f * (fp + gp)) / (denom * denom);
    (s, ds)
}

/// Radial cutoff `phi(|x|)`: identically 1 on `|x| <= 1`, identically 0 on
/// `|x| >= 2`, C-infinity and nonincreasing in between (`phi(1.5) = 1/2`).
pub fn cutoff_phi(rho: f64) -> f64 {
    smoothstep(2.0 - rho).0
}

/// Derivative of [`cutoff_phi`] with respect to `rho`.
pub fn cutoff_phi_deriv(rho: f64) -> f64 {
    -smoothstep(2.0 - rho).1
}

/// Which bare bubble a [`BubbleProfile`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BubbleFamily {
    /// `phi_{eps,tau}(x) = k_n (eps / (eps^2 + |x'|^2 + (x_N + eps tau x_n^0)^2))^{(n-2)/2}`.
    Interior {
        /// Boundary-flux weight `tau >= 0`; `tau = 1` is the standard bubble.
        tau: f64,
    },
    /// `Uhat_eps(x) = (eps / (|x'|^2 + (x_N + eps)^2))^{(n-2)/2}` (no `k_n`).
    Trace,
}

/// A bare bubble at concentration scale `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleProfile {
    pub family: BubbleFamily,
    pub eps: f64,
}

impl BubbleProfile {
    /// Interior bubble; requires `eps > 0` and `tau >= 0`.
    pub fn interior(eps: f64, tau: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Domain(format!(
                "bubble eps must be positive, got {eps}"
            )));
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("bubble tau must be >= 0, got {tau}")));
        }
        Ok(BubbleProfile {
            family: BubbleFamily::Interior { tau },
            eps,
        })
    }

    /// Trace bubble; requires `eps > 0`.
    pub fn trace(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Domain(format!(
                "bubble eps must be positive, got {eps}"
            )));
        }
        Ok(BubbleProfile {
            family: BubbleFamily::Trace,
            eps,
        })
    }

    /// Value and partials `(value, d/dr, d/dx_N)` at `(r, x_N)`.
    pub fn eval(&self, exps: &Exponents, r: f64, xn: f64) -> (f64, f64, f64) {
        let p = (exps.n as f64 - 2.0) / 2.0;
        let (pref, shift) = match self.family {
            BubbleFamily::Interior { tau } => (exps.k_n, self.eps * tau * exps.x_n0),
            BubbleFamily::Trace => (1.0, self.eps),
        };
        let e2 = match self.family {
            BubbleFamily::Interior { .. } => self.eps * self.eps,
            BubbleFamily::Trace => 0.0,
        };
        let z = xn + shift;
        let d = e2 + r * r + z * z;
        let value = pref * (self.eps / d).powf(p);
        // d/dr D^{-p} = -p * 2r * D^{-p-1}, so the gradient reuses `value / d`.
        let common = -2.0 * p * value / d;
        (value, common * r, common * z)
    }
}

type CustomEval = Arc<dyn Fn(f64, f64) -> (f64, f64, f64) + Send + Sync>;

/// Cylindrical profile of a [`TestFunction`].
#[derive(Clone)]
pub enum Profile {
    /// Bare interior bubble `U_eps` (norms are unweighted for this family).
    BareBubble,
    /// `u_eps = K^{-1/2} phi U_eps` with the smooth radial cutoff.
    CutoffBubble,
    /// `v_eps = K^{-1/2} psi U_eps` with `psi = e^{-|x|^2/(8 sqrt 5)}`; n = 3.
    EnvelopeBubble,
    /// `uhat_eps = K^{-1/2} phi Uhat_eps`.
    CutoffTraceBubble,
    /// `vhat_eps = K^{-1/2} psi Uhat_eps`; n = 3.
    EnvelopeTraceBubble,
    /// `e^{-|x|^2/4}`, the first weighted-volume eigenfunction profile.
    Gaussian,
    /// `e^{-|x|^2/4}` times a polynomial `sum c_k r^{2 i_k} x_N^{j_k}`.
    GaussianPoly {
        /// Terms `(i, j, c)` contributing `c * r^{2i} * x_N^j`.
        terms: Vec<(u32, u32, f64)>,
    },
    /// Arbitrary profile returning `(value, d/dr, d/dx_N)`.
    Custom { name: String, eval: CustomEval },
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::BareBubble => write!(f, "BareBubble"),
            Profile::CutoffBubble => write!(f, "CutoffBubble"),
            Profile::EnvelopeBubble => write!(f, "EnvelopeBubble"),
            Profile::CutoffTraceBubble => write!(f, "CutoffTraceBubble"),
            Profile::EnvelopeTraceBubble => write!(f, "EnvelopeTraceBubble"),
            Profile::Gaussian => write!(f, "Gaussian"),
            Profile::GaussianPoly { terms } => write!(f, "GaussianPoly({terms:?})"),
            Profile::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// A concrete test function on the half-space of dimension `exps.n`.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub profile: Profile,
    pub eps: f64,
    pub exps: Exponents,
}

// Weighted families concentrate as eps -> 0; the expansions backing them are
// only used on this range, so larger eps is rejected early.
const WEIGHTED_EPS_MAX: f64 = 0.5;

fn check_weighted_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= WEIGHTED_EPS_MAX) {
        return Err(Error::Domain(format!(
            "weighted families require eps in (0, {WEIGHTED_EPS_MAX}], got {eps}"
        )));
    }
    Ok(())
}

fn check_dim3(n: u32, family: &str) -> Result<()> {
    if n != 3 {
        return Err(Error::Domain(format!(
            "{family} is defined for n = 3 only, got n = {n}"
        )));
    }
    Ok(())
}

impl TestFunction {
    /// Bare interior bubble `U_eps` (`tau = 1`); any positive `eps`.
    pub fn bare_bubble(n: u32, eps: f64) -> Result<Self> {
        let exps = Exponents::new(n)?;
        BubbleProfile::interior(eps, 1.0)?;
        Ok(TestFunction {
            profile: Profile::BareBubble,
            eps,
            exps,
        })
    }

    /// Cutoff family `u_eps`; `eps in (0, 0.5]`.
    pub fn u_eps(n: u32, eps: f64) -> Result<Self> {
        let exps = Exponents::new(n)?;
        check_weighted_eps(eps)?;
        Ok(TestFunction {
            profile: Profile::CutoffBubble,
            eps,
            exps,
        })
    }

    /// Envelope family `v_eps`; `n = 3`, `eps in (0, 0.5]`.
    pub fn v_eps(n: u32, eps: f64) -> Result<Self> {
        check_dim3(n, "v_eps")?;
        let exps = Exponents::new(n)?;
        check_weighted_eps(eps)?;
        Ok(TestFunction {
            profile: Profile::EnvelopeBubble,
            eps,
            exps,
        })
    }

    /// Cutoff trace family `uhat_eps`; `eps in (0, 0.5]`.
    pub fn uhat_eps(n: u32, eps: f64) -> Result<Self> {
        let exps = Exponents::new(n)?;
        check_weighted_eps(eps)?;
        Ok(TestFunction {
            profile: Profile::CutoffTraceBubble,
            eps,
            exps,
        })
    }

    /// Envelope trace family `vhat_eps`; `n = 3`, `eps in (0, 0.5]`.
    pub fn vhat_eps(n: u32, eps: f64) -> Result<Self> {
        check_dim3(n, "vhat_eps")?;
        let exps = Exponents::new(n)?;
        check_weighted_eps(eps)?;
        Ok(TestFunction {
            profile: Profile::EnvelopeTraceBubble,
            eps,
            exps,
        })
    }

    /// Gaussian `e^{-|x|^2/4}`.
    pub fn gaussian(n: u32) -> Result<Self> {
        Ok(TestFunction {
            profile: Profile::Gaussian,
            eps: 1.0,
            exps: Exponents::new(n)?,
        })
    }

    /// Gaussian times a polynomial with terms `(i, j, c) -> c r^{2i} x_N^j`.
    pub fn gaussian_poly(n: u32, terms: Vec<(u32, u32, f64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain(
                "gaussian_poly needs at least one term".into(),
            ));
        }
        Ok(TestFunction {
            profile: Profile::GaussianPoly { terms },
            eps: 1.0,
            exps: Exponents::new(n)?,
        })
    }

    /// Custom profile; the closure returns `(value, d/dr, d/dx_N)`.
    pub fn custom(
        n: u32,
        name: impl Into<String>,
        eval: impl Fn(f64, f64) -> (f64, f64, f64) + Send + Sync + 'static,
    ) -> Result<Self> {
        Ok(TestFunction {
            profile: Profile::Custom {
                name: name.into(),
                eval: Arc::new(eval),
            },
            eps: 1.0,
            exps: Exponents::new(n)?,
        })
    }

    /// Whether the norm evaluators carry the weight `K` for this family.
    /// Only the bare bubble is measured unweighted.
    pub fn weighted(&self) -> bool {
        !matches!(self.profile, Profile::BareBubble)
    }

    /// Value and analytic partials `(value, d/dr, d/dx_N)` at `(r, x_N)`,
    /// valid on the closed half-space `r >= 0`, `x_N >= 0`.
    pub fn eval(&self, r: f64, xn: f64) -> (f64, f64, f64) {
        match &self.profile {
            Profile::BareBubble => {
                let bubble = BubbleProfile {
                    family: BubbleFamily::Interior { tau: 1.0 },
                    eps: self.eps,
                };
                bubble.eval(&self.exps, r, xn)
            }
            Profile::CutoffBubble => product3(
                half_weight_part(r, xn),
                cutoff_part(r, xn),
                BubbleProfile {
                    family: BubbleFamily::Interior { tau: 1.0 },
                    eps: self.eps,
                }
                .eval(&self.exps, r, xn),
            ),
            Profile::EnvelopeBubble => product3(
                half_weight_part(r, xn),
                envelope_part(r, xn),
                BubbleProfile {
                    family: BubbleFamily::Interior { tau: 1.0 },
                    eps: self.eps,
                }
                .eval(&self.exps, r, xn),
            ),
            Profile::CutoffTraceBubble => product3(
                half_weight_part(r, xn),
                cutoff_part(r, xn),
                BubbleProfile {
                    family: BubbleFamily::Trace,
                    eps: self.eps,
                }
                .eval(&self.exps, r, xn),
            ),
            Profile::EnvelopeTraceBubble => product3(
                half_weight_part(r, xn),
                envelope_part(r, xn),
                BubbleProfile {
                    family: BubbleFamily::Trace,
                    eps: self.eps,
                }
                .eval(&self.exps, r, xn),
            ),
            Profile::Gaussian => {
                let g = (-(r * r + xn * xn) / 4.0).exp();
                (g, -0.5 * r * g, -0.5 * xn * g)
            }
            Profile::GaussianPoly { terms } => {
                let g = (-(r * r + xn * xn) / 4.0).exp();
                let mut p = 0.0;
                let mut pr = 0.0;
                let mut pn = 0.0;
                for &(i, j, c) in terms {
                    let ri = r.powi(2 * i as i32);
                    let xj = xn.powi(j as i32);
                    p += c * ri * xj;
                    if i > 0 {
                        pr += c * 2.0 * i as f64 * r.powi(2 * i as i32 - 1) * xj;
                    }
                    if j > 0 {
                        pn += c * ri * j as f64 * xn.powi(j as i32 - 1);
                    }
                }
                (p * g, (pr - 0.5 * r * p) * g, (pn - 0.5 * xn * p) * g)
            }
            Profile::Custom { eval, .. } => eval(r, xn),
        }
    }
}

// K^{-1/2} = e^{-|x|^2/8} as a (value, d/dr, d/dx_N) triple.
fn half_weight_part(r: f64, xn: f64) -> (f64, f64, f64) {
    let w = (-(r * r + xn * xn) / 8.0).exp();
    (w, -0.25 * r * w, -0.25 * xn * w)
}

// psi = e^{-|x|^2/(8 sqrt 5)} as a triple.
fn envelope_part(r: f64, xn: f64) -> (f64, f64, f64) {
    let rate = 8.0 * 5.0f64.sqrt();
    let w = (-(r * r + xn * xn) / rate).exp();
    let half = 2.0 / rate;
    (w, -half * r * w, -half * xn * w)
}

// Radial cutoff phi(|x|) as a triple; flat regions avoid the r/rho division.
fn cutoff_part(r: f64, xn: f64) -> (f64, f64, f64) {
    let rho = (r * r + xn * xn).sqrt();
    if !(1.0..2.0).contains(&rho) {
        let v = if rho < 1.0 { 1.0 } else { 0.0 };
        return (v, 0.0, 0.0);
    }
    let v = cutoff_phi(rho);
    let dv = cutoff_phi_deriv(rho);
    (v, dv * r / rho, dv * xn / rho)
}

fn product3(a: (f64, f64, f64), b: (f64, f64, f64), c: (f64, f64, f64)) -> (f64, f64, f64) {
    (
        a.0 * b.0 * c.0,
        a.1 * b.0 * c.0 + a.0 * b.1 * c.0 + a.0 * b.0 * c.1,
        a.2 * b.0 * c.0 + a.0 * b.2 * c.0 + a.0 * b.0 * c.2,
    )
}

/// Squared gradient norm `int K |grad u|^2 dx` over the half-space (weight
/// replaced by 1 for the bare bubble family).
pub fn norm_grad_k(tf: &TestFunction, spec: &QuadratureSpec) -> Result<f64> {
    let weighted = tf.weighted();
    let res = integrate_halfspace(
        |r, xn| {
            let (_, dr, dxn) = tf.eval(r, xn);
            let g = dr * dr + dxn * dxn;
            // The zero guard keeps 0 * K finite where the profile underflowed.
            if g == 0.0 || !weighted {
                g
            } else {
                weight_k(r, xn) * g
            }
        },
        tf.exps.n,
        spec,
    )?;
    Ok(res.value)
}

/// Weighted volume norm power `int K |u|^p dx` over the half-space (weight 1
/// for the bare bubble). Note this is the p-th power, not the norm itself.
pub fn norm_lp_k_volume(tf: &TestFunction, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!(
            "norm exponent must be >= 1, got {p}"
        )));
    }
    let weighted = tf.weighted();
    let res = integrate_halfspace(
        |r, xn| {
            let (v, _, _) = tf.eval(r, xn);
            let w = v.abs().powf(p);
            if w == 0.0 || !weighted {
                w
            } else {
                weight_k(r, xn) * w
            }
        },
        tf.exps.n,
        spec,
    )?;
    Ok(res.value)
}

/// Weighted boundary norm power `int_{x_N = 0} K |u|^p dx'` (weight 1 for the
/// bare bubble).
pub fn norm_lp_k_boundary(tf: &TestFunction, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!(
            "norm exponent must be >= 1, got {p}"
        )));
    }
    let weighted = tf.weighted();
    let res = integrate_boundary(
        |r| {
            let (v, _, _) = tf.eval(r, 0.0);
            let w = v.abs().powf(p);
            if w == 0.0 || !weighted {
                w
            } else {
                weight_k(r, 0.0) * w
            }
        },
        tf.exps.n,
        spec,
    )?;
    Ok(res.value)
}
