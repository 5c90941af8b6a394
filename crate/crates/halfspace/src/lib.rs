//! Numerical toolkit for a weighted critical Neumann problem on the upper
//! half-space.
//!
//! The object of study is the semilinear problem
//!
//! ```text
//!   -Δu - ½ (x · ∇u) = λu + a |u|^{2*-2} u      in  R^N_+,
//!   ∂u/∂ν = μ |u|^{q-2} u + |u|^{2_*-2} u        on  ∂R^N_+,
//! ```
//!
//! posed in the weighted Sobolev space with Gaussian weight
//! `K(x) = e^{|x|²/4}`, where `2* = 2N/(N-2)` is the critical Sobolev
//! exponent, `2_* = 2(N-1)/(N-2)` the critical trace exponent,
//! `a ∈ {0, 1}` switches the interior critical term, and
//! `q ∈ [2, 2_*)` is the boundary perturbation exponent. Everything the
//! existence and nonexistence theory of this problem pins down to a
//! computable number — sharp constants, eigenvalue bounds, threshold
//! chains, energy expansions, fiber-map level conditions, and the
//! resulting `(λ, μ)` region picture — is realized here by adaptive
//! quadrature and checked against its closed form whenever one exists.
//!
//! # Module map
//!
//! - [`numerics`] — adaptive Gauss–Kronrod quadrature on lines, the
//!   half-space, and its boundary; the [`QuadratureSpec`] tolerance
//!   contract shared by every computation.
//! - [`testfun`] — the critical exponents and the explicit test-function
//!   families (truncated bubbles, their boundary-centred duals, Gaussian
//!   polynomials) with weighted energy, volume, and trace norms.
//! - [`constants`] — bubble and trace constants, the expansion
//!   coefficients of the energy functionals, and the dual-route identity
//!   checks (quadrature vs closed Beta-function forms).
//! - [`spectral`] — Rayleigh quotients in the weighted space, the Steklov
//!   eigenvalue estimate `μ₁(λ)`, and a randomized Hardy-inequality suite.
//! - [`thresholds`] — the spectral thresholds `λ̄`, `λ̂`, the mountain-pass
//!   threshold `λ*`, and the inequality chain that brackets it.
//! - [`asymptotics`] — scale sweeps `ε ↦` (energy, trace, volume) for the
//!   test families and least-squares fits against the predicted expansion
//!   models, including log-augmented and pure-power shapes.
//! - [`fiber`] — the fiber-map level condition: does the mountain-pass
//!   level of a test family drop below the compactness ceiling?
//! - [`region`] — the `(λ, μ)` phase diagram: sound existence and
//!   nonexistence clauses, the `η`-curve frontier, and grid rendering.
//! - [`cli`] — structured reports (CSV/JSON) and one entry point per
//!   subcommand of the `halfspace` binary.
//! - [`verify`] — the ten-point acceptance suite run by `verify-all`.
//!
//! # Runnable examples
//!
//! Each major capability has a runnable walk-through under `examples/`:
//! `constants`, `thresholds`, `expansion_fits`, `envelope_bounds`,
//! `fiber_condition`, `eigen_bounds`, `hardy`, `region_map`, and
//! `verify_all`. Run one with
//!
//! ```text
//! cargo run --release --example region_map
//! ```
//!
//! # Determinism and failure model
//!
//! Every public computation is deterministic: rerunning a command or
//! example reproduces its output byte for byte, at any thread count. All
//! fallible paths return [`Error`], which separates domain errors (bad
//! input), quadrature and fitting failures, and geometry failures (absent
//! mountain-pass structure); the binary maps these to distinct exit codes.

// Validation here deliberately writes `!(x > 0.0)` instead of `x <= 0.0`:
// the negated form also rejects NaN, which must never pass a domain check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod constants;
pub mod error;
pub mod fiber;
pub mod numerics;
pub mod region;
pub mod spectral;
pub mod testfun;
pub mod thresholds;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{QuadratureResult, QuadratureSpec};
