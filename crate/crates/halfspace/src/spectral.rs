//! Rayleigh quotients of the weighted eigenvalue problems, Rayleigh-Ritz
//! upper bounds for the boundary eigenvalue `mu_1`, and the Hardy-type
//! inequality check.
//!
//! The volume quotient `|u|^2 / |u|^2_{L2_K}` attains its infimum `N/2` at
//! the Gaussian `e^{-|x|^2/4}`; every evaluation is therefore a sanity
//! check against a known eigenpair. The boundary quotient
//! `|u|^2 / |u|^2_{L2_K(bdy)}` has infimum `mu_1 > 0` with no closed
//! value; [`estimate_mu1`] shrinks a certified upper bound by minimizing
//! over growing spans of Gaussian-times-polynomial trial functions.
//!
//! [`hardy_check`] evaluates `(N^2/4) int u^2 <= int (x . grad u)^2` with
//! unweighted integrals, exactly as the inequality is stated.

use nalgebra::{DMatrix, SymmetricEigen};

/// Condition-number ceiling for the energy Gram matrix.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;

use crate::error::{Error, Result};
use crate::numerics::{integrate_boundary, integrate_halfspace, QuadratureSpec};
use crate::testfun::{norm_grad_k, norm_lp_k_boundary, norm_lp_k_volume, weight_k, TestFunction};

/// Gaussian-times-polynomial trial space for the Rayleigh-Ritz bound.
///
/// Elements are `e^{-|x|^2/4} r^{2i} x_N^j`, enumerated by total degree
/// `i + j` and, within a degree, by increasing `j`. Even powers of `r`
/// respect the cylindrical symmetry of the problem; powers of `x_N`
/// resolve behavior normal to the boundary.
#[derive(Debug, Clone)]
pub struct RitzBasis {
    pub size: usize,
    pub elements: Vec<TestFunction>,
}

impl RitzBasis {
    /// The first `size` elements of the standard enumeration.
    pub fn standard(n: u32, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Domain("Ritz basis needs size >= 1".into()));
        }
        let mut elements = Vec::with_capacity(size);
        'outer: for degree in 0.. {
            for j in 0..=degree {
                let i = degree - j;
                elements.push(TestFunction::gaussian_poly(n, vec![(i, j, 1.0)])?);
                if elements.len() == size {
                    break 'outer;
                }
            }
        }
        Ok(RitzBasis { size, elements })
    }
}

/// A certified upper bound for `mu_1` with its convergence history.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenEstimate {
    /// The final (smallest) Ritz value.
    pub value: f64,
    pub basis_size: usize,
    /// `(size, Ritz value)` for every intermediate basis size;
    /// nonincreasing in size.
    pub history: Vec<(usize, f64)>,
}

/// Outcome of one Hardy-inequality evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyCheck {
    /// `(N^2/4) int u^2` (unweighted).
    pub lhs: f64,
    /// `int (x . grad u)^2` (unweighted).
    pub rhs: f64,
    pub holds: bool,
}

fn check_denominator(value: f64, what: &str, spec: &QuadratureSpec) -> Result<()> {
    if !(value > spec.abs_tol) {
        let _ = what;
        return Err(Error::DegenerateDenominator);
    }
    Ok(())
}

/// Volume Rayleigh quotient `int K |grad u|^2 / int K u^2`. Always at
/// least `N/2`, with equality at the Gaussian.
pub fn rayleigh_volume(u: &TestFunction, spec: &QuadratureSpec) -> Result<f64> {
    let num = norm_grad_k(u, spec)?;
    let den = norm_lp_k_volume(u, 2.0, spec)?;
    check_denominator(den, "weighted volume mass", spec)?;
    Ok(num / den)
}

/// Boundary Rayleigh quotient `int K |grad u|^2 / int_bdy K u^2`. Every
/// value is an upper bound for `mu_1`.
pub fn rayleigh_boundary(u: &TestFunction, spec: &QuadratureSpec) -> Result<f64> {
    let num = norm_grad_k(u, spec)?;
    let den = norm_lp_k_boundary(u, 2.0, spec)?;
    check_denominator(den, "weighted boundary mass", spec)?;
    Ok(num / den)
}

// Energy inner product int K grad a . grad b over the half-space.
fn energy_inner(a: &TestFunction, b: &TestFunction, n: u32, spec: &QuadratureSpec) -> Result<f64> {
    Ok(integrate_halfspace(
        |r, xn| {
            let (_, ar, an) = a.eval(r, xn);
            let (_, br, bn) = b.eval(r, xn);
            let g = ar * br + an * bn;
            // The zero guard keeps 0 * K finite where the profiles
            // underflowed (K overflows first on this decay scale).
            if g == 0.0 {
                g
            } else {
                weight_k(r, xn) * g
            }
        },
        n,
        spec,
    )?
    .value)
}

// Boundary mass inner product int_bdy K a b.
fn boundary_inner(
    a: &TestFunction,
    b: &TestFunction,
    n: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok(integrate_boundary(
        |r| {
            let (av, _, _) = a.eval(r, 0.0);
            let (bv, _, _) = b.eval(r, 0.0);
            let g = av * bv;
            if g == 0.0 {
                g
            } else {
                weight_k(r, 0.0) * g
            }
        },
        n,
        spec,
    )?
    .value)
}

// Rayleigh-Ritz history over the given trial functions: for each prefix
// size, the minimum of the boundary quotient over the span. The basis is
// orthonormalized in the energy inner product (Cholesky whitening), after
// which the minimum quotient is the reciprocal of the largest eigenvalue
// of the whitened boundary Gram matrix.
fn ritz_history(
    n: u32,
    elements: &[TestFunction],
    spec: &QuadratureSpec,
) -> Result<Vec<(usize, f64)>> {
    let m = elements.len();
    let mut scale = Vec::with_capacity(m);
    for e in elements {
        let norm_sq = energy_inner(e, e, n, spec)?;
        if !(norm_sq > 0.0) {
            return Err(Error::Domain(
                "Ritz element has nonpositive energy norm".into(),
            ));
        }
        scale.push(norm_sq.sqrt());
    }
    let mut a = DMatrix::zeros(m, m);
    let mut b = DMatrix::zeros(m, m);
    for k in 0..m {
        for l in 0..=k {
            let s = scale[k] * scale[l];
            let akl = energy_inner(&elements[k], &elements[l], n, spec)? / s;
            let bkl = boundary_inner(&elements[k], &elements[l], n, spec)? / s;
            a[(k, l)] = akl;
            a[(l, k)] = akl;
            b[(k, l)] = bkl;
            b[(l, k)] = bkl;
        }
    }

    let eig_a = SymmetricEigen::new(a.clone());
    let lam_max = eig_a.eigenvalues.max();
    let lam_min = eig_a.eigenvalues.min();
    if !(lam_min > 0.0) || lam_max / lam_min > GRAM_CONDITION_LIMIT {
        return Err(Error::IllConditionedGram {
            cond: if lam_min > 0.0 {
                lam_max / lam_min
            } else {
                f64::INFINITY
            },
            limit: GRAM_CONDITION_LIMIT,
        });
    }

    let mut history = Vec::with_capacity(m);
    for size in 1..=m {
        let a_s = a.view((0, 0), (size, size)).into_owned();
        let b_s = b.view((0, 0), (size, size)).into_owned();
        let chol = nalgebra::Cholesky::new(a_s).ok_or(Error::IllConditionedGram {
            cond: f64::INFINITY,
            limit: GRAM_CONDITION_LIMIT,
        })?;
        let l_inv = chol.l().try_inverse().ok_or(Error::IllConditionedGram {
            cond: f64::INFINITY,
            limit: GRAM_CONDITION_LIMIT,
        })?;
        let whitened = &l_inv * b_s * l_inv.transpose();
        let theta = SymmetricEigen::new(whitened).eigenvalues.max();
        if !(theta > 0.0) {
            return Err(Error::DegenerateDenominator);
        }
        history.push((size, 1.0 / theta));
    }
    Ok(history)
}

/// Shrinks a certified upper bound for `mu_1` by Rayleigh-Ritz over the
/// standard trial space, growing the basis one element at a time up to
/// `max_basis_size`.
pub fn estimate_mu1(n: u32, max_basis_size: usize, spec: &QuadratureSpec) -> Result<EigenEstimate> {
    let basis = RitzBasis::standard(n, max_basis_size)?;
    let history = ritz_history(n, &basis.elements, spec)?;
    let &(basis_size, value) = history.last().expect("nonempty history");
    Ok(EigenEstimate {
        value,
        basis_size,
        history,
    })
}

/// Evaluates the Hardy-type inequality `(N^2/4) int u^2 <= int (x . grad u)^2`
/// with unweighted integrals over the half-space. `holds` allows slack of
/// the quadrature tolerance.
pub fn hardy_check(u: &TestFunction, spec: &QuadratureSpec) -> Result<HardyCheck> {
    let n = u.exps.n;
    let mass = integrate_halfspace(
        |r, xn| {
            let (v, _, _) = u.eval(r, xn);
            v * v
        },
        n,
        spec,
    )?
    .value;
    let radial = integrate_halfspace(
        |r, xn| {
            let (_, dr, dxn) = u.eval(r, xn);
            let xg = r * dr + xn * dxn;
            xg * xg
        },
        n,
        spec,
    )?
    .value;
    let lhs = (n as f64) * (n as f64) / 4.0 * mass;
    let tol = spec.abs_tol + spec.rel_tol * lhs.abs().max(radial.abs());
    Ok(HardyCheck {
        lhs,
        rhs: radial,
        holds: lhs <= radial + tol,
    })
}

/// Deterministic 30-function suite for Hardy-inequality spot checks.
///
/// For each dimension in {3, 4, 5}: one interior and one trace
/// concentration-family member at a random scale, the envelope family at
/// `N = 3`, and seeded Gaussian-polynomial combinations for the rest.
pub fn hardy_suite(seed: u64) -> Result<Vec<TestFunction>> {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite = Vec::with_capacity(30);
    for n in [3u32, 4, 5] {
        for k in 0..10 {
            suite.push(match k {
                0 => TestFunction::u_eps(n, rng.random_range(0.02..0.2))?,
                1 => TestFunction::uhat_eps(n, rng.random_range(0.02..0.2))?,
                2 if n == 3 => TestFunction::v_eps(3, rng.random_range(0.02..0.2))?,
                _ => {
                    let mut terms = Vec::new();
                    for degree in 0..3u32 {
                        for j in 0..=degree {
                            let i = degree - j;
                            terms.push((i, j, rng.random_range(-1.0..1.0)));
                        }
                    }
                    TestFunction::gaussian_poly(n, terms)?
                }
            });
        }
    }
    Ok(suite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    const SPEC: QuadratureSpec = QuadratureSpec {
        abs_tol: 1e-10,
        rel_tol: 1e-8,
        max_subdivisions: 2000,
    };

    // Tighter quadrature for the 1e-8 eigenvalue assertions.
    const TIGHT: QuadratureSpec = QuadratureSpec {
        abs_tol: 1e-12,
        rel_tol: 1e-10,
        max_subdivisions: 2000,
    };

    fn random_ritz_combination(n: u32, rng: &mut ChaCha8Rng) -> TestFunction {
        let mut terms = Vec::new();
        for degree in 0..3u32 {
            for j in 0..=degree {
                let i = degree - j;
                terms.push((i, j, rng.random_range(-1.0..1.0)));
            }
        }
        TestFunction::gaussian_poly(n, terms).unwrap()
    }

    #[test]
    fn gaussian_volume_quotient_is_half_dimension() {
        for n in 3..=8u32 {
            let g = TestFunction::gaussian(n).unwrap();
            let q = rayleigh_volume(&g, &TIGHT).unwrap();
            let want = n as f64 / 2.0;
            assert!(
                (q - want).abs() < 1e-8 * want,
                "N = {n}: quotient {q} vs {want}"
            );
        }
    }

    #[test]
    fn volume_quotient_is_bounded_below_by_half_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3u32, 4, 5] {
            for _ in 0..20 {
                let u = random_ritz_combination(n, &mut rng);
                let q = rayleigh_volume(&u, &SPEC).unwrap();
                assert!(
                    q >= n as f64 / 2.0 - 1e-6,
                    "N = {n}: quotient {q} below the eigenvalue"
                );
            }
        }
        let u = TestFunction::u_eps(5, 0.05).unwrap();
        assert!(rayleigh_volume(&u, &SPEC).unwrap() >= 2.5 - 1e-6);
    }

    #[test]
    fn boundary_quotient_is_positive_and_scale_invariant() {
        let g = TestFunction::gaussian(3).unwrap();
        let q = rayleigh_boundary(&g, &SPEC).unwrap();
        assert!(q > 0.0);
        let doubled = TestFunction::gaussian_poly(3, vec![(0, 0, 2.0)]).unwrap();
        let q2 = rayleigh_boundary(&doubled, &SPEC).unwrap();
        assert!(
            (q - q2).abs() < 1e-9 * q,
            "quotient not scale-invariant: {q} vs {q2}"
        );
    }

    #[test]
    fn boundary_quotient_rejects_vanishing_trace() {
        // x_N times the Gaussian vanishes identically on the boundary.
        let u = TestFunction::gaussian_poly(4, vec![(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            rayleigh_boundary(&u, &SPEC),
            Err(Error::DegenerateDenominator)
        ));
    }

    #[test]
    fn ritz_history_is_monotone_and_starts_at_gaussian() {
        for n in [3u32, 4] {
            let est = estimate_mu1(n, 6, &SPEC).unwrap();
            assert_eq!(est.basis_size, 6);
            assert_eq!(est.history.len(), 6);
            let gaussian_bound =
                rayleigh_boundary(&TestFunction::gaussian(n).unwrap(), &SPEC).unwrap();
            assert!(
                (est.history[0].1 - gaussian_bound).abs() < 1e-8 * gaussian_bound,
                "size-1 Ritz value {} vs direct quotient {}",
                est.history[0].1,
                gaussian_bound
            );
            for pair in est.history.windows(2) {
                assert!(
                    pair[1].1 <= pair[0].1 * (1.0 + 1e-9),
                    "history not nonincreasing at N = {n}: {:?}",
                    est.history
                );
            }
            assert_eq!(est.value, est.history.last().unwrap().1);
        }
    }

    #[test]
    fn mu1_estimate_converges_in_dimension_four() {
        let est = estimate_mu1(4, 8, &SPEC).unwrap();
        let last = est.history[est.history.len() - 1].1;
        let prev = est.history[est.history.len() - 2].1;
        assert!(
            (prev - last).abs() < 1e-3 * last,
            "history tail not settled: {prev} vs {last}"
        );
        assert!(est.value > 0.0);
    }

    #[test]
    fn duplicate_elements_make_the_gram_ill_conditioned() {
        let g = TestFunction::gaussian(4).unwrap();
        let result = ritz_history(4, &[g.clone(), g], &SPEC);
        assert!(matches!(result, Err(Error::IllConditionedGram { .. })));
    }

    #[test]
    fn hardy_gaussian_ratio_is_exact() {
        for n in 3..=8u32 {
            let g = TestFunction::gaussian(n).unwrap();
            let check = hardy_check(&g, &TIGHT).unwrap();
            assert!(check.holds);
            let want = (n as f64 + 2.0) / n as f64;
            let ratio = check.rhs / check.lhs;
            assert!(
                (ratio - want).abs() < 1e-6 * want,
                "N = {n}: ratio {ratio} vs {want}"
            );
        }
    }

    #[test]
    fn hardy_holds_on_randomized_suite() {
        let suite = hardy_suite(20260815).unwrap();
        assert_eq!(suite.len(), 30);
        for u in &suite {
            let check = hardy_check(u, &SPEC).unwrap();
            assert!(
                check.holds,
                "Hardy failed: lhs {} rhs {}",
                check.lhs, check.rhs
            );
        }
    }

    #[test]
    fn hardy_zero_function_is_degenerate_equality() {
        let zero = TestFunction::gaussian_poly(5, vec![(0, 0, 0.0)]).unwrap();
        let check = hardy_check(&zero, &SPEC).unwrap();
        assert_eq!(check.lhs, 0.0);
        assert_eq!(check.rhs, 0.0);
        assert!(check.holds);
    }
}
