//! Compute the bubble and trace-bubble constants for one dimension and
//! confirm the identities that tie them together.
//!
//! The interior bubble satisfies `K1 = K2 + K3` exactly (its energy splits
//! into the volume and boundary masses), the harmonic trace bubble
//! satisfies `A_N = (N-2) * boundary mass`, and the second-order trace
//! coefficients have independent Beta-function closed forms that must
//! agree with direct quadrature.

use halfspace::constants::{bubble_constants, expansion_coefficients, trace_constants, xi_n};
use halfspace::testfun::Exponents;
use halfspace::{QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    let n = 5;
    let exps = Exponents::new(n)?;

    let bubble = bubble_constants(n, &spec)?;
    println!("dimension N = {n}");
    println!("K1 = {:.9}  (weighted energy of the bubble)", bubble.k1);
    println!("K2 = {:.9}  (critical volume mass)", bubble.k2);
    println!("K3 = {:.9}  (critical boundary mass)", bubble.k3);
    let residual = (bubble.k1 - bubble.k2 - bubble.k3).abs() / bubble.k1;
    println!("identity K1 - K2 - K3 relative residual: {residual:.2e}");
    println!("mountain-pass target A = {:.9}", bubble.a);

    let trace = trace_constants(n, &spec)?;
    let mass = trace.b_n.powf(exps.two_lower / 2.0);
    println!(
        "\nA_N = {:.9}, B_N = {:.9}, S0 = {:.9}",
        trace.a_n, trace.b_n, trace.s0
    );
    println!(
        "harmonicity check A_N vs (N-2) * mass: {:.2e}",
        (trace.a_n - (n as f64 - 2.0) * mass).abs() / trace.a_n
    );

    let c = expansion_coefficients(n, &spec)?;
    for (name, route) in [
        ("alpha_hat", c.alpha_hat.unwrap()),
        ("d_hat", c.d_hat.unwrap()),
        ("gamma_hat", c.gamma_hat.unwrap()),
    ] {
        println!(
            "\n{name}: quadrature {:.10}, closed form {:.10}, gap {:.2e}",
            route.quadrature,
            route.closed_form,
            route.rel_gap()
        );
    }

    // The combination (alpha_hat + xi) / d_hat collapses to a rational
    // function of the dimension alone.
    let xi = xi_n(n, &spec)?;
    let lhs = (c.alpha_hat.unwrap().value() + xi) / c.d_hat.unwrap().value();
    let rhs = n as f64 / 4.0 + (n as f64 - 4.0) / 8.0;
    println!("\nxi_N = {xi:.9}");
    println!("(alpha_hat + xi) / d_hat = {lhs:.10} vs N/4 + (N-4)/8 = {rhs:.10}");
    Ok(())
}
