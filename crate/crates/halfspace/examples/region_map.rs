//! Classify a (lambda, mu) parameter grid into existence, nonexistence,
//! and uncertified regions, and show the three-breakpoint pattern on the
//! mu = 0 axis.
//!
//! Every verdict cites the clause that produced it, and the classifier
//! refuses (with an error) any point where an existence and a
//! nonexistence clause would both fire, so a completed grid is itself a
//! soundness certificate. The `mu_1` input is an honest bracket: the
//! Rayleigh-Ritz value certifies only the upper end, which the
//! nonexistence clause uses; the existence clause needs a positive lower
//! end and stays silent without one.

use halfspace::region::{existence_edge, grid_rows, Mu1Bracket, Verdict};
use halfspace::spectral::estimate_mu1;
use halfspace::{QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    let (n, a, q) = (4u32, 1u8, 2.5f64);

    let upper = estimate_mu1(n, 6, &spec)?.value;
    let bracket = Mu1Bracket::from_upper(upper)?;
    let edge = existence_edge(n, a, &spec)?;
    println!("N = {n}, a = {a}, q = {q}: mu_1 <= {upper:.6}, existence edge {edge:.6}");

    let rows = grid_rows(n, a, q, (0.0, 2.0), (-0.25, 0.5), 21, 4, &bracket, edge)?;

    // Character map over the grid, one row per mu (top = largest mu).
    let glyph = |v: Verdict| match v {
        Verdict::ExistsPositive => '+',
        Verdict::NoPositive => '-',
        Verdict::Unknown => '.',
    };
    println!("\nmap ('+' exists, '-' none, '.' unknown), lambda left to right:");
    for mu_idx in (0..4).rev() {
        let mu = rows[mu_idx].mu;
        let line: String = (0..21)
            .map(|i| glyph(rows[i * 4 + mu_idx].verdict))
            .collect();
        println!("  mu = {mu:>5.2}: {line}");
    }

    println!("\nmu = 0 axis transitions:");
    let mut last = None;
    for row in rows.iter().filter(|r| r.mu == 0.0) {
        if last != Some(row.verdict) {
            println!(
                "  lambda = {:>4}: {} ({})",
                row.lambda,
                row.verdict.label(),
                row.clause
            );
            last = Some(row.verdict);
        }
    }
    Ok(())
}
