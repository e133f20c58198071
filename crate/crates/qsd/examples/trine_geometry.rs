//! The trine: three equatorial qubit states at 120 degrees. The square-root
//! measurement is exactly optimal here, and the qubit solver exposes the
//! geometry behind that fact: the smallest ball enclosing the three dual
//! balls sits at the origin.
//!
//! Run with: cargo run --example trine_geometry

use qsd::families;
use qsd::minerror::{check_optimality, solve_fixed_point, square_root_measurement, SolveOptions};
use qsd::qubit::solve_qubit;

fn main() -> qsd::Result<()> {
    let trine = families::equatorial_trine();

    // Iterative route: certified fixed-point solver.
    let result = solve_fixed_point(&trine, &SolveOptions::default())?;
    println!("trine minimum-error discrimination");
    println!("  p_guess  = {:.15}  (2/3 = {:.15})", result.p_guess, 2.0 / 3.0);
    println!("  iterations {}, certificate passed: {}", result.iterations, result.certificate.passed);
    println!();

    // The square-root measurement alone already passes the optimality
    // check, no iteration needed.
    let srm = square_root_measurement(&trine)?;
    let cert = check_optimality(&trine, &srm)?;
    println!("square-root measurement certificate: passed = {}", cert.passed);
    println!("  worst residual {:.3e}", cert.worst_residual());
    println!();

    // Geometric route: each state becomes a ball of radius q_i around
    // q_i * (its Bloch vector); the guessing probability is the radius of
    // the smallest ball enclosing them all.
    let sol = solve_qubit(&trine)?;
    println!("enclosing-ball geometry:");
    println!(
        "  center ({:+.3e}, {:+.3e}, {:+.3e})",
        sol.ball.center.x, sol.ball.center.y, sol.ball.center.z
    );
    println!("  radius {:.15}", sol.ball.radius);
    println!("  active constraints: {:?}", sol.ball.active);
    println!("  fallback used: {}", sol.used_fallback);
    println!();

    // Each measurement element points along its state; weights close the
    // identity.
    println!("measurement elements (trace = weight):");
    for (i, m) in sol.povm.elements().iter().enumerate() {
        let trace: f64 = (0..2).map(|k| m[(k, k)].re).sum();
        println!("  element {i}: trace {:.12}", trace);
    }

    Ok(())
}
