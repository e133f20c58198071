//! Geometrically uniform states: a cyclic-shift orbit of one seed vector.
//! The guessing probability has a closed form in the Fourier coefficients
//! of the seed, for any number of copies, and the square-root measurement
//! is optimal throughout.
//!
//! Run with: cargo run --example symmetric_states

use qsd::minerror::{gu_ensemble, gu_guessing_probability, solve_fixed_point, SolveOptions};

fn main() -> qsd::Result<()> {
    // Seed amplitudes over d = 3 basis states; the orbit under cyclic
    // shifts gives 3 equiprobable states.
    let coefficients = [0.7f64.sqrt(), 0.2f64.sqrt(), 0.1f64.sqrt()];
    println!("cyclic orbit of seed ({:.4}, {:.4}, {:.4})", coefficients[0], coefficients[1], coefficients[2]);
    println!();

    println!("{:>7}  {:>20}  {:>20}  {:>9}", "copies", "closed form", "iterative solver", "diff");
    for copies in 1..=3 {
        let closed = gu_guessing_probability(&coefficients, copies)?;
        let ensemble = gu_ensemble(&coefficients, copies, 4096)?;
        let solved = solve_fixed_point(&ensemble, &SolveOptions::default())?.require_converged()?;
        println!(
            "{:>7}  {:>20.15}  {:>20.15}  {:>9.2e}",
            copies,
            closed,
            solved.p_guess,
            (closed - solved.p_guess).abs()
        );
    }
    println!();

    // The symmetry operator multiplies amplitude n by the n-th root of
    // unity. A uniform seed therefore orbits through the Fourier basis,
    // orthogonal states, perfect discrimination; a basis seed is a fixed
    // point, so all N "states" coincide and guessing is blind.
    let uniform = [1.0 / 3.0f64.sqrt(); 3];
    println!(
        "uniform seed, 1 copy: p = {:.15} (Fourier orbit, orthogonal)",
        gu_guessing_probability(&uniform, 1)?
    );
    let basis = [1.0, 0.0, 0.0];
    println!(
        "basis seed, 1 copy:   p = {:.15} (orbit collapses, blind 1/3)",
        gu_guessing_probability(&basis, 1)?
    );
    println!();

    // More copies always help: the orbit states become more orthogonal.
    println!("{:>7}  {:>20}", "copies", "p_guess");
    for copies in 1..=6 {
        let p = gu_guessing_probability(&coefficients, copies)?;
        println!("{:>7}  {:>20.15}", copies, p);
    }

    Ok(())
}
