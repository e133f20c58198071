//! State exclusion: instead of naming the state, rule one out. Announcing
//! "not i" errs with probability q_i tr[M_i rho_i]; a task the PBR argument
//! needs to be performed perfectly on product states built from a
//! nonorthogonal pair.
//!
//! Run with: cargo run --example exclusion_pbr

use qsd::applications::{pbr_ensemble, solve_exclusion, ExclusionOptions};
use qsd::families;
use qsd::operator::Ensemble;

fn main() -> qsd::Result<()> {
    let options = ExclusionOptions::default();

    // Two copies of cos(theta/2)|0> +/- sin(theta/2)|1>, all four sign
    // patterns. At theta = pi/2 the pair overlap is cos(theta) = 0 and
    // exclusion is trivially perfect; the PBR construction makes it
    // perfect all the way down to theta = pi/4 with two copies.
    println!("{:>8}  {:>14}  {:>12}  {:>10}", "theta", "error value", "dual gap", "converged");
    for k in [2.0, 3.0, 3.5, 4.0, 5.0, 6.0] {
        let theta = std::f64::consts::PI / k;
        let ensemble = pbr_ensemble(theta, 2, 4096)?;
        let r = solve_exclusion(&ensemble, &options)?;
        println!(
            "{:>8.5}  {:>14.6e}  {:>12.3e}  {:>10}",
            theta, r.value, r.dual_gap, r.converged
        );
    }
    println!();
    println!("(theta = pi/4 = 0.78540 is the critical angle: perfect exclusion");
    println!(" of all four two-copy product states, single-copy overlap cos(pi/4))");
    println!();

    // The critical measurement in detail.
    let critical = pbr_ensemble(std::f64::consts::FRAC_PI_4, 2, 4096)?;
    let r = solve_exclusion(&critical, &options)?;
    println!("theta = pi/4, 2 factors:");
    println!("  exclusion error  {:.6e}", r.value);
    println!("  iterations       {}", r.iterations);
    for (i, m) in r.povm.elements().iter().enumerate() {
        let trace: f64 = (0..m.nrows()).map(|k| m[(k, k)].re).sum();
        println!("  element {i}: trace {:.9}", trace);
    }
    println!();

    // Single-copy comparison: one copy of the same pair admits no perfect
    // exclusion below theta = pi/2.
    let single = pbr_ensemble(std::f64::consts::FRAC_PI_4, 1, 4096)?;
    let r1 = solve_exclusion(&single, &options)?;
    println!("same angle, 1 factor: exclusion error {:.9} (strictly positive)", r1.value);
    println!();

    // Sanity anchors: orthogonal states exclude perfectly, and excluding
    // the only state in a one-state ensemble always errs.
    let ortho = solve_exclusion(&families::symmetric_pure_pair(0.0)?, &options)?;
    println!("orthogonal pair: exclusion error {:.3e}", ortho.value);
    let lone = Ensemble::new(vec![1.0], vec![families::bloch_pure(0.0, 0.0)])?;
    let r_lone = solve_exclusion(&lone, &options)?;
    println!("single state:    exclusion error {:.3}", r_lone.value);

    Ok(())
}
