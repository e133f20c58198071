//! Unambiguous discrimination: never guess wrong, at the price of an
//! inconclusive outcome. Feasible exactly when each state has support
//! outside the span of the others; for pure states, linear independence.
//!
//! Run with: cargo run --example unambiguous

use num_complex::Complex64;
use qsd::families;
use qsd::operator::{DensityMatrix, Ensemble};
use qsd::strategies::{usd_feasible, usd_reciprocal, usd_two_pure};

fn main() -> qsd::Result<()> {
    // Two pure states with overlap c = cos(pi/4). With equal priors the
    // optimal inconclusive rate is exactly c.
    let overlap = std::f64::consts::FRAC_PI_4.cos();
    let pair = families::symmetric_pure_pair(overlap)?;
    let r = usd_two_pure(&pair)?;
    println!("symmetric pair, overlap c = {overlap:.15}");
    println!("  success probability      {:.15}", r.success_probability);
    println!("  inconclusive probability {:.15}  (= c)", r.inconclusive_probability);
    println!("  per-state success        {:?}", r.per_state_success);
    println!();

    // Skewed priors push the optimum into a one-sided regime where only
    // the likelier state is ever identified.
    let skewed = Ensemble::new(
        vec![0.95, 0.05],
        families::symmetric_pure_pair(overlap)?.states().to_vec(),
    )?;
    let rs = usd_two_pure(&skewed)?;
    println!("same pair with priors (0.95, 0.05):");
    println!("  per-state success        {:?}", rs.per_state_success);
    println!("  inconclusive probability {:.15}", rs.inconclusive_probability);
    println!();

    // Three linearly independent states in d = 3, via the reciprocal-state
    // construction and a barrier solve for the conclusive weights.
    let s = 0.5f64.sqrt();
    let states = vec![
        DensityMatrix::from_pure(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])?,
        DensityMatrix::from_pure(&[
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
        ])?,
        DensityMatrix::from_pure(&[
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(s, 0.0),
        ])?,
    ];
    let triple = Ensemble::equal_priors(states)?;
    let rt = usd_reciprocal(&triple)?;
    println!("three independent states in d = 3:");
    println!("  success probability      {:.12}", rt.success_probability);
    println!("  inconclusive probability {:.12}", rt.inconclusive_probability);
    for (i, p) in rt.per_state_success.iter().enumerate() {
        println!("  state {i}: conclusive with probability {:.12}", p);
    }
    println!();

    // The trine is linearly dependent: three vectors in a plane. No state
    // can ever be identified without risk of error.
    let trine = families::equatorial_trine();
    println!("trine feasible for unambiguous discrimination: {}", usd_feasible(&trine)?);
    match usd_reciprocal(&trine) {
        Err(e) => println!("  solver refuses: {e}"),
        Ok(_) => println!("  unexpected success"),
    }

    Ok(())
}
