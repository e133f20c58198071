//! Asymptotics of many-copy discrimination: the error of the best
//! collective measurement on n copies decays as exp(-xi n), where xi is
//! the quantum Chernoff exponent min_s -ln tr[rho^s sigma^(1-s)]. Measuring
//! copies one at a time decays strictly slower for generic mixed pairs.
//!
//! Run with: cargo run --example chernoff

use qsd::asymptotics::{chernoff_two_state, finite_n_error, repeated_measurement_error};
use qsd::families;
use qsd::minerror::helstrom_two_state;
use qsd::operator::{DensityMatrix, Ensemble};

fn main() -> qsd::Result<()> {
    // Pure states: Q(s) is flat, xi = -ln |<psi|phi>|^2. For |0> and |+>
    // that is exactly ln 2.
    let pair = families::zero_plus_pair();
    let pure = chernoff_two_state(pair.state(0), pair.state(1))?;
    println!("pure pair |0>, |+>:");
    println!("  xi    = {:.15}", pure.xi);
    println!("  ln 2  = {:.15}", std::f64::consts::LN_2);
    println!("  s*    = {:.6}", pure.s_star);
    println!();

    // A mixed pair: Q(s) now has a genuine interior minimum.
    let rho = mixed(0.0, 0.0, 0.9);
    let sigma = mixed(0.85, 0.0, -0.2);
    let mixed_result = chernoff_two_state(&rho, &sigma)?;
    println!("mixed pair:");
    println!("  xi = {:.15} at s* = {:.6}", mixed_result.xi, mixed_result.s_star);
    println!("  bracket warning: {}", mixed_result.bracket_warning);
    let ends = (mixed_result.curve[0].1, mixed_result.curve.last().unwrap().1);
    println!("  -ln Q at s=0: {:.6}, at s=1: {:.6} (interior minimum beats both)", ends.0, ends.1);
    println!();

    // Finite copies: exact collective error for n = 1..10 and the slope
    // fitted from the tail.
    let ensemble = Ensemble::equal_priors(vec![rho.clone(), sigma.clone()])?;
    let estimate = finite_n_error(&ensemble, 10, 4096)?;
    println!("{:>4}  {:>14}  {:>16}", "n", "error", "-ln(err)/n");
    for point in &estimate.points {
        println!("{:>4}  {:>14.6e}  {:>16.12}", point.copies, point.error, point.rate);
    }
    println!("fitted exponent {:.12} vs Chernoff xi {:.12}", estimate.fitted_exponent, mixed_result.xi);
    println!();

    // Same copies, but measured one at a time with the best single-copy
    // measurement and a majority-style classical decision: the decay rate
    // drops to the classical Chernoff exponent of the outcome statistics.
    let single = helstrom_two_state(&ensemble)?.povm;
    println!("{:>4}  {:>16}  {:>16}", "n", "collective err", "one-at-a-time err");
    for n in 1..=10 {
        let collective = estimate.points[n - 1].error;
        let local = repeated_measurement_error(&ensemble, &single, n)?;
        println!("{:>4}  {:>16.6e}  {:>16.6e}", n, collective, local);
    }

    Ok(())
}

fn mixed(x: f64, y: f64, z: f64) -> DensityMatrix {
    DensityMatrix::from_bloch(qsd::operator::BlochVector::new(x, y, z)).expect("inside ball")
}
