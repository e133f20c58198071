//! Mirror-symmetric triple: |0> plus a pair tilted symmetrically about the
//! z-axis, with prior p on each tilted state. The optimal value has a
//! closed form with a kink: once p crosses a threshold, the optimal
//! measurement stops answering "apex" altogether and splits between the
//! tilted pair.
//!
//! Run with: cargo run --example mirror_symmetric

use qsd::families;
use qsd::minerror::{mirror_symmetric_guess, mirror_symmetric_threshold};
use qsd::qubit::solve_qubit;

fn main() -> qsd::Result<()> {
    let theta = std::f64::consts::FRAC_PI_4;
    let threshold = mirror_symmetric_threshold(theta);
    println!("tilt angle theta = pi/4");
    println!("threshold prior p* = {:.15}", threshold);
    println!();

    println!(
        "{:>6}  {:>18}  {:>18}  {:>9}  {:>8}",
        "p", "closed form", "qubit solver", "diff", "branch"
    );
    for k in 1..=9 {
        let p = 0.05 * k as f64;
        let closed = mirror_symmetric_guess(p, theta)?;
        let ensemble = families::mirror_symmetric_triple(theta, p)?;
        let solved = solve_qubit(&ensemble)?;
        let branch = if p >= threshold { "pair" } else { "apex" };
        println!(
            "{:>6.2}  {:>18.15}  {:>18.15}  {:>9.2e}  {:>8}",
            p,
            closed,
            solved.p_guess,
            (closed - solved.p_guess).abs(),
            branch
        );
    }
    println!();

    // At p = 0.4 the tilted pair dominates and the value is exactly
    // p (1 + sin 2 theta) = 0.8.
    let p = 0.4;
    let value = mirror_symmetric_guess(p, theta)?;
    println!("p = 0.4: p_guess = {value:.15} (exact 0.8)");

    // Right at the threshold both branch formulas agree; the optimum is
    // continuous even though the measurement changes rank.
    let at = mirror_symmetric_guess(threshold, theta)?;
    let just_below = mirror_symmetric_guess(threshold - 1e-9, theta)?;
    println!(
        "continuity at p*: |value(p*) - value(p* - 1e-9)| = {:.3e}",
        (at - just_below).abs()
    );
    println!("value at threshold = {at:.15}");

    Ok(())
}
