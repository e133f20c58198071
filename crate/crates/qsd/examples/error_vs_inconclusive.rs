//! Trading errors for silence: allow the measurement to answer
//! "inconclusive" with a fixed probability Q and watch the conditional
//! error on the remaining runs fall, interpolating from minimum-error
//! discrimination at Q = 0 toward unambiguous discrimination.
//!
//! Run with: cargo run --example error_vs_inconclusive

use qsd::families;
use qsd::minerror::helstrom_two_state;
use qsd::strategies::{error_vs_inconclusive_curve, usd_two_pure};

fn main() -> qsd::Result<()> {
    let pair = families::zero_plus_pair();

    // Reference points at the two ends of the trade-off.
    let me = helstrom_two_state(&pair)?;
    println!("minimum-error reference: error = {:.15}", 1.0 - me.p_guess);
    let usd = usd_two_pure(&pair)?;
    println!(
        "unambiguous reference:   inconclusive = {:.15}, error = 0",
        usd.inconclusive_probability
    );
    println!();

    let rates: Vec<f64> = (0..=13).map(|k| 0.05 * k as f64).collect();
    let curve = error_vs_inconclusive_curve(&pair, &rates, 11)?;

    println!(
        "{:>6}  {:>22}  {:>22}",
        "Q", "success | conclusive", "error | conclusive"
    );
    for point in &curve {
        println!(
            "{:>6.2}  {:>22.15}  {:>22.15}",
            point.inconclusive, point.success_given_conclusive, point.error_given_conclusive
        );
    }
    println!();

    // The curve starts at the minimum-error value and its error falls
    // monotonically; near Q = |<0|+>| ~ 0.707 it approaches zero, the
    // unambiguous regime.
    let first = &curve[0];
    println!(
        "at Q = 0: success = {:.15} (minimum-error p_guess = {:.15})",
        first.success_given_conclusive, me.p_guess
    );
    let last = curve.last().expect("curve has points");
    println!(
        "at Q = {:.2}: error = {:.3e}",
        last.inconclusive, last.error_given_conclusive
    );

    Ok(())
}
