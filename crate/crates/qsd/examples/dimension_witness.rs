//! Certifying Hilbert-space dimension from measurement statistics alone.
//! N preparations, pairwise two-outcome measurements, and one number
//! W = sum over pairs of (p(1|x) - p(1|x'))^2 whose maximum Q_d depends on
//! the dimension d of the system that produced the table.
//!
//! Run with: cargo run --example dimension_witness

use qsd::applications::{dimension_witness, pairwise_helstrom_table, quantum_bound};
use qsd::families;

fn main() -> qsd::Result<()> {
    // Seven equatorial qubit states, evenly fanned. The best pairwise
    // discrimination table a qubit can produce saturates Q_2 exactly.
    let fan = families::equatorial_fan(7)?;
    let table = pairwise_helstrom_table(fan.states())?;
    let result = dimension_witness(7, &table)?;

    println!("witness from 7 equatorial qubit states: W = {:.12}", result.witness);
    println!();
    println!("{:>3}  {:>12}  {:>10}", "d", "Q_d", "W <= Q_d");
    for (d, bound) in &result.bounds {
        println!("{:>3}  {:>12.6}  {:>10}", d, bound, result.witness <= bound + 1e-7);
    }
    println!();
    println!(
        "certified minimum dimension: {:?} (the table rules out classical bits and any d = 1 model)",
        result.certified_min_dimension
    );
    println!();

    // The N = 7 bound row in closed form.
    let bounds: Vec<f64> = (2..=7).map(|d| quantum_bound(7, d)).collect();
    println!("Q_d row for N = 7, d = 2..7:");
    println!("  {:?}", bounds);
    println!("  expected: 12.25, 16.333..., 18.375, 19.6, 20.4166..., 21");
    println!();

    // A table with perfectly anti-correlated answers needs the full
    // dimension: W = N(N-1)/2 meets Q_N and nothing smaller.
    let n = 4;
    let mut perfect = Vec::new();
    for x in 0..n {
        for xp in 0..n {
            if x != xp {
                perfect.push((x, xp, if x < xp { 1.0 } else { 0.0 }));
            }
        }
    }
    let r = dimension_witness(n, &perfect)?;
    println!(
        "perfectly distinguishing table, N = {n}: W = {}, certified dimension {:?}",
        r.witness, r.certified_min_dimension
    );

    // Three states on a great circle at 120 degrees: the qubit optimum
    // stays below the qutrit bound, so the witness certifies d = 2 only.
    let trine_table = pairwise_helstrom_table(families::equatorial_trine().states())?;
    let rt = dimension_witness(3, &trine_table)?;
    println!(
        "trine table, N = 3: W = {:.12}, Q_2 = {:.12}, certified {:?}",
        rt.witness,
        quantum_bound(3, 2),
        rt.certified_min_dimension
    );

    Ok(())
}
