//! Maximum-confidence measurements: when unambiguous discrimination is
//! impossible, maximize P(state k | outcome k) per outcome instead. For
//! linearly dependent pure states the confidence stays below 1 but above
//! what minimum-error measurements offer.
//!
//! Run with: cargo run --example max_confidence

use qsd::families;
use qsd::minerror::{solve_fixed_point, SolveOptions};
use qsd::operator::{DensityMatrix, Ensemble};
use qsd::strategies::{confidence_of, max_confidence};

fn main() -> qsd::Result<()> {
    // Pure trine: every outcome reaches confidence 2/3, against a blind
    // 1/3, and one third of runs end inconclusive.
    let trine = families::equatorial_trine();
    let r = max_confidence(&trine)?;
    println!("pure trine:");
    for (k, c) in r.confidences.iter().enumerate() {
        println!("  outcome {k}: confidence {:.15} (degenerate top eigenvector: {})", c, r.degenerate[k]);
    }
    println!("  inconclusive probability {:.15}", r.inconclusive_probability);
    println!();

    // The minimum-error measurement answers every run, but its conditional
    // confidence per outcome is lower than the maximum achievable.
    let me = solve_fixed_point(&trine, &SolveOptions::default())?;
    println!("confidence of the minimum-error measurement on the trine:");
    for k in 0..3 {
        let c = confidence_of(&trine, me.povm.element(k), k)?;
        println!("  outcome {k}: confidence {:.15}", c);
    }
    println!();

    // Mixing noise into the states lowers the ceiling.
    println!("{:>6}  {:>20}  {:>22}", "eta", "confidence", "inconclusive prob");
    for k in 0..=5 {
        let eta = 1.0 - 0.1 * k as f64;
        let noisy: Vec<DensityMatrix> = trine
            .states()
            .iter()
            .map(|s| {
                let m = s.matrix().mapv(|z| z * eta)
                    + DensityMatrix::maximally_mixed(2).matrix().mapv(|z| z * (1.0 - eta));
                DensityMatrix::new(m)
            })
            .collect::<qsd::Result<_>>()?;
        let ens = Ensemble::equal_priors(noisy)?;
        let rn = max_confidence(&ens)?;
        println!(
            "{:>6.2}  {:>20.15}  {:>22.15}",
            eta, rn.confidences[0], rn.inconclusive_probability
        );
    }

    Ok(())
}
