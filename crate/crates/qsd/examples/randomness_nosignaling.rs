//! Where guessing probability meets physics: the dual operator of optimal
//! discrimination decomposes each state with a universal weight, exactly
//! the structure no-signaling imposes on remotely steered ensembles, and
//! the optimal guess fixes the extractable min-entropy.
//!
//! Run with: cargo run --example randomness_nosignaling

use num_complex::Complex64;
use qsd::applications::{min_entropy, nosignaling_decomposition, steering_ensemble};
use qsd::families;
use qsd::linalg;
use qsd::minerror::{helstrom_two_state, solve_fixed_point, SolveOptions};
use qsd::operator::{DensityMatrix, Povm};

fn main() -> qsd::Result<()> {
    // Min-entropy of the measurement outcome: -log2 of the certified
    // guessing probability.
    let pair = families::zero_plus_pair();
    let report = min_entropy(&pair)?;
    println!("|0> vs |+>:");
    println!("  p_guess    = {:.15}", report.p_guess);
    println!("  H_min      = {:.15} bits", report.h_min_bits);
    println!("  identity 2^(-H_min) - p_guess = {:.3e}", 2f64.powf(-report.h_min_bits) - report.p_guess);
    println!();

    // The no-signaling decomposition behind the trine optimum: each state
    // enters the normalized dual operator with the same weight 1/2, and
    // the weights multiply the guessing probability back to 1.
    let trine = families::equatorial_trine();
    let solved = solve_fixed_point(&trine, &SolveOptions::default())?;
    let ns = nosignaling_decomposition(&trine, &solved)?;
    println!("trine dual decomposition:");
    println!("  weights p_i = {:?}", ns.p_values);
    println!("  sum p_i * p_guess = {:.15}", ns.saturation);
    println!("  reconstruction residual = {:.3e}", ns.reconstruction_residual);
    println!();

    // Steering: measuring one half of a Bell pair prepares states remotely.
    // Whatever Alice measures, Bob's average stays I/2; that is exactly
    // why the decomposition above must exist.
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi = vec![Complex64::new(0.0, 0.0); 4];
    psi[0] = Complex64::new(amp, 0.0);
    psi[3] = Complex64::new(amp, 0.0);
    let bell = DensityMatrix::from_pure(&psi)?;

    for (name, basis_state) in [
        ("z basis", families::bloch_pure(0.0, 0.0)),
        ("x basis", families::bloch_pure(std::f64::consts::FRAC_PI_2, 0.0)),
    ] {
        let m0 = basis_state.matrix().clone();
        let m1 = linalg::identity(2) - &m0;
        let alice = Povm::new(vec![m0, m1])?;
        let steered = steering_ensemble(&bell, (2, 2), &alice)?;
        let avg = steered.average();
        let b = avg.bloch()?;
        println!(
            "alice measures {name}: bob sees priors ({:.3}, {:.3}), average Bloch ({:+.2e}, {:+.2e}, {:+.2e})",
            steered.prior(0),
            steered.prior(1),
            b.x,
            b.y,
            b.z
        );
        let h = min_entropy(&steered)?;
        println!("  discriminating bob's steered pair: H_min = {:.12} bits", h.h_min_bits);
    }
    println!();

    // A partially entangled state steers to genuinely nonorthogonal pairs.
    // Bob's average still cannot depend on Alice's choice, but it is no
    // longer maximally mixed, and the x-basis pair costs Bob real guesswork.
    let alpha = std::f64::consts::FRAC_PI_8;
    let mut tilted = vec![Complex64::new(0.0, 0.0); 4];
    tilted[0] = Complex64::new(alpha.cos(), 0.0);
    tilted[3] = Complex64::new(alpha.sin(), 0.0);
    let partial = DensityMatrix::from_pure(&tilted)?;
    println!("cos(pi/8)|00> + sin(pi/8)|11>:");
    for (name, basis_state) in [
        ("z basis", families::bloch_pure(0.0, 0.0)),
        ("x basis", families::bloch_pure(std::f64::consts::FRAC_PI_2, 0.0)),
    ] {
        let m0 = basis_state.matrix().clone();
        let m1 = linalg::identity(2) - &m0;
        let alice = Povm::new(vec![m0, m1])?;
        let steered = steering_ensemble(&partial, (2, 2), &alice)?;
        let b = steered.average().bloch()?;
        let h = min_entropy(&steered)?;
        println!(
            "  {name}: bob average Bloch ({:+.6}, {:+.6}, {:+.6}), p_guess = {:.12}, H_min = {:.6} bits",
            b.x, b.y, b.z, h.p_guess, h.h_min_bits
        );
    }
    println!("  the averages match: alice's choice leaks nothing to bob");
    println!();

    // Orthogonal states carry no min-entropy at all: the guess is certain.
    let ortho = helstrom_two_state(&families::symmetric_pure_pair(0.0)?)?;
    println!("orthogonal pair: p_guess = {} (H_min = 0)", ortho.p_guess);

    Ok(())
}
