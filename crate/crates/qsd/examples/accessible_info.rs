//! How many bits a measurement extracts from an ensemble, and the Holevo
//! quantity chi that caps every measurement. The gap between the two is
//! generic: for the trine chi is a full bit, yet no single-copy
//! measurement reads out more than 0.585 bits.
//!
//! Run with: cargo run --example accessible_info

use qsd::applications::{holevo_chi, mutual_information_of};
use qsd::families;
use qsd::minerror::{solve_fixed_point, SolveOptions};
use qsd::operator::Povm;
use qsd::strategies::max_confidence;

fn main() -> qsd::Result<()> {
    let trine = families::equatorial_trine();

    let chi = holevo_chi(&trine)?;
    println!("trine Holevo bound: chi = {:.15} bits", chi);
    println!("(pure states, average = I/2, so chi = S(I/2) = 1 bit exactly)");
    println!();

    // Candidate measurements, all strictly below chi.
    let me = solve_fixed_point(&trine, &SolveOptions::default())?.require_converged()?;
    let i_me = mutual_information_of(&trine, &me.povm)?;
    println!("minimum-error measurement:      I = {:.15} bits", i_me);

    // The anti-trine: project onto the states orthogonal to each trine
    // member. Outcome k never fires for state k, which carries more
    // information than the error-minimizing choice.
    let anti: Vec<_> = [
        std::f64::consts::PI,
        std::f64::consts::PI / 3.0,
        -std::f64::consts::PI / 3.0,
    ]
    .iter()
    .map(|&phi| {
        families::bloch_pure(std::f64::consts::FRAC_PI_2, phi)
            .matrix()
            .mapv(|z| z * (2.0 / 3.0))
    })
    .collect();
    let anti_povm = Povm::new(anti)?;
    let i_anti = mutual_information_of(&trine, &anti_povm)?;
    println!("anti-trine measurement:         I = {:.15} bits", i_anti);
    println!("  (log2 3 - 1 = {:.15})", 3f64.log2() - 1.0);

    // The maximum-confidence measurement keeps an inconclusive outcome,
    // which costs information relative to the anti-trine.
    let mc = max_confidence(&trine)?;
    let i_mc = mutual_information_of(&trine, &mc.povm)?;
    println!("maximum-confidence measurement: I = {:.15} bits", i_mc);

    // A plain projective measurement along one trine member.
    let proj = {
        let p0 = trine.state(0).matrix().clone();
        let p1 = qsd::linalg::identity(2) - &p0;
        Povm::new(vec![p0, p1])?
    };
    let i_proj = mutual_information_of(&trine, &proj)?;
    println!("projective along state 0:       I = {:.15} bits", i_proj);
    println!();

    // Orthogonal states close the gap: measurement reads chi exactly.
    let ortho = families::symmetric_pure_pair(0.0)?;
    let chi_o = holevo_chi(&ortho)?;
    let r = qsd::minerror::helstrom_two_state(&ortho)?;
    let i_o = mutual_information_of(&ortho, &r.povm)?;
    println!("orthogonal pair: chi = {:.12}, measured I = {:.12}", chi_o, i_o);

    Ok(())
}
