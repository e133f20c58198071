//! Two-state minimum-error discrimination from the ground up: the optimal
//! guessing probability, the measurement that attains it, and the
//! certificate that proves no measurement does better.
//!
//! Run with: cargo run --example helstrom_basics

use qsd::families;
use qsd::minerror::{general_form_report, helstrom_two_state};
use qsd::operator::Ensemble;

fn main() -> qsd::Result<()> {
    // |0> against |+> with equal priors. The states overlap, so no
    // measurement can be right every time.
    let ensemble = families::zero_plus_pair();
    let result = helstrom_two_state(&ensemble)?;

    println!("discriminating |0> vs |+>, priors 1/2 each");
    println!("  p_guess = {:.15}", result.p_guess);
    println!("  closed form 1/2 + sqrt(2)/4 = {:.15}", 0.5 + f64::sqrt(2.0) / 4.0);
    println!();

    // The certificate checks the optimality conditions directly on the
    // returned measurement: a failed certificate would mean the value
    // cannot be trusted, regardless of how it was computed.
    let cert = &result.certificate;
    println!("optimality certificate (tolerance {:.1e}):", cert.tolerance);
    println!("  dual feasibility gap     {:.3e}", cert.dual_feasibility_gap);
    println!("  complementarity residual {:.3e}", cert.complementarity_residual);
    println!("  pairwise residual        {:.3e}", cert.pairwise_residual);
    println!("  primal-dual gap          {:.3e}", cert.primal_dual_gap);
    println!("  passed: {}", cert.passed);
    println!();

    // At the optimum every state decomposes against one shared operator;
    // the report condenses that structure into two numbers.
    let report = general_form_report(&result)?;
    println!("dual structure:");
    println!("  uniform term     {:.12}", report.uniform_term);
    println!("  average residual {:.12}", report.average_residual);
    println!();

    // Sweep the prior of |0>: the advantage over always guessing the more
    // likely state shrinks as the prior becomes lopsided.
    println!("{:>6}  {:>18}  {:>18}  {:>10}", "q", "p_guess", "best blind guess", "advantage");
    for k in 1..10 {
        let q = k as f64 / 10.0;
        let skewed = Ensemble::new(
            vec![q, 1.0 - q],
            vec![
                families::bloch_pure(0.0, 0.0),
                families::bloch_pure(std::f64::consts::FRAC_PI_2, 0.0),
            ],
        )?;
        let r = helstrom_two_state(&skewed)?;
        let blind = q.max(1.0 - q);
        println!(
            "{:>6.2}  {:>18.15}  {:>18.15}  {:>10.6}",
            q,
            r.p_guess,
            blind,
            r.p_guess - blind
        );
    }

    Ok(())
}
