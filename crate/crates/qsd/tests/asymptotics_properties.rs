//! Chernoff exponents and finite-copy error decay: closed forms for pure
//! and commuting pairs, bound ordering, and collective-versus-individual
//! measurement comparisons.

mod support;

use num_complex::Complex64;
use qsd::asymptotics::{
    chernoff_classical, chernoff_multi, chernoff_two_state, finite_n_error,
    repeated_measurement_error, sandwich_check,
};
use qsd::families;
use qsd::minerror::helstrom_two_state;
use qsd::operator::{DensityMatrix, Ensemble};
use support::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn pure_pairs_have_log_overlap_exponent() {
    // For pure states rho^s = rho, so Q(s) = |<a|b>|^2 for every s and
    // xi = -2 ln |<a|b>|.
    let mut r = rng(41);
    for d in [2usize, 3] {
        for _ in 0..10 {
            let a = rand_unit_vector(&mut r, d);
            let b = rand_unit_vector(&mut r, d);
            let overlap: Complex64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
            let c2 = overlap.norm_sqr();
            if c2 < 1e-6 {
                continue; // effectively orthogonal draw: disjoint supports
            }
            let e = Ensemble::equal_priors(vec![
                DensityMatrix::from_pure(&a).unwrap(),
                DensityMatrix::from_pure(&b).unwrap(),
            ])
            .unwrap();
            let ch = chernoff_two_state(e.state(0), e.state(1)).expect("chernoff");
            assert!(!ch.disjoint_supports);
            assert!(
                (ch.xi + c2.ln()).abs() < 1e-8,
                "xi {} vs -ln overlap^2 {}",
                ch.xi,
                -c2.ln()
            );
        }
    }
}

#[test]
fn commuting_pairs_reduce_to_the_classical_exponent() {
    let mut r = rng(42);
    for _ in 0..10 {
        let d = 3;
        // Two diagonal states: spectra are classical distributions.
        let p: Vec<f64> = rand_priors(&mut r, d);
        let q: Vec<f64> = rand_priors(&mut r, d);
        let diag = |v: &[f64]| {
            let mut m = qsd::linalg::zeros(d);
            for i in 0..d {
                m[(i, i)] = c(v[i], 0.0);
            }
            DensityMatrix::new(m).unwrap()
        };
        let quantum = chernoff_two_state(&diag(&p), &diag(&q)).expect("quantum");
        let classical = chernoff_classical(&p, &q).expect("classical");
        assert!(
            (quantum.xi - classical.xi).abs() < 1e-10,
            "quantum {} vs classical {}",
            quantum.xi,
            classical.xi
        );
    }
}

#[test]
fn exponent_is_symmetric_under_swap() {
    let mut r = rng(43);
    for _ in 0..10 {
        let a = rand_mixed(&mut r, 2);
        let b = rand_mixed(&mut r, 2);
        let ab = chernoff_two_state(&a, &b).expect("ab");
        let ba = chernoff_two_state(&b, &a).expect("ba");
        assert!((ab.xi - ba.xi).abs() < 1e-8);
        // Minimizers mirror around 1/2.
        assert!((ab.s_star + ba.s_star - 1.0).abs() < 1e-4);
    }
}

#[test]
fn identical_and_disjoint_pairs_sit_at_the_ends() {
    let rho = rand_mixed(&mut rng(44), 2);
    let same = chernoff_two_state(&rho, &rho).expect("same");
    assert!(same.xi.abs() < 1e-10, "identical states cannot be told apart");

    let zero = DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let one = DensityMatrix::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let disj = chernoff_two_state(&zero, &one).expect("disjoint");
    assert!(disj.disjoint_supports);
    assert!(disj.xi.is_infinite());
}

#[test]
fn finite_copy_errors_decay_within_the_chernoff_envelope() {
    let mut r = rng(45);
    for _ in 0..5 {
        let e = rand_pair(&mut r, 2, true);
        let ch = chernoff_two_state(e.state(0), e.state(1)).expect("chernoff");
        let est = finite_n_error(&e, 8, 1024).expect("finite n");
        assert_eq!(est.points.len(), 8);
        for w in est.points.windows(2) {
            assert!(
                w[1].error <= w[0].error + 1e-12,
                "error rose from {} to {}",
                w[0].error,
                w[1].error
            );
        }
        // Upper bound: P_e(n) <= 1/2 exp(-n xi) for every n.
        for p in &est.points {
            let bound = 0.5 * (-(p.copies as f64) * ch.xi).exp();
            assert!(
                p.error <= bound + 1e-12,
                "n={}: error {} above the bound {bound}",
                p.copies,
                p.error
            );
        }
        assert!(est.fitted_exponent > 0.0);
    }
}

#[test]
fn collective_measurement_beats_measuring_one_at_a_time() {
    let pair = families::zero_plus_pair();
    let single = helstrom_two_state(&pair).expect("single").povm;
    let collective = finite_n_error(&pair, 6, 256).expect("collective");
    for n in 2..=6usize {
        let individual = repeated_measurement_error(&pair, &single, n).expect("individual");
        let joint = collective.points[n - 1].error;
        assert!(
            joint <= individual + 1e-12,
            "n={n}: collective {joint} vs individual {individual}"
        );
    }
    // At a single copy the two procedures are the same measurement.
    let individual = repeated_measurement_error(&pair, &single, 1).expect("one copy");
    assert!((individual - collective.points[0].error).abs() < 1e-12);
}

#[test]
fn sandwich_orders_the_multi_state_rates() {
    let trine = families::equatorial_trine();
    let rep = sandwich_check(&trine, 5, 1024).expect("sandwich");
    assert!(rep.lower_exponent <= rep.empirical_rate + 1e-9);
    // The empirical rate at finite n may still sit above the asymptotic
    // upper exponent, but the exponents themselves must be ordered.
    assert!(rep.lower_exponent <= rep.upper_exponent + 1e-12);

    let multi = chernoff_multi(trine.states()).expect("multi");
    // The multi-state exponent is the worst pair's exponent.
    let mut best = f64::INFINITY;
    let mut arg = (0, 0);
    for i in 0..3 {
        for j in (i + 1)..3 {
            let xi = chernoff_two_state(trine.state(i), trine.state(j))
                .expect("pair")
                .xi;
            if xi < best {
                best = xi;
                arg = (i, j);
            }
        }
    }
    assert!((multi.xi - best).abs() < 1e-10);
    assert_eq!(multi.pair, arg);
}

#[test]
fn interior_minimizer_for_asymmetric_mixed_pairs() {
    // A genuinely asymmetric mixed pair: s* lies strictly inside (0, 1)
    // and the curve evaluates above its minimum at both ends.
    let mut r = rng(46);
    for _ in 0..5 {
        let a = rand_mixed(&mut r, 2);
        let b = rand_mixed(&mut r, 2);
        let ch = chernoff_two_state(&a, &b).expect("chernoff");
        assert!(ch.s_star > 0.0 && ch.s_star < 1.0);
        let q_min = (-ch.xi).exp();
        for (_, q) in &ch.curve {
            assert!(*q >= q_min - 1e-9, "curve dips below its reported minimum");
        }
    }
}
