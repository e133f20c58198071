//! Application-layer checks: witness tables against pairwise oracles,
//! exclusion duality, unitary geometry, steering and no-signaling, and the
//! information-theoretic inequalities.

mod support;

use num_complex::Complex64;
use qsd::applications::{
    dimension_witness, discriminate_unitaries, dual_weight_sum, holevo_chi, min_entropy,
    mutual_information, mutual_information_of, no_ancilla_search, nosignaling_decomposition,
    pairwise_helstrom_table, pbr_ensemble, quantum_bound, solve_exclusion, steering_ensemble,
    unitary_repetition_n, ExclusionOptions,
};
use qsd::families;
use qsd::linalg;
use qsd::minerror::{helstrom_two_state, solve_fixed_point, SolveOptions};
use qsd::operator::{DensityMatrix, Ensemble, Povm};
use qsd::Error;
use rand::Rng;
use support::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// Dimension witness
// ---------------------------------------------------------------------------

#[test]
fn witness_tables_respect_the_qubit_ceiling() {
    let mut r = rng(51);
    for _ in 0..40 {
        let n = r.gen_range(3..=5);
        let states: Vec<DensityMatrix> = (0..n).map(|_| rand_pure(&mut r, 2)).collect();
        let table = pairwise_helstrom_table(&states).expect("table");
        let w = dimension_witness(n, &table).expect("witness");
        let q2 = quantum_bound(n, 2);
        assert!(
            w.witness <= q2 + 1e-9,
            "qubit data beat the d=2 ceiling: {} vs {q2}",
            w.witness
        );
        // Each pair's click gap is that pair's trace distance: the Helstrom
        // measurement attains it, and the Jacobi oracle checks it.
        let mut clicks = std::collections::BTreeMap::new();
        for &(x, xp, p) in &table {
            clicks.insert((x, xp), p);
        }
        for x in 0..n {
            for xp in 0..x {
                let gap = (clicks[&(x, xp)] - clicks[&(xp, x)]).abs();
                let d = trace_distance_oracle(&states[x], &states[xp]);
                assert!((gap - d).abs() < 1e-9, "pair ({x},{xp}): {gap} vs {d}");
            }
        }
    }
}

#[test]
fn witness_certifies_dimension_from_clean_data() {
    // Four orthogonal preparations in d=4: every pair perfectly told apart,
    // saturating Q_4 and certifying dimension 4.
    let n = 4;
    let mut entries = Vec::new();
    for x in 0..n {
        for xp in 0..x {
            entries.push((x, xp, 1.0));
            entries.push((xp, x, 0.0));
        }
    }
    let w = dimension_witness(n, &entries).expect("witness");
    assert!((w.witness - quantum_bound(n, n)).abs() < 1e-12);
    assert_eq!(w.certified_min_dimension, Some(4));

    // The bound ladder is strictly increasing until it saturates at N.
    for d in 1..n {
        assert!(quantum_bound(n, d) < quantum_bound(n, d + 1) + 1e-12);
    }
    assert_eq!(quantum_bound(n, n), quantum_bound(n, n + 3));
}

#[test]
fn witness_rejects_incomplete_tables() {
    let entries = vec![(1usize, 0usize, 0.9f64)];
    match dimension_witness(3, &entries) {
        Err(Error::MissingPairs { missing }) => {
            assert!(missing.contains(&(2, 0)) && missing.contains(&(2, 1)));
        }
        other => panic!("expected MissingPairs, got {other:?}"),
    }
}

// ---------------------------------------------------------------------------
// State exclusion
// ---------------------------------------------------------------------------

#[test]
fn exclusion_of_orthogonal_states_is_free() {
    let zero = DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let one = DensityMatrix::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let e = Ensemble::equal_priors(vec![zero, one]).unwrap();
    let r = solve_exclusion(&e, &ExclusionOptions::default()).expect("exclusion");
    assert!(r.converged);
    assert!(r.value.abs() < 1e-9, "orthogonal pair not excluded: {}", r.value);
}

#[test]
fn exclusion_value_is_bounded_and_certified() {
    let mut r = rng(52);
    for _ in 0..8 {
        let e = rand_pure_ensemble(&mut r, 3, 2);
        let x = solve_exclusion(&e, &ExclusionOptions::default()).expect("exclusion");
        assert!(x.value >= -1e-12 && x.value <= 1.0 + 1e-12);
        if x.converged {
            assert!(x.dual_gap <= ExclusionOptions::default().cert_tol + 1e-12);
        }
        // Feasibility: the POVM's expected self-click matches the value.
        let mut self_click = 0.0;
        for i in 0..e.n() {
            self_click +=
                e.prior(i) * linalg::re_trace_prod(x.povm.element(i), e.state(i).matrix());
        }
        assert!((self_click - x.value).abs() < 1e-9);
    }
}

#[test]
fn pbr_pairs_get_harder_as_the_overlap_grows() {
    // Larger theta widens |psi_1> away from |0>, making the product states
    // easier to exclude; the exclusion value must fall monotonically.
    let mut last = f64::INFINITY;
    for theta in [0.2f64, 0.4, 0.6, std::f64::consts::FRAC_PI_4] {
        let e = pbr_ensemble(theta, 2, 64).expect("pbr");
        assert_eq!(e.n(), 4);
        let x = solve_exclusion(&e, &ExclusionOptions::default()).expect("exclusion");
        assert!(
            x.value <= last + 1e-9,
            "value rose at theta {theta}: {} after {last}",
            x.value
        );
        last = x.value;
    }
    assert!(last < 1e-6, "critical angle not perfectly excluded: {last}");
}

#[test]
fn single_state_exclusion_is_hopeless() {
    let e = Ensemble::equal_priors(vec![rand_pure(&mut rng(53), 2)]).unwrap();
    let x = solve_exclusion(&e, &ExclusionOptions::default()).expect("exclusion");
    assert_eq!(x.value, 1.0);
}

// ---------------------------------------------------------------------------
// Unitary discrimination
// ---------------------------------------------------------------------------

#[test]
fn unitary_geometry_is_self_consistent() {
    let mut r = rng(54);
    for d in [2usize, 3, 4] {
        for _ in 0..10 {
            let u1 = rand_unitary(&mut r, d);
            let u2 = rand_unitary(&mut r, d);
            let res = discriminate_unitaries(&u1, &u2).expect("pair");
            assert_eq!(res.eigenphases.len(), d);
            assert!(res.hull_distance >= -1e-12 && res.hull_distance <= 1.0 + 1e-12);
            let u = 2.0 * (1.0 - res.hull_distance * res.hull_distance).sqrt();
            assert!((res.distinguishability - u).abs() < 1e-9);
            assert!((res.p_guess - 0.5 * (1.0 + u / 2.0)).abs() < 1e-12);
            assert_eq!(res.perfect, res.hull_distance < 1e-9);
            // The reported optimal input attains the reported overlap.
            let w = linalg::dagger(&u1).dot(&u2);
            let mut ov = c(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    ov += res.optimal_input[i].conj() * w[(i, j)] * res.optimal_input[j];
                }
            }
            assert!(
                (ov.norm() - res.hull_distance).abs() < 1e-7,
                "input overlap {} vs hull distance {}",
                ov.norm(),
                res.hull_distance
            );
        }
    }
}

#[test]
fn entangled_inputs_never_lose_to_product_inputs() {
    let mut r = rng(55);
    for _ in 0..12 {
        let u1 = rand_unitary(&mut r, 2);
        let u2 = rand_unitary(&mut r, 2);
        let res = discriminate_unitaries(&u1, &u2).expect("pair");
        let plain = no_ancilla_search(&u1, &u2, 16).expect("search");
        // Smaller overlap means better discrimination; the hull minimum
        // is achievable without ancilla for a pair, so the search should
        // approach it from above.
        assert!(plain >= res.hull_distance - 1e-6);
    }
}

#[test]
fn repetition_counts_follow_the_arc_rule() {
    let id = linalg::identity(2);
    for (phase, want) in [(std::f64::consts::PI / 7.0, 7usize), (1.0, 4), (2.5, 2)] {
        let g = families::phase_gate(phase);
        let n = unitary_repetition_n(&id, &g, 64).expect("repetition");
        assert_eq!(n, want, "phase {phase}");
    }
}

// ---------------------------------------------------------------------------
// Steering, no-signaling, min-entropy
// ---------------------------------------------------------------------------

#[test]
fn steering_cannot_signal() {
    let mut r = rng(56);
    for (da, db) in [(2usize, 2usize), (2, 3)] {
        for _ in 0..8 {
            let psi = rand_unit_vector(&mut r, da * db);
            let shared = DensityMatrix::from_pure(&psi).expect("pure");
            let povm_a = rand_two_outcome(&mut r, da);
            let povm_b = rand_two_outcome(&mut r, da);

            let ens_a = steering_ensemble(&shared, (da, db), &povm_a).expect("steer a");
            let ens_b = steering_ensemble(&shared, (da, db), &povm_b).expect("steer b");

            // Bob's average state is measurement-independent and equals
            // the reduced state computed by hand.
            let avg_a = ens_a.average();
            let avg_b = ens_b.average();
            assert!(linalg::max_abs_diff(avg_a.matrix(), avg_b.matrix()) < 1e-10);
            let reduced = reduced_b_oracle(&psi, da, db);
            assert!(linalg::max_abs_diff(avg_a.matrix(), &reduced) < 1e-10);

            let total: f64 = (0..ens_a.n()).map(|i| ens_a.prior(i)).sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn steering_requires_a_pure_shared_state() {
    let mixed = DensityMatrix::maximally_mixed(4);
    let alice = rand_two_outcome(&mut rng(57), 2);
    match steering_ensemble(&mixed, (2, 2), &alice) {
        Err(Error::NotPure { .. }) => {}
        other => panic!("expected NotPure, got {other:?}"),
    }
}

#[test]
fn dual_weights_saturate_no_signaling() {
    let mut r = rng(58);
    for _ in 0..15 {
        let e = rand_pure_ensemble(&mut r, 3, 2);
        let solved = solve_fixed_point(&e, &SolveOptions::default()).expect("solve");
        if !solved.converged {
            continue;
        }
        let ns = nosignaling_decomposition(&e, &solved).expect("decomposition");
        assert!(
            (ns.saturation - 1.0).abs() < 1e-6,
            "saturation {}",
            ns.saturation
        );
        assert!(ns.reconstruction_residual < 1e-6);
        for &p in &ns.p_values {
            assert!((-1e-9..=1.0 + 1e-9).contains(&p));
        }
        let sum = dual_weight_sum(&e, &solved).expect("weight sum");
        assert!((sum * solved.p_guess - 1.0).abs() < 1e-6);
    }
}

#[test]
fn min_entropy_is_the_log_of_the_guess() {
    let mut r = rng(59);
    for _ in 0..10 {
        let e = rand_pure_ensemble(&mut r, 3, 2);
        let rep = min_entropy(&e).expect("min entropy");
        assert!(rep.h_min_bits >= 0.0);
        assert!((2f64.powf(-rep.h_min_bits) - rep.p_guess).abs() < 1e-9);
    }
    // Certain guesses carry exactly zero bits, never a negative zero.
    let zero = DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let one = DensityMatrix::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let e = Ensemble::equal_priors(vec![zero, one]).unwrap();
    let rep = min_entropy(&e).expect("orthogonal");
    assert_eq!(rep.h_min_bits.to_bits(), 0.0f64.to_bits());
}

// ---------------------------------------------------------------------------
// Mutual information and the Holevo quantity
// ---------------------------------------------------------------------------

#[test]
fn measured_information_never_beats_holevo() {
    let mut r = rng(60);
    for _ in 0..20 {
        let e = rand_pure_ensemble(&mut r, 3, 2);
        let chi = holevo_chi(&e).expect("chi");
        assert!(chi >= -1e-12);
        assert!(chi <= 1.0 + 1e-9, "qubit chi above one bit: {chi}");
        let povm = rand_projective(&mut r, 2);
        let info = mutual_information_of(&e, &povm).expect("info");
        assert!(info >= -1e-12);
        assert!(info <= chi + 1e-9, "I = {info} above chi = {chi}");
    }
}

#[test]
fn mutual_information_is_symmetric_and_zero_for_products() {
    let mut r = rng(61);
    for _ in 0..10 {
        let rows = 3;
        let cols = 4;
        let mut joint = ndarray::Array2::<f64>::zeros((rows, cols));
        let mut total = 0.0;
        for x in 0..rows {
            for y in 0..cols {
                let v: f64 = r.gen_range(0.0..1.0);
                joint[[x, y]] = v;
                total += v;
            }
        }
        joint.mapv_inplace(|v| v / total);
        let i_xy = mutual_information(&joint).expect("info");
        let i_yx = mutual_information(&joint.t().to_owned()).expect("info transposed");
        assert!((i_xy - i_yx).abs() < 1e-12);
        assert!(i_xy >= 0.0);
    }

    // A product table carries nothing.
    let p = [0.2f64, 0.8];
    let q = [0.1f64, 0.4, 0.5];
    let mut joint = ndarray::Array2::<f64>::zeros((2, 3));
    for x in 0..2 {
        for y in 0..3 {
            joint[[x, y]] = p[x] * q[y];
        }
    }
    assert!(mutual_information(&joint).expect("product").abs() < 1e-12);
}

#[test]
fn orthogonal_ensembles_reach_their_full_bit() {
    let zero = DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let one = DensityMatrix::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let e = Ensemble::equal_priors(vec![zero.clone(), one.clone()]).unwrap();
    let chi = holevo_chi(&e).expect("chi");
    assert!((chi - 1.0).abs() < 1e-12);
    let z_basis = Povm::new(vec![
        zero.matrix().clone(),
        one.matrix().clone(),
    ])
    .unwrap();
    let info = mutual_information_of(&e, &z_basis).expect("info");
    assert!((info - 1.0).abs() < 1e-12);
}

#[test]
fn helstrom_measurement_on_the_trine_extracts_a_third_of_a_bit() {
    let trine = families::equatorial_trine();
    let solved = solve_fixed_point(&trine, &SolveOptions::default()).expect("solve");
    let info = mutual_information_of(&trine, &solved.povm).expect("info");
    // Known exact value for the symmetric trine with its min-error POVM.
    assert!((info - 1.0 / 3.0).abs() < 1e-9, "got {info}");
    let chi = holevo_chi(&trine).expect("chi");
    assert!((chi - 1.0).abs() < 1e-9);
    let h = helstrom_two_state(&families::zero_plus_pair()).expect("pair");
    assert!(h.p_guess > 0.85); // sanity anchor for the imports above
}
