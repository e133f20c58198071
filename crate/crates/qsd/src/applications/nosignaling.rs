//! No-signaling structure of optimal discrimination, steering-generated
//! ensembles, and min-entropy of the guess.
//!
//! At the optimum the dual operator K decomposes as
//! K/tr K = p_iρ_i + (1 − p_i)σ_i for every state, with p_i = q_i/tr K.
//! Each state therefore sits inside one and the same density operator with
//! its own weight, which is exactly the structure no-signaling forces on
//! remotely steered ensembles; the guessing probability saturates when
//! Σ p_i · p_guess = 1.

use crate::error::{Error, Result};
use crate::linalg;
use crate::minerror::DiscriminationResult;
use crate::operator::{DensityMatrix, Ensemble, Povm};

/// Decomposition data extracted from a certified result.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NoSignalingReport {
    /// p_i = q_i / tr K.
    pub p_values: Vec<f64>,
    /// Σ p_i · p_guess; equals 1 at the optimum.
    pub saturation: f64,
    /// max over reconstructed states of |K/tr K − p_iρ_i − (1−p_i)σ_i|.
    pub reconstruction_residual: f64,
}

/// Verify the no-signaling decomposition carried by an optimal result.
/// Fails with `CertificateFailed` when the result is not certified, since
/// the decomposition is only meaningful at the optimum.
pub fn nosignaling_decomposition(
    ensemble: &Ensemble,
    result: &DiscriminationResult,
) -> Result<NoSignalingReport> {
    if !result.certificate.passed {
        return Err(Error::CertificateFailed {
            worst_residual: result.certificate.worst_residual(),
            tolerance: result.certificate.tolerance,
        });
    }
    let tr_k = linalg::trace(&result.symmetry_operator).re;
    if tr_k <= 0.0 {
        return Err(Error::InvalidOperator {
            reason: "dual operator has nonpositive trace".into(),
        });
    }
    let normalized = result.symmetry_operator.mapv(|z| z / tr_k);
    let mut p_values = Vec::with_capacity(ensemble.n());
    let mut residual = 0.0f64;
    for i in 0..ensemble.n() {
        let p_i = ensemble.prior(i) / tr_k;
        p_values.push(p_i);
        if let Some(sigma) = &result.complementary_states[i] {
            let mut recon = ensemble.state(i).matrix().mapv(|z| z * p_i);
            recon = recon + sigma.matrix().mapv(|z| z * (1.0 - p_i));
            residual = residual.max(linalg::max_abs_diff(&normalized, &recon));
        }
    }
    let saturation = result.p_guess * p_values.iter().sum::<f64>();
    Ok(NoSignalingReport {
        p_values,
        saturation,
        reconstruction_residual: residual,
    })
}

/// Ensemble steered on side B by measuring side A of a pure bipartite state
/// with a two-outcome measurement: outcome i occurs with probability
/// p_i = tr[(M_i ⊗ I)ψ] and leaves tr_A[(M_i ⊗ I)ψ]/p_i with Bob.
pub fn steering_ensemble(
    shared: &DensityMatrix,
    dims: (usize, usize),
    alice: &Povm,
) -> Result<Ensemble> {
    let (da, db) = dims;
    if shared.dim() != da * db {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            found: shared.dim(),
        });
    }
    if alice.dim() != da {
        return Err(Error::DimensionMismatch {
            expected: da,
            found: alice.dim(),
        });
    }
    if alice.n_outcomes() != 2 {
        return Err(Error::WrongCount {
            expected: 2,
            found: alice.n_outcomes(),
        });
    }
    let purity = shared.purity();
    if purity < 1.0 - 1e-9 {
        return Err(Error::NotPure { purity });
    }

    let mut priors = Vec::with_capacity(2);
    let mut states = Vec::with_capacity(2);
    for i in 0..2 {
        let big = linalg::kron(alice.element(i), &linalg::identity(db));
        let selected = big.dot(shared.matrix());
        let p = linalg::trace(&selected).re.max(0.0);
        priors.push(p);
        if p <= 1e-14 {
            states.push(DensityMatrix::maximally_mixed(db));
            continue;
        }
        let reduced = linalg::partial_trace_raw(&linalg::hermitize(&selected), da, db, false);
        states.push(DensityMatrix::new(reduced.mapv(|z| z / p))?);
    }
    Ensemble::new(priors, states)
}

/// Min-entropy of the source given the measurement outcome, in bits:
/// H_min = −log₂ p_guess at the optimal measurement.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MinEntropyReport {
    pub p_guess: f64,
    pub h_min_bits: f64,
}

/// Certified guessing probability and its min-entropy. Solver failures
/// propagate as errors; the value is never reported from an uncertified
/// run.
pub fn min_entropy(ensemble: &Ensemble) -> Result<MinEntropyReport> {
    let p_guess = if ensemble.n() == 2 {
        let r = crate::minerror::helstrom_two_state(ensemble)?.require_converged()?;
        r.p_guess
    } else if ensemble.dim() == 2 {
        let sol = crate::qubit::solve_qubit(ensemble)?;
        if !sol.certificate.passed {
            return Err(Error::CertificateFailed {
                worst_residual: sol.certificate.worst_residual(),
                tolerance: sol.certificate.tolerance,
            });
        }
        sol.p_guess
    } else {
        let r = crate::minerror::solve_fixed_point(
            ensemble,
            &crate::minerror::SolveOptions::default(),
        )?
        .require_converged()?;
        r.p_guess
    };
    Ok(MinEntropyReport {
        p_guess,
        h_min_bits: (-p_guess.log2()).max(0.0),
    })
}

/// Identity check value Σ p_i for steering: the weights of the dual
/// decomposition sum to 1/p_guess.
pub fn dual_weight_sum(ensemble: &Ensemble, result: &DiscriminationResult) -> Result<f64> {
    let report = nosignaling_decomposition(ensemble, result)?;
    Ok(report.p_values.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::minerror::{solve_fixed_point, SolveOptions};
    use num_complex::Complex64;

    #[test]
    fn trine_decomposition_weights() {
        let ens = families::equatorial_trine();
        let r = solve_fixed_point(&ens, &SolveOptions::default()).unwrap();
        let rep = nosignaling_decomposition(&ens, &r).unwrap();
        for p in &rep.p_values {
            assert!((p - 0.5).abs() < 1e-8, "p = {p}");
        }
        assert!((rep.saturation - 1.0).abs() < 1e-8);
        assert!(rep.reconstruction_residual < 1e-7);
    }

    #[test]
    fn bell_state_steering_transposes_the_element() {
        // |Φ+⟩ = (|00⟩ + |11⟩)/√2; measuring M on A steers B to Mᵀ/2.
        let amp = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = vec![Complex64::new(0.0, 0.0); 4];
        psi[0] = Complex64::new(amp, 0.0);
        psi[3] = Complex64::new(amp, 0.0);
        let shared = DensityMatrix::from_pure(&psi).unwrap();

        let plus = families::bloch_pure(std::f64::consts::FRAC_PI_2, 0.0);
        let m0 = plus.matrix().clone();
        let m1 = linalg::identity(2) - &m0;
        let alice = Povm::new(vec![m0, m1]).unwrap();

        let steered = steering_ensemble(&shared, (2, 2), &alice).unwrap();
        assert!((steered.prior(0) - 0.5).abs() < 1e-12);
        // |+⟩⟨+| is real symmetric, so the steered state is |+⟩ again.
        let b = steered.state(0).bloch().unwrap();
        assert!((b.x - 1.0).abs() < 1e-9 && b.y.abs() < 1e-9 && b.z.abs() < 1e-9);
    }

    #[test]
    fn steering_rejects_mixed_shared_state() {
        let shared = DensityMatrix::maximally_mixed(4);
        let alice = Povm::new(vec![
            DensityMatrix::maximally_mixed(2).matrix().mapv(|z| z * 2.0),
            linalg::zeros(2),
        ])
        .unwrap();
        let err = steering_ensemble(&shared, (2, 2), &alice).unwrap_err();
        assert!(matches!(err, Error::NotPure { .. }));
    }

    #[test]
    fn min_entropy_of_zero_plus() {
        let ens = families::zero_plus_pair();
        let rep = min_entropy(&ens).unwrap();
        let p = 0.5 + std::f64::consts::SQRT_2 / 4.0;
        assert!((rep.p_guess - p).abs() < 1e-12);
        assert!((rep.h_min_bits + p.log2()).abs() < 1e-12);
        assert!((2.0f64.powf(-rep.h_min_bits) - rep.p_guess).abs() < 1e-12);
    }
}
