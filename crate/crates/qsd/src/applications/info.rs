//! Accessible information: mutual information of the input/outcome joint
//! distribution and the Holevo bound χ that caps it for every measurement.

use crate::error::{Error, Result};
use crate::operator::{shannon_bits, von_neumann_entropy, Ensemble, Povm};
use crate::strategies::joint_distribution;
use ndarray::Array2;

/// Mutual information I(X;Y) in bits of a joint distribution with rows
/// indexed by X and columns by Y. Entries must be nonnegative and sum to 1.
pub fn mutual_information(joint: &Array2<f64>) -> Result<f64> {
    let mut total = 0.0;
    for &p in joint.iter() {
        if !(p >= -1e-12) {
            return Err(Error::ValidationError {
                detail: format!("joint distribution has negative entry {p}"),
            });
        }
        total += p.max(0.0);
    }
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::ValidationError {
            detail: format!("joint distribution sums to {total}, expected 1"),
        });
    }
    let rows: Vec<f64> = joint
        .rows()
        .into_iter()
        .map(|r| r.iter().map(|&p| p.max(0.0)).sum())
        .collect();
    let cols: Vec<f64> = joint
        .columns()
        .into_iter()
        .map(|c| c.iter().map(|&p| p.max(0.0)).sum())
        .collect();
    // I = H(X) + H(Y) − H(X,Y) keeps every term a plain entropy.
    let flat: Vec<f64> = joint.iter().map(|&p| p.max(0.0)).collect();
    Ok((shannon_bits(&rows) + shannon_bits(&cols) - shannon_bits(&flat)).max(0.0))
}

/// Mutual information between the ensemble label and the outcome of a
/// specific measurement.
pub fn mutual_information_of(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    let joint = joint_distribution(ensemble, povm)?;
    mutual_information(&joint)
}

/// Holevo quantity χ = S(ρ̄) − Σ q_i S(ρ_i) in bits. Upper bound on the
/// mutual information extractable by any measurement on single copies.
pub fn holevo_chi(ensemble: &Ensemble) -> Result<f64> {
    let avg = ensemble.average();
    let mut chi = von_neumann_entropy(&avg)?;
    for i in 0..ensemble.n() {
        chi -= ensemble.prior(i) * von_neumann_entropy(ensemble.state(i))?;
    }
    Ok(chi.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::minerror::{solve_fixed_point, SolveOptions};
    use ndarray::array;

    #[test]
    fn perfect_correlation_gives_log_n() {
        let joint = array![[0.25, 0.0], [0.0, 0.75]];
        let i = mutual_information(&joint).unwrap();
        let expected = crate::operator::shannon_bits(&[0.25, 0.75]);
        assert!((i - expected).abs() < 1e-12);

        let uniform = array![[0.5, 0.0], [0.0, 0.5]];
        assert!((mutual_information(&uniform).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_distribution_carries_nothing() {
        let joint = array![[0.12, 0.28], [0.18, 0.42]];
        assert!(mutual_information(&joint).unwrap() < 1e-12);
    }

    #[test]
    fn unnormalized_table_is_rejected() {
        let joint = array![[0.5, 0.2], [0.1, 0.1]];
        assert!(mutual_information(&joint).is_err());
    }

    #[test]
    fn pure_state_ensembles_have_average_entropy_chi() {
        // Pure states carry zero entropy, so χ = S(ρ̄). For the trine,
        // ρ̄ = I/2 and χ = 1 bit exactly.
        let ens = families::equatorial_trine();
        let chi = holevo_chi(&ens).unwrap();
        assert!((chi - 1.0).abs() < 1e-10, "chi = {chi}");
    }

    #[test]
    fn measured_information_stays_below_chi() {
        let ens = families::equatorial_trine();
        let chi = holevo_chi(&ens).unwrap();
        let r = solve_fixed_point(&ens, &SolveOptions::default()).unwrap();
        let i = mutual_information_of(&ens, &r.povm).unwrap();
        assert!(i <= chi + 1e-10, "I = {i}, chi = {chi}");
        assert!(i > 0.3);
    }

    #[test]
    fn orthogonal_pair_reaches_its_bound() {
        let zero = families::bloch_pure(0.0, 0.0);
        let one = families::bloch_pure(std::f64::consts::PI, 0.0);
        let ens = crate::operator::Ensemble::new(vec![0.5, 0.5], vec![zero, one]).unwrap();
        let chi = holevo_chi(&ens).unwrap();
        assert!((chi - 1.0).abs() < 1e-10);
        let r = crate::minerror::helstrom_two_state(&ens).unwrap();
        let i = mutual_information_of(&ens, &r.povm).unwrap();
        assert!((i - 1.0).abs() < 1e-9);
    }
}
