//! Device-independent dimension witness from pairwise distinguishability.
//!
//! N preparations are probed pairwise: for each unordered pair {x, x'} one
//! binary measurement is performed on both preparations, and the witness
//! sums |p(1|x) − p(1|x')|² over pairs. Quantum systems of dimension d
//! cannot exceed Q_d = (N²/2)(1 − 1/min(d, N)), so a measured value
//! certifies a lower bound on the dimension.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::minerror::helstrom_two_state;
use crate::operator::{DensityMatrix, Ensemble};
use crate::tol;

/// Witness value with the quantum bounds it was compared against.
#[derive(Debug, Clone, serde::Serialize)]
pub struct WitnessResult {
    pub witness: f64,
    /// (d, Q_d) for d = 1..=N.
    pub bounds: Vec<(usize, f64)>,
    /// Smallest d with witness ≤ Q_d plus the certificate tolerance; None
    /// when the value exceeds every bound, which no quantum system of any
    /// dimension up to N can produce.
    pub certified_min_dimension: Option<usize>,
}

/// Q_d = (N²/2)(1 − 1/min(d, N)).
pub fn quantum_bound(n: usize, d: usize) -> f64 {
    let nn = n as f64;
    let m = d.min(n).max(1) as f64;
    (nn * nn / 2.0) * (1.0 - 1.0 / m)
}

/// Evaluate the witness from table entries (x, x', p) with 0-based
/// preparation indices: p is the probability of outcome 1 when preparation
/// x is measured with the setting assigned to the pair {x, x'}. Every
/// ordered entry for every pair x ≠ x' must be present exactly once.
pub fn dimension_witness(n: usize, entries: &[(usize, usize, f64)]) -> Result<WitnessResult> {
    if n < 2 {
        return Err(Error::WrongCount {
            expected: 2,
            found: n,
        });
    }
    let mut table: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(x, xp, p) in entries {
        if x >= n || xp >= n || x == xp {
            return Err(Error::ValidationError {
                detail: format!("entry ({x}, {xp}) is not a valid ordered pair for N = {n}"),
            });
        }
        if !(-1e-12..=1.0 + 1e-12).contains(&p) {
            return Err(Error::OutOfRange {
                what: "click probability",
                value: p,
            });
        }
        if table.insert((x, xp), p.clamp(0.0, 1.0)).is_some() {
            return Err(Error::ValidationError {
                detail: format!("duplicate entry for pair ({x}, {xp})"),
            });
        }
    }

    let mut missing = Vec::new();
    for x in 0..n {
        for xp in 0..n {
            if x != xp && !table.contains_key(&(x, xp)) {
                missing.push((x, xp));
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingPairs { missing });
    }

    let mut witness = 0.0f64;
    for x in 0..n {
        for xp in 0..x {
            let diff = table[&(x, xp)] - table[&(xp, x)];
            witness += diff * diff;
        }
    }

    let bounds: Vec<(usize, f64)> = (1..=n).map(|d| (d, quantum_bound(n, d))).collect();
    let certified = bounds
        .iter()
        .find(|(_, q)| witness <= q + tol::CERT)
        .map(|(d, _)| *d);
    Ok(WitnessResult {
        witness,
        bounds,
        certified_min_dimension: certified,
    })
}

/// Build the witness table for concrete states by measuring every pair with
/// its own equal-prior Helstrom measurement, whose first element defines
/// outcome 1. This measurement maximizes |p(1|x) − p(1|x')| for each pair,
/// so the resulting witness is the largest these states can reach.
pub fn pairwise_helstrom_table(states: &[DensityMatrix]) -> Result<Vec<(usize, usize, f64)>> {
    let n = states.len();
    if n < 2 {
        return Err(Error::WrongCount {
            expected: 2,
            found: n,
        });
    }
    let mut entries = Vec::with_capacity(n * (n - 1));
    for x in 0..n {
        for xp in 0..x {
            let pair = Ensemble::equal_priors(vec![states[x].clone(), states[xp].clone()])?;
            let r = helstrom_two_state(&pair)?;
            let m1 = r.povm.element(0);
            let px = crate::linalg::re_trace_prod(m1, states[x].matrix()).clamp(0.0, 1.0);
            let pxp = crate::linalg::re_trace_prod(m1, states[xp].matrix()).clamp(0.0, 1.0);
            entries.push((x, xp, px));
            entries.push((xp, x, pxp));
        }
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn bounds_match_published_row() {
        let expected = [12.25, 49.0 / 3.0, 18.375, 19.6, 20.416_666_666_666_668, 21.0];
        for (i, want) in expected.iter().enumerate() {
            let got = quantum_bound(7, i + 2);
            assert!((got - want).abs() < 1e-9, "d = {}: {} vs {}", i + 2, got, want);
        }
    }

    #[test]
    fn orthogonal_pair_saturates_qubit_bound() {
        let ens = families::symmetric_pure_pair(0.0).unwrap();
        let entries = pairwise_helstrom_table(ens.states()).unwrap();
        let r = dimension_witness(2, &entries).unwrap();
        assert!((r.witness - quantum_bound(2, 2)).abs() < 1e-9);
        assert_eq!(r.certified_min_dimension, Some(2));
    }

    #[test]
    fn identical_states_certify_dimension_one() {
        let rho = DensityMatrix::maximally_mixed(2);
        let entries = pairwise_helstrom_table(&[rho.clone(), rho]).unwrap();
        let r = dimension_witness(2, &entries).unwrap();
        assert!(r.witness.abs() < 1e-12);
        assert_eq!(r.certified_min_dimension, Some(1));
    }

    #[test]
    fn missing_ordering_is_rejected() {
        let entries = vec![(0usize, 1usize, 0.9)];
        let err = dimension_witness(2, &entries).unwrap_err();
        assert!(matches!(err, Error::MissingPairs { .. }));
    }

    #[test]
    fn saturating_table_needs_full_dimension() {
        // Every pair perfectly anti-correlated: the witness reaches the
        // number of pairs N(N−1)/2, which equals Q_N, so only d = N fits.
        let n = 3;
        let mut entries = Vec::new();
        for x in 0..n {
            for xp in 0..n {
                if x != xp {
                    entries.push((x, xp, if x > xp { 1.0 } else { 0.0 }));
                }
            }
        }
        let r = dimension_witness(n, &entries).unwrap();
        assert!((r.witness - 3.0).abs() < 1e-12);
        assert_eq!(r.certified_min_dimension, Some(3));
    }
}
