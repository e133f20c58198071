//! Validated quantum objects and the basic operations on them: density
//! matrices, ensembles, POVMs, Bloch geometry, spectral functions, entropies,
//! and Born-rule outcome tables.
//!
//! Validation repairs what is clearly roundoff (tiny Hermiticity asymmetry,
//! eigenvalues in [-τ_psd, 0), trace off by less than τ_tr) and rejects
//! anything larger, so objects that exist are exactly Hermitian, exactly PSD
//! and exactly normalized from the point of construction on.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tol;

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order and orthonormal, phase-canonical eigenvector columns.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub eigenvalues: Vec<f64>,
    /// Column k is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

/// A point in (or on) the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn minus(&self, other: &Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }
}

/// Unit-trace positive semidefinite operator.
///
/// Constructed through [`DensityMatrix::new`] (the validation entry point),
/// from amplitudes, or from a Bloch vector. The stored matrix is exactly
/// Hermitian with nonnegative spectrum and unit trace.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validate a candidate density matrix with the default tolerances.
    pub fn new(mat: CMatrix) -> Result<Self> {
        Self::with_tolerances(mat, tol::HERM, tol::PSD, tol::TRACE)
    }

    /// Validate with explicit tolerances for Hermiticity, positivity and
    /// trace. Violations within tolerance are repaired; larger ones error.
    pub fn with_tolerances(mat: CMatrix, herm: f64, psd: f64, trace: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if !linalg::all_finite(&mat) {
            return Err(Error::NonFinite);
        }
        let dev = linalg::hermiticity_deviation(&mat);
        if dev > herm {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let h = linalg::hermitize(&mat);
        let tr = linalg::trace(&h).re;
        if (tr - 1.0).abs() > trace {
            return Err(Error::TraceNotOne { trace: tr });
        }
        let (clipped, min_eig) = linalg::clip_negative_eigenvalues(&h)?;
        if min_eig < -psd {
            return Err(Error::NotPositive {
                min_eigenvalue: min_eig,
            });
        }
        let tr2 = linalg::trace(&clipped).re;
        let mat = clipped.mapv(|z| z / tr2);
        Ok(Self { mat })
    }

    /// Build the matrix of a structurally valid state without re-validating.
    /// Used for objects that are valid by construction (tensor powers,
    /// partial traces, convex mixtures of valid states).
    pub(crate) fn trusted(mat: CMatrix) -> Self {
        Self { mat }
    }

    /// Pure state from an amplitude vector; the vector is normalized first.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidOperator {
                reason: "pure-state amplitude vector is zero".into(),
            });
        }
        let v: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
        Ok(Self {
            mat: linalg::outer(&v, &v),
        })
    }

    /// Qubit state (I + v·σ)/2 from a Bloch vector with |v| ≤ 1.
    pub fn from_bloch(v: BlochVector) -> Result<Self> {
        let n = v.norm();
        if n > 1.0 + tol::PSD {
            return Err(Error::VectorOutsideBall { norm: n });
        }
        let clip = if n > 1.0 { 1.0 / n } else { 1.0 };
        let (x, y, z) = (v.x * clip, v.y * clip, v.z * clip);
        let c = Complex64::new;
        let mat = ndarray::array![
            [c(0.5 * (1.0 + z), 0.0), c(0.5 * x, -0.5 * y)],
            [c(0.5 * x, 0.5 * y), c(0.5 * (1.0 - z), 0.0)]
        ];
        Ok(Self { mat })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        let f = 1.0 / d as f64;
        Self {
            mat: linalg::identity(d).mapv(|z| z * f),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn purity(&self) -> f64 {
        linalg::re_trace_prod(&self.mat, &self.mat)
    }

    /// State vector of a pure state, with the canonical eigenvector phase.
    /// Fails with `NotPure` when the largest eigenvalue is not within 1e−9
    /// of one.
    pub fn pure_vector(&self) -> Result<Vec<Complex64>> {
        let (vals, vecs) = linalg::herm_eigen(&self.mat)?;
        if (vals[0] - 1.0).abs() > 1e-9 {
            return Err(Error::NotPure {
                purity: self.purity(),
            });
        }
        Ok((0..self.dim()).map(|i| vecs[[i, 0]]).collect())
    }

    /// Bloch vector (tr[ρσ_x], tr[ρσ_y], tr[ρσ_z]) of a qubit state.
    pub fn bloch(&self) -> Result<BlochVector> {
        if self.dim() != 2 {
            return Err(Error::WrongDimension {
                expected: 2,
                found: self.dim(),
            });
        }
        let m = &self.mat;
        let x = 2.0 * m[[0, 1]].re;
        let y = -2.0 * m[[0, 1]].im;
        let z = m[[0, 0]].re - m[[1, 1]].re;
        Ok(BlochVector::new(x, y, z))
    }
}

/// Validate a candidate density matrix. Alias for [`DensityMatrix::new`]
/// kept as a free function for discoverability.
pub fn validate_density(matrix: CMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(matrix)
}

/// A finite source: states ρ_i prepared with prior probabilities q_i.
#[derive(Debug, Clone)]
pub struct Ensemble {
    priors: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    pub fn new(priors: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::NotDistribution {
                reason: "ensemble is empty".into(),
            });
        }
        if priors.len() != states.len() {
            return Err(Error::WrongCount {
                expected: states.len(),
                found: priors.len(),
            });
        }
        let d = states[0].dim();
        for s in &states {
            if s.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: s.dim(),
                });
            }
        }
        let mut priors = priors;
        for q in priors.iter_mut() {
            if *q < -1e-12 {
                return Err(Error::NotDistribution {
                    reason: format!("negative prior {q}"),
                });
            }
            if *q < 0.0 {
                *q = 0.0;
            }
        }
        let sum: f64 = priors.iter().sum();
        if (sum - 1.0).abs() > tol::TRACE {
            return Err(Error::NotDistribution {
                reason: format!("priors sum to {sum}"),
            });
        }
        for q in priors.iter_mut() {
            *q /= sum;
        }
        Ok(Self { priors, states })
    }

    pub fn equal_priors(states: Vec<DensityMatrix>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::NotDistribution {
                reason: "ensemble is empty".into(),
            });
        }
        Self::new(vec![1.0 / n as f64; n], states)
    }

    pub fn n(&self) -> usize {
        self.states.len()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &DensityMatrix {
        &self.states[i]
    }

    pub fn prior(&self, i: usize) -> f64 {
        self.priors[i]
    }

    /// Average state ρ = Σ q_i ρ_i.
    pub fn average(&self) -> DensityMatrix {
        let d = self.dim();
        let mut m = linalg::zeros(d);
        for (q, s) in self.priors.iter().zip(&self.states) {
            m = m + s.matrix().mapv(|z| z * *q);
        }
        DensityMatrix::trusted(m)
    }

    /// Weighted states q_iρ_i as raw matrices, the solvers' working form.
    pub(crate) fn weighted(&self) -> Vec<CMatrix> {
        self.priors
            .iter()
            .zip(&self.states)
            .map(|(q, s)| s.matrix().mapv(|z| z * *q))
            .collect()
    }
}

/// Positive resolution of the identity: measurement with one element per
/// outcome. Zero elements are allowed.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<CMatrix>) -> Result<Self> {
        Self::with_tolerances(elements, tol::HERM, tol::PSD, tol::COMPLETENESS)
    }

    pub fn with_tolerances(
        elements: Vec<CMatrix>,
        herm: f64,
        psd: f64,
        completeness: f64,
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::WrongCount {
                expected: 1,
                found: 0,
            });
        }
        let d = elements[0].nrows();
        let mut cleaned = Vec::with_capacity(elements.len());
        let mut sum = linalg::zeros(d);
        for m in &elements {
            if !m.is_square() || m.nrows() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: m.nrows(),
                });
            }
            if !linalg::all_finite(m) {
                return Err(Error::NonFinite);
            }
            let dev = linalg::hermiticity_deviation(m);
            if dev > herm {
                return Err(Error::NotHermitian { deviation: dev });
            }
            let h = linalg::hermitize(m);
            let (clipped, min_eig) = linalg::clip_negative_eigenvalues(&h)?;
            if min_eig < -psd {
                return Err(Error::NotPositive {
                    min_eigenvalue: min_eig,
                });
            }
            sum = sum + &clipped;
            cleaned.push(clipped);
        }
        let dev = linalg::max_abs_diff(&sum, &linalg::identity(d));
        if dev > completeness {
            return Err(Error::IncompleteMeasurement { deviation: dev });
        }
        Ok(Self { elements: cleaned })
    }

    pub(crate) fn trusted(elements: Vec<CMatrix>) -> Self {
        Self { elements }
    }

    pub fn n_outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &CMatrix {
        &self.elements[k]
    }
}

/// Hermitian eigendecomposition with a verified reconstruction.
///
/// Checks Hermiticity within τ_herm, then verifies that the assembled
/// spectral decomposition reproduces the input within `reconstruction_tol`
/// (scaled by the spectral radius when that exceeds 1).
pub fn hermitian_eigensystem(h: &CMatrix, reconstruction_tol: f64) -> Result<Eigensystem> {
    let dev = linalg::hermiticity_deviation(h);
    if dev > tol::HERM {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let (eigenvalues, eigenvectors) = linalg::herm_eigen(h)?;
    let d = h.nrows();
    let mut rebuilt = linalg::zeros(d);
    for (k, &lam) in eigenvalues.iter().enumerate() {
        for i in 0..d {
            let vi = eigenvectors[[i, k]];
            for j in 0..d {
                rebuilt[[i, j]] += vi * eigenvectors[[j, k]].conj() * lam;
            }
        }
    }
    let scale = eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    let err = linalg::max_abs_diff(&rebuilt, &linalg::hermitize(h));
    if err > reconstruction_tol * scale {
        return Err(Error::NoConvergence {
            what: "eigensystem reconstruction",
            iterations: 0,
        });
    }
    Ok(Eigensystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Trace norm ‖A‖₁ = Σ|λ_i| of a Hermitian matrix.
pub fn trace_norm(a: &CMatrix) -> Result<f64> {
    let dev = linalg::hermiticity_deviation(a);
    if dev > tol::HERM {
        return Err(Error::NotHermitian { deviation: dev });
    }
    linalg::trace_norm_raw(a)
}

/// n-fold tensor power ρ^⊗n. The result dimension d^n must stay within `cap`.
pub fn tensor_power(rho: &DensityMatrix, n: usize, cap: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "tensor power n",
            value: 0.0,
        });
    }
    let d = rho.dim();
    let mut total = 1usize;
    for _ in 0..n {
        total = total.checked_mul(d).ok_or(Error::DimensionCapExceeded {
            required: usize::MAX,
            cap,
        })?;
        if total > cap {
            return Err(Error::DimensionCapExceeded {
                required: total,
                cap,
            });
        }
    }
    let mut out = rho.matrix().clone();
    for _ in 1..n {
        out = linalg::kron(&out, rho.matrix());
    }
    Ok(DensityMatrix::trusted(out))
}

/// Which tensor factor `partial_trace` keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Partial trace of a bipartite state over the factor not kept.
pub fn partial_trace(
    rho_ab: &DensityMatrix,
    dims: (usize, usize),
    keep: Side,
) -> Result<DensityMatrix> {
    let (da, db) = dims;
    if da * db != rho_ab.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho_ab.dim(),
            found: da * db,
        });
    }
    let out = linalg::partial_trace_raw(rho_ab.matrix(), da, db, keep == Side::A);
    Ok(DensityMatrix::trusted(out))
}

/// ρ^s on the support of ρ: kernel directions map to 0 for every exponent,
/// so negative powers are pseudo-inverses.
pub fn matrix_function_hermitian(rho: &DensityMatrix, exponent: f64) -> Result<CMatrix> {
    linalg::psd_power(rho.matrix(), exponent, tol::SUPPORT)
}

/// Von Neumann entropy −Σ λ log2 λ in bits, with 0·log 0 = 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let vals = linalg::herm_eigenvalues(rho.matrix())?;
    Ok(shannon_bits(&vals))
}

/// Shannon entropy in bits of a nonnegative vector (zeros contribute 0).
pub fn shannon_bits(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

/// Born-rule table p(k|i) = tr[M_k ρ_i]: row i is the outcome distribution
/// of state i. Entries are clipped to [0, 1].
pub fn outcome_distribution(ensemble: &Ensemble, povm: &Povm) -> Result<Array2<f64>> {
    if ensemble.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: ensemble.dim(),
            found: povm.dim(),
        });
    }
    let n = ensemble.n();
    let l = povm.n_outcomes();
    let mut table = Array2::zeros((n, l));
    for i in 0..n {
        for k in 0..l {
            let p = linalg::re_trace_prod(povm.element(k), ensemble.state(i).matrix());
            table[[i, k]] = p.clamp(0.0, 1.0);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn validate_accepts_maximally_mixed() {
        let m = linalg::identity(2).mapv(|z| z * 0.5);
        let rho = validate_density(m).unwrap();
        assert_eq!(rho.dim(), 2);
        assert!((rho.purity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn validate_rejects_negative_eigenvalue() {
        let m = ndarray::array![[c(1.2, 0.), c(0., 0.)], [c(0., 0.), c(-0.2, 0.)]];
        match validate_density(m) {
            Err(Error::NotPositive { .. }) => {}
            other => panic!("expected NotPositive, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_bad_trace() {
        let m = linalg::identity(2);
        assert!(matches!(
            validate_density(m),
            Err(Error::TraceNotOne { .. })
        ));
    }

    #[test]
    fn bloch_round_trip() {
        let v = BlochVector::new(0.3, -0.4, 0.5);
        let rho = DensityMatrix::from_bloch(v).unwrap();
        let back = rho.bloch().unwrap();
        assert!((back.x - v.x).abs() < 1e-12);
        assert!((back.y - v.y).abs() < 1e-12);
        assert!((back.z - v.z).abs() < 1e-12);
    }

    #[test]
    fn bloch_rejects_outside_ball() {
        let v = BlochVector::new(1.0, 0.5, 0.0);
        assert!(matches!(
            DensityMatrix::from_bloch(v),
            Err(Error::VectorOutsideBall { .. })
        ));
    }

    #[test]
    fn plus_state_has_unit_x() {
        let plus = DensityMatrix::from_pure(&[c(1., 0.), c(1., 0.)]).unwrap();
        let v = plus.bloch().unwrap();
        assert!((v.x - 1.0).abs() < 1e-12 && v.y.abs() < 1e-12 && v.z.abs() < 1e-12);
    }

    #[test]
    fn tensor_power_of_pure_zero() {
        let zero = DensityMatrix::from_pure(&[c(1., 0.), c(0., 0.)]).unwrap();
        let cubed = tensor_power(&zero, 3, 4096).unwrap();
        assert_eq!(cubed.dim(), 8);
        assert!((cubed.matrix()[[0, 0]].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tensor_power_cap_enforced() {
        let zero = DensityMatrix::from_pure(&[c(1., 0.), c(0., 0.)]).unwrap();
        assert!(matches!(
            tensor_power(&zero, 13, 4096),
            Err(Error::DimensionCapExceeded { .. })
        ));
    }

    #[test]
    fn entropy_endpoints() {
        let pure = DensityMatrix::from_pure(&[c(1., 0.), c(0., 0.)]).unwrap();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-12);
        let m = ndarray::array![[c(0.75, 0.), c(0., 0.)], [c(0., 0.), c(0.25, 0.)]];
        let rho = validate_density(m).unwrap();
        assert!((von_neumann_entropy(&rho).unwrap() - 0.8112781244591328).abs() < 1e-12);
    }

    #[test]
    fn outcome_rows_sum_to_one() {
        let zero = DensityMatrix::from_pure(&[c(1., 0.), c(0., 0.)]).unwrap();
        let plus = DensityMatrix::from_pure(&[c(1., 0.), c(1., 0.)]).unwrap();
        let ens = Ensemble::equal_priors(vec![zero, plus]).unwrap();
        let basis = Povm::new(vec![
            linalg::outer(&[c(1., 0.), c(0., 0.)], &[c(1., 0.), c(0., 0.)]),
            linalg::outer(&[c(0., 0.), c(1., 0.)], &[c(0., 0.), c(1., 0.)]),
        ])
        .unwrap();
        let t = outcome_distribution(&ens, &basis).unwrap();
        assert!((t[[0, 0]] - 1.0).abs() < 1e-12 && t[[0, 1]].abs() < 1e-12);
        assert!((t[[1, 0]] - 0.5).abs() < 1e-12 && (t[[1, 1]] - 0.5).abs() < 1e-12);
    }
}
