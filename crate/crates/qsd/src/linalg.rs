//! Dense complex linear algebra shared by every solver.
//!
//! Matrices are `ndarray` arrays of `Complex64`. Eigendecompositions go
//! through nalgebra's symmetric (Hermitian) solver, which is deterministic
//! for a fixed input: tridiagonalization by Householder reflections followed
//! by implicit QL, no randomized pivoting. On top of that this module fixes
//! a canonical eigenvector phase so repeated runs produce identical output.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = Array2<Complex64>;

pub fn identity(d: usize) -> CMatrix {
    Array2::eye(d)
}

pub fn zeros(d: usize) -> CMatrix {
    Array2::zeros((d, d))
}

/// Conjugate transpose.
pub fn dagger(a: &CMatrix) -> CMatrix {
    let (r, c) = a.dim();
    Array2::from_shape_fn((c, r), |(i, j)| a[[j, i]].conj())
}

/// Hermitian part (A + A†)/2.
pub fn hermitize(a: &CMatrix) -> CMatrix {
    let d = dagger(a);
    (a + &d).mapv(|z| z * 0.5)
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.diag().sum()
}

/// Largest entry-wise deviation from Hermitian symmetry.
pub fn hermiticity_deviation(a: &CMatrix) -> f64 {
    let (r, c) = a.dim();
    if r != c {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for i in 0..r {
        for j in 0..c {
            let dev = (a[[i, j]] - a[[j, i]].conj()).norm();
            worst = worst.max(dev);
        }
    }
    worst
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
}

pub fn all_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Kronecker product A ⊗ B.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for i1 in 0..ra {
        for j1 in 0..ca {
            let f = a[[i1, j1]];
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for i2 in 0..rb {
                for j2 in 0..cb {
                    out[[i1 * rb + i2, j1 * cb + j2]] = f * b[[i2, j2]];
                }
            }
        }
    }
    out
}

/// Outer product |u⟩⟨v|.
pub fn outer(u: &[Complex64], v: &[Complex64]) -> CMatrix {
    Array2::from_shape_fn((u.len(), v.len()), |(i, j)| u[i] * v[j].conj())
}

fn to_nalgebra(a: &CMatrix) -> nalgebra::DMatrix<Complex64> {
    let d = a.nrows();
    nalgebra::DMatrix::from_fn(d, d, |i, j| a[[i, j]])
}

/// Eigenvalues of a Hermitian matrix, descending. Values-only fast path.
pub fn herm_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if !all_finite(a) {
        return Err(Error::NonFinite);
    }
    let m = to_nalgebra(&hermitize(a));
    let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    Ok(vals)
}

/// Full Hermitian eigendecomposition: eigenvalues descending, orthonormal
/// eigenvector columns, each column phase-fixed so its largest-magnitude
/// entry is real and positive (first index wins ties). The phase rule makes
/// the decomposition reproducible across runs.
pub fn herm_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if !all_finite(a) {
        return Err(Error::NonFinite);
    }
    let d = a.nrows();
    let m = to_nalgebra(&hermitize(a));
    let eig = m
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or(Error::NoConvergence {
            what: "Hermitian eigendecomposition",
            iterations: 10_000,
        })?;

    let mut order: Vec<usize> = (0..d).collect();
    let vals = &eig.eigenvalues;
    order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).expect("finite eigenvalues"));

    let mut values = Vec::with_capacity(d);
    let mut vectors = Array2::zeros((d, d));
    for (col, &k) in order.iter().enumerate() {
        values.push(vals[k]);
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for i in 0..d {
            let mag = eig.eigenvectors[(i, k)].norm();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        let pivot = eig.eigenvectors[(best, k)];
        let phase = if best_mag > 0.0 {
            pivot.conj() / best_mag
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..d {
            vectors[[i, col]] = eig.eigenvectors[(i, k)] * phase;
        }
    }
    Ok((values, vectors))
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn spectral_map(a: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (vals, vecs) = herm_eigen(a)?;
    let d = a.nrows();
    let mut out = zeros(d);
    for (k, &lam) in vals.iter().enumerate() {
        let flam = f(lam);
        if flam == 0.0 {
            continue;
        }
        for i in 0..d {
            let vi = vecs[[i, k]];
            for j in 0..d {
                out[[i, j]] += vi * vecs[[j, k]].conj() * flam;
            }
        }
    }
    Ok(out)
}

/// Relative threshold below which an eigenvalue counts as kernel.
fn support_cut(vals: &[f64], rel_tol: f64) -> f64 {
    let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    rel_tol * top.max(1.0)
}

/// Fractional or negative power of a PSD matrix, acting on the support only:
/// eigenvalues at or below the support threshold map to 0 for every exponent,
/// so negative powers are pseudo-inverses.
pub fn psd_power(a: &CMatrix, exponent: f64, rel_support_tol: f64) -> Result<CMatrix> {
    let (vals, vecs) = herm_eigen(a)?;
    let cut = support_cut(&vals, rel_support_tol);
    let d = a.nrows();
    let mut out = zeros(d);
    for (k, &lam) in vals.iter().enumerate() {
        if lam <= cut {
            continue;
        }
        let flam = lam.powf(exponent);
        for i in 0..d {
            let vi = vecs[[i, k]];
            for j in 0..d {
                out[[i, j]] += vi * vecs[[j, k]].conj() * flam;
            }
        }
    }
    Ok(out)
}

/// Projector onto the support (strictly positive eigenspace) of a PSD matrix.
pub fn support_projector(a: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    psd_power(a, 0.0, rel_tol)
}

/// Trace norm Σ|λ| of a Hermitian matrix (values-only eigendecomposition).
pub fn trace_norm_raw(a: &CMatrix) -> Result<f64> {
    Ok(herm_eigenvalues(a)?.iter().map(|l| l.abs()).sum())
}

/// Largest singular value. For Hermitian input this equals max |λ|; the
/// general case goes through A†A.
pub fn operator_norm(a: &CMatrix) -> Result<f64> {
    let h = dagger(a).dot(a);
    let vals = herm_eigenvalues(&h)?;
    Ok(vals.first().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Re tr[A·B] computed entry-wise in O(d²), without forming the product.
pub fn re_trace_prod(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    let d = a.nrows();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..a.ncols() {
            let p = a[[i, j]] * b[[j, i]];
            s += p.re;
        }
    }
    s
}

/// tr[A·B] without forming the product.
pub fn trace_prod(a: &CMatrix, b: &CMatrix) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    let d = a.nrows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..a.ncols() {
            s += a[[i, j]] * b[[j, i]];
        }
    }
    s
}

/// Partial trace of a (dA·dB)×(dA·dB) matrix over one tensor factor.
pub fn partial_trace_raw(a: &CMatrix, da: usize, db: usize, keep_first: bool) -> CMatrix {
    debug_assert_eq!(a.nrows(), da * db);
    if keep_first {
        let mut out = zeros(da);
        for i in 0..da {
            for j in 0..da {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..db {
                    s += a[[i * db + k, j * db + k]];
                }
                out[[i, j]] = s;
            }
        }
        out
    } else {
        let mut out = zeros(db);
        for i in 0..db {
            for j in 0..db {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..da {
                    s += a[[k * db + i, k * db + j]];
                }
                out[[i, j]] = s;
            }
        }
        out
    }
}

/// Drop negative eigenvalues from a nearly-PSD Hermitian matrix. Returns the
/// repaired matrix and the most negative eigenvalue seen, so the caller can
/// decide whether the violation was roundoff or a real error.
pub fn clip_negative_eigenvalues(a: &CMatrix) -> Result<(CMatrix, f64)> {
    let (vals, vecs) = herm_eigen(a)?;
    let min_eig = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig >= 0.0 {
        return Ok((hermitize(a), min_eig));
    }
    let d = a.nrows();
    let mut out = zeros(d);
    for (k, &lam) in vals.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        for i in 0..d {
            let vi = vecs[[i, k]];
            for j in 0..d {
                out[[i, j]] += vi * vecs[[j, k]].conj() * lam;
            }
        }
    }
    Ok((out, min_eig))
}
