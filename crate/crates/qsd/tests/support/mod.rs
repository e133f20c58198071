//! Shared helpers for the integration tests.
//!
//! The spectral routines here are written from scratch on purpose: the
//! library diagonalizes through its own backend, so agreement between the
//! two is evidence rather than circularity. Random inputs always come from
//! a seeded generator so every failure reproduces exactly.
#![allow(dead_code)] // each test binary pulls in a different subset

use num_complex::Complex64;
use qsd::linalg::CMatrix;
use qsd::operator::{DensityMatrix, Ensemble, Povm};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi diagonalization of Hermitian matrices.
// ---------------------------------------------------------------------------

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi sweeps.
///
/// Each rotation first phases the (p, q) entry real, then applies the
/// classic symmetric Schur rotation that zeroes it. Quadratic convergence
/// makes 60 sweeps far more than enough for the sizes used in tests.
pub fn jacobi_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix required");
    // Work on the Hermitian average so tiny asymmetries cannot feed back.
    let mut m = CMatrix::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
        }
    }
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)].norm())
        .fold(0.0f64, f64::max)
        .max(1.0);

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = m[(p, q)];
                let b = beta.norm();
                if b <= 1e-300 {
                    continue;
                }
                // Phase column q (and conjugate row q) so m[p][q] becomes
                // the positive real number b.
                let phase = beta / b;
                for r in 0..n {
                    m[(r, q)] *= phase.conj();
                }
                for s in 0..n {
                    m[(q, s)] *= phase;
                }
                // Real rotation choosing the smaller angle root of
                // t^2 + 2 tau t - 1 = 0.
                let alpha = m[(p, p)].re;
                let gamma = m[(q, q)].re;
                let tau = (gamma - alpha) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                for r in 0..n {
                    let mp = m[(r, p)];
                    let mq = m[(r, q)];
                    m[(r, p)] = mp * cs - mq * sn;
                    m[(r, q)] = mp * sn + mq * cs;
                }
                for s in 0..n {
                    let mp = m[(p, s)];
                    let mq = m[(q, s)];
                    m[(p, s)] = mp * cs - mq * sn;
                    m[(q, s)] = mp * sn + mq * cs;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

/// Sum of absolute eigenvalues: the trace norm of a Hermitian matrix.
pub fn trace_norm_oracle(a: &CMatrix) -> f64 {
    jacobi_eigenvalues(a).iter().map(|l| l.abs()).sum()
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eig_oracle(a: &CMatrix) -> f64 {
    jacobi_eigenvalues(a)[0]
}

/// Two-state guessing probability straight from the definition:
/// 1/2 (1 + ||q0 rho0 - q1 rho1||_1), trace norm by Jacobi.
pub fn helstrom_oracle(ensemble: &Ensemble) -> f64 {
    assert_eq!(ensemble.n(), 2, "two states required");
    let x = ensemble.state(0).matrix().mapv(|z| z * ensemble.prior(0))
        - ensemble.state(1).matrix().mapv(|z| z * ensemble.prior(1));
    0.5 * (1.0 + trace_norm_oracle(&x))
}

/// Trace distance between two states, trace norm by Jacobi.
pub fn trace_distance_oracle(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    0.5 * trace_norm_oracle(&(a.matrix() - b.matrix()))
}

/// Bob's reduced state of a bipartite pure vector, traced by hand.
pub fn reduced_b_oracle(psi: &[Complex64], da: usize, db: usize) -> CMatrix {
    assert_eq!(psi.len(), da * db, "vector length must be da*db");
    let mut rho = CMatrix::zeros((db, db));
    for i in 0..da {
        for j in 0..db {
            for jp in 0..db {
                rho[(j, jp)] += psi[i * db + j] * psi[i * db + jp].conj();
            }
        }
    }
    rho
}

// ---------------------------------------------------------------------------
// Seeded random inputs.
// ---------------------------------------------------------------------------

/// Standard complex Gaussian via Box-Muller.
pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (-2.0 * u.ln()).sqrt();
    c(r * v.cos(), r * v.sin())
}

/// Haar-ish random unit vector: normalized Gaussian components.
pub fn rand_unit_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn rand_pure(rng: &mut ChaCha8Rng, d: usize) -> DensityMatrix {
    DensityMatrix::from_pure(&rand_unit_vector(rng, d)).expect("unit vector")
}

/// Full-rank random state: G G^dagger normalized (Ginibre construction).
pub fn rand_mixed(rng: &mut ChaCha8Rng, d: usize) -> DensityMatrix {
    let g = CMatrix::from_shape_fn((d, d), |_| gaussian(rng));
    let mut rho = CMatrix::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            let mut s = c(0.0, 0.0);
            for k in 0..d {
                s += g[(i, k)] * g[(j, k)].conj();
            }
            rho[(i, j)] = s;
        }
    }
    let tr: f64 = (0..d).map(|i| rho[(i, i)].re).sum();
    DensityMatrix::new(rho.mapv(|z| z / tr)).expect("Ginibre state")
}

/// Random priors bounded away from zero, normalized to one.
pub fn rand_priors(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// Random two-state ensemble with random priors.
pub fn rand_pair(rng: &mut ChaCha8Rng, d: usize, mixed: bool) -> Ensemble {
    let make = |rng: &mut ChaCha8Rng| {
        if mixed {
            rand_mixed(rng, d)
        } else {
            rand_pure(rng, d)
        }
    };
    let states = vec![make(rng), make(rng)];
    Ensemble::new(rand_priors(rng, 2), states).expect("valid pair")
}

/// Random n-state ensemble of pure states with random priors.
pub fn rand_pure_ensemble(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Ensemble {
    let states = (0..n).map(|_| rand_pure(rng, d)).collect();
    Ensemble::new(rand_priors(rng, n), states).expect("valid ensemble")
}

/// Random n-state ensemble of full-rank states with random priors.
pub fn rand_mixed_ensemble(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Ensemble {
    let states = (0..n).map(|_| rand_mixed(rng, d)).collect();
    Ensemble::new(rand_priors(rng, n), states).expect("valid ensemble")
}

/// Haar-ish random unitary: Gram-Schmidt on Gaussian columns.
pub fn rand_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let ov: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= ov * ui;
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue; // essentially dependent draw; retry
        }
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        cols.push(v);
    }
    CMatrix::from_shape_fn((d, d), |(i, j)| cols[j][i])
}

/// Random complete projective measurement from unitary columns.
pub fn rand_projective(rng: &mut ChaCha8Rng, d: usize) -> Povm {
    let u = rand_unitary(rng, d);
    let elements: Vec<CMatrix> = (0..d)
        .map(|k| CMatrix::from_shape_fn((d, d), |(i, j)| u[(i, k)] * u[(j, k)].conj()))
        .collect();
    Povm::new(elements).expect("projective measurement")
}

/// Random non-projective two-outcome measurement: a scaled Ginibre blob
/// and its complement. The trace bound keeps the blob below the identity.
pub fn rand_two_outcome(rng: &mut ChaCha8Rng, d: usize) -> Povm {
    let blob = rand_mixed(rng, d); // PSD with trace one, eigenvalues <= 1
    let alpha = rng.gen_range(0.2..1.0);
    let m0 = blob.matrix().mapv(|z| z * alpha);
    let m1 = qsd::linalg::identity(d) - &m0;
    Povm::new(vec![m0, m1]).expect("two-outcome measurement")
}
