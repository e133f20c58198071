//! Discrimination of unitary channels. Everything reduces to the spectrum
//! of W = U₁†U₂: the reachable overlaps ⟨ψ|W|ψ⟩ fill the convex hull of the
//! eigenvalues on the unit circle (W is normal, so its numerical range is
//! that hull), ancillas included. The best input minimizes |⟨ψ|W|ψ⟩|, so
//! the figure of merit is the distance from the origin to the hull.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::optim::nelder_mead;

/// Result of optimally discriminating two unitaries applied with equal
/// priors to a single input.
#[derive(Debug, Clone)]
pub struct UnitaryResult {
    pub p_guess: f64,
    /// Trace-distance term u = 2√(1 − dist²) between the two output states
    /// at the optimal input; p_guess = (1 + u/2)/2.
    pub distinguishability: f64,
    /// Distance from the origin to the convex hull of the eigenvalues of
    /// U₁†U₂. Zero exactly when single-shot perfect discrimination exists.
    pub hull_distance: f64,
    pub perfect: bool,
    /// Input state attaining the optimum; no ancilla is ever needed for a
    /// pair of unitaries.
    pub optimal_input: Vec<Complex64>,
    /// Eigenphases of U₁†U₂, sorted ascending in (−π, π].
    pub eigenphases: Vec<f64>,
}

fn check_unitary(u: &CMatrix) -> Result<()> {
    let d = u.nrows();
    if d != u.ncols() {
        return Err(Error::NotSquare {
            rows: d,
            cols: u.ncols(),
        });
    }
    let gram = linalg::dagger(u).dot(u);
    let dev = linalg::max_abs_diff(&gram, &linalg::identity(d));
    if dev > 1e-9 {
        return Err(Error::NotUnitary { deviation: dev });
    }
    Ok(())
}

/// Eigenphases and eigenvectors of a unitary (or any normal) matrix via
/// joint diagonalization of its Hermitian and anti-Hermitian parts: the
/// eigenspaces of H = (W + W†)/2 are invariant under A = (W − W†)/2i, so
/// diagonalizing A block by block inside them yields a joint eigenbasis.
fn normal_eigensystem(w: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let d = w.nrows();
    let wd = linalg::dagger(w);
    let h = (w + &wd).mapv(|z| z * 0.5);
    let a = (w - &wd).mapv(|z| z * Complex64::new(0.0, -0.5));

    let (h_vals, h_vecs) = linalg::herm_eigen(&h)?;
    let mut basis = linalg::zeros(d);
    let mut col = 0usize;
    let mut start = 0usize;
    while start < d {
        let mut end = start + 1;
        while end < d && (h_vals[end] - h_vals[start]).abs() <= 1e-8 {
            end += 1;
        }
        let block = end - start;
        // Project A into the eigenspace and diagonalize the block.
        let mut a_block = linalg::zeros(block);
        for p in 0..block {
            for q in 0..block {
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..d {
                    for j in 0..d {
                        s += h_vecs[[i, start + p]].conj() * a[[i, j]] * h_vecs[[j, start + q]];
                    }
                }
                a_block[[p, q]] = s;
            }
        }
        let (_, b_vecs) = linalg::herm_eigen(&linalg::hermitize(&a_block))?;
        for q in 0..block {
            for i in 0..d {
                let mut s = Complex64::new(0.0, 0.0);
                for p in 0..block {
                    s += h_vecs[[i, start + p]] * b_vecs[[p, q]];
                }
                basis[[i, col + q]] = s;
            }
        }
        col += block;
        start = end;
    }

    // Phases from the diagonal of the rotated W; verify the reconstruction.
    let mut phases = Vec::with_capacity(d);
    for k in 0..d {
        let mut diag = Complex64::new(0.0, 0.0);
        for i in 0..d {
            let mut wv = Complex64::new(0.0, 0.0);
            for j in 0..d {
                wv += w[[i, j]] * basis[[j, k]];
            }
            diag += basis[[i, k]].conj() * wv;
        }
        phases.push(diag.im.atan2(diag.re));
    }
    let mut recon = linalg::zeros(d);
    for k in 0..d {
        let lam = Complex64::from_polar(1.0, phases[k]);
        for i in 0..d {
            for j in 0..d {
                recon[[i, j]] += basis[[i, k]] * lam * basis[[j, k]].conj();
            }
        }
    }
    if linalg::max_abs_diff(&recon, w) > 1e-7 {
        return Err(Error::NoConvergence {
            what: "joint diagonalization of a normal matrix",
            iterations: 0,
        });
    }
    Ok((phases, basis))
}

/// Eigenphases of U₁†U₂, ascending in (−π, π].
pub fn eigenphases(u1: &CMatrix, u2: &CMatrix) -> Result<Vec<f64>> {
    check_unitary(u1)?;
    check_unitary(u2)?;
    if u1.nrows() != u2.nrows() {
        return Err(Error::DimensionMismatch {
            expected: u1.nrows(),
            found: u2.nrows(),
        });
    }
    let w = linalg::dagger(u1).dot(u2);
    let (mut phases, _) = normal_eigensystem(&w)?;
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(phases)
}

/// Largest gap between consecutive phases around the circle.
fn max_cyclic_gap(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return 2.0 * std::f64::consts::PI;
    }
    let mut gap = 0.0f64;
    for i in 1..n {
        gap = gap.max(sorted[i] - sorted[i - 1]);
    }
    gap.max(sorted[0] + 2.0 * std::f64::consts::PI - sorted[n - 1])
}

/// Distance from the origin to the segment between two points.
fn segment_distance(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let ab = (b.0 - a.0, b.1 - a.1);
    let len2 = ab.0 * ab.0 + ab.1 * ab.1;
    if len2 < 1e-30 {
        return ((a.0 * a.0 + a.1 * a.1).sqrt(), 0.0);
    }
    let t = (-(a.0 * ab.0 + a.1 * ab.1) / len2).clamp(0.0, 1.0);
    let px = a.0 + t * ab.0;
    let py = a.1 + t * ab.1;
    ((px * px + py * py).sqrt(), t)
}

/// Equal-prior discrimination of two unitary channels with the optimal
/// input. The ancilla-assisted and plain strategies coincide for a pair of
/// unitaries because the numerical range of the normal operator U₁†U₂
/// already equals the convex hull of its spectrum, so the reported optimal
/// input lives in the bare input space.
pub fn discriminate_unitaries(u1: &CMatrix, u2: &CMatrix) -> Result<UnitaryResult> {
    check_unitary(u1)?;
    check_unitary(u2)?;
    if u1.nrows() != u2.nrows() {
        return Err(Error::DimensionMismatch {
            expected: u1.nrows(),
            found: u2.nrows(),
        });
    }
    let w = linalg::dagger(u1).dot(u2);
    let (raw_phases, basis) = normal_eigensystem(&w)?;
    let d = w.nrows();

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| raw_phases[i].partial_cmp(&raw_phases[j]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| raw_phases[i]).collect();
    let points: Vec<(f64, f64)> = sorted.iter().map(|&p| (p.cos(), p.sin())).collect();

    let gap = max_cyclic_gap(&sorted);
    let perfect = gap <= std::f64::consts::PI + 1e-9;

    // Closest point of the hull to the origin, with its supporting vertices
    // expressed as a convex combination.
    let (dist, support) = if perfect {
        (0.0, origin_combination(&sorted)?)
    } else {
        let mut best = (f64::INFINITY, 0usize, 0.0f64);
        // Points lie within a half-plane; the hull boundary facing the
        // origin is the polygon over consecutive sorted vertices plus the
        // closing edge.
        for i in 0..points.len() {
            let j = (i + 1) % points.len();
            let (dd, t) = segment_distance(points[i], points[j]);
            if dd < best.0 - 1e-15 {
                best = (dd, i, t);
            }
        }
        let (dd, i, t) = best;
        let j = (i + 1) % points.len();
        (dd, vec![(i, 1.0 - t), (j, t)])
    };

    // Input from the supporting combination: |ψ⟩ = Σ √λ_k |v_k⟩.
    let mut input = vec![Complex64::new(0.0, 0.0); d];
    for &(slot, weight) in &support {
        let col = order[slot];
        let amp = weight.max(0.0).sqrt();
        for i in 0..d {
            input[i] += basis[[i, col]] * amp;
        }
    }
    let norm = input.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut input {
        *z /= norm;
    }

    let u = 2.0 * (1.0 - dist * dist).max(0.0).sqrt();
    Ok(UnitaryResult {
        p_guess: (1.0 + u / 2.0) / 2.0,
        distinguishability: u,
        hull_distance: dist,
        perfect,
        optimal_input: input,
        eigenphases: sorted,
    })
}

/// Convex combination of eigenvalue points containing the origin: a pair if
/// some chord passes through it, otherwise a triangle found by scanning
/// index triples in order.
fn origin_combination(sorted: &[f64]) -> Result<Vec<(usize, f64)>> {
    let n = sorted.len();
    let pts: Vec<(f64, f64)> = sorted.iter().map(|&p| (p.cos(), p.sin())).collect();
    for i in 0..n {
        for j in i + 1..n {
            let (d, t) = segment_distance(pts[i], pts[j]);
            if d <= 1e-9 {
                return Ok(vec![(i, 1.0 - t), (j, t)]);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if let Some(bary) = barycentric_origin(pts[i], pts[j], pts[k]) {
                    return Ok(vec![(i, bary.0), (j, bary.1), (k, bary.2)]);
                }
            }
        }
    }
    Err(Error::NoConvergence {
        what: "origin-in-hull decomposition",
        iterations: 0,
    })
}

/// Barycentric coordinates of the origin inside a triangle, if they are all
/// nonnegative.
fn barycentric_origin(
    a: (f64, f64),
    b: (f64, f64),
    c: (f64, f64),
) -> Option<(f64, f64, f64)> {
    let det = (b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1);
    if det.abs() < 1e-14 {
        return None;
    }
    let l1 = ((b.0 - 0.0) * (c.1 - 0.0) - (c.0 - 0.0) * (b.1 - 0.0)) / det;
    let l2 = ((c.0 - 0.0) * (a.1 - 0.0) - (a.0 - 0.0) * (c.1 - 0.0)) / det;
    let l3 = 1.0 - l1 - l2;
    let eps = -1e-10;
    if l1 >= eps && l2 >= eps && l3 >= eps {
        Some((l1.max(0.0), l2.max(0.0), l3.max(0.0)))
    } else {
        None
    }
}

/// Direct numerical confirmation of the hull distance: minimize |⟨ψ|W|ψ⟩|
/// over input states by multi-start Nelder-Mead in a real embedding. The
/// starts follow a deterministic low-discrepancy sequence, so repeated runs
/// agree exactly.
pub fn no_ancilla_search(u1: &CMatrix, u2: &CMatrix, starts: usize) -> Result<f64> {
    check_unitary(u1)?;
    check_unitary(u2)?;
    let w = linalg::dagger(u1).dot(u2);
    let d = w.nrows();

    let overlap = |x: &[f64]| -> f64 {
        let mut psi = Vec::with_capacity(d);
        let mut norm2 = 0.0f64;
        for i in 0..d {
            let z = Complex64::new(x[2 * i], x[2 * i + 1]);
            norm2 += z.norm_sqr();
            psi.push(z);
        }
        if norm2 < 1e-18 {
            return f64::INFINITY;
        }
        let mut val = Complex64::new(0.0, 0.0);
        for i in 0..d {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..d {
                row += w[[i, j]] * psi[j];
            }
            val += psi[i].conj() * row;
        }
        val.norm() / norm2
    };

    // Weyl sequence over irrational multiples keeps the starts spread out
    // and reproducible.
    let alphas: Vec<f64> = (0..2 * d)
        .map(|j| (((j + 2) as f64).sqrt()).fract())
        .collect();
    let mut best = f64::INFINITY;
    for m in 0..starts.max(1) {
        let x0: Vec<f64> = (0..2 * d)
            .map(|j| 2.0 * (((m + 1) as f64) * alphas[j]).fract() - 1.0)
            .collect();
        let mut f = |x: &[f64]| overlap(x);
        let (_, v) = nelder_mead(&mut f, &x0, 0.3, 400);
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// Smallest number of uses of the unknown box after which the two unitaries
/// become perfectly distinguishable.
///
/// With n uses the relative eigenphases are sums of n single-use phases, so
/// they fill the single-use arc stretched n-fold; the origin enters their
/// convex hull exactly when that stretched arc reaches half the circle.
/// Equal-up-to-phase pairs have zero arc and no finite count works.
pub fn unitary_repetition_n(u1: &CMatrix, u2: &CMatrix, cap: usize) -> Result<usize> {
    let phases = eigenphases(u1, u2)?;
    let spread = 2.0 * std::f64::consts::PI - max_cyclic_gap(&phases);
    if spread < 1e-12 {
        return Err(Error::RepetitionNotFound { cap });
    }
    let n = (((std::f64::consts::PI - 1e-9) / spread).ceil() as usize).max(1);
    if n > cap {
        return Err(Error::RepetitionNotFound { cap });
    }
    Ok(n)
}
