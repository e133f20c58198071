//! Discrimination strategies beyond plain minimum error: unambiguous
//! discrimination, maximum-confidence measurements, and measurements with a
//! fixed inconclusive rate.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::minerror::{solve_fixed_point, SolveOptions};
use crate::operator::{DensityMatrix, Ensemble, Povm};
use crate::optim::nelder_mead;
use crate::qubit::solve_qubit;
use crate::tol;

/// Unambiguous discrimination outcome. The POVM has one conclusive element
/// per state followed by the inconclusive element.
#[derive(Debug, Clone)]
pub struct UsdResult {
    pub povm: Povm,
    /// Total probability of a conclusive, necessarily correct, click.
    pub success_probability: f64,
    pub inconclusive_probability: f64,
    /// Conditional success tr[M_iρ_i] per state.
    pub per_state_success: Vec<f64>,
    pub converged: bool,
}

/// True when every state in the ensemble admits a nonzero conclusive
/// element: its support is not contained in the joint support of the other
/// states. For pure states this is exactly linear independence.
pub fn usd_feasible(ensemble: &Ensemble) -> Result<bool> {
    let n = ensemble.n();
    let d = ensemble.dim();
    for i in 0..n {
        let mut others = linalg::zeros(d);
        for j in 0..n {
            if j != i {
                others = others + ensemble.state(j).matrix();
            }
        }
        let p_others = linalg::support_projector(&others, tol::SUPPORT)?;
        let outside =
            ensemble.state(i).matrix() - &p_others.dot(ensemble.state(i).matrix()).dot(&p_others);
        if linalg::trace(&outside).re <= 1e-10 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Vector orthogonal to `b` inside span{a, b}, normalized; None when a and
/// b are parallel.
fn orth_in_span(a: &[Complex64], b: &[Complex64]) -> Option<Vec<Complex64>> {
    let inner: Complex64 = b.iter().zip(a).map(|(x, y)| x.conj() * y).sum();
    let mut v: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - inner * y).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return None;
    }
    for z in &mut v {
        *z /= norm;
    }
    Some(v)
}

/// Optimal unambiguous discrimination of two pure states with arbitrary
/// priors. In the two-sided regime c² ≤ min(q)/max(q) the conditional
/// success probabilities are p_i = 1 − √(q_j/q_i)·c and the failure
/// probability is 2√(q₁q₂)·c; outside it the optimum is the projective
/// measurement that identifies only the likelier state, succeeding with
/// probability q_max(1 − c²).
pub fn usd_two_pure(ensemble: &Ensemble) -> Result<UsdResult> {
    if ensemble.n() != 2 {
        return Err(Error::WrongCount {
            expected: 2,
            found: ensemble.n(),
        });
    }
    let psi1 = ensemble.state(0).pure_vector()?;
    let psi2 = ensemble.state(1).pure_vector()?;
    let d = ensemble.dim();
    let overlap: Complex64 = psi1.iter().zip(&psi2).map(|(a, b)| a.conj() * b).sum();
    let c = overlap.norm();
    if c >= 1.0 - 1e-12 {
        return Err(Error::Infeasible {
            reason: "states are identical up to phase".into(),
        });
    }
    let (q1, q2) = (ensemble.prior(0), ensemble.prior(1));
    let s2 = 1.0 - c * c;

    let two_sided = if c < 1e-15 {
        true
    } else {
        let qmin = q1.min(q2);
        let qmax = q1.max(q2);
        qmin > 0.0 && c * c <= qmin / qmax
    };

    let (p1, p2) = if two_sided {
        if c < 1e-15 {
            (1.0, 1.0)
        } else {
            ((1.0 - (q2 / q1).sqrt() * c), (1.0 - (q1 / q2).sqrt() * c))
        }
    } else if q1 >= q2 {
        (s2, 0.0)
    } else {
        (0.0, s2)
    };

    // Conclusive elements live in the 2D span and are proportional to the
    // projector orthogonal to the other state.
    let mut elements = Vec::with_capacity(3);
    let m1 = match orth_in_span(&psi1, &psi2) {
        Some(v) if p1 > 0.0 => scaled_projector(&v, p1 / s2, d),
        _ => linalg::zeros(d),
    };
    let m2 = match orth_in_span(&psi2, &psi1) {
        Some(v) if p2 > 0.0 => scaled_projector(&v, p2 / s2, d),
        _ => linalg::zeros(d),
    };
    let minc = linalg::identity(d) - &m1 - &m2;
    elements.push(m1);
    elements.push(m2);
    elements.push(minc);
    let povm = Povm::new(elements)?;

    let success = q1 * p1 + q2 * p2;
    Ok(UsdResult {
        povm,
        success_probability: success,
        inconclusive_probability: 1.0 - success,
        per_state_success: vec![p1, p2],
        converged: true,
    })
}

fn scaled_projector(v: &[Complex64], weight: f64, d: usize) -> CMatrix {
    let mut m = linalg::zeros(d);
    for i in 0..d {
        for j in 0..d {
            m[[i, j]] = Complex64::new(weight, 0.0) * v[i] * v[j].conj();
        }
    }
    m
}

/// Optimal unambiguous discrimination of N linearly independent pure states.
///
/// Conclusive elements are rank one along the reciprocal (biorthogonal)
/// vectors of the states, so the problem reduces to maximizing a linear
/// functional of the weights a ≥ 0 under the matrix constraint
/// Σ a_i v_iv_i† ⪯ I on the span. That is solved by a log-det barrier with
/// damped Newton steps, tightening the barrier parameter until the duality
/// gap is negligible, followed by an exact rescale into the feasible set.
pub fn usd_reciprocal(ensemble: &Ensemble) -> Result<UsdResult> {
    let n = ensemble.n();
    let d = ensemble.dim();
    if n < 2 {
        return Err(Error::WrongCount {
            expected: 2,
            found: n,
        });
    }
    let mut vectors = Vec::with_capacity(n);
    for i in 0..n {
        vectors.push(ensemble.state(i).pure_vector()?);
    }

    // Gram matrix and linear independence.
    let mut gram = linalg::zeros(n);
    for i in 0..n {
        for j in 0..n {
            gram[[i, j]] = vectors[i]
                .iter()
                .zip(&vectors[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
        }
    }
    let gram_vals = linalg::herm_eigenvalues(&gram)?;
    let lead = gram_vals[0].max(1.0);
    if gram_vals[n - 1] <= 1e-10 * lead {
        return Err(Error::Infeasible {
            reason: "states are linearly dependent".into(),
        });
    }

    // Reciprocal vectors: columns of S (S†S)^{-1}, so ⟨r_i|ψ_j⟩ = δ_ij.
    let gram_inv = {
        let (vals, vecs) = linalg::herm_eigen(&gram)?;
        let mut m = linalg::zeros(n);
        for k in 0..n {
            let inv = 1.0 / vals[k];
            for i in 0..n {
                for j in 0..n {
                    m[[i, j]] += vecs[[i, k]] * Complex64::new(inv, 0.0) * vecs[[j, k]].conj();
                }
            }
        }
        m
    };
    let mut reciprocal = vec![vec![Complex64::new(0.0, 0.0); d]; n];
    for i in 0..n {
        for (j, vj) in vectors.iter().enumerate() {
            let w = gram_inv[[j, i]];
            for k in 0..d {
                reciprocal[i][k] += vj[k] * w;
            }
        }
    }
    let mut unit_dirs = Vec::with_capacity(n);
    let mut gains = Vec::with_capacity(n);
    for r in &reciprocal {
        let norm2: f64 = r.iter().map(|z| z.norm_sqr()).sum();
        let norm = norm2.sqrt();
        unit_dirs.push(r.iter().map(|z| z / norm).collect::<Vec<_>>());
        gains.push(1.0 / norm2);
    }

    // Span coordinates via the orthonormal basis S (S†S)^{-1/2}.
    let gram_inv_sqrt = {
        let (vals, vecs) = linalg::herm_eigen(&gram)?;
        let mut m = linalg::zeros(n);
        for k in 0..n {
            let inv = 1.0 / vals[k].sqrt();
            for i in 0..n {
                for j in 0..n {
                    m[[i, j]] += vecs[[i, k]] * Complex64::new(inv, 0.0) * vecs[[j, k]].conj();
                }
            }
        }
        m
    };
    let mut basis = vec![vec![Complex64::new(0.0, 0.0); d]; n];
    for b in 0..n {
        for (j, vj) in vectors.iter().enumerate() {
            let w = gram_inv_sqrt[[j, b]];
            for k in 0..d {
                basis[b][k] += vj[k] * w;
            }
        }
    }
    // ṽ_i[b] = ⟨basis_b|v_i⟩.
    let mut vt = linalg::zeros(n);
    for i in 0..n {
        for b in 0..n {
            vt[[b, i]] = basis[b]
                .iter()
                .zip(&unit_dirs[i])
                .map(|(x, y)| x.conj() * y)
                .sum();
        }
    }

    let weights: Vec<f64> = (0..n).map(|i| ensemble.prior(i) * gains[i]).collect();
    let (a, converged) = barrier_maximize(&vt, &weights)?;

    // Exact feasibility: rescale into Σ a_i v_iv_i† ⪯ I.
    let mut f = linalg::zeros(n);
    for i in 0..n {
        let col: Vec<Complex64> = (0..n).map(|b| vt[[b, i]]).collect();
        for p in 0..n {
            for q in 0..n {
                f[[p, q]] += Complex64::new(a[i], 0.0) * col[p] * col[q].conj();
            }
        }
    }
    let lam = linalg::herm_eigenvalues(&f)?[0];
    let rescale = if lam > 0.0 {
        (1.0 - 1e-12) / lam
    } else {
        1.0
    }
    .min(1.0);
    let a: Vec<f64> = a.iter().map(|x| x * rescale).collect();

    let mut elements: Vec<CMatrix> = Vec::with_capacity(n + 1);
    let mut sum = linalg::zeros(d);
    for i in 0..n {
        let m = scaled_projector(&unit_dirs[i], a[i], d);
        sum = sum + &m;
        elements.push(m);
    }
    elements.push(linalg::identity(d) - &sum);
    let povm = Povm::new(elements)?;

    let per_state: Vec<f64> = (0..n).map(|i| a[i] * gains[i]).collect();
    let success: f64 = (0..n).map(|i| ensemble.prior(i) * per_state[i]).sum();
    Ok(UsdResult {
        povm,
        success_probability: success,
        inconclusive_probability: 1.0 - success,
        per_state_success: per_state,
        converged,
    })
}

/// Maximize c·a subject to a ≥ 0 and Σ a_i ṽ_iṽ_i† ⪯ I, by a log-det
/// barrier and Newton descent. Columns of `vt` are the unit directions in
/// span coordinates.
fn barrier_maximize(vt: &CMatrix, c: &[f64]) -> Result<(Vec<f64>, bool)> {
    let n = c.len();
    let dims = vt.nrows();

    // Feasible start: small uniform weights.
    let mut gram_dirs = linalg::zeros(dims);
    for i in 0..n {
        for p in 0..dims {
            for q in 0..dims {
                gram_dirs[[p, q]] += vt[[p, i]] * vt[[q, i]].conj();
            }
        }
    }
    let lam_sum = linalg::herm_eigenvalues(&gram_dirs)?[0];
    let mut a = vec![1.0 / (2.0 * n as f64 * lam_sum.max(1e-12)); n];

    let d_matrix = |a: &[f64]| -> CMatrix {
        let mut m = linalg::identity(dims);
        for i in 0..n {
            for p in 0..dims {
                for q in 0..dims {
                    m[[p, q]] -= Complex64::new(a[i], 0.0) * vt[[p, i]] * vt[[q, i]].conj();
                }
            }
        }
        m
    };
    let min_eig = |m: &CMatrix| -> Result<f64> {
        Ok(*linalg::herm_eigenvalues(m)?.last().unwrap())
    };

    let objective = |a: &[f64], tau: f64| -> Result<f64> {
        let dm = d_matrix(a);
        let vals = linalg::herm_eigenvalues(&dm)?;
        if vals.last().copied().unwrap_or(-1.0) <= 0.0 || a.iter().any(|&x| x <= 0.0) {
            return Ok(f64::INFINITY);
        }
        let logdet: f64 = vals.iter().map(|v| v.ln()).sum();
        let loga: f64 = a.iter().map(|x| x.ln()).sum();
        Ok(-c.iter().zip(a).map(|(ci, ai)| ci * ai).sum::<f64>() - tau * (logdet + loga))
    };

    let mut tau = 0.1f64;
    let mut converged = true;
    while tau > 1e-12 {
        for _newton in 0..60 {
            let dm = d_matrix(&a);
            let dinv = linalg::psd_power(&dm, -1.0, 1e-14)?;
            // q_ij = ⟨ṽ_i|D^{-1}|ṽ_j⟩.
            let mut qmat = linalg::zeros(n);
            for i in 0..n {
                let col_i: Vec<Complex64> = (0..dims).map(|p| vt[[p, i]]).collect();
                let mut dcol = vec![Complex64::new(0.0, 0.0); dims];
                for p in 0..dims {
                    for r in 0..dims {
                        dcol[p] += dinv[[p, r]] * col_i[r];
                    }
                }
                for j in 0..n {
                    let mut s = Complex64::new(0.0, 0.0);
                    for p in 0..dims {
                        s += vt[[p, j]].conj() * dcol[p];
                    }
                    qmat[[j, i]] = s;
                }
            }
            let grad: Vec<f64> = (0..n)
                .map(|i| -c[i] + tau * qmat[[i, i]].re - tau / a[i])
                .collect();
            let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if gnorm < 1e-12 {
                break;
            }
            // Hessian in real form.
            let mut h = vec![vec![0.0f64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    h[i][j] = tau * qmat[[i, j]].norm_sqr();
                }
                h[i][i] += tau / (a[i] * a[i]);
            }
            let step = match solve_spd(&h, &grad) {
                Some(s) => s,
                None => {
                    converged = false;
                    break;
                }
            };
            // Backtracking keeps the iterate strictly feasible.
            let f0 = objective(&a, tau)?;
            let slope: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
            let mut alpha = 1.0f64;
            let mut accepted = false;
            for _ in 0..60 {
                let trial: Vec<f64> = a.iter().zip(&step).map(|(x, s)| x - alpha * s).collect();
                if trial.iter().all(|&x| x > 0.0) {
                    let dm_t = d_matrix(&trial);
                    if min_eig(&dm_t)? > 0.0 {
                        let ft = objective(&trial, tau)?;
                        if ft <= f0 - 1e-4 * alpha * slope {
                            a = trial;
                            accepted = true;
                            break;
                        }
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                break;
            }
            if alpha * step.iter().map(|s| s * s).sum::<f64>().sqrt() < 1e-13 {
                break;
            }
        }
        tau *= 0.2;
    }
    Ok((a, converged))
}

/// Cholesky solve for a symmetric positive definite system; None when the
/// factorization breaks down.
fn solve_spd(h: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = h[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut y = vec![0.0f64; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut x = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    Some(x)
}

/// Maximum-confidence measurement data. The POVM carries one element per
/// state plus a final inconclusive element.
#[derive(Debug, Clone)]
pub struct MaxConfResult {
    /// C_k = max over measurements of P(state k | outcome k).
    pub confidences: Vec<f64>,
    pub povm: Povm,
    /// Scale factors applied to each direction operator.
    pub coefficients: Vec<f64>,
    /// True where the top eigenvalue of the confidence operator is
    /// degenerate and the reported direction is one choice among many.
    pub degenerate: Vec<bool>,
    /// Probability that the measurement returns the inconclusive outcome.
    pub inconclusive_probability: f64,
}

/// Build the maximum-confidence measurement for an ensemble.
///
/// The confidence of outcome k is C_k = λ_max(ρ^{−1/2} q_kρ_k ρ^{−1/2}) and
/// is attained by any element proportional to ρ^{−1/2} Q_k ρ^{−1/2} with Q_k
/// inside the top eigenspace. The common scale is the largest that keeps the
/// element sum below the identity; a greedy per-index pass then enlarges
/// coefficients (in index order) to shrink the inconclusive element while
/// every confidence stays at its maximum.
pub fn max_confidence(ensemble: &Ensemble) -> Result<MaxConfResult> {
    let n = ensemble.n();
    let d = ensemble.dim();
    let rho = ensemble.average();
    let s_inv = linalg::psd_power(rho.matrix(), -0.5, tol::SUPPORT)?;

    let mut confidences = Vec::with_capacity(n);
    let mut degenerate = Vec::with_capacity(n);
    let mut directions: Vec<CMatrix> = Vec::with_capacity(n);
    for k in 0..n {
        let weighted = ensemble.state(k).matrix().mapv(|z| z * ensemble.prior(k));
        let t = s_inv.dot(&weighted).dot(&s_inv);
        let t = linalg::hermitize(&t);
        let (vals, vecs) = linalg::herm_eigen(&t)?;
        if vals[0] <= 1e-14 {
            confidences.push(0.0);
            degenerate.push(false);
            directions.push(linalg::zeros(d));
            continue;
        }
        confidences.push(vals[0]);
        degenerate.push(vals.len() > 1 && vals[0] - vals[1] <= 1e-10);
        let top: Vec<Complex64> = (0..d).map(|i| vecs[[i, 0]]).collect();
        let q_k = scaled_projector(&top, 1.0, d);
        directions.push(linalg::hermitize(&s_inv.dot(&q_k).dot(&s_inv)));
    }

    // Common scale: the largest t with t·ΣD_k ⪯ I.
    let mut total = linalg::zeros(d);
    for dk in &directions {
        total = total + dk;
    }
    let lam = linalg::herm_eigenvalues(&total)?[0];
    let t_star = if lam > 1e-14 { 1.0 / lam } else { 0.0 };
    let mut coefficients = vec![0.0f64; n];
    let mut f = linalg::zeros(d);
    for (k, dk) in directions.iter().enumerate() {
        if linalg::max_abs(dk) > 0.0 {
            coefficients[k] = t_star;
            f = f + &dk.mapv(|z| z * t_star);
        }
    }

    // Greedy enlargement in index order.
    for k in 0..n {
        if coefficients[k] == 0.0 {
            continue;
        }
        let g = linalg::hermitize(&(linalg::identity(d) - &f));
        let p_g = linalg::support_projector(&g, tol::SUPPORT)?;
        let outside = &directions[k] - &p_g.dot(&directions[k]).dot(&p_g);
        if linalg::max_abs(&outside) > 1e-10 * linalg::max_abs(&directions[k]).max(1e-300) {
            continue;
        }
        let g_half_inv = linalg::psd_power(&g, -0.5, tol::SUPPORT)?;
        let w = g_half_inv.dot(&directions[k]).dot(&g_half_inv);
        let lam_w = linalg::herm_eigenvalues(&linalg::hermitize(&w))?[0];
        if lam_w <= 1e-14 {
            continue;
        }
        let delta = 1.0 / lam_w;
        coefficients[k] += delta;
        f = f + &directions[k].mapv(|z| z * delta);
    }

    let mut elements: Vec<CMatrix> = directions
        .iter()
        .zip(&coefficients)
        .map(|(dk, &t)| dk.mapv(|z| z * t))
        .collect();
    let mut sum = linalg::zeros(d);
    for e in &elements {
        sum = sum + e;
    }
    elements.push(linalg::identity(d) - &sum);
    let povm = Povm::new(elements)?;

    let inconclusive = linalg::re_trace_prod(povm.element(n), rho.matrix()).max(0.0);
    Ok(MaxConfResult {
        confidences,
        povm,
        coefficients,
        degenerate,
        inconclusive_probability: inconclusive,
    })
}

/// Posterior probability of state k given a click on `element`:
/// q_k tr[Mρ_k] / tr[Mρ]. Fails when the element never clicks on the
/// ensemble.
pub fn confidence_of(ensemble: &Ensemble, element: &CMatrix, k: usize) -> Result<f64> {
    if k >= ensemble.n() {
        return Err(Error::OutOfRange {
            what: "state index",
            value: k as f64,
        });
    }
    let rho = ensemble.average();
    let denom = linalg::re_trace_prod(element, rho.matrix());
    if denom <= 1e-14 {
        return Err(Error::ZeroClickProbability { outcome: k });
    }
    let numer = ensemble.prior(k) * linalg::re_trace_prod(element, ensemble.state(k).matrix());
    Ok(numer / denom)
}

/// Conditional ensemble after an inconclusive element is fixed: states
/// ρ̃_i ∝ Ω^{1/2} ρ_i Ω^{1/2} with Ω = I − M_inc, reweighted by their
/// conclusive click probabilities.
#[derive(Debug, Clone)]
pub struct FixedRateReduction {
    pub reduced: Ensemble,
    /// Overall inconclusive probability Q of the fixed element.
    pub inconclusive_probability: f64,
    omega_sqrt: CMatrix,
    inconclusive: CMatrix,
}

impl FixedRateReduction {
    /// Lift a POVM on the reduced ensemble back to the original space:
    /// M_i = Ω^{1/2} M̃_i Ω^{1/2}, with the inconclusive element appended.
    pub fn lift(&self, reduced_povm: &Povm) -> Result<Povm> {
        let mut elements = Vec::with_capacity(reduced_povm.n_outcomes() + 1);
        for m in reduced_povm.elements() {
            elements.push(linalg::hermitize(&self.omega_sqrt.dot(m).dot(&self.omega_sqrt)));
        }
        elements.push(self.inconclusive.clone());
        Povm::new(elements)
    }
}

/// Reduce a fixed-inconclusive-element problem to plain minimum-error
/// discrimination on the conditional ensemble.
pub fn fixed_rate_reduction(ensemble: &Ensemble, m_inc: &CMatrix) -> Result<FixedRateReduction> {
    let d = ensemble.dim();
    if m_inc.nrows() != d || m_inc.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: m_inc.nrows(),
        });
    }
    if linalg::hermiticity_deviation(m_inc) > tol::HERM {
        return Err(Error::InvalidOperator {
            reason: "inconclusive element is not Hermitian".into(),
        });
    }
    let vals = linalg::herm_eigenvalues(m_inc)?;
    if vals[0] > 1.0 + tol::PSD || *vals.last().unwrap() < -tol::PSD {
        return Err(Error::InvalidOperator {
            reason: format!(
                "inconclusive element eigenvalues lie in [{:.3e}, {:.3e}], outside [0, 1]",
                vals.last().unwrap(),
                vals[0]
            ),
        });
    }

    let omega = linalg::hermitize(&(linalg::identity(d) - m_inc));
    let (omega_clipped, _) = linalg::clip_negative_eigenvalues(&omega)?;
    let omega_sqrt = linalg::psd_power(&omega_clipped, 0.5, tol::SUPPORT)?;

    let q_inc: f64 = (0..ensemble.n())
        .map(|i| ensemble.prior(i) * linalg::re_trace_prod(m_inc, ensemble.state(i).matrix()))
        .sum();
    if q_inc >= 1.0 - 1e-12 {
        return Err(Error::Infeasible {
            reason: "the fixed element absorbs all probability".into(),
        });
    }

    let supp = linalg::support_projector(&omega_clipped, tol::SUPPORT)?;
    let supp_rank = linalg::trace(&supp).re.round().max(1.0);
    let mut priors = Vec::with_capacity(ensemble.n());
    let mut states = Vec::with_capacity(ensemble.n());
    for i in 0..ensemble.n() {
        let weight = linalg::re_trace_prod(&omega_clipped, ensemble.state(i).matrix());
        if weight <= 1e-14 {
            // This state never produces a conclusive click; it enters the
            // conditional ensemble with zero prior and a placeholder state
            // spread over the conclusive support.
            priors.push(0.0);
            states.push(DensityMatrix::trusted(supp.mapv(|z| z / supp_rank)));
            continue;
        }
        let m = omega_sqrt.dot(ensemble.state(i).matrix()).dot(&omega_sqrt);
        states.push(DensityMatrix::new(m.mapv(|z| z / weight))?);
        priors.push(ensemble.prior(i) * weight / (1.0 - q_inc));
    }
    let reduced = Ensemble::new(priors, states)?;
    Ok(FixedRateReduction {
        reduced,
        inconclusive_probability: q_inc,
        omega_sqrt,
        inconclusive: m_inc.clone(),
    })
}

/// One point of the error-versus-inconclusive-rate trade-off.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CurvePoint {
    pub inconclusive: f64,
    pub success_given_conclusive: f64,
    pub error_given_conclusive: f64,
}

/// Lower-bound curve for the conditional error at fixed inconclusive rates,
/// searching over rank-one inconclusive elements M_inc = λ|χ⟩⟨χ| with
/// λ = Q/⟨χ|ρ|χ⟩. Each requested rate with Q > λ_max(ρ) is unattainable by
/// a rank-one element and is omitted from the output. The search combines a
/// coarse deterministic sweep (a grid for qubits, seeded random directions
/// otherwise) with Nelder-Mead refinement, warm-starting each rate at the
/// previous optimum; the result is a certified achievable curve, hence an
/// upper bound on the optimal success at each rate reached by rank-one
/// elements.
pub fn error_vs_inconclusive_curve(
    ensemble: &Ensemble,
    rates: &[f64],
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    let d = ensemble.dim();
    let rho = ensemble.average();
    let lam_max = linalg::herm_eigenvalues(rho.matrix())?[0];

    let evaluate = |chi: &[f64], q: f64| -> f64 {
        // Real embedding (re, im per amplitude); normalize, then score.
        match rank_one_success(ensemble, chi, q) {
            Ok(Some(p)) => -p,
            _ => f64::INFINITY,
        }
    };

    let mut out = Vec::with_capacity(rates.len());
    let mut warm: Option<Vec<f64>> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &q in rates {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::OutOfRange {
                what: "inconclusive rate",
                value: q,
            });
        }
        if q == 0.0 {
            let r = best_conclusive(ensemble)?;
            out.push(CurvePoint {
                inconclusive: 0.0,
                success_given_conclusive: r,
                error_given_conclusive: 1.0 - r,
            });
            continue;
        }
        if q > lam_max - 1e-12 {
            // No rank-one element reaches this rate; the point is skipped.
            continue;
        }

        let mut candidates: Vec<Vec<f64>> = Vec::new();
        if let Some(w) = &warm {
            candidates.push(w.clone());
        }
        if d == 2 {
            let steps = 24;
            for ia in 0..steps {
                let alpha = std::f64::consts::FRAC_PI_2 * (ia as f64 + 0.5) / steps as f64;
                for ib in 0..steps {
                    let beta = 2.0 * std::f64::consts::PI * ib as f64 / steps as f64;
                    candidates.push(vec![
                        alpha.cos(),
                        0.0,
                        alpha.sin() * beta.cos(),
                        alpha.sin() * beta.sin(),
                    ]);
                }
            }
        } else {
            for _ in 0..64 {
                let v: Vec<f64> = (0..2 * d).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
                candidates.push(v);
            }
        }

        let mut best: Option<(f64, Vec<f64>)> = None;
        for cand in &candidates {
            let val = evaluate(cand, q);
            if val.is_finite() && best.as_ref().map_or(true, |(b, _)| val < *b) {
                best = Some((val, cand.clone()));
            }
        }
        let Some((_, start)) = best else { continue };
        let mut obj = |x: &[f64]| evaluate(x, q);
        let (refined, neg_p) = nelder_mead(&mut obj, &start, 0.15, 300);
        if !neg_p.is_finite() {
            continue;
        }
        let p = -neg_p;
        warm = Some(refined);
        out.push(CurvePoint {
            inconclusive: q,
            success_given_conclusive: p,
            error_given_conclusive: 1.0 - p,
        });
    }
    Ok(out)
}

/// Success probability conditioned on a conclusive click for the rank-one
/// element defined by the real-embedded direction `chi_embed` at rate `q`;
/// None when the direction cannot reach the rate.
fn rank_one_success(ensemble: &Ensemble, chi_embed: &[f64], q: f64) -> Result<Option<f64>> {
    let d = ensemble.dim();
    let mut chi = Vec::with_capacity(d);
    let mut norm2 = 0.0f64;
    for i in 0..d {
        let z = Complex64::new(chi_embed[2 * i], chi_embed[2 * i + 1]);
        norm2 += z.norm_sqr();
        chi.push(z);
    }
    if norm2 < 1e-20 {
        return Ok(None);
    }
    let norm = norm2.sqrt();
    for z in &mut chi {
        *z /= norm;
    }
    let rho = ensemble.average();
    let mut rho_chi = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            rho_chi += (chi[i].conj() * rho.matrix()[[i, j]] * chi[j]).re;
        }
    }
    if rho_chi < q {
        return Ok(None);
    }
    let lambda = q / rho_chi;
    let m_inc = scaled_projector(&chi, lambda, d);
    let reduction = match fixed_rate_reduction(ensemble, &m_inc) {
        Ok(r) => r,
        Err(_) => return Ok(None),
    };
    let p = best_conclusive(&reduction.reduced)?;
    Ok(Some(p))
}

/// Optimal guessing probability, routed through the geometric solver for
/// qubits and the fixed-point solver otherwise.
fn best_conclusive(ensemble: &Ensemble) -> Result<f64> {
    if ensemble.dim() == 2 {
        Ok(solve_qubit(ensemble)?.p_guess)
    } else {
        let r = solve_fixed_point(ensemble, &SolveOptions::default())?;
        Ok(r.p_guess)
    }
}

/// Outcome table p(x, y) = q_x tr[M_y ρ_x] as a dense matrix, rows indexed
/// by states.
pub fn joint_distribution(ensemble: &Ensemble, povm: &Povm) -> Result<Array2<f64>> {
    if ensemble.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: ensemble.dim(),
            found: povm.dim(),
        });
    }
    let mut table = Array2::zeros((ensemble.n(), povm.n_outcomes()));
    for x in 0..ensemble.n() {
        for y in 0..povm.n_outcomes() {
            let p = ensemble.prior(x)
                * linalg::re_trace_prod(povm.element(y), ensemble.state(x).matrix());
            table[[x, y]] = p.max(0.0);
        }
    }
    Ok(table)
}
