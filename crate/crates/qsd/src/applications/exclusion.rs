//! Quantum state exclusion: minimize the probability Σ q_i tr[M_iρ_i] of
//! the measurement naming the prepared state, so outcome i rules state i
//! out. A value of zero means perfect exclusion, the operational core of
//! the PBR argument.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::minerror::fixed_point_step;
use crate::operator::{DensityMatrix, Ensemble, Povm};
use crate::tol;

#[derive(Debug, Clone)]
pub struct ExclusionOptions {
    pub max_iter: usize,
    pub cert_tol: f64,
    pub check_every: usize,
    /// Seed for the multi-start fallback used when the fixed-point route
    /// leaves a duality gap.
    pub seed: u64,
}

impl Default for ExclusionOptions {
    fn default() -> Self {
        Self {
            max_iter: 10_000,
            cert_tol: tol::CERT,
            check_every: 20,
            seed: 1,
        }
    }
}

/// A solved exclusion instance. `dual_gap` is the distance between the
/// achieved value and a feasible dual lower bound; `converged` requires it
/// to be within the certificate tolerance.
#[derive(Debug, Clone)]
pub struct ExclusionResult {
    pub value: f64,
    pub povm: Povm,
    pub dual_gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn exclusion_value(ensemble: &Ensemble, elements: &[CMatrix]) -> f64 {
    elements
        .iter()
        .enumerate()
        .map(|(i, m)| ensemble.prior(i) * linalg::re_trace_prod(m, ensemble.state(i).matrix()))
        .sum()
}

/// Feasible dual lower bound from a candidate POVM: shift the Hermitized
/// operator Σ q_iρ_iM_i down until it sits below every q_iρ_i; its trace
/// then lower-bounds the exclusion value.
fn dual_bound(ensemble: &Ensemble, elements: &[CMatrix]) -> Result<f64> {
    let d = ensemble.dim();
    let mut k = linalg::zeros(d);
    for (i, m) in elements.iter().enumerate() {
        let w = ensemble.state(i).matrix().mapv(|z| z * ensemble.prior(i));
        k = k + w.dot(m);
    }
    let k = linalg::hermitize(&k);
    let mut shift = 0.0f64;
    for i in 0..ensemble.n() {
        let w = ensemble.state(i).matrix().mapv(|z| z * ensemble.prior(i));
        let diff = &k - &w;
        let top = linalg::herm_eigenvalues(&diff)?[0];
        shift = shift.max(top);
    }
    Ok(linalg::trace(&k).re - shift * d as f64)
}

/// Fold index minimizing the extra exclusion value picked up by assigning
/// the completeness deficiency to one element.
fn fold_index(ensemble: &Ensemble, deficiency: &CMatrix) -> usize {
    let mut best = 0usize;
    let mut best_cost = f64::INFINITY;
    for i in 0..ensemble.n() {
        let cost = ensemble.prior(i)
            * linalg::re_trace_prod(deficiency, ensemble.state(i).matrix());
        if cost < best_cost - 1e-15 {
            best_cost = cost;
            best = i;
        }
    }
    best
}

/// Minimize Σ q_i tr[M_iρ_i] over POVMs.
///
/// The objective is flipped into a maximization of Σ tr[M_iR_i] with
/// R_i = μI − q_iρ_i ⪰ 0, which the same fixed-point update used for
/// minimum error solves. When the iteration stalls with a duality gap above
/// tolerance, seeded multi-start projected gradient descent takes over and
/// the best POVM found wins.
pub fn solve_exclusion(ensemble: &Ensemble, options: &ExclusionOptions) -> Result<ExclusionResult> {
    let n = ensemble.n();
    let d = ensemble.dim();
    let mut mu = 0.0f64;
    let mut flipped: Vec<CMatrix> = Vec::with_capacity(n);
    for i in 0..n {
        let top = linalg::herm_eigenvalues(ensemble.state(i).matrix())?[0];
        mu = mu.max(ensemble.prior(i) * top);
    }
    // Small lift keeps every R_i strictly positive, which the fixed-point
    // update needs to move weight between elements.
    let mu = mu * (1.0 + 1e-6) + 1e-9;
    for i in 0..n {
        let w = ensemble.state(i).matrix().mapv(|z| z * ensemble.prior(i));
        flipped.push(linalg::identity(d).mapv(|z| z * mu) - &w);
    }

    // Seed: square-root-measurement analogue in the flipped weights.
    let mut total = linalg::zeros(d);
    for r in &flipped {
        total = total + r;
    }
    let s = linalg::psd_power(&linalg::hermitize(&total), -0.5, tol::SUPPORT)?;
    let mut m: Vec<CMatrix> = flipped
        .iter()
        .map(|r| linalg::hermitize(&s.dot(r).dot(&s)))
        .collect();
    let supp = linalg::psd_power(&linalg::hermitize(&total), 0.0, tol::SUPPORT)?;
    let kernel = linalg::identity(d) - &supp;
    if linalg::max_abs(&kernel) > 1e-12 {
        let idx = fold_index(ensemble, &kernel);
        m[idx] = linalg::hermitize(&(&m[idx] + &kernel));
    }

    let mut iterations = 0usize;
    let mut prev_value = f64::INFINITY;
    while iterations < options.max_iter {
        let deficiency = fixed_point_step(&flipped, &mut m)?;
        if linalg::max_abs(&deficiency) > 1e-15 {
            let idx = fold_index(ensemble, &deficiency);
            m[idx] = linalg::hermitize(&(&m[idx] + &deficiency));
        }
        iterations += 1;
        let value = exclusion_value(ensemble, &m);
        let plateaued = (prev_value - value).abs() < 1e-15;
        prev_value = value;
        if iterations % options.check_every == 0 || plateaued {
            let gap = value - dual_bound(ensemble, &m)?;
            if gap <= options.cert_tol {
                return Ok(ExclusionResult {
                    value,
                    povm: Povm::trusted(m),
                    dual_gap: gap.max(0.0),
                    iterations,
                    converged: true,
                });
            }
            if plateaued && iterations > 50 {
                break;
            }
        }
    }

    // Multi-start projected gradient fallback.
    let stalled_value = exclusion_value(ensemble, &m);
    let stalled_gap = stalled_value - dual_bound(ensemble, &m)?;
    let mut best = (stalled_value, m, stalled_gap);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for _start in 0..8 {
        let seed_m = random_povm(&mut rng, n, d)?;
        let cand = projected_gradient(ensemble, seed_m, 200)?;
        let v = exclusion_value(ensemble, &cand);
        if v < best.0 - 1e-14 {
            let g = v - dual_bound(ensemble, &cand)?;
            best = (v, cand, g);
        }
    }
    let (value, m, gap) = best;
    let gap = gap.max(0.0);
    Ok(ExclusionResult {
        value,
        povm: Povm::trusted(m),
        dual_gap: gap,
        iterations,
        converged: gap <= options.cert_tol,
    })
}

fn random_povm(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Result<Vec<CMatrix>> {
    let mut raw: Vec<CMatrix> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut b = linalg::zeros(d);
        for i in 0..d {
            for j in 0..d {
                b[[i, j]] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
        }
        raw.push(linalg::dagger(&b).dot(&b));
    }
    normalize_povm(raw)
}

/// Symmetrize a family of PSD operators into a POVM: M_i ← S A_i S with
/// S = (ΣA_j)^{−1/2}, deficiency folded into the first element.
fn normalize_povm(raw: Vec<CMatrix>) -> Result<Vec<CMatrix>> {
    let d = raw[0].nrows();
    let mut total = linalg::zeros(d);
    for a in &raw {
        total = total + a;
    }
    let s = linalg::psd_power(&linalg::hermitize(&total), -0.5, tol::SUPPORT)?;
    let mut m: Vec<CMatrix> = raw
        .iter()
        .map(|a| linalg::hermitize(&s.dot(a).dot(&s)))
        .collect();
    let mut sum = linalg::zeros(d);
    for e in &m {
        sum = sum + e;
    }
    let deficiency = linalg::identity(d) - &sum;
    m[0] = linalg::hermitize(&(&m[0] + &deficiency));
    Ok(m)
}

fn projected_gradient(
    ensemble: &Ensemble,
    mut m: Vec<CMatrix>,
    iters: usize,
) -> Result<Vec<CMatrix>> {
    let n = ensemble.n();
    let mut eta = 0.5f64;
    let mut value = exclusion_value(ensemble, &m);
    for _ in 0..iters {
        let mut trial: Vec<CMatrix> = Vec::with_capacity(n);
        for (i, mi) in m.iter().enumerate() {
            let grad = ensemble.state(i).matrix().mapv(|z| z * ensemble.prior(i));
            let stepped = mi - &grad.mapv(|z| z * eta);
            let (clipped, _) = linalg::clip_negative_eigenvalues(&linalg::hermitize(&stepped))?;
            trial.push(clipped);
        }
        let trial = normalize_povm(trial)?;
        let trial_value = exclusion_value(ensemble, &trial);
        if trial_value < value - 1e-15 {
            m = trial;
            value = trial_value;
            eta *= 1.2;
        } else {
            eta *= 0.5;
            if eta < 1e-10 {
                break;
            }
        }
    }
    Ok(m)
}

/// The product-state ensemble behind the PBR argument: all 2^n products of
/// the pair ψ_0 = cos(θ/2)|0⟩ + sin(θ/2)|1⟩ and
/// ψ_1 = cos(θ/2)|0⟩ − sin(θ/2)|1⟩, ordered by the binary digits of the
/// index (most significant digit = first factor), with equal priors.
pub fn pbr_ensemble(theta: f64, factors: usize, cap: usize) -> Result<Ensemble> {
    if factors == 0 {
        return Err(Error::OutOfRange {
            what: "factors",
            value: 0.0,
        });
    }
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::OutOfRange {
            what: "theta",
            value: theta,
        });
    }
    let dim = 1usize
        .checked_shl(factors as u32)
        .filter(|&d| d <= cap)
        .ok_or(Error::DimensionCapExceeded {
            required: usize::MAX,
            cap,
        })?;
    if dim > cap {
        return Err(Error::DimensionCapExceeded { required: dim, cap });
    }
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let single = [
        vec![Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
        vec![Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
    ];
    let count = 1usize << factors;
    let mut states = Vec::with_capacity(count);
    for index in 0..count {
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for bit_pos in (0..factors).rev() {
            let bit = (index >> bit_pos) & 1;
            let factor = &single[bit];
            let mut next = Vec::with_capacity(amps.len() * 2);
            for &a in &amps {
                for &f in factor {
                    next.push(a * f);
                }
            }
            amps = next;
        }
        states.push(DensityMatrix::from_pure(&amps)?);
    }
    Ensemble::equal_priors(states)
}
