//! Minimum-error discrimination.
//!
//! The primal problem: maximize Σ q_i tr[M_i ρ_i] over POVMs {M_i}. The dual:
//! minimize tr K over Hermitian K with K ⪰ q_iρ_i for every i. At the optimum
//! K = q_iρ_i + r_iσ_i with r_i = tr K − q_i and σ_i a state orthogonal to
//! M_i, and the guessing probability is tr K. Everything this module returns
//! is judged by that dual pair: a result is only called converged when its
//! optimality certificate passes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::operator::{DensityMatrix, Ensemble, Povm};
use crate::tol;

/// Four residuals measuring how far a POVM is from provably optimal.
///
/// `passed` means every residual is at or below `tolerance`, which certifies
/// optimality of the measured POVM up to that tolerance (the conditions are
/// necessary and sufficient).
#[derive(Debug, Clone, serde::Serialize)]
pub struct OptimalityCertificate {
    /// max_j of the most negative eigenvalue of K − q_jρ_j, floored at 0.
    pub dual_feasibility_gap: f64,
    /// max_i |tr[(K − q_iρ_i) M_i]|.
    pub complementarity_residual: f64,
    /// max over ordered pairs i ≠ j of the operator norm of
    /// M_i (q_iρ_i − q_jρ_j) M_j.
    pub pairwise_residual: f64,
    /// tr K − Σ q_i tr[M_iρ_i].
    pub primal_dual_gap: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl OptimalityCertificate {
    pub fn worst_residual(&self) -> f64 {
        self.dual_feasibility_gap
            .max(self.complementarity_residual)
            .max(self.pairwise_residual)
            .max(self.primal_dual_gap.abs())
    }
}

/// A solved minimum-error instance: the optimal guessing probability, the
/// measurement attaining it, and the dual data certifying it.
#[derive(Debug, Clone)]
pub struct DiscriminationResult {
    pub p_guess: f64,
    pub povm: Povm,
    /// Dual candidate K, Hermitized from Σ q_iρ_iM_i.
    pub symmetry_operator: CMatrix,
    /// r_i = tr K − q_i, floored at 0.
    pub residuals: Vec<f64>,
    /// σ_i = (K − q_iρ_i)/r_i where r_i exceeds the certificate tolerance;
    /// absent otherwise (the decomposition is ill-defined at r_i = 0).
    pub complementary_states: Vec<Option<DensityMatrix>>,
    pub certificate: OptimalityCertificate,
    pub iterations: usize,
    /// True when the certificate passed; the certificate is the arbiter,
    /// not the iteration count.
    pub converged: bool,
}

impl DiscriminationResult {
    /// Convert the non-convergence flag into an error for callers that
    /// need a certified value or nothing.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                what: "minimum-error solver",
                iterations: self.iterations,
            })
        }
    }
}

/// Options for [`solve_fixed_point`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_iter: usize,
    /// Residual threshold for the optimality certificate.
    pub cert_tol: f64,
    /// Certificate check cadence in iterations.
    pub check_every: usize,
    /// Starting POVM; defaults to the square-root measurement.
    pub seed_povm: Option<Povm>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iter: 10_000,
            cert_tol: tol::CERT,
            check_every: 20,
            seed_povm: None,
        }
    }
}

/// Build the Hermitized dual candidate K = (Σ q_iρ_iM_i + h.c.)/2.
fn dual_candidate(weighted: &[CMatrix], povm: &Povm) -> CMatrix {
    let d = povm.dim();
    let mut k = linalg::zeros(d);
    for (r, m) in weighted.iter().zip(povm.elements()) {
        k = k + r.dot(m);
    }
    linalg::hermitize(&k)
}

fn certificate_core(
    ensemble: &Ensemble,
    povm: &Povm,
    tolerance: f64,
) -> Result<(OptimalityCertificate, CMatrix)> {
    let weighted = ensemble.weighted();
    let k = dual_candidate(&weighted, povm);

    let mut dual_gap = 0.0f64;
    let mut comp = 0.0f64;
    for (r, m) in weighted.iter().zip(povm.elements()) {
        let diff = &k - r;
        let vals = linalg::herm_eigenvalues(&diff)?;
        let min_eig = vals.last().copied().unwrap_or(0.0);
        dual_gap = dual_gap.max((-min_eig).max(0.0));
        comp = comp.max(linalg::re_trace_prod(&diff, m).abs());
    }

    let n = weighted.len();
    let mut pairwise = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let x = &weighted[i] - &weighted[j];
            let prod = povm.element(i).dot(&x).dot(povm.element(j));
            pairwise = pairwise.max(linalg::operator_norm(&prod)?);
        }
    }

    let primal = primal_value(ensemble, povm);
    let gap = linalg::trace(&k).re - primal;
    let passed =
        dual_gap <= tolerance && comp <= tolerance && pairwise <= tolerance && gap.abs() <= tolerance;
    Ok((
        OptimalityCertificate {
            dual_feasibility_gap: dual_gap,
            complementarity_residual: comp,
            pairwise_residual: pairwise,
            primal_dual_gap: gap,
            tolerance,
            passed,
        },
        k,
    ))
}

/// Average success probability Σ q_i tr[M_iρ_i] of a POVM on an ensemble.
pub fn primal_value(ensemble: &Ensemble, povm: &Povm) -> f64 {
    ensemble
        .priors()
        .iter()
        .zip(ensemble.states())
        .zip(povm.elements())
        .map(|((q, s), m)| q * linalg::re_trace_prod(m, s.matrix()))
        .sum()
}

/// Check a candidate POVM against the necessary-and-sufficient optimality
/// conditions. One POVM element per state; zero elements are allowed.
pub fn check_optimality(ensemble: &Ensemble, povm: &Povm) -> Result<OptimalityCertificate> {
    check_optimality_with_tol(ensemble, povm, tol::CERT)
}

pub fn check_optimality_with_tol(
    ensemble: &Ensemble,
    povm: &Povm,
    tolerance: f64,
) -> Result<OptimalityCertificate> {
    guard_counts(ensemble, povm)?;
    Ok(certificate_core(ensemble, povm, tolerance)?.0)
}

fn guard_counts(ensemble: &Ensemble, povm: &Povm) -> Result<()> {
    if ensemble.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: ensemble.dim(),
            found: povm.dim(),
        });
    }
    if ensemble.n() != povm.n_outcomes() {
        return Err(Error::WrongCount {
            expected: ensemble.n(),
            found: povm.n_outcomes(),
        });
    }
    Ok(())
}

/// Assemble a [`DiscriminationResult`] for a candidate POVM: certificate,
/// dual candidate, residuals and complementary states.
fn assemble(
    ensemble: &Ensemble,
    povm: Povm,
    tolerance: f64,
    iterations: usize,
) -> Result<DiscriminationResult> {
    let (certificate, k) = certificate_core(ensemble, &povm, tolerance)?;
    let tr_k = linalg::trace(&k).re;
    let n = ensemble.n();
    let weighted = ensemble.weighted();
    let mut residuals = Vec::with_capacity(n);
    let mut complementary = Vec::with_capacity(n);
    for i in 0..n {
        let r = (tr_k - ensemble.prior(i)).max(0.0);
        residuals.push(r);
        if r > tolerance {
            let raw = (&k - &weighted[i]).mapv(|z| z / r);
            complementary.push(repair_state(&raw));
        } else {
            complementary.push(None);
        }
    }
    let p_guess = primal_value(ensemble, &povm);
    let converged = certificate.passed;
    Ok(DiscriminationResult {
        p_guess,
        povm,
        symmetry_operator: k,
        residuals,
        complementary_states: complementary,
        certificate,
        iterations,
        converged,
    })
}

/// Clip and renormalize a near-state so it can be reported as a
/// DensityMatrix; None when it is too degenerate to repair.
fn repair_state(raw: &CMatrix) -> Option<DensityMatrix> {
    let h = linalg::hermitize(raw);
    let (clipped, _) = linalg::clip_negative_eigenvalues(&h).ok()?;
    let tr = linalg::trace(&clipped).re;
    if tr <= 1e-12 {
        return None;
    }
    Some(DensityMatrix::new(clipped.mapv(|z| z / tr)).ok()?)
}

/// Closed-form optimum for two states: p = 1/2 + ‖q1ρ1 − q2ρ2‖₁/2, with the
/// POVM projecting onto the positive eigenspace of X = q1ρ1 − q2ρ2 for the
/// first outcome. The zero eigenspace of X goes to the second element, which
/// makes the construction deterministic.
pub fn helstrom_two_state(ensemble: &Ensemble) -> Result<DiscriminationResult> {
    if ensemble.n() != 2 {
        return Err(Error::WrongCount {
            expected: 2,
            found: ensemble.n(),
        });
    }
    let weighted = ensemble.weighted();
    let x = &weighted[0] - &weighted[1];
    let (vals, vecs) = linalg::herm_eigen(&x)?;
    let d = ensemble.dim();
    let mut m1 = linalg::zeros(d);
    for (k, &lam) in vals.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        for i in 0..d {
            let vi = vecs[[i, k]];
            for j in 0..d {
                m1[[i, j]] += vi * vecs[[j, k]].conj();
            }
        }
    }
    let m1 = linalg::hermitize(&m1);
    let m2 = linalg::identity(d) - &m1;
    let povm = Povm::trusted(vec![m1, m2]);
    assemble(ensemble, povm, tol::CERT, 0)
}

/// Square-root ("pretty good") measurement: M_i = ρ^{−1/2} q_iρ_i ρ^{−1/2}
/// on the support of the average state ρ, with the kernel projector folded
/// into the element of the most likely state (first index on ties) so the
/// POVM is complete on the whole space.
pub fn square_root_measurement(ensemble: &Ensemble) -> Result<Povm> {
    let rho = ensemble.average();
    let s = linalg::psd_power(rho.matrix(), -0.5, tol::SUPPORT)?;
    let supp = linalg::psd_power(rho.matrix(), 0.0, tol::SUPPORT)?;
    let d = ensemble.dim();
    let kernel = linalg::identity(d) - &supp;
    let fold = argmax_prior(ensemble);
    let mut elements = Vec::with_capacity(ensemble.n());
    for (i, w) in ensemble.weighted().iter().enumerate() {
        let mut m = s.dot(w).dot(&s);
        if i == fold {
            m = m + &kernel;
        }
        elements.push(linalg::hermitize(&m));
    }
    Ok(Povm::trusted(elements))
}

fn argmax_prior(ensemble: &Ensemble) -> usize {
    let mut best = 0usize;
    let mut best_q = f64::NEG_INFINITY;
    for (i, &q) in ensemble.priors().iter().enumerate() {
        if q > best_q {
            best_q = q;
            best = i;
        }
    }
    best
}

/// One step of the fixed-point iteration M_i ← G^{−1/2} R_iM_iR_i G^{−1/2}
/// with G = Σ R_jM_jR_j. Returns the completeness deficiency I − ΣM_i (the
/// kernel projector of G), which the caller folds into an element of its
/// choice.
pub(crate) fn fixed_point_step(r: &[CMatrix], m: &mut [CMatrix]) -> Result<CMatrix> {
    let d = r[0].nrows();
    let mut g = linalg::zeros(d);
    for (ri, mi) in r.iter().zip(m.iter()) {
        g = g + ri.dot(mi).dot(ri);
    }
    let g = linalg::hermitize(&g);
    let s = linalg::psd_power(&g, -0.5, tol::SUPPORT)?;
    let mut sum = linalg::zeros(d);
    for (ri, mi) in r.iter().zip(m.iter_mut()) {
        let updated = s.dot(&ri.dot(&*mi).dot(ri)).dot(&s);
        *mi = linalg::hermitize(&updated);
        sum = sum + &*mi;
    }
    Ok(linalg::identity(d) - &sum)
}

/// Iterative minimum-error solver for any number of states in any dimension.
///
/// Starts from the square-root measurement (or a caller seed), repeats the
/// fixed-point update, and checks the optimality certificate periodically.
/// Always returns the final state of the iteration; `converged` mirrors
/// `certificate.passed`, and callers that need an error on failure can use
/// [`DiscriminationResult::require_converged`]. The primal value is
/// non-decreasing along the iteration for well-behaved inputs; a decrease
/// beyond 1e−10 stops the run early with the certificate left failing.
pub fn solve_fixed_point(ensemble: &Ensemble, options: &SolveOptions) -> Result<DiscriminationResult> {
    let weighted = ensemble.weighted();
    let n = ensemble.n();
    let d = ensemble.dim();

    let seed = match &options.seed_povm {
        Some(p) => {
            guard_counts(ensemble, p)?;
            p.clone()
        }
        None => {
            let srm = square_root_measurement(ensemble)?;
            if srm_degenerate(ensemble, &srm) {
                uniform_seed(n, d)
            } else {
                srm
            }
        }
    };

    let mut m: Vec<CMatrix> = seed.elements().to_vec();
    let fold = argmax_prior(ensemble);
    let mut prev_primal = f64::NEG_INFINITY;
    let mut iterations = 0usize;

    loop {
        if iterations >= options.max_iter {
            break;
        }
        let deficiency = fixed_point_step(&weighted, &mut m)?;
        m[fold] = linalg::hermitize(&(&m[fold] + &deficiency));
        iterations += 1;

        let candidate = Povm::trusted(m.clone());
        let primal = primal_value(ensemble, &candidate);
        if primal < prev_primal - 1e-10 {
            // Monotonicity broke beyond roundoff: stop and report as-is.
            break;
        }
        let plateaued = (primal - prev_primal).abs() < 1e-15;
        prev_primal = prev_primal.max(primal);

        if iterations % options.check_every == 0 || iterations == options.max_iter || plateaued {
            let (cert, _) = certificate_core(ensemble, &candidate, options.cert_tol)?;
            if cert.passed {
                return assemble(ensemble, candidate, options.cert_tol, iterations);
            }
            if plateaued && iterations > 50 {
                break;
            }
        }
    }

    let povm = Povm::trusted(m);
    assemble(ensemble, povm, options.cert_tol, iterations)
}

fn srm_degenerate(ensemble: &Ensemble, srm: &Povm) -> bool {
    for (i, el) in srm.elements().iter().enumerate() {
        if ensemble.prior(i) > 1e-12 && linalg::trace(el).re < 1e-14 {
            return true;
        }
    }
    false
}

fn uniform_seed(n: usize, d: usize) -> Povm {
    let f = 1.0 / n as f64;
    Povm::trusted(vec![linalg::identity(d).mapv(|z| z * f); n])
}

/// Geometrically uniform ensemble: d equiprobable states
/// |ψ_α⟩ = Σ_n c_n e^{2πi nα/d}|n⟩ for α = 0..d−1, each taken to `copies`
/// tensor copies. The cyclic phase unitary U = Σ_m e^{2πim/d}|m⟩⟨m| maps
/// state α to state α+1.
pub fn gu_ensemble(coefficients: &[f64], copies: usize, cap: usize) -> Result<Ensemble> {
    let d = coefficients.len();
    if d == 0 {
        return Err(Error::BadCoefficients {
            reason: "empty coefficient vector".into(),
        });
    }
    if coefficients.iter().any(|&x| x < 0.0) {
        return Err(Error::BadCoefficients {
            reason: "coefficients must be nonnegative".into(),
        });
    }
    let norm: f64 = coefficients.iter().map(|x| x * x).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::BadCoefficients {
            reason: format!("squared coefficients sum to {norm}"),
        });
    }
    if copies == 0 {
        return Err(Error::OutOfRange {
            what: "copies",
            value: 0.0,
        });
    }
    let mut total = 1usize;
    for _ in 0..copies {
        total = total.checked_mul(d).unwrap_or(usize::MAX);
        if total > cap {
            return Err(Error::DimensionCapExceeded {
                required: total,
                cap,
            });
        }
    }

    let tau = 2.0 * std::f64::consts::PI / d as f64;
    let mut states = Vec::with_capacity(d);
    for alpha in 0..d {
        let single: Vec<Complex64> = (0..d)
            .map(|n| Complex64::from_polar(coefficients[n], tau * (n * alpha) as f64))
            .collect();
        let mut amps = single.clone();
        for _ in 1..copies {
            let mut next = Vec::with_capacity(amps.len() * d);
            for &a in &amps {
                for &b in &single {
                    next.push(a * b);
                }
            }
            amps = next;
        }
        states.push(DensityMatrix::from_pure(&amps)?);
    }
    Ensemble::equal_priors(states)
}

/// Exact guessing probability for a geometrically uniform ensemble:
/// p = (1/d²)(Σ_η √G_η)² where G_η = Σ_m e^{2πiηm/d} ⟨ψ_m|ψ_0⟩^copies are
/// the eigenvalues of the circulant Gram matrix of the copied states.
///
/// The G_η are real and nonnegative up to roundoff (they are Gram
/// eigenvalues); the square root is the principal branch on the clipped
/// values. The square-root measurement attains this value.
pub fn gu_guessing_probability(coefficients: &[f64], copies: usize) -> Result<f64> {
    let d = coefficients.len();
    if d == 0 {
        return Err(Error::BadCoefficients {
            reason: "empty coefficient vector".into(),
        });
    }
    let norm: f64 = coefficients.iter().map(|x| x * x).sum();
    if (norm - 1.0).abs() > 1e-9 || coefficients.iter().any(|&x| x < 0.0) {
        return Err(Error::BadCoefficients {
            reason: "coefficients must be nonnegative with unit square sum".into(),
        });
    }
    let tau = 2.0 * std::f64::consts::PI / d as f64;
    // Single-copy overlaps g_m = ⟨ψ_m|ψ_0⟩ = Σ_n c_n² e^{−2πi nm/d}.
    let overlaps: Vec<Complex64> = (0..d)
        .map(|m| {
            (0..d)
                .map(|n| {
                    Complex64::from_polar(
                        coefficients[n] * coefficients[n],
                        -tau * (n * m) as f64,
                    )
                })
                .sum()
        })
        .collect();
    let mut total = 0.0f64;
    for eta in 0..d {
        let mut g_eta = Complex64::new(0.0, 0.0);
        for (m, ov) in overlaps.iter().enumerate() {
            g_eta += Complex64::from_polar(1.0, tau * (eta * m) as f64) * ov.powu(copies as u32);
        }
        total += g_eta.re.max(0.0).sqrt();
    }
    Ok((total / d as f64).powi(2))
}

/// Optimal classical guessing probability Σ_y max_x p(x, y) for a joint
/// distribution table indexed `joint[[x, y]]`. Equals 1/N plus the average
/// excess of the per-y maximum above uniform.
pub fn classical_guess(joint: &ndarray::Array2<f64>) -> Result<f64> {
    let mut sum = 0.0f64;
    for &v in joint.iter() {
        if v < -1e-12 {
            return Err(Error::NotDistribution {
                reason: format!("negative entry {v}"),
            });
        }
        sum += v.max(0.0);
    }
    if (sum - 1.0).abs() > tol::TRACE {
        return Err(Error::NotDistribution {
            reason: format!("entries sum to {sum}"),
        });
    }
    let mut p = 0.0f64;
    for y in 0..joint.ncols() {
        let mut best = 0.0f64;
        for x in 0..joint.nrows() {
            best = best.max(joint[[x, y]].max(0.0));
        }
        p += best;
    }
    Ok(p / sum)
}

/// Threshold prior p_* below which the mirror-symmetric optimum stops using
/// the side states symmetrically.
pub fn mirror_symmetric_threshold(theta: f64) -> f64 {
    1.0 / (2.0 + theta.cos() * (theta.cos() + theta.sin()))
}

/// Closed-form guessing probability for the mirror-symmetric triple
/// (side states cosθ|+⟩ ± sinθ|−⟩ with prior p each, |+⟩ with 1 − 2p):
/// p(1 + sin 2θ) above the threshold prior, and
/// 2(1−2p)(1−2p−p·cos2θ)/(2−5p−p·cos2θ) below it. Continuous at p_*.
pub fn mirror_symmetric_guess(p: f64, theta: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::OutOfRange {
            what: "side prior p",
            value: p,
        });
    }
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::OutOfRange {
            what: "mirror angle theta",
            value: theta,
        });
    }
    let p_star = mirror_symmetric_threshold(theta);
    let c2 = (2.0 * theta).cos();
    let s2 = (2.0 * theta).sin();
    if p >= p_star {
        Ok(p * (1.0 + s2))
    } else {
        let one = 1.0 - 2.0 * p;
        Ok(2.0 * one * (one - p * c2) / (2.0 - 5.0 * p - p * c2))
    }
}

/// Decomposition of a certified result as p_guess = 1/N + R with R the mean
/// residual (1/N)Σ r_i.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GeneralFormReport {
    pub uniform_term: f64,
    pub average_residual: f64,
}

pub fn general_form_report(result: &DiscriminationResult) -> Result<GeneralFormReport> {
    if !result.certificate.passed {
        return Err(Error::CertificateFailed {
            worst_residual: result.certificate.worst_residual(),
            tolerance: result.certificate.tolerance,
        });
    }
    let n = result.residuals.len();
    let avg = result.residuals.iter().sum::<f64>() / n as f64;
    Ok(GeneralFormReport {
        uniform_term: 1.0 / n as f64,
        average_residual: avg,
    })
}
