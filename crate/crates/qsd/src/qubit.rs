//! Geometric minimum-error solver for qubit ensembles.
//!
//! For qubits the dual program reduces to a problem in the Bloch ball: with
//! c_i = q_i v_i (the prior-weighted Bloch vectors), find the point b and the
//! smallest value t such that |b − c_i| ≤ t − q_i for every i. That is the
//! smallest enclosing ball of the balls Ball(c_i, q_i); its radius t is the
//! guessing probability and the optimal POVM elements point along
//! w_i = (c_i − b)/(t − q_i), which are unit vectors exactly for the states
//! whose constraint is active.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::minerror::{
    check_optimality, primal_value, solve_fixed_point, DiscriminationResult, OptimalityCertificate,
    SolveOptions,
};
use crate::operator::{BlochVector, Ensemble, Povm};
use num_complex::Complex64;

/// One dual constraint: the ball of radius `radius` around `center` in
/// Bloch coordinates.
#[derive(Debug, Clone, serde::Serialize)]
pub struct WeightedBlochBall {
    pub center: BlochVector,
    pub radius: f64,
}

/// Smallest ball enclosing all constraint balls. `radius` is the optimal
/// guessing probability; `active` lists the constraints met with equality.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EnclosingBall {
    pub center: BlochVector,
    pub radius: f64,
    pub active: Vec<usize>,
}

/// Output of [`solve_qubit`]: geometry plus a certified POVM.
#[derive(Debug, Clone)]
pub struct QubitSolution {
    pub p_guess: f64,
    pub povm: Povm,
    pub ball: EnclosingBall,
    pub certificate: OptimalityCertificate,
    /// True when the geometric reconstruction failed its residual check and
    /// the iterative solver supplied the POVM instead.
    pub used_fallback: bool,
}

/// Map an ensemble of qubit states to its dual constraint balls
/// Ball(q_i v_i, q_i).
pub fn dual_reduction(ensemble: &Ensemble) -> Result<Vec<WeightedBlochBall>> {
    if ensemble.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: ensemble.dim(),
        });
    }
    let mut balls = Vec::with_capacity(ensemble.n());
    for i in 0..ensemble.n() {
        let q = ensemble.prior(i);
        let v = ensemble.state(i).bloch()?;
        balls.push(WeightedBlochBall {
            center: BlochVector::new(q * v.x, q * v.y, q * v.z),
            radius: q,
        });
    }
    Ok(balls)
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

fn scale3(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Solve the k×k linear system M x = r by Gaussian elimination with partial
/// pivoting; None when M is singular at the given threshold. k ≤ 3 here.
fn solve_small(m: &[Vec<f64>], r: &[f64], pivot_tol: f64) -> Option<Vec<f64>> {
    let k = r.len();
    let mut a: Vec<Vec<f64>> = m.iter().cloned().collect();
    let mut x: Vec<f64> = r.to_vec();
    for col in 0..k {
        let mut piv = col;
        for row in col + 1..k {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col].abs() <= pivot_tol {
            return None;
        }
        a.swap(col, piv);
        x.swap(col, piv);
        for row in col + 1..k {
            let f = a[row][col] / a[col][col];
            for c in col..k {
                a[row][c] -= f * a[col][c];
            }
            x[row] -= f * x[col];
        }
    }
    for col in (0..k).rev() {
        let mut s = x[col];
        for c in col + 1..k {
            s -= a[col][c] * x[c];
        }
        x[col] = s / a[col][col];
    }
    Some(x)
}

struct Candidate {
    t: f64,
    b: [f64; 3],
    subset: Vec<usize>,
}

/// Exact smallest enclosing ball of a family of balls in the Bloch space.
///
/// The optimal center is a convex combination of at most four active ball
/// centers, so enumerating support subsets of sizes one through four and
/// solving each subset's equality system finds the optimum. Candidates are
/// filtered by global feasibility; the smallest radius wins and ties prefer
/// the lexicographically smallest center, which makes the result
/// deterministic.
pub fn min_enclosing_ball_of_balls(balls: &[WeightedBlochBall]) -> Result<EnclosingBall> {
    if balls.is_empty() {
        return Err(Error::WrongCount {
            expected: 1,
            found: 0,
        });
    }
    let n = balls.len();
    let centers: Vec<[f64; 3]> = balls.iter().map(|b| b.center.as_array()).collect();
    let radii: Vec<f64> = balls.iter().map(|b| b.radius).collect();
    let scale = 1.0f64.max(
        centers.iter().map(|c| norm3(*c)).fold(0.0, f64::max)
            + radii.iter().cloned().fold(0.0, f64::max),
    );
    let slack = 1e-11 * scale;

    let feasible = |b: [f64; 3], t: f64| -> bool {
        (0..n).all(|j| norm3(sub3(b, centers[j])) <= t - radii[j] + slack)
    };

    let mut best: Option<Candidate> = None;
    let mut consider = |t: f64, b: [f64; 3], subset: &[usize]| {
        if !t.is_finite() || !feasible(b, t) {
            return;
        }
        let better = match &best {
            None => true,
            Some(cur) => {
                if t < cur.t - 1e-12 * scale {
                    true
                } else if t > cur.t + 1e-12 * scale {
                    false
                } else {
                    lex_less(b, cur.b)
                }
            }
        };
        if better {
            best = Some(Candidate {
                t,
                b,
                subset: subset.to_vec(),
            });
        }
    };

    // Size-one subsets: one ball contains all others.
    for i in 0..n {
        consider(radii[i], centers[i], &[i]);
    }

    // Larger subsets: all constraints in the subset active.
    let max_k = 4.min(n);
    let mut subset = Vec::new();
    enumerate_subsets(n, max_k, 0, &mut subset, &mut |s: &[usize]| {
        if s.len() < 2 {
            return;
        }
        for (t, b) in subset_candidates(s, &centers, &radii, scale) {
            consider(t, b, s);
        }
    });

    let chosen = best.ok_or(Error::Infeasible {
        reason: "no feasible enclosing ball candidate".into(),
    })?;
    // Activity measured on the chosen ball, over all constraints.
    let active: Vec<usize> = (0..n)
        .filter(|&j| {
            let slackness = (chosen.t - radii[j]) - norm3(sub3(chosen.b, centers[j]));
            slackness.abs() <= 1e-7 * scale
        })
        .collect();
    let _ = chosen.subset;
    Ok(EnclosingBall {
        center: BlochVector::from_array(chosen.b),
        radius: chosen.t,
        active,
    })
}

fn lex_less(a: [f64; 3], b: [f64; 3]) -> bool {
    for k in 0..3 {
        if a[k] < b[k] - 1e-15 {
            return true;
        }
        if a[k] > b[k] + 1e-15 {
            return false;
        }
    }
    false
}

fn enumerate_subsets(
    n: usize,
    max_k: usize,
    start: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if current.len() >= 2 {
        visit(current);
    }
    if current.len() == max_k {
        return;
    }
    for i in start..n {
        current.push(i);
        enumerate_subsets(n, max_k, i + 1, current, visit);
        current.pop();
    }
}

/// Candidates for a subset whose constraints all hold with equality. The
/// center is parametrized as b = c₀ + V y over the affine hull of the
/// subset's centers; pairwise differences of the equality equations are
/// linear in (y, t), so y(t) is affine and the anchor equality closes a
/// quadratic in t.
fn subset_candidates(
    s: &[usize],
    centers: &[[f64; 3]],
    radii: &[f64],
    scale: f64,
) -> Vec<(f64, [f64; 3])> {
    let k = s.len();
    let c0 = centers[s[0]];
    let q0 = radii[s[0]];
    let diffs: Vec<[f64; 3]> = s[1..].iter().map(|&i| sub3(centers[i], c0)).collect();

    // Orthonormal basis of span{diffs}; degenerate subsets are covered by
    // smaller ones, so bail out on rank deficiency.
    let mut basis: Vec<[f64; 3]> = Vec::new();
    for d in &diffs {
        let mut v = *d;
        for e in &basis {
            let p = dot3(v, *e);
            v = sub3(v, scale3(*e, p));
        }
        let nv = norm3(v);
        if nv <= 1e-10 * scale {
            return Vec::new();
        }
        basis.push(scale3(v, 1.0 / nv));
    }
    let dim = basis.len();
    debug_assert_eq!(dim, k - 1);

    // A y = rhs0 + t rhs1, rows indexed by the non-anchor subset members.
    let mut a_rows: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let mut rhs0 = Vec::with_capacity(dim);
    let mut rhs1 = Vec::with_capacity(dim);
    for (row, &i) in s[1..].iter().enumerate() {
        let d = diffs[row];
        a_rows.push(basis.iter().map(|e| 2.0 * dot3(d, *e)).collect());
        let ci = centers[i];
        let qi = radii[i];
        rhs0.push((dot3(ci, ci) - dot3(c0, c0)) - (qi * qi - q0 * q0) - 2.0 * dot3(d, c0));
        rhs1.push(2.0 * (qi - q0));
    }
    let pivot_tol = 1e-12 * scale;
    let y0 = match solve_small(&a_rows, &rhs0, pivot_tol) {
        Some(v) => v,
        None => return Vec::new(),
    };
    let y1 = match solve_small(&a_rows, &rhs1, pivot_tol) {
        Some(v) => v,
        None => return Vec::new(),
    };

    // |y0 + t y1|² = (t − q0)².
    let aa: f64 = y1.iter().map(|v| v * v).sum::<f64>() - 1.0;
    let bb: f64 = 2.0 * (y0.iter().zip(&y1).map(|(u, v)| u * v).sum::<f64>() + q0);
    let cc: f64 = y0.iter().map(|v| v * v).sum::<f64>() - q0 * q0;

    let mut roots = Vec::new();
    if aa.abs() < 1e-14 {
        if bb.abs() > 1e-14 {
            roots.push(-cc / bb);
        }
    } else {
        let disc = bb * bb - 4.0 * aa * cc;
        if disc >= -1e-12 * scale * scale {
            let sq = disc.max(0.0).sqrt();
            // Numerically stable pair of quadratic roots.
            let qterm = -0.5 * (bb + bb.signum() * sq);
            if qterm.abs() > 0.0 {
                roots.push(qterm / aa);
                roots.push(cc / qterm);
            } else {
                roots.push(0.0);
            }
        }
    }

    let t_floor = s.iter().map(|&i| radii[i]).fold(f64::NEG_INFINITY, f64::max);
    let mut out = Vec::new();
    for t in roots {
        if !t.is_finite() || t < t_floor - 1e-12 * scale {
            continue;
        }
        let mut b = c0;
        for (e, (u0, u1)) in basis.iter().zip(y0.iter().zip(&y1)) {
            b = add3(b, scale3(*e, u0 + t * u1));
        }
        out.push((t, b));
    }
    out
}

/// Nonnegative least squares min ‖A x − rhs‖ with x ≥ 0, by the
/// Lawson-Hanson active-set method. Ties in the gradient pick the lowest
/// index, so the run is deterministic.
fn nnls(a: &[Vec<f64>], rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let rows = rhs.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut x = vec![0.0f64; cols];
    let mut passive = vec![false; cols];

    let residual = |x: &[f64]| -> Vec<f64> {
        (0..rows)
            .map(|r| rhs[r] - (0..cols).map(|c| a[r][c] * x[c]).sum::<f64>())
            .collect()
    };

    let ls_on_passive = |passive: &[bool]| -> Option<Vec<f64>> {
        let idx: Vec<usize> = (0..cols).filter(|&c| passive[c]).collect();
        if idx.is_empty() {
            return Some(vec![0.0; cols]);
        }
        // Normal equations on the passive columns; sizes stay at most 4x4.
        let m = idx.len();
        let mut g = vec![vec![0.0f64; m]; m];
        let mut r = vec![0.0f64; m];
        for (p, &cp) in idx.iter().enumerate() {
            for (q, &cq) in idx.iter().enumerate() {
                g[p][q] = (0..rows).map(|row| a[row][cp] * a[row][cq]).sum();
            }
            r[p] = (0..rows).map(|row| a[row][cp] * rhs[row]).sum();
        }
        let sol = solve_small(&g, &r, 1e-14)?;
        let mut z = vec![0.0f64; cols];
        for (p, &cp) in idx.iter().enumerate() {
            z[cp] = sol[p];
        }
        Some(z)
    };

    for _outer in 0..(3 * cols.max(1) + 10) {
        let res = residual(&x);
        let mut grad = vec![0.0f64; cols];
        for c in 0..cols {
            grad[c] = (0..rows).map(|r| a[r][c] * res[r]).sum();
        }
        let mut pick = None;
        let mut best = 1e-12;
        for c in 0..cols {
            if !passive[c] && grad[c] > best {
                best = grad[c];
                pick = Some(c);
            }
        }
        let Some(enter) = pick else { break };
        passive[enter] = true;

        loop {
            let Some(z) = ls_on_passive(&passive) else {
                return Err(Error::ReconstructionFailed { residual: f64::MAX });
            };
            let mut alpha = 1.0f64;
            let mut blocker = None;
            for c in 0..cols {
                if passive[c] && z[c] <= 0.0 {
                    let step = x[c] / (x[c] - z[c]);
                    if step < alpha {
                        alpha = step;
                        blocker = Some(c);
                    }
                }
            }
            match blocker {
                None => {
                    x = z;
                    break;
                }
                Some(bk) => {
                    for c in 0..cols {
                        if passive[c] {
                            x[c] += alpha * (z[c] - x[c]);
                        }
                    }
                    x[bk] = 0.0;
                    passive[bk] = false;
                }
            }
        }
    }
    let res = residual(&x);
    let rnorm = res.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok((x, rnorm))
}

/// Rebuild the optimal POVM from the enclosing-ball geometry. Every element
/// is a_i (I + w_i·σ)/2 with w_i = (c_i − b)/(t − q_i); inactive constraints
/// get zero elements and the weights a_i solve Σa_i = 2, Σa_i w_i = 0 by
/// nonnegative least squares. Fails with `ReconstructionFailed` when the
/// weight system cannot be met to within 1e−7.
pub fn reconstruct_povm(balls: &[WeightedBlochBall], ball: &EnclosingBall) -> Result<Povm> {
    let n = balls.len();
    let b = ball.center.as_array();
    let t = ball.radius;
    let scale = 1.0f64.max(t);

    // Guessing the most likely state is optimal when its ball already
    // encloses the rest; the gradient directions degenerate there.
    let i_max = (0..n)
        .max_by(|&i, &j| {
            balls[i]
                .radius
                .partial_cmp(&balls[j].radius)
                .unwrap()
                .then(j.cmp(&i))
        })
        .unwrap_or(0);
    if t - balls[i_max].radius <= 1e-9 * scale {
        let mut elements = vec![linalg::zeros(2); n];
        elements[i_max] = linalg::identity(2);
        return Ok(Povm::trusted(elements));
    }

    let mut directions = Vec::with_capacity(n);
    let mut active = Vec::new();
    for (i, wb) in balls.iter().enumerate() {
        let w = scale3(sub3(wb.center.as_array(), b), 1.0 / (t - wb.radius));
        if norm3(w) >= 1.0 - 1e-7 {
            active.push(i);
        }
        directions.push(w);
    }
    if active.is_empty() {
        return Err(Error::ReconstructionFailed { residual: f64::MAX });
    }

    // Rows: completeness weight, then the three Bloch components.
    let mut a = vec![vec![0.0f64; active.len()]; 4];
    for (col, &i) in active.iter().enumerate() {
        a[0][col] = 1.0;
        a[1][col] = directions[i][0];
        a[2][col] = directions[i][1];
        a[3][col] = directions[i][2];
    }
    let rhs = [2.0, 0.0, 0.0, 0.0];
    let (weights, rnorm) = nnls(&a, &rhs)?;
    if rnorm > 1e-7 {
        return Err(Error::ReconstructionFailed { residual: rnorm });
    }

    let mut elements = vec![linalg::zeros(2); n];
    for (col, &i) in active.iter().enumerate() {
        elements[i] = bloch_element(weights[col], directions[i]);
    }
    // Absorb the residual completeness deviation before validation.
    let mut sum = linalg::zeros(2);
    for e in &elements {
        sum = sum + e;
    }
    let deviation = linalg::max_abs_diff(&sum, &linalg::identity(2));
    if deviation > 1e-7 {
        return Err(Error::ReconstructionFailed {
            residual: deviation,
        });
    }
    let first_active = active[0];
    elements[first_active] =
        linalg::hermitize(&(&elements[first_active] + &(linalg::identity(2) - &sum)));
    Povm::new(elements).map_err(|_| Error::ReconstructionFailed {
        residual: deviation,
    })
}

/// a (I + w·σ)/2 as a matrix.
fn bloch_element(a: f64, w: [f64; 3]) -> CMatrix {
    let h = 0.5 * a;
    let mut m = linalg::zeros(2);
    m[[0, 0]] = Complex64::new(h * (1.0 + w[2]), 0.0);
    m[[1, 1]] = Complex64::new(h * (1.0 - w[2]), 0.0);
    m[[0, 1]] = Complex64::new(h * w[0], -h * w[1]);
    m[[1, 0]] = Complex64::new(h * w[0], h * w[1]);
    m
}

/// Minimum-error discrimination of qubit ensembles through the enclosing
/// ball geometry, with the fixed-point solver as a fallback when the
/// geometric reconstruction does not certify.
pub fn solve_qubit(ensemble: &Ensemble) -> Result<QubitSolution> {
    let balls = dual_reduction(ensemble)?;
    let ball = min_enclosing_ball_of_balls(&balls)?;

    let direct = reconstruct_povm(&balls, &ball).and_then(|povm| {
        let cert = check_optimality(ensemble, &povm)?;
        if cert.passed {
            Ok((povm, cert))
        } else {
            Err(Error::ReconstructionFailed {
                residual: cert.worst_residual(),
            })
        }
    });

    match direct {
        Ok((povm, certificate)) => Ok(QubitSolution {
            p_guess: primal_value(ensemble, &povm),
            povm,
            ball,
            certificate,
            used_fallback: false,
        }),
        Err(Error::ReconstructionFailed { .. }) => {
            let r: DiscriminationResult =
                solve_fixed_point(ensemble, &SolveOptions::default())?.require_converged()?;
            Ok(QubitSolution {
                p_guess: r.p_guess,
                povm: r.povm,
                ball,
                certificate: r.certificate,
                used_fallback: true,
            })
        }
        Err(e) => Err(e),
    }
}
