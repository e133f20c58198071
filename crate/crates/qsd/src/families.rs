//! Named state families that recur throughout the examples and tests:
//! trines, isosceles and mirror-symmetric triples, symmetric pure pairs,
//! uniform equatorial fans, and the Pauli operators.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::operator::{DensityMatrix, Ensemble};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pure qubit state cos(polar/2)|0⟩ + e^{i·azimuth} sin(polar/2)|1⟩,
/// i.e. the Bloch-sphere point at the given polar and azimuthal angles.
pub fn bloch_pure(polar: f64, azimuth: f64) -> DensityMatrix {
    let a = c((polar / 2.0).cos(), 0.0);
    let b = Complex64::from_polar((polar / 2.0).sin(), azimuth);
    DensityMatrix::from_pure(&[a, b]).expect("unit amplitudes")
}

/// Three equiprobable pure qubit states at a common polar angle with
/// azimuths +2π/3, 0, −2π/3 (in that order).
pub fn latitude_trine(polar: f64) -> Ensemble {
    let az = [2.0 * std::f64::consts::PI / 3.0, 0.0, -2.0 * std::f64::consts::PI / 3.0];
    let states = az.iter().map(|&phi| bloch_pure(polar, phi)).collect();
    Ensemble::equal_priors(states).expect("three valid states")
}

/// The symmetric trine on the Bloch equator: guessing probability 2/3.
pub fn equatorial_trine() -> Ensemble {
    latitude_trine(std::f64::consts::FRAC_PI_2)
}

/// Three equiprobable pure states in the xz Bloch plane at polar angles
/// (θ0 − aperture, θ0, θ0 + aperture); the middle state is index 1.
///
/// For apertures up to π/2 the optimal measurement ignores the middle state
/// entirely and p_guess = (1 + sin aperture)/3; for wider apertures the
/// optimum saturates at 2/3. Note the aperture is the angle between Bloch
/// vectors, which is twice the angle between the amplitude vectors.
pub fn isosceles_triple(theta0: f64, aperture: f64) -> Ensemble {
    let states = [theta0 - aperture, theta0, theta0 + aperture]
        .iter()
        .map(|&th| bloch_pure(th, 0.0))
        .collect();
    Ensemble::equal_priors(states).expect("three valid states")
}

/// Mirror-symmetric triple: ψ_{1,2} = cosθ|+⟩ ± sinθ|−⟩ with prior p each,
/// plus ψ_3 = |+⟩ with prior 1 − 2p.
pub fn mirror_symmetric_triple(theta: f64, p: f64) -> Result<Ensemble> {
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
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let (ct, st) = (theta.cos(), theta.sin());
    // cosθ|+⟩ ± sinθ|−⟩ in the computational basis.
    let psi1 = [c(s2 * (ct + st), 0.0), c(s2 * (ct - st), 0.0)];
    let psi2 = [c(s2 * (ct - st), 0.0), c(s2 * (ct + st), 0.0)];
    let plus = [c(s2, 0.0), c(s2, 0.0)];
    Ensemble::new(
        vec![p, p, 1.0 - 2.0 * p],
        vec![
            DensityMatrix::from_pure(&psi1)?,
            DensityMatrix::from_pure(&psi2)?,
            DensityMatrix::from_pure(&plus)?,
        ],
    )
}

/// Two equiprobable pure states with real overlap ⟨ψ1|ψ2⟩ = c ∈ [0, 1],
/// arranged symmetrically: ψ_{1,2} = cosβ|0⟩ ± sinβ|1⟩ with cos 2β = c.
pub fn symmetric_pure_pair(overlap: f64) -> Result<Ensemble> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::OutOfRange {
            what: "overlap",
            value: overlap,
        });
    }
    let beta = overlap.acos() / 2.0;
    let psi1 = [c(beta.cos(), 0.0), c(beta.sin(), 0.0)];
    let psi2 = [c(beta.cos(), 0.0), c(-beta.sin(), 0.0)];
    Ensemble::equal_priors(vec![
        DensityMatrix::from_pure(&psi1)?,
        DensityMatrix::from_pure(&psi2)?,
    ])
}

/// The |0⟩ vs |+⟩ pair with equal priors (overlap 1/√2).
pub fn zero_plus_pair() -> Ensemble {
    let zero = DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).expect("valid");
    let plus = DensityMatrix::from_pure(&[c(1.0, 0.0), c(1.0, 0.0)]).expect("valid");
    Ensemble::equal_priors(vec![zero, plus]).expect("two valid states")
}

/// N equiprobable pure states spread uniformly around the Bloch equator,
/// azimuths 2πk/N for k = 0..N−1.
pub fn equatorial_fan(n: usize) -> Result<Ensemble> {
    if n == 0 {
        return Err(Error::WrongCount {
            expected: 1,
            found: 0,
        });
    }
    let states = (0..n)
        .map(|k| {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            bloch_pure(std::f64::consts::FRAC_PI_2, phi)
        })
        .collect();
    Ensemble::equal_priors(states)
}

pub fn pauli_x() -> CMatrix {
    ndarray::array![[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]]
}

pub fn pauli_y() -> CMatrix {
    ndarray::array![[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]]
}

pub fn pauli_z() -> CMatrix {
    ndarray::array![[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]]
}

/// diag(1, e^{iφ}).
pub fn phase_gate(phi: f64) -> CMatrix {
    let mut m = crate::linalg::zeros(2);
    m[[0, 0]] = c(1.0, 0.0);
    m[[1, 1]] = Complex64::from_polar(1.0, phi);
    m
}
