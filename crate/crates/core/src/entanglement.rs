//! Entanglement distribution: an idle ancilla (qubit 0) shares
//! `cos(theta/2)|0,1> + e^(i phi) sin(theta/2)|1,0>` with the root of the
//! tree; the root excitation then spreads through the network and a
//! reversal on the target site `r` post-selects the success branch.
//!
//! The two-qubit state of (ancilla, target) is built from the explicit
//! success-branch amplitudes in the basis `{|0,0>, |0,1>, |1,0>, |1,1>}`
//! (first label: ancilla):
//!
//! * `|0,1>`: `cos(theta/2) sqrt(1-p) f`
//! * `|1,0>`: `e^(i phi) sin(theta/2) sqrt(1-q)`
//! * ancilla in `|0>` with the excitation elsewhere:
//!   weight `cos^2(theta/2)(1-p)(1-q)(1-|f|^2)`, which lands on `|0,0>`.
//!
//! The ancilla never decays.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::protocol::optimal_qmr_strength;
use crate::{Error, Result};

/// 4x4 density matrix of (ancilla, target).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    matrix: [[Complex64; 4]; 4],
}

impl TwoQubitState {
    pub fn from_matrix(matrix: [[Complex64; 4]; 4]) -> Self {
        TwoQubitState { matrix }
    }

    pub fn matrix(&self) -> &[[Complex64; 4]; 4] {
        &self.matrix
    }

    /// 1-based element `rho_ij`, matching the usual X-state labels.
    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[i - 1][j - 1]
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.matrix[i][i].re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.matrix[i][j] - self.matrix[j][i].conj()).norm());
            }
        }
        worst
    }

    /// Only the diagonal, `rho_23/rho_32` and `rho_14/rho_41` are nonzero.
    pub fn is_x_shaped(&self, tol: f64) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || i + j == 3 || self.matrix[i][j].norm() <= tol))
    }

    /// Positive semidefiniteness for X-shaped matrices: non-negative
    /// diagonal and both 2x2 blocks with non-negative determinant.
    pub fn is_physical_x_state(&self, tol: f64) -> bool {
        let d = |i: usize| self.matrix[i][i].re;
        self.is_x_shaped(tol)
            && self.hermiticity_defect() <= tol
            && (self.trace() - 1.0).abs() <= tol
            && (0..4).all(|i| d(i) >= -tol)
            && d(1) * d(2) - self.matrix[1][2].norm_sqr() >= -tol
            && d(0) * d(3) - self.matrix[0][3].norm_sqr() >= -tol
    }
}

fn check_strength(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: v,
            expected: "a measurement strength in [0, 1]",
        })
    }
}

/// `P^ED = (1 - p cos^2(theta/2))(1-q) + cos^2(theta/2) q (1-p)|f|^2`.
pub fn ed_success_probability(theta: f64, p: f64, q: f64, f_abs: f64) -> f64 {
    let c2 = (theta / 2.0).cos().powi(2);
    (1.0 - p * c2) * (1.0 - q) + c2 * q * (1.0 - p) * f_abs * f_abs
}

/// Post-selected (ancilla, target) state for WM strength `p`, reversal
/// strength `q`, and target amplitude `f`.
pub fn distribute(theta: f64, phi: f64, p: f64, q: f64, f: Complex64) -> Result<TwoQubitState> {
    check_strength("p", p)?;
    check_strength("q", q)?;
    build(theta, phi, p, 1.0 - q, f)
}

/// `keep` is `1 - q`, passed directly so that a reversal close to 1 keeps
/// full relative precision.
fn build(theta: f64, phi: f64, p: f64, keep: f64, f: Complex64) -> Result<TwoQubitState> {
    if f.norm().is_nan() || f.norm() > 1.0 + 1e-9 {
        return Err(Error::AmplitudeExceedsUnity(f.norm()));
    }
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let a01 = f * (c * (1.0 - p).sqrt());
    let a10 = Complex64::from_polar(s * keep.sqrt(), phi);
    let elsewhere = c * c * (1.0 - p) * keep * (1.0 - f.norm_sqr()).max(0.0);

    let prob = elsewhere + a01.norm_sqr() + a10.norm_sqr();
    if prob.is_nan() || prob <= 0.0 {
        return Err(Error::ZeroSuccessProbability);
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut m = [[zero; 4]; 4];
    m[0][0] = Complex64::new(elsewhere / prob, 0.0);
    m[1][1] = Complex64::new(a01.norm_sqr() / prob, 0.0);
    m[2][2] = Complex64::new(a10.norm_sqr() / prob, 0.0);
    m[1][2] = a01 * a10.conj() / prob;
    m[2][1] = m[1][2].conj();
    Ok(TwoQubitState { matrix: m })
}

/// Concurrence of an X-shaped state:
/// `2 max{0, |rho_23| - sqrt(rho_11 rho_44), |rho_14| - sqrt(rho_22 rho_33)}`.
pub fn concurrence(state: &TwoQubitState) -> f64 {
    let m = &state.matrix;
    let d = |i: usize| m[i][i].re.max(0.0);
    let a = m[1][2].norm() - (d(0) * d(3)).sqrt();
    let b = m[0][3].norm() - (d(1) * d(2)).sqrt();
    2.0 * a.max(b).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalDistribution {
    pub state: TwoQubitState,
    pub concurrence: f64,
    pub success_probability: f64,
    pub qmr_strength: f64,
}

/// [`distribute`] with `q = 1 - (1-p)|f|^2`.
pub fn optimal_ed(theta: f64, phi: f64, p: f64, f: Complex64) -> Result<OptimalDistribution> {
    let q = optimal_qmr_strength(p, f)?;
    let state = build(theta, phi, p, (1.0 - p) * f.norm_sqr(), f)?;
    Ok(OptimalDistribution {
        state,
        concurrence: concurrence(&state),
        success_probability: optimal_ed_success_probability(theta, p, f.norm()),
        qmr_strength: q,
    })
}

/// `(1-p)|f|^2 (1 + (1-p)(1-|f|^2) cos^2(theta/2))`.
pub fn optimal_ed_success_probability(theta: f64, p: f64, f_abs: f64) -> f64 {
    let c2 = (theta / 2.0).cos().powi(2);
    let f2 = f_abs * f_abs;
    (1.0 - p) * f2 * (1.0 + (1.0 - p) * (1.0 - f2) * c2)
}

/// `2 max{0, cos(theta/2) sin(theta/2)(1-p)|f|^2 / P^ED}`.
pub fn optimal_concurrence_closed(theta: f64, p: f64, f_abs: f64) -> Result<f64> {
    let prob = optimal_ed_success_probability(theta, p, f_abs);
    if prob.is_nan() || prob <= 0.0 {
        return Err(Error::ZeroSuccessProbability);
    }
    let cs = (theta / 2.0).cos() * (theta / 2.0).sin();
    Ok(2.0 * (cs * (1.0 - p) * f_abs * f_abs / prob).max(0.0))
}
