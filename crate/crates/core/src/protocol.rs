//! Weak measurement, evolution, optimal reversal and phase correction for
//! state transfer from the root to a target site.
//!
//! With `f = C_n(t) / sqrt(2^(n-1))` the amplitude left on the target site,
//! the success branch of the protocol (neither partial measurement
//! collapses) has three mutually orthogonal pieces:
//!
//! * vacuum, amplitude `cos(theta/2) sqrt(1-q)`;
//! * excitation on the target, amplitude `e^(i phi) sin(theta/2) sqrt(1-p) f`;
//! * excitation anywhere else, including the baths, with weight
//!   `sin^2(theta/2) (1-p)(1-q)(1-|f|^2)`.
//!
//! Tracing out everything except the target qubit gives its reduced state.
//! The optimal reversal `q = 1 - (1-p)|f|^2` equalizes the first two
//! amplitudes, and the phase shift `diag(1, e^(-i arg f))` on the target
//! restores the encoded phase.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::dynamics::AmplitudeTrajectory;
use crate::quadrature::BlochRule;
use crate::tree::TreeSpec;
use crate::{Error, Result};

/// Tolerance on `|f| <= 1` before a transfer amplitude is rejected.
const UNIT_SLACK: f64 = 1e-9;

/// `cos(theta/2)|0> + e^(i phi) sin(theta/2)|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    theta: f64,
    phi: f64,
}

impl QubitState {
    /// `theta` in `[0, pi]`; `phi` is reduced into `[0, 2pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                expected: "a polar angle in [0, pi]",
            });
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phi",
                value: phi,
                expected: "a finite azimuth",
            });
        }
        Ok(QubitState {
            theta,
            phi: num_traits::Euclid::rem_euclid(&phi, &(2.0 * PI)),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn cos_half(&self) -> f64 {
        (self.theta / 2.0).cos()
    }

    pub fn sin_half(&self) -> f64 {
        (self.theta / 2.0).sin()
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [
            Complex64::new(self.cos_half(), 0.0),
            Complex64::from_polar(self.sin_half(), self.phi),
        ]
    }
}

/// Hermitian 2x2 density matrix in the `{|0>, |1>}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensity(pub [[Complex64; 2]; 2]);

impl QubitDensity {
    pub fn trace(&self) -> f64 {
        self.0[0][0].re + self.0[1][1].re
    }

    /// `<psi|rho|psi>`.
    pub fn expectation(&self, psi: &[Complex64; 2]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                acc += psi[a].conj() * self.0[a][b] * psi[b];
            }
        }
        acc.re
    }

    /// Hermitian, unit trace, and non-negative eigenvalues within `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        let r = &self.0;
        let herm = (r[0][1] - r[1][0].conj()).norm() <= tol
            && r[0][0].im.abs() <= tol
            && r[1][1].im.abs() <= tol;
        let det = r[0][0].re * r[1][1].re - r[0][1].norm_sqr();
        herm && (self.trace() - 1.0).abs() <= tol
            && r[0][0].re >= -tol
            && r[1][1].re >= -tol
            && det >= -tol
    }
}

/// Result of the weak measurement on the sender.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakMeasurementOutcome {
    /// Normalized post-measurement amplitudes on `{|0>, |1>}`.
    pub state: [Complex64; 2],
    pub success_probability: f64,
}

fn check_wm_strength(p: f64) -> Result<()> {
    if (0.0..1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "p",
            value: p,
            expected: "a weak-measurement strength in [0, 1)",
        })
    }
}

fn check_amplitude(f_abs: f64) -> Result<()> {
    if f_abs.is_finite() && (0.0..=1.0 + UNIT_SLACK).contains(&f_abs) {
        Ok(())
    } else {
        Err(Error::AmplitudeExceedsUnity(f_abs))
    }
}

/// Apply `|0><0| + sqrt(1-p)|1><1|` and renormalize.
pub fn weak_measurement(state: &QubitState, p: f64) -> Result<WeakMeasurementOutcome> {
    check_wm_strength(p)?;
    let [a0, a1] = state.amplitudes();
    let a1 = a1 * (1.0 - p).sqrt();
    let prob = a0.norm_sqr() + a1.norm_sqr();
    let s = prob.sqrt();
    Ok(WeakMeasurementOutcome {
        state: [a0 / s, a1 / s],
        success_probability: prob,
    })
}

/// `q = 1 - (1-p)|f|^2`.
pub fn optimal_qmr_strength(p: f64, f: Complex64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            expected: "a measurement strength in [0, 1]",
        });
    }
    check_amplitude(f.norm())?;
    Ok((1.0 - (1.0 - p) * f.norm_sqr().min(1.0)).clamp(0.0, 1.0))
}

/// Protocol settings: WM strength and the receiving site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    wm_strength: f64,
    target_site: usize,
    target_generation: usize,
}

impl ProtocolParams {
    pub fn new(wm_strength: f64, target_site: usize, tree: &TreeSpec) -> Result<Self> {
        check_wm_strength(wm_strength)?;
        Ok(ProtocolParams {
            wm_strength,
            target_site,
            target_generation: tree.generation_of(target_site)?,
        })
    }

    pub fn wm_strength(&self) -> f64 {
        self.wm_strength
    }

    pub fn target_site(&self) -> usize {
        self.target_site
    }

    pub fn target_generation(&self) -> usize {
        self.target_generation
    }
}

/// Which state the received qubit is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FidelityReference {
    /// The encoded state before any measurement.
    #[default]
    Original,
    /// The sender's state right after the weak measurement.
    PostMeasurement,
}

/// Unnormalized success branch, reduced to what the target qubit can see.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessBranch {
    pub vacuum: Complex64,
    pub target: Complex64,
    /// Norm carried by excitations away from the target (other sites and
    /// the baths). These components have the target in `|0>` and are
    /// orthogonal to the vacuum.
    pub elsewhere: f64,
}

impl SuccessBranch {
    /// Branch after WM(`p`), evolution to amplitude `f`, and QMR(`q`); no
    /// phase correction.
    pub fn new(state: &QubitState, p: f64, q: f64, f: Complex64) -> Self {
        let c = state.cos_half();
        let s = state.sin_half();
        SuccessBranch {
            vacuum: Complex64::new(c * (1.0 - q).sqrt(), 0.0),
            target: Complex64::from_polar(s * (1.0 - p).sqrt(), state.phi()) * f,
            elsewhere: s * s * (1.0 - p) * (1.0 - q) * (1.0 - f.norm_sqr()).max(0.0),
        }
    }

    /// Same branch under optimal `q`, divided by the common factor
    /// `sqrt(1-p)|f|` and phase-corrected. Finite even when `f = 0`, where it
    /// is the limit of the conditional state.
    pub fn optimal_scaled(state: &QubitState, p: f64, f_abs: f64) -> Self {
        let c = state.cos_half();
        let s = state.sin_half();
        SuccessBranch {
            vacuum: Complex64::new(c, 0.0),
            target: Complex64::from_polar(s, state.phi()),
            elsewhere: s * s * (1.0 - p) * (1.0 - f_abs * f_abs).max(0.0),
        }
    }

    /// Multiply the target amplitude by `e^(-i phase)`.
    pub fn phase_corrected(mut self, phase: f64) -> Self {
        self.target *= Complex64::from_polar(1.0, -phase);
        self
    }

    pub fn probability(&self) -> f64 {
        self.vacuum.norm_sqr() + self.target.norm_sqr() + self.elsewhere
    }

    /// Partial trace onto the target qubit, normalized.
    pub fn target_state(&self) -> Result<QubitDensity> {
        let prob = self.probability();
        if prob.is_nan() || prob <= 0.0 {
            return Err(Error::ZeroSuccessProbability);
        }
        let v = self.vacuum;
        let r = self.target;
        Ok(QubitDensity([
            [
                Complex64::new((v.norm_sqr() + self.elsewhere) / prob, 0.0),
                v * r.conj() / prob,
            ],
            [
                r * v.conj() / prob,
                Complex64::new(r.norm_sqr() / prob, 0.0),
            ],
        ]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferOutcome {
    pub reduced_dm: QubitDensity,
    pub success_probability: f64,
    pub fidelity: f64,
    pub transfer_amplitude: Complex64,
    pub qmr_strength: f64,
}

fn reference_state(
    state: &QubitState,
    p: f64,
    reference: FidelityReference,
) -> Result<[Complex64; 2]> {
    Ok(match reference {
        FidelityReference::Original => state.amplitudes(),
        FidelityReference::PostMeasurement => weak_measurement(state, p)?.state,
    })
}

/// Run the protocol for a given transfer amplitude `f`.
pub fn transfer_with_amplitude(
    state: &QubitState,
    p: f64,
    f: Complex64,
    reference: FidelityReference,
) -> Result<TransferOutcome> {
    check_wm_strength(p)?;
    let q = optimal_qmr_strength(p, f)?;
    let branch = SuccessBranch::new(state, p, q, f).phase_corrected(f.arg());
    let success_probability = branch.probability();
    if success_probability.is_nan() || success_probability <= 0.0 {
        return Err(Error::ZeroSuccessProbability);
    }
    let reduced_dm = branch.target_state()?;
    let fidelity = reduced_dm.expectation(&reference_state(state, p, reference)?);
    Ok(TransferOutcome {
        reduced_dm,
        success_probability,
        fidelity,
        transfer_amplitude: f,
        qmr_strength: q,
    })
}

/// Protocol outcome at sample `k` of `trajectory`, compared against the
/// original encoded state.
pub fn transfer(
    state: &QubitState,
    params: &ProtocolParams,
    trajectory: &AmplitudeTrajectory,
    k: usize,
) -> Result<TransferOutcome> {
    let f = trajectory.transfer_amplitude(k, params.target_generation);
    transfer_with_amplitude(state, params.wm_strength, f, FidelityReference::Original)
}

/// Conditional fidelity under optimal reversal, continuous at `f = 0`.
pub fn conditional_fidelity(
    state: &QubitState,
    p: f64,
    f_abs: f64,
    reference: FidelityReference,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            expected: "a measurement strength in [0, 1]",
        });
    }
    check_amplitude(f_abs)?;
    let rho = SuccessBranch::optimal_scaled(state, p, f_abs).target_state()?;
    let psi = match reference {
        FidelityReference::Original => state.amplitudes(),
        // p = 1 is allowed here as a limit; the reference is then |0>.
        FidelityReference::PostMeasurement if p >= 1.0 => {
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        }
        FidelityReference::PostMeasurement => weak_measurement(state, p)?.state,
    };
    Ok(rho.expectation(&psi))
}

/// Target state with no measurements (`p = q = 0`) after the phase shift.
pub fn natural_target_state(state: &QubitState, f: Complex64) -> Result<QubitDensity> {
    check_amplitude(f.norm())?;
    SuccessBranch::new(state, 0.0, 0.0, f)
        .phase_corrected(f.arg())
        .target_state()
}

/// `x = (1-p)(1-|f|^2)`.
fn damping(p: f64, f_abs: f64) -> f64 {
    ((1.0 - p) * (1.0 - f_abs * f_abs)).max(0.0)
}

/// Bloch-averaged fidelity under optimal reversal:
/// `1/2 + 1/x - ln(1+x)/x^2`, `x = (1-p)(1-|f|^2)`, equal to 1 at `x = 0`.
pub fn average_fidelity_closed(p: f64, f_abs: f64) -> f64 {
    let x = damping(p, f_abs);
    if x < 1e-4 {
        // 1 - x/3 + x^2/4 - x^3/5 + x^4/6 - ...
        1.0 - x * (1.0 / 3.0 - x * (1.0 / 4.0 - x * (1.0 / 5.0 - x / 6.0)))
    } else {
        0.5 + 1.0 / x - x.ln_1p() / (x * x)
    }
}

/// Bloch average of the constructed conditional fidelity by quadrature.
pub fn average_fidelity_numeric(p: f64, f_abs: f64, reference: FidelityReference) -> Result<f64> {
    average_fidelity_numeric_with(p, f_abs, reference, &BlochRule::default())
}

pub fn average_fidelity_numeric_with(
    p: f64,
    f_abs: f64,
    reference: FidelityReference,
    rule: &BlochRule,
) -> Result<f64> {
    // validate once so the integrand cannot fail
    conditional_fidelity(&QubitState::new(0.0, 0.0)?, p, f_abs, reference)?;
    let value = rule.average(|theta, phi| {
        let state = QubitState::new(theta.clamp(0.0, PI), phi).expect("quadrature node");
        conditional_fidelity(&state, p, f_abs, reference).unwrap_or(f64::NAN)
    });
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::QuadratureFailure)
    }
}

/// Bloch-averaged fidelity with no measurements: `1/2 + |f|/3 + |f|^2/6`.
pub fn average_fidelity_natural(f_abs: f64) -> f64 {
    (3.0 + 2.0 * f_abs + f_abs * f_abs) / 6.0
}

/// Success probability under optimal reversal for a specific input state:
/// `(1-p)|f|^2 (1 + (1-p) sin^2(theta/2)(1-|f|^2))`.
pub fn success_probability(state: &QubitState, p: f64, f_abs: f64) -> f64 {
    let s2 = state.sin_half().powi(2);
    (1.0 - p) * f_abs * f_abs * (1.0 + s2 * damping(p, f_abs))
}

/// Bloch average of [`success_probability`]:
/// `(1/2)(1-p)|f|^2 (2 + (1-p)(1-|f|^2))`.
pub fn average_success_probability(p: f64, f_abs: f64) -> f64 {
    0.5 * (1.0 - p) * f_abs * f_abs * (2.0 + damping(p, f_abs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, LN_2};

    fn st(theta: f64, phi: f64) -> QubitState {
        QubitState::new(theta, phi).unwrap()
    }

    #[test]
    fn state_validation() {
        assert!(QubitState::new(-0.1, 0.0).is_err());
        assert!(QubitState::new(3.5, 0.0).is_err());
        assert!(QubitState::new(1.0, f64::INFINITY).is_err());
        assert!((st(1.0, -FRAC_PI_2).phi() - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn weak_measurement_cases() {
        let s = st(0.7, 1.3);
        let out = weak_measurement(&s, 0.0).unwrap();
        assert_eq!(out.success_probability, 1.0);
        assert!((out.state[1] - s.amplitudes()[1]).norm() < 1e-15);

        let out = weak_measurement(&st(PI, 0.4), 0.3).unwrap();
        assert!((out.success_probability - 0.7).abs() < 1e-15);
        assert!((out.state[1].norm() - 1.0).abs() < 1e-15);

        let out = weak_measurement(&st(FRAC_PI_2, 0.0), 0.6).unwrap();
        assert!((out.success_probability - 0.7).abs() < 1e-15);

        assert!(weak_measurement(&s, 1.0).is_err());
        assert!(weak_measurement(&s, -0.1).is_err());
    }

    #[test]
    fn optimal_reversal() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(optimal_qmr_strength(0.0, one).unwrap(), 0.0);
        assert!((optimal_qmr_strength(1.0 - 1e-12, one).unwrap() - 1.0).abs() < 1e-11);
        let f = Complex64::from_polar(0.5f64.sqrt(), 0.3);
        assert!((optimal_qmr_strength(0.2, f).unwrap() - 0.6).abs() < 1e-15);
        assert!(matches!(
            optimal_qmr_strength(0.2, Complex64::new(1.1, 0.0)),
            Err(Error::AmplitudeExceedsUnity(_))
        ));
    }

    #[test]
    fn lossless_transfer_is_perfect() {
        let out = transfer_with_amplitude(
            &st(1.1, 2.0),
            0.0,
            Complex64::new(1.0, 0.0),
            FidelityReference::Original,
        )
        .unwrap();
        assert!((out.fidelity - 1.0).abs() < 1e-14);
        assert!((out.success_probability - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ground_state_is_recovered() {
        let f = Complex64::from_polar(0.3, -0.8);
        let out =
            transfer_with_amplitude(&st(0.0, 0.0), 0.4, f, FidelityReference::Original).unwrap();
        // F = (1-q)/P with P = (1-q) for theta = 0
        assert!((out.fidelity - 1.0).abs() < 1e-14);
        assert!((out.success_probability - (1.0 - out.qmr_strength)).abs() < 1e-15);
    }

    #[test]
    fn zero_amplitude_aborts() {
        let r = transfer_with_amplitude(
            &st(1.0, 0.0),
            0.3,
            Complex64::new(0.0, 0.0),
            FidelityReference::Original,
        );
        assert_eq!(r, Err(Error::ZeroSuccessProbability));
    }

    #[test]
    fn success_probability_matches_construction() {
        for &(theta, p, fa) in &[(0.3, 0.2, 0.9), (2.0, 0.6, 0.4), (PI, 0.99, 0.1)] {
            let s = st(theta, 0.7);
            let f = Complex64::from_polar(fa, 1.9);
            let out = transfer_with_amplitude(&s, p, f, FidelityReference::Original).unwrap();
            assert!((out.success_probability - success_probability(&s, p, fa)).abs() < 1e-14);
            assert!(out.reduced_dm.is_physical(1e-12));
        }
    }

    #[test]
    fn phase_correction_restores_encoded_phase() {
        let s = st(1.2, 2.5);
        let f = Complex64::from_polar(0.6, -2.2);
        let out = transfer_with_amplitude(&s, 0.5, f, FidelityReference::Original).unwrap();
        // <1|rho|0> carries e^(i phi)
        let coh = out.reduced_dm.0[1][0];
        assert!((coh.arg() - 2.5).abs() < 1e-9);
    }

    #[test]
    fn scaled_branch_matches_literal_branch() {
        let s = st(1.7, 0.4);
        for &(p, fa) in &[(0.0, 0.5), (0.6, 0.9), (0.99, 0.05)] {
            let f = Complex64::from_polar(fa, 0.9);
            let lit = transfer_with_amplitude(&s, p, f, FidelityReference::Original).unwrap();
            let cf = conditional_fidelity(&s, p, fa, FidelityReference::Original).unwrap();
            assert!((lit.fidelity - cf).abs() < 1e-13);
        }
    }

    #[test]
    fn closed_form_limits() {
        assert!((average_fidelity_closed(0.0, 0.0) - (1.5 - LN_2)).abs() < 1e-12);
        assert_eq!(average_fidelity_closed(0.3, 1.0), 1.0);
        assert!(average_fidelity_closed(1.0 - 1e-6, 0.0) > 1.0 - 1e-6);
        // series and direct branches meet
        let x = 1e-4f64;
        let direct = 0.5 + 1.0 / x - x.ln_1p() / (x * x);
        assert!((average_fidelity_closed(1.0 - x, 0.0) - direct).abs() < 1e-8);
    }

    #[test]
    fn natural_average() {
        assert_eq!(average_fidelity_natural(0.0), 0.5);
        assert_eq!(average_fidelity_natural(1.0), 1.0);
        let v = average_fidelity_natural(0.5f64.sqrt());
        let want = 0.5 + 1.0 / (3.0 * 2f64.sqrt()) + 1.0 / 12.0;
        assert!((v - want).abs() < 1e-15);
        assert!((v - 0.8190).abs() < 1e-4);
    }

    #[test]
    fn average_success() {
        assert_eq!(average_success_probability(0.0, 1.0), 1.0);
        assert!((average_success_probability(0.2, 0.5f64.sqrt()) - 0.48).abs() < 1e-15);
        assert!(average_success_probability(1.0 - 1e-9, 0.7) < 1e-8);
    }

    #[test]
    fn quadrature_matches_closed_form_at_named_points() {
        let cases = [(0.0, 0.0), (0.6, 0.3f64.sqrt()), (0.2, 1.0)];
        for (p, fa) in cases {
            let q = average_fidelity_numeric(p, fa, FidelityReference::Original).unwrap();
            assert!(
                (q - average_fidelity_closed(p, fa)).abs() < 1e-9,
                "p={p} |f|={fa}"
            );
        }
        let q = average_fidelity_numeric(0.0, 0.0, FidelityReference::Original).unwrap();
        assert!((q - (1.5 - LN_2)).abs() < 1e-6);
    }

    #[test]
    fn post_measurement_reference_does_not_reproduce_closed_form() {
        let q = average_fidelity_numeric(0.6, 0.3f64.sqrt(), FidelityReference::PostMeasurement)
            .unwrap();
        assert!((q - average_fidelity_closed(0.6, 0.3f64.sqrt())).abs() > 1e-3);
    }

    #[test]
    fn params_resolve_generation() {
        let tree = TreeSpec::new(4, 0.0, 1.0).unwrap();
        let pp = ProtocolParams::new(0.2, 13, &tree).unwrap();
        assert_eq!(pp.target_generation(), 4);
        assert!(ProtocolParams::new(0.2, 16, &tree).is_err());
        assert!(ProtocolParams::new(1.0, 3, &tree).is_err());
    }
}
