//! Dormand-Prince 5(4) integrator with embedded error control for complex
//! first-order systems.
//!
//! Internal steps adapt freely and are clipped to land exactly on each
//! requested output time, so the output grid never constrains accuracy.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub trait OdeSystem {
    fn dimension(&self) -> usize;
    fn derivative(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Smallest step relative to `max(1, |t|)` before giving up.
    pub min_relative_step: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 2_000_000,
            min_relative_step: 1e-14,
        }
    }
}

// Dormand & Prince (1980) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b*, the embedded 4th-order error weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

struct Stages {
    k: [Vec<Complex64>; 7],
    tmp: Vec<Complex64>,
    next: Vec<Complex64>,
}

/// Integrate from `times[0]` with state `y0`, calling `observe(k, y)` at
/// every output time. `times` must be non-decreasing.
pub fn integrate<S, F>(
    system: &S,
    y0: &[Complex64],
    times: &[f64],
    options: &OdeOptions,
    mut observe: F,
) -> Result<()>
where
    S: OdeSystem + ?Sized,
    F: FnMut(usize, &[Complex64]),
{
    let n = system.dimension();
    debug_assert_eq!(y0.len(), n);
    if times.is_empty() {
        return Ok(());
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut st = Stages {
        k: core::array::from_fn(|_| vec![zero; n]),
        tmp: vec![zero; n],
        next: vec![zero; n],
    };
    let mut y = y0.to_vec();
    let mut t = times[0];
    observe(0, &y);

    system.derivative(t, &y, &mut st.k[0]);
    let mut h = initial_step(&y, &st.k[0], options);
    let mut steps = 0usize;

    for (idx, &target) in times.iter().enumerate().skip(1) {
        while t < target {
            if steps >= options.max_steps {
                return Err(Error::MaxStepsExceeded { t, steps });
            }
            let remaining = target - t;
            let clipped = h >= remaining;
            let step = if clipped { remaining } else { h };
            let err = try_step(system, t, step, &y, &mut st, options);
            steps += 1;
            if err <= 1.0 {
                t = if clipped { target } else { t + step };
                core::mem::swap(&mut y, &mut st.next);
                // FSAL: k7 is f(t + h, y_new)
                st.k.swap(0, 6);
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // a clipped step says nothing about how large h may grow
                if !clipped || factor < 1.0 {
                    h = step * factor;
                }
            } else {
                h = step * (0.9 * err.powf(-0.25)).clamp(0.1, 0.9);
                if h < options.min_relative_step * t.abs().max(1.0) {
                    return Err(Error::StepSizeUnderflow { t, step: h });
                }
            }
        }
        observe(idx, &y);
    }
    Ok(())
}

fn initial_step(y: &[Complex64], dy: &[Complex64], options: &OdeOptions) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for (a, b) in y.iter().zip(dy) {
        let sc = options.atol + options.rtol * a.norm();
        d0 += (a.norm() / sc).powi(2);
        d1 += (b.norm() / sc).powi(2);
    }
    let n = y.len().max(1) as f64;
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        (0.01 * d0 / d1).min(0.1)
    }
}

/// One trial step; fills `st.next` and returns the scaled RMS error.
#[allow(clippy::needless_range_loop)]
fn try_step<S: OdeSystem + ?Sized>(
    system: &S,
    t: f64,
    h: f64,
    y: &[Complex64],
    st: &mut Stages,
    options: &OdeOptions,
) -> f64 {
    let n = y.len();
    let combo = |st: &mut Stages, coeffs: &[(usize, f64)]| {
        for i in 0..n {
            let mut acc = y[i];
            for &(s, c) in coeffs {
                acc += st.k[s][i] * (h * c);
            }
            st.tmp[i] = acc;
        }
    };

    combo(st, &[(0, A21)]);
    system.derivative(t + C2 * h, &st.tmp, &mut st.k[1]);

    combo(st, &[(0, A31), (1, A32)]);
    system.derivative(t + C3 * h, &st.tmp, &mut st.k[2]);

    combo(st, &[(0, A41), (1, A42), (2, A43)]);
    system.derivative(t + C4 * h, &st.tmp, &mut st.k[3]);

    combo(st, &[(0, A51), (1, A52), (2, A53), (3, A54)]);
    system.derivative(t + C5 * h, &st.tmp, &mut st.k[4]);

    combo(st, &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)]);
    system.derivative(t + h, &st.tmp, &mut st.k[5]);

    for i in 0..n {
        st.next[i] = y[i]
            + (st.k[0][i] * B1
                + st.k[2][i] * B3
                + st.k[3][i] * B4
                + st.k[4][i] * B5
                + st.k[5][i] * B6)
                * h;
    }
    system.derivative(t + h, &st.next, &mut st.k[6]);

    let mut acc = 0.0;
    for i in 0..n {
        let e = (st.k[0][i] * E1
            + st.k[2][i] * E3
            + st.k[3][i] * E4
            + st.k[4][i] * E5
            + st.k[5][i] * E6
            + st.k[6][i] * E7)
            * h;
        let sc = options.atol + options.rtol * y[i].norm().max(st.next[i].norm());
        acc += (e.norm() / sc).powi(2);
    }
    (acc / n.max(1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Rotation(f64);

    impl OdeSystem for Rotation {
        fn dimension(&self) -> usize {
            1
        }
        fn derivative(&self, _t: f64, y: &[Complex64], dy: &mut [Complex64]) {
            dy[0] = Complex64::new(0.0, -self.0) * y[0];
        }
    }

    struct Decay;

    impl OdeSystem for Decay {
        fn dimension(&self) -> usize {
            2
        }
        fn derivative(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]) {
            dy[0] = -y[0];
            dy[1] = Complex64::new(t.cos(), 0.0);
            let _ = y[1];
        }
    }

    #[test]
    fn phase_rotation_is_accurate() {
        let times: Vec<f64> = (0..=40).map(|k| k as f64 * 0.5).collect();
        let mut worst = 0.0f64;
        integrate(
            &Rotation(2.0),
            &[Complex64::new(1.0, 0.0)],
            &times,
            &OdeOptions::default(),
            |k, y| {
                let exact = Complex64::new(0.0, -2.0 * times[k]).exp();
                worst = worst.max((y[0] - exact).norm());
            },
        )
        .unwrap();
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn nonautonomous_and_dissipative() {
        let times = [0.0, 0.1, 1.0, 3.0, 3.0, 7.5];
        let mut seen = 0;
        integrate(
            &Decay,
            &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            &times,
            &OdeOptions::default(),
            |k, y| {
                seen += 1;
                let t = times[k];
                assert!((y[0].re - (-t).exp()).abs() < 1e-10);
                assert!((y[1].re - t.sin()).abs() < 1e-9);
            },
        )
        .unwrap();
        assert_eq!(seen, times.len());
    }

    #[test]
    fn reports_step_budget() {
        let opts = OdeOptions {
            max_steps: 3,
            ..OdeOptions::default()
        };
        let r = integrate(
            &Rotation(50.0),
            &[Complex64::new(1.0, 0.0)],
            &[0.0, 10.0],
            &opts,
            |_, _| {},
        );
        assert!(matches!(r, Err(Error::MaxStepsExceeded { .. })));
    }
}
