//! Lorentzian reservoirs. Every site couples to its own bath; all baths
//! share the same parameters.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    coupling_constant: f64,
    spectral_width: f64,
}

impl BathSpec {
    /// `gamma >= 0` is the coupling constant, `lambda > 0` the spectral width.
    pub fn new(coupling_constant: f64, spectral_width: f64) -> Result<Self> {
        if !(coupling_constant >= 0.0 && coupling_constant.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: coupling_constant,
                expected: "a finite value >= 0",
            });
        }
        if !(spectral_width > 0.0 && spectral_width.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: spectral_width,
                expected: "a finite value > 0",
            });
        }
        Ok(BathSpec {
            coupling_constant,
            spectral_width,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.coupling_constant
    }

    pub fn lambda(&self) -> f64 {
        self.spectral_width
    }

    /// `S(omega)` as a function of the detuning `omega - omega0`.
    pub fn spectral_density(&self, detuning: f64) -> f64 {
        let l = self.spectral_width;
        self.coupling_constant * l * l / (2.0 * PI * (detuning * detuning + l * l))
    }

    pub fn kernel(&self) -> MemoryKernel {
        MemoryKernel {
            gamma: self.coupling_constant,
            lambda: self.spectral_width,
        }
    }
}

/// Reservoir correlation function of a Lorentzian bath resonant with the
/// qubits: `f(tau) = (gamma * lambda / 2) * exp(-lambda * tau)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryKernel {
    gamma: f64,
    lambda: f64,
}

impl MemoryKernel {
    pub fn eval(&self, tau: f64) -> f64 {
        0.5 * self.gamma * self.lambda * (-self.lambda * tau).exp()
    }

    /// `f(0)`; also the source rate of the auxiliary pseudomode variable.
    pub fn amplitude(&self) -> f64 {
        0.5 * self.gamma * self.lambda
    }

    /// Memory decay rate.
    pub fn decay_rate(&self) -> f64 {
        self.lambda
    }

    /// `int_0^inf f(tau) dtau = gamma / 2`.
    pub fn integral(&self) -> f64 {
        0.5 * self.gamma
    }
}
