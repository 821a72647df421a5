//! Gauss-Legendre rules and Haar averages over pure qubit states.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Tensor-product rule for the uniform measure `sin(theta) dtheta dphi / 4pi`
/// on the Bloch sphere: Gauss-Legendre in `cos(theta)`, midpoint in `phi`
/// (exact for trigonometric polynomials of degree below `phi_points`).
#[derive(Debug, Clone)]
pub struct BlochRule {
    cos_theta: Vec<f64>,
    cos_weights: Vec<f64>,
    phi_points: usize,
}

impl BlochRule {
    pub fn new(theta_points: usize, phi_points: usize) -> Self {
        let (cos_theta, cos_weights) = gauss_legendre(theta_points);
        BlochRule {
            cos_theta,
            cos_weights,
            phi_points,
        }
    }

    /// Average of `f(theta, phi)` over pure states.
    pub fn average<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        let dphi = 2.0 * PI / self.phi_points as f64;
        let mut acc = 0.0;
        for (&u, &w) in self.cos_theta.iter().zip(&self.cos_weights) {
            let theta = u.acos();
            let mut ring = 0.0;
            for k in 0..self.phi_points {
                ring += f(theta, (k as f64 + 0.5) * dphi);
            }
            acc += w * ring / self.phi_points as f64;
        }
        0.5 * acc
    }
}

impl Default for BlochRule {
    fn default() -> Self {
        BlochRule::new(48, 16)
    }
}
