//! Column-state amplitudes `C_m(t)` under Lorentzian dissipation.
//!
//! Three independent routes compute the same trajectory:
//!
//! * [`amplitudes_analytic`]: Laplace-domain solution per sine-transform
//!   mode, inverted through its two poles, then mapped back to the
//!   column states.
//! * [`amplitudes_pseudomode_oracle`]: the exponential memory kernel turns
//!   the integro-differential equation into a linear ODE with one
//!   auxiliary variable per column state, integrated numerically.
//! * [`amplitudes_fulltree_oracle`]: the same auxiliary-variable trick on
//!   every one of the `2^N - 1` sites of the tree, then projected onto the
//!   column basis. This checks the column reduction itself.
//!
//! Amplitudes live in the interaction picture: the common `omega0` only
//! contributes a global phase and never reaches an observable.
//!
//! The mode polynomial is derived directly from the chain equations after
//! the sine transform. Mode `m` has hopping energy
//! `2 sqrt2 nu cos(m pi/(N+1)) = -2 sqrt2 nu cos((N-m+1) pi/(N+1))`, and its
//! Laplace denominator is
//! `s^2 + s(lambda - 2i sqrt2 nu c_m) + lambda(gamma - 4i sqrt2 nu c_m)/2`
//! with `c_m = cos((N-m+1) pi/(N+1))`. The discriminant uses `nu`:
//! `Delta_m = (lambda + 2i sqrt2 nu c_m)^2 - 2 gamma lambda`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::bath::BathSpec;
use crate::linalg::norm_sqr;
use crate::ode::{integrate, OdeOptions, OdeSystem};
use crate::tree::{build_column_basis, build_tree_hamiltonian, EffectiveChain, TreeSpec};
use crate::{Error, Result};

const FULLTREE_MAX_GENERATIONS: u32 = 10;

/// Column-state amplitudes sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrajectory {
    times: Vec<f64>,
    generations: usize,
    /// Row-major `[time][generation]`.
    amplitudes: Vec<Complex64>,
    leaked_weight: Vec<f64>,
}

impl AmplitudeTrajectory {
    fn from_parts(times: Vec<f64>, generations: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), times.len() * generations);
        let leaked_weight = amplitudes
            .chunks(generations)
            .map(|row| 1.0 - norm_sqr(row))
            .collect();
        AmplitudeTrajectory {
            times,
            generations,
            amplitudes,
            leaked_weight,
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn generations(&self) -> usize {
        self.generations
    }

    /// `C_1 .. C_N` at sample `k`.
    pub fn amplitudes_at(&self, k: usize) -> &[Complex64] {
        &self.amplitudes[k * self.generations..(k + 1) * self.generations]
    }

    /// `C_m(t_k)`, `m` 1-based.
    pub fn amplitude(&self, k: usize, m: usize) -> Complex64 {
        self.amplitudes_at(k)[m - 1]
    }

    /// `1 - sum_m |C_m(t_k)|^2`: weight that has flowed into the baths.
    pub fn leaked_weight(&self) -> &[f64] {
        &self.leaked_weight
    }

    pub fn population(&self, k: usize) -> f64 {
        1.0 - self.leaked_weight[k]
    }

    /// Amplitude on one specific site of generation `n`:
    /// `C_n(t_k) / sqrt(2^(n-1))`.
    pub fn transfer_amplitude(&self, k: usize, n: usize) -> Complex64 {
        self.amplitude(k, n) / ((1usize << (n - 1)) as f64).sqrt()
    }

    /// Pointwise `max |C_m - C'_m|` against another trajectory on the same grid.
    pub fn max_deviation(&self, other: &AmplitudeTrajectory) -> f64 {
        assert_eq!(self.times.len(), other.times.len());
        assert_eq!(self.generations, other.generations);
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max_k (sum_m |C_m|^2 - 1)`; positive values mean norm was created.
    pub fn max_norm_excess(&self) -> f64 {
        self.leaked_weight
            .iter()
            .map(|w| -w)
            .fold(f64::MIN, f64::max)
    }

    /// Largest drop of leaked weight between consecutive samples (zero when
    /// the leaked weight is non-decreasing).
    pub fn max_backflow(&self) -> f64 {
        self.leaked_weight
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0, f64::max)
    }
}

/// `S_ml = sqrt(2/(N+1)) sin(m l pi/(N+1))`, row-major, symmetric and
/// orthogonal; it diagonalizes the uniform chain.
pub fn sine_transform_matrix(n: usize) -> Vec<f64> {
    let n1 = (n + 1) as f64;
    let norm = (2.0 / n1).sqrt();
    let mut s = vec![0.0; n * n];
    for m in 1..=n {
        for l in 1..=n {
            s[(m - 1) * n + (l - 1)] = norm * ((m * l) as f64 * PI / n1).sin();
        }
    }
    s
}

pub(crate) fn validate_grid(times: &[f64]) -> Result<()> {
    match times.first() {
        None => return Err(Error::InvalidTimeGrid("empty")),
        Some(&t0) if t0 != 0.0 => return Err(Error::InvalidTimeGrid("must start at t = 0")),
        _ => {}
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidTimeGrid("non-finite time"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTimeGrid("times must be strictly increasing"));
    }
    Ok(())
}

/// `cos((N - m + 1) pi / (N + 1))`.
fn mode_cosine(m: usize, n: usize) -> f64 {
    ((n - m + 1) as f64 * PI / (n + 1) as f64).cos()
}

/// Inverse Laplace transform of `(s + lambda) / D_m(s)` at time `t`:
/// `exp(-a t/2) (cosh(sqrt(Delta) t/2) + b sinh(sqrt(Delta) t/2)/sqrt(Delta))`
/// with `a = lambda - 2i sqrt2 nu c`, `b = lambda + 2i sqrt2 nu c`.
///
/// Evaluated as a sum over the two poles, or by its Taylor series when the
/// poles (nearly) coincide, so `Delta -> 0` is continuous.
fn mode_response(c: f64, t: f64, nu: f64, bath: &BathSpec) -> Complex64 {
    let lambda = bath.lambda();
    let w = 2.0 * SQRT_2 * nu * c;
    let a = Complex64::new(lambda, -w);
    let b = Complex64::new(lambda, w);
    let delta = b * b - 2.0 * bath.gamma() * lambda;
    let half_root = delta.sqrt() * 0.5;
    let z = half_root * t;
    let center = -a * (t * 0.5);

    if z.norm() < 1e-3 {
        let z2 = z * z;
        let cosh = 1.0 + z2 * (0.5 + z2 * (1.0 / 24.0 + z2 / 720.0));
        let sinhc = 1.0 + z2 * (1.0 / 6.0 + z2 * (1.0 / 120.0 + z2 / 5040.0));
        center.exp() * (cosh + b * (t * 0.5) * sinhc)
    } else {
        let plus = (center + z).exp();
        let minus = (center - z).exp();
        (plus + minus) * 0.5 + b * (plus - minus) / (half_root * 4.0)
    }
}

/// Sine-transform mode amplitude `C'_m(t)` in closed form, 1-based `m`.
pub fn chain_mode_amplitude_analytic(
    m: usize,
    t: f64,
    spec: &TreeSpec,
    bath: &BathSpec,
) -> Result<Complex64> {
    let n = spec.generations() as usize;
    if m == 0 || m > n {
        return Err(Error::GenerationOutOfRange {
            generation: m,
            generations: spec.generations(),
        });
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            expected: "a finite time >= 0",
        });
    }
    let n1 = (n + 1) as f64;
    let weight = (2.0 / n1).sqrt() * (m as f64 * PI / n1).sin();
    Ok(mode_response(mode_cosine(m, n), t, spec.coupling(), bath) * weight)
}

/// Closed-form column amplitudes with `C_m(0) = delta_(m,1)`.
pub fn amplitudes_analytic(
    times: &[f64],
    spec: &TreeSpec,
    bath: &BathSpec,
) -> Result<AmplitudeTrajectory> {
    validate_grid(times)?;
    let n = spec.generations() as usize;
    let s = sine_transform_matrix(n);
    let mut amplitudes = Vec::with_capacity(times.len() * n);
    let mut modes = vec![Complex64::new(0.0, 0.0); n];
    for &t in times {
        for (l, mode) in modes.iter_mut().enumerate() {
            *mode = chain_mode_amplitude_analytic(l + 1, t, spec, bath)?;
        }
        for m in 0..n {
            let row = &s[m * n..(m + 1) * n];
            amplitudes.push(row.iter().zip(&modes).map(|(a, b)| b * *a).sum());
        }
    }
    Ok(AmplitudeTrajectory::from_parts(
        times.to_vec(),
        n,
        amplitudes,
    ))
}

/// Chain amplitudes plus one pseudomode per column state:
/// `dC_m/dt = -i h (C_(m-1) + C_(m+1)) - z_m`,
/// `dz_m/dt = -lambda z_m + (gamma lambda / 2) C_m`.
struct PseudomodeChain {
    length: usize,
    hopping: f64,
    lambda: f64,
    source: f64,
}

impl OdeSystem for PseudomodeChain {
    fn dimension(&self) -> usize {
        2 * self.length
    }

    fn derivative(&self, _t: f64, y: &[Complex64], dy: &mut [Complex64]) {
        let n = self.length;
        let (c, z) = y.split_at(n);
        let hop = Complex64::new(0.0, -self.hopping);
        for m in 0..n {
            let mut nb = Complex64::new(0.0, 0.0);
            if m > 0 {
                nb += c[m - 1];
            }
            if m + 1 < n {
                nb += c[m + 1];
            }
            dy[m] = hop * nb - z[m];
            dy[n + m] = c[m] * self.source - z[m] * self.lambda;
        }
    }
}

pub fn amplitudes_pseudomode_oracle(
    times: &[f64],
    spec: &TreeSpec,
    bath: &BathSpec,
) -> Result<AmplitudeTrajectory> {
    amplitudes_pseudomode_oracle_with(times, spec, bath, &OdeOptions::default())
}

pub fn amplitudes_pseudomode_oracle_with(
    times: &[f64],
    spec: &TreeSpec,
    bath: &BathSpec,
    options: &OdeOptions,
) -> Result<AmplitudeTrajectory> {
    validate_grid(times)?;
    let chain = EffectiveChain::for_tree(spec);
    let kernel = bath.kernel();
    let system = PseudomodeChain {
        length: chain.length,
        hopping: chain.hopping,
        lambda: kernel.decay_rate(),
        source: kernel.amplitude(),
    };
    let n = chain.length;
    let mut y0 = vec![Complex64::new(0.0, 0.0); 2 * n];
    y0[0] = Complex64::new(1.0, 0.0);
    let mut amplitudes = Vec::with_capacity(times.len() * n);
    integrate(&system, &y0, times, options, |_, y| {
        amplitudes.extend_from_slice(&y[..n]);
    })?;
    Ok(AmplitudeTrajectory::from_parts(
        times.to_vec(),
        n,
        amplitudes,
    ))
}

/// Every site with its own pseudomode; couplings come from the tree
/// Hamiltonian with the uniform on-site energy removed.
struct PseudomodeTree {
    neighbors: Vec<Vec<(usize, Complex64)>>,
    lambda: f64,
    source: f64,
}

impl OdeSystem for PseudomodeTree {
    fn dimension(&self) -> usize {
        2 * self.neighbors.len()
    }

    fn derivative(&self, _t: f64, y: &[Complex64], dy: &mut [Complex64]) {
        let d = self.neighbors.len();
        let (c, z) = y.split_at(d);
        let minus_i = Complex64::new(0.0, -1.0);
        for (j, nbrs) in self.neighbors.iter().enumerate() {
            let hc: Complex64 = nbrs.iter().map(|&(k, h)| h * c[k]).sum();
            dy[j] = minus_i * hc - z[j];
            dy[d + j] = c[j] * self.source - z[j] * self.lambda;
        }
    }
}

/// Full-tree evolution projected onto the column basis, with diagnostics of
/// how well the reduction holds.
#[derive(Debug, Clone, PartialEq)]
pub struct FullTreeTrajectory {
    pub trajectory: AmplitudeTrajectory,
    /// `max_t |c(t) - P_C c(t)|`.
    pub off_span_residual: f64,
    /// `max_t max_m` spread of site amplitudes within generation `m`.
    pub generation_spread: f64,
    /// `sum_j |c_j(t)|^2` at each output time.
    pub site_population: Vec<f64>,
}

pub fn amplitudes_fulltree_oracle(
    times: &[f64],
    spec: &TreeSpec,
    bath: &BathSpec,
) -> Result<FullTreeTrajectory> {
    amplitudes_fulltree_oracle_with(times, spec, bath, &OdeOptions::default())
}

pub fn amplitudes_fulltree_oracle_with(
    times: &[f64],
    spec: &TreeSpec,
    bath: &BathSpec,
    options: &OdeOptions,
) -> Result<FullTreeTrajectory> {
    if spec.generations() > FULLTREE_MAX_GENERATIONS {
        return Err(Error::ResourceGuard {
            generations: spec.generations(),
            max: FULLTREE_MAX_GENERATIONS,
        });
    }
    validate_grid(times)?;
    let h = build_tree_hamiltonian(spec);
    let basis = build_column_basis(spec);
    let d = h.dimension();
    let kernel = bath.kernel();
    let system = PseudomodeTree {
        neighbors: (0..d)
            .map(|j| h.matrix().row_neighbors(j).collect())
            .collect(),
        lambda: kernel.decay_rate(),
        source: kernel.amplitude(),
    };

    let n = spec.generations() as usize;
    let mut y0 = vec![Complex64::new(0.0, 0.0); 2 * d];
    y0[0] = Complex64::new(1.0, 0.0);
    let mut amplitudes = Vec::with_capacity(times.len() * n);
    let mut off_span_residual = 0.0f64;
    let mut generation_spread = 0.0f64;
    let mut site_population = Vec::with_capacity(times.len());
    integrate(&system, &y0, times, options, |_, y| {
        let sites = &y[..d];
        amplitudes.extend(basis.project(sites));
        off_span_residual =
            off_span_residual.max(norm_sqr(&basis.orthogonal_residual(sites)).sqrt());
        for m in 1..=n {
            let gen = spec.generation_sites(m);
            let first = sites[*gen.start() - 1];
            for j in gen {
                generation_spread = generation_spread.max((sites[j - 1] - first).norm());
            }
        }
        site_population.push(norm_sqr(sites));
    })?;

    Ok(FullTreeTrajectory {
        trajectory: AmplitudeTrajectory::from_parts(times.to_vec(), n, amplitudes),
        off_span_residual,
        generation_spread,
        site_population,
    })
}
