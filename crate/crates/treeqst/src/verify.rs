//! Oracle-equivalence suites behind `--mode verify`.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treeqst_core::dynamics::sine_transform_matrix;
use treeqst_core::entanglement::{optimal_concurrence_closed, TwoQubitState};
use treeqst_core::protocol::{natural_target_state, success_probability, FidelityReference};
use treeqst_core::quadrature::BlochRule;
use treeqst_core::tree::invariant_subspace_residual;
use treeqst_core::{
    amplitudes_analytic, amplitudes_fulltree_oracle, amplitudes_pseudomode_oracle,
    average_fidelity_closed, average_fidelity_natural, average_fidelity_numeric,
    average_success_probability, build_column_basis, build_tree_hamiltonian, concurrence,
    distribute, optimal_ed, BathSpec, Complex64, Error, QubitState,
};

use crate::config::RunConfig;
use crate::error::Result;
use crate::oracle::{closed_chain_evolution, wootters_concurrence};
use crate::sweep::tree_and_bath;

/// Number of random two-qubit states checked against the Wootters oracle.
pub const RANDOM_STATES: usize = 1000;

/// One measured discrepancy and the largest value it may take.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {:.3e} (tolerance {:.0e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

/// Run every suite with the tree, bath and time grid of `config`; random
/// states are drawn from `config.seed`.
pub fn run_verification(config: &RunConfig) -> Result<VerifyReport> {
    config.validate()?;
    let mut report = VerifyReport::default();
    amplitude_suite(config, &mut report)?;
    structure_suite(config, &mut report)?;
    protocol_suite(&mut report)?;
    entanglement_suite(config.seed, &mut report)?;
    Ok(report)
}

fn amplitude_suite(config: &RunConfig, report: &mut VerifyReport) -> Result<()> {
    let (tree, bath) = tree_and_bath(config)?;
    let times = config.times();
    let analytic = amplitudes_analytic(&times, &tree, &bath)?;
    let chain = amplitudes_pseudomode_oracle(&times, &tree, &bath)?;
    let full = amplitudes_fulltree_oracle(&times, &tree, &bath)?;
    report.checks.push(Check::new(
        "amplitudes: closed form vs pseudomode chain",
        analytic.max_deviation(&chain),
        1e-6,
    ));
    report.checks.push(Check::new(
        "amplitudes: closed form vs full-tree pseudomodes",
        analytic.max_deviation(&full.trajectory),
        1e-6,
    ));
    report.checks.push(Check::new(
        "full tree stays in the column span",
        full.off_span_residual,
        1e-8,
    ));
    report.checks.push(Check::new(
        "norm never exceeds one",
        analytic.max_norm_excess().max(0.0),
        1e-12,
    ));

    let closed = amplitudes_analytic(&times, &tree, &BathSpec::new(0.0, bath.lambda())?)?;
    let exact = closed_chain_evolution(&tree, &times);
    let dev = exact
        .iter()
        .enumerate()
        .flat_map(|(k, row)| {
            let closed = &closed;
            row.iter()
                .enumerate()
                .map(move |(m, e)| (closed.amplitude(k, m + 1) - e).norm())
        })
        .fold(0.0, f64::max);
    report.checks.push(Check::new(
        "isolated chain vs matrix exponential",
        dev,
        1e-8,
    ));
    let drift = closed
        .leaked_weight()
        .iter()
        .map(|w| w.abs())
        .fold(0.0, f64::max);
    report
        .checks
        .push(Check::new("isolated chain conserves norm", drift, 1e-8));
    Ok(())
}

fn structure_suite(config: &RunConfig, report: &mut VerifyReport) -> Result<()> {
    let (tree, _) = tree_and_bath(config)?;
    let h = build_tree_hamiltonian(&tree);
    let basis = build_column_basis(&tree);
    report.checks.push(Check::new(
        "column states span an invariant subspace",
        invariant_subspace_residual(&h, &basis)?,
        1e-10,
    ));
    let n = config.generations as usize;
    let s = sine_transform_matrix(n);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let dot: f64 = (0..n).map(|k| s[i * n + k] * s[k * n + j]).sum();
            worst = worst.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    report
        .checks
        .push(Check::new("sine transform is orthogonal", worst, 1e-12));
    Ok(())
}

fn protocol_suite(report: &mut VerifyReport) -> Result<()> {
    let rule = BlochRule::default();
    let mut fid = 0.0f64;
    let mut prob = 0.0f64;
    let mut natural = 0.0f64;
    for &p in &[0.0, 0.2, 0.6, 0.99] {
        for k in 0..=10 {
            let f_abs = (k as f64 / 10.0).sqrt();
            let numeric = average_fidelity_numeric(p, f_abs, FidelityReference::Original)?;
            fid = fid.max((numeric - average_fidelity_closed(p, f_abs)).abs());
            let avg = rule.average(|theta, phi| {
                let s = QubitState::new(theta.clamp(0.0, PI), phi).expect("quadrature node");
                success_probability(&s, p, f_abs)
            });
            prob = prob.max((avg - average_success_probability(p, f_abs)).abs());
        }
    }
    for k in 0..=10 {
        let f = Complex64::from_polar(k as f64 / 10.0, 0.37 * k as f64);
        let avg = rule.average(|theta, phi| {
            let s = QubitState::new(theta.clamp(0.0, PI), phi).expect("quadrature node");
            natural_target_state(&s, f)
                .map(|rho| rho.expectation(&s.amplitudes()))
                .unwrap_or(f64::NAN)
        });
        natural = natural.max((avg - average_fidelity_natural(f.norm())).abs());
    }
    report.checks.push(Check::new(
        "average fidelity: closed form vs Bloch quadrature",
        fid,
        1e-6,
    ));
    report.checks.push(Check::new(
        "average success probability vs Bloch quadrature",
        prob,
        1e-9,
    ));
    report.checks.push(Check::new(
        "natural fidelity vs Bloch quadrature",
        natural,
        1e-9,
    ));
    Ok(())
}

/// `count` post-selected states from uniformly drawn `theta, phi, p, q, f`;
/// draws whose success probability vanishes are skipped.
pub fn random_distributed_states(seed: u64, count: usize) -> Result<Vec<TwoQubitState>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let theta = rng.random_range(0.0..=PI);
        let phi = rng.random_range(0.0..2.0 * PI);
        let p = rng.random_range(0.0..=1.0);
        let q = rng.random_range(0.0..=1.0);
        let f = Complex64::from_polar(rng.random_range(0.0..=1.0), rng.random_range(-PI..PI));
        match distribute(theta, phi, p, q, f) {
            Ok(state) => out.push(state),
            Err(Error::ZeroSuccessProbability) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

fn entanglement_suite(seed: u64, report: &mut VerifyReport) -> Result<()> {
    let worst = random_distributed_states(seed, RANDOM_STATES)?
        .iter()
        .map(|s| (concurrence(s) - wootters_concurrence(s.matrix())).abs())
        .fold(0.0, f64::max);
    report
        .checks
        .push(Check::new("X-state concurrence vs Wootters", worst, 1e-10));

    let mut closed = 0.0f64;
    for i in 1..20 {
        let theta = PI * i as f64 / 20.0;
        for &p in &[0.0, 0.3, 0.9] {
            for &f_abs in &[0.1, 0.5, 1.0] {
                let out = optimal_ed(theta, 0.0, p, Complex64::new(f_abs, 0.0))?;
                let c = optimal_concurrence_closed(theta, p, f_abs)?;
                closed = closed.max((out.concurrence - c).abs());
            }
        }
    }
    report.checks.push(Check::new(
        "optimal concurrence: construction vs closed form",
        closed,
        1e-12,
    ));
    Ok(())
}
