#![allow(clippy::needless_range_loop)]

use nalgebra::DMatrix;
use proptest::prelude::*;
use treeqst_core::dynamics::{amplitudes_pseudomode_oracle, sine_transform_matrix};
use treeqst_core::tree::invariant_subspace_residual;
use treeqst_core::{
    amplitudes_analytic, amplitudes_fulltree_oracle, build_column_basis, build_tree_hamiltonian,
    BathSpec, Complex64, EffectiveChain, TreeSpec,
};

fn grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| t_max * k as f64 / (steps - 1) as f64)
        .collect()
}

/// `e^(-i H t) e_1` for a real symmetric `H`, by eigendecomposition.
fn closed_evolution(h: DMatrix<f64>, t: f64) -> Vec<Complex64> {
    let eig = h.symmetric_eigen();
    let v = &eig.eigenvectors;
    let n = v.nrows();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| Complex64::from_polar(v[(i, k)] * v[(0, k)], -eig.eigenvalues[k] * t))
                .sum()
        })
        .collect()
}

fn chain_matrix(spec: &TreeSpec) -> DMatrix<f64> {
    let chain = EffectiveChain::for_tree(spec);
    let n = chain.length;
    DMatrix::from_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            chain.hopping
        } else {
            0.0
        }
    })
}

#[test]
fn closed_chain_matches_matrix_exponential() {
    let bath = BathSpec::new(0.0, 1.0).unwrap();
    for n in [1u32, 2, 3, 5, 8] {
        let spec = TreeSpec::new(n, 0.0, 0.8).unwrap();
        let times = grid(20.0, 81);
        let analytic = amplitudes_analytic(&times, &spec, &bath).unwrap();
        let ode = amplitudes_pseudomode_oracle(&times, &spec, &bath).unwrap();
        let h = chain_matrix(&spec);
        for (k, &t) in times.iter().enumerate() {
            let exact = closed_evolution(h.clone(), t);
            for m in 0..n as usize {
                assert!(
                    (analytic.amplitude(k, m + 1) - exact[m]).norm() < 1e-10,
                    "N={n} t={t}"
                );
                assert!(
                    (ode.amplitude(k, m + 1) - exact[m]).norm() < 1e-8,
                    "N={n} t={t}"
                );
            }
        }
        assert!(analytic.leaked_weight().iter().all(|w| w.abs() < 1e-10));
    }
}

#[test]
fn closed_tree_stays_in_column_span() {
    for n in [2u32, 4, 6] {
        let spec = TreeSpec::new(n, 0.0, 1.0).unwrap();
        let h = build_tree_hamiltonian(&spec);
        let d = h.dimension();
        let dense = DMatrix::from_fn(d, d, |i, j| h.matrix()[(i, j)].re);
        let basis = build_column_basis(&spec);
        for t in [0.5, 3.0, 11.0] {
            let psi = closed_evolution(dense.clone(), t);
            let residual: f64 = basis
                .orthogonal_residual(&psi)
                .iter()
                .map(|a| a.norm_sqr())
                .sum();
            assert!(residual.sqrt() < 1e-10);
            let exact = closed_evolution(chain_matrix(&spec), t);
            for (a, b) in basis.project(&psi).iter().zip(&exact) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn chain_spectrum_matches_numerical_diagonalization() {
    for n in 1..=10u32 {
        let spec = TreeSpec::new(n, 0.3, 1.3).unwrap();
        let mut expected: Vec<f64> = chain_matrix(&spec)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|e| e + 0.3)
            .collect();
        expected.sort_by(f64::total_cmp);
        let mut got = EffectiveChain::for_tree(&spec).eigenvalues();
        got.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "N={n}");
        }
    }
}

#[test]
fn sine_transform_is_orthogonal_and_diagonalizes_the_chain() {
    for n in 1..=10usize {
        let s = DMatrix::from_row_slice(n, n, &sine_transform_matrix(n));
        let eye = DMatrix::<f64>::identity(n, n);
        assert!((&s * &s - &eye).amax() < 1e-12);
        let spec = TreeSpec::new(n as u32, 0.0, 1.0).unwrap();
        let d = &s * chain_matrix(&spec) * &s;
        let off = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { d[(i, j)] });
        assert!(off.amax() < 1e-12);
    }
}

#[test]
fn invariant_subspace_for_every_supported_depth() {
    for n in 1..=10u32 {
        let spec = TreeSpec::new(n, 0.7, 0.9).unwrap();
        let h = build_tree_hamiltonian(&spec);
        let basis = build_column_basis(&spec);
        assert!(
            invariant_subspace_residual(&h, &basis).unwrap() < 1e-10,
            "N={n}"
        );
    }
}

#[test]
fn three_oracles_agree() {
    let times = grid(20.0, 201);
    for &(n, gamma, lambda) in &[
        (2u32, 1.0, 0.5),
        (4, 1.0, 0.5),
        (5, 0.3, 3.0),
        (3, 2.0, 0.1),
    ] {
        let spec = TreeSpec::new(n, 0.0, 1.0).unwrap();
        let bath = BathSpec::new(gamma, lambda).unwrap();
        let analytic = amplitudes_analytic(&times, &spec, &bath).unwrap();
        let chain = amplitudes_pseudomode_oracle(&times, &spec, &bath).unwrap();
        let tree = amplitudes_fulltree_oracle(&times, &spec, &bath).unwrap();
        assert!(analytic.max_deviation(&chain) < 1e-7, "N={n}");
        assert!(analytic.max_deviation(&tree.trajectory) < 1e-7, "N={n}");
        assert!(tree.off_span_residual < 1e-8);
        assert!(tree.generation_spread < 1e-8);
        for (k, pop) in tree.site_population.iter().enumerate() {
            assert!((pop - analytic.population(k)).abs() < 1e-7);
        }
    }
}

#[test]
fn markovian_limit_is_damped_closed_evolution() {
    // lambda >> everything: kernel -> (gamma/2) delta, so C = e^(-gamma t/2) C_closed
    let spec = TreeSpec::new(3, 0.0, 1.0).unwrap();
    let gamma = 0.6;
    let lambda = 2000.0;
    let times = grid(6.0, 31);
    let open = amplitudes_analytic(&times, &spec, &BathSpec::new(gamma, lambda).unwrap()).unwrap();
    let h = chain_matrix(&spec);
    for (k, &t) in times.iter().enumerate() {
        let closed = closed_evolution(h.clone(), t);
        for m in 0..3 {
            let damped = closed[m] * (-gamma * t / 2.0).exp();
            assert!((open.amplitude(k, m + 1) - damped).norm() < 5e-3, "t={t}");
            assert!(open.amplitude(k, m + 1).norm() <= closed[m].norm() + 5e-3);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn analytic_and_pseudomode_agree(
        n in 1u32..=6,
        nu in 0.3f64..2.0,
        gamma in 0.0f64..3.0,
        lambda in 0.1f64..8.0,
        t_max in 1.0f64..15.0,
    ) {
        let spec = TreeSpec::new(n, 0.0, nu).unwrap();
        let bath = BathSpec::new(gamma, lambda).unwrap();
        let times = grid(t_max, 16);
        let a = amplitudes_analytic(&times, &spec, &bath).unwrap();
        let b = amplitudes_pseudomode_oracle(&times, &spec, &bath).unwrap();
        prop_assert!(a.max_deviation(&b) < 1e-7);
        prop_assert!(a.max_norm_excess() < 1e-12);
    }

    #[test]
    fn analytic_norm_never_exceeds_one(
        n in 1u32..=10,
        gamma in 0.0f64..5.0,
        lambda in 0.05f64..20.0,
        t in 0.0f64..50.0,
    ) {
        let spec = TreeSpec::new(n, 0.0, 1.0).unwrap();
        let bath = BathSpec::new(gamma, lambda).unwrap();
        let a = amplitudes_analytic(&[0.0, t], &spec, &bath).unwrap();
        prop_assert!(a.population(1) <= 1.0 + 1e-12);
        prop_assert!((a.population(0) - 1.0).abs() < 1e-14);
    }
}
