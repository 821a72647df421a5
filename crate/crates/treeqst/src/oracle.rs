//! Dense-linear-algebra oracles, independent of the closed forms in the core.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use treeqst_core::{EffectiveChain, TreeSpec};

/// Wootters concurrence of an arbitrary two-qubit density matrix.
///
/// With `rho = W W^dagger` (eigenvectors scaled by the square roots of their
/// eigenvalues), the concurrence is `max(0, s1 - s2 - s3 - s4)` over the
/// singular values of `W^T (sy x sy) W`, which equal the square roots of the
/// eigenvalues of `rho (sy x sy) rho* (sy x sy)`.
pub fn wootters_concurrence(m: &[[Complex64; 4]; 4]) -> f64 {
    let rho = Matrix4::from_fn(|i, j| m[i][j]);
    let rho = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = rho.symmetric_eigen();
    let top = eig.eigenvalues.max().max(0.0);
    // round-off eigenvalues of a PSD matrix are zero
    let scale = eig
        .eigenvalues
        .map(|l| Complex64::new(if l > 1e-13 * top { l.sqrt() } else { 0.0 }, 0.0));
    let w = eig.eigenvectors * Matrix4::from_diagonal(&scale);
    let flip = Matrix4::from_fn(|i, j| match (i, j) {
        (0, 3) | (3, 0) => Complex64::new(-1.0, 0.0),
        (1, 2) | (2, 1) => Complex64::new(1.0, 0.0),
        _ => Complex64::new(0.0, 0.0),
    });
    let tau = w.transpose() * flip * w;
    let mut s: Vec<f64> = tau.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

/// `e^(-i H t) e_1` for the isolated effective chain (`gamma = 0`), from a
/// numerical eigendecomposition, at every time in `times`.
pub fn closed_chain_evolution(spec: &TreeSpec, times: &[f64]) -> Vec<Vec<Complex64>> {
    let chain = EffectiveChain::for_tree(spec);
    let n = chain.length;
    let h = DMatrix::from_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            chain.hopping
        } else {
            0.0
        }
    });
    let eig = h.symmetric_eigen();
    let v = &eig.eigenvectors;
    times
        .iter()
        .map(|&t| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|k| {
                            Complex64::from_polar(v[(i, k)] * v[(0, k)], -eig.eigenvalues[k] * t)
                        })
                        .sum()
                })
                .collect()
        })
        .collect()
}
