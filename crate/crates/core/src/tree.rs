//! Binary-tree network geometry, its single-excitation Hamiltonian, and the
//! reduction onto column states.
//!
//! Sites are 1-based throughout the public API: the root is site 1 and the
//! children of site `j` are `2j` and `2j + 1`. Generation `m` holds sites
//! `2^(m-1) ..= 2^m - 1`. Column state `|C_m>` is the uniform superposition
//! over generation `m`; on that span the tree acts as a uniform chain with
//! hopping `sqrt(2) * nu`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;
use core::ops::RangeInclusive;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{inner, norm, CMatrix};
use crate::{Error, Result, MAX_GENERATIONS, STRUCTURE_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeSpec {
    generations: u32,
    qubit_frequency: f64,
    coupling: f64,
}

impl TreeSpec {
    pub fn new(generations: u32, qubit_frequency: f64, coupling: f64) -> Result<Self> {
        if generations == 0 {
            return Err(Error::InvalidParameter {
                name: "generations",
                value: 0.0,
                expected: "at least 1",
            });
        }
        if generations > MAX_GENERATIONS {
            return Err(Error::ResourceGuard {
                generations,
                max: MAX_GENERATIONS,
            });
        }
        if !qubit_frequency.is_finite() {
            return Err(Error::InvalidParameter {
                name: "omega0",
                value: qubit_frequency,
                expected: "a finite frequency",
            });
        }
        if !(coupling > 0.0 && coupling.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "nu",
                value: coupling,
                expected: "a finite coupling > 0",
            });
        }
        Ok(TreeSpec {
            generations,
            qubit_frequency,
            coupling,
        })
    }

    pub fn generations(&self) -> u32 {
        self.generations
    }

    pub fn qubit_frequency(&self) -> f64 {
        self.qubit_frequency
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// `2^N - 1`.
    pub fn site_count(&self) -> usize {
        (1usize << self.generations) - 1
    }

    /// Sites of generation `m` (1-based).
    pub fn generation_sites(&self, m: usize) -> RangeInclusive<usize> {
        (1usize << (m - 1))..=((1usize << m) - 1)
    }

    /// Generation that contains `site`.
    pub fn generation_of(&self, site: usize) -> Result<usize> {
        if site == 0 || site > self.site_count() {
            return Err(Error::SiteOutOfRange {
                site,
                sites: self.site_count(),
            });
        }
        Ok((usize::BITS - site.leading_zeros()) as usize)
    }

    /// Children `(2j, 2j + 1)`, present iff `j <= 2^(N-1) - 1`.
    pub fn children(&self, site: usize) -> Option<(usize, usize)> {
        if site >= 1 && site < (1usize << (self.generations - 1)) {
            Some((2 * site, 2 * site + 1))
        } else {
            None
        }
    }

    /// All parent-child edges in site order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.site_count()).flat_map(move |j| {
            self.children(j)
                .into_iter()
                .flat_map(move |(a, b)| [(j, a), (j, b)])
        })
    }
}

/// Tree Hamiltonian restricted to one excitation.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleExcitationHamiltonian {
    spec: TreeSpec,
    matrix: CMatrix,
}

impl SingleExcitationHamiltonian {
    pub fn spec(&self) -> &TreeSpec {
        &self.spec
    }

    pub fn dimension(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Matrix element `<i|H|j>` with 1-based sites.
    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i - 1, j - 1)]
    }

    /// Overwrite the (real, symmetric) coupling between two sites.
    pub fn set_coupling(&mut self, i: usize, j: usize, weight: f64) -> Result<()> {
        let d = self.dimension();
        for site in [i, j] {
            if site == 0 || site > d {
                return Err(Error::SiteOutOfRange { site, sites: d });
            }
        }
        self.matrix[(i - 1, j - 1)] = Complex64::new(weight, 0.0);
        self.matrix[(j - 1, i - 1)] = Complex64::new(weight, 0.0);
        Ok(())
    }
}

pub fn build_tree_hamiltonian(spec: &TreeSpec) -> SingleExcitationHamiltonian {
    let d = spec.site_count();
    let mut matrix = CMatrix::zeros(d);
    for j in 0..d {
        matrix[(j, j)] = Complex64::new(spec.qubit_frequency, 0.0);
    }
    let nu = Complex64::new(spec.coupling, 0.0);
    for (parent, child) in spec.edges() {
        matrix[(parent - 1, child - 1)] = nu;
        matrix[(child - 1, parent - 1)] = nu;
    }
    SingleExcitationHamiltonian {
        spec: *spec,
        matrix,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnBasis {
    vectors: Vec<Vec<Complex64>>,
}

impl ColumnBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `|C_m>` as a site-space vector (1-based `m`).
    pub fn vector(&self, m: usize) -> &[Complex64] {
        &self.vectors[m - 1]
    }

    /// `2^(m-1)`.
    pub fn generation_size(m: usize) -> usize {
        1usize << (m - 1)
    }

    pub fn dimension(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    /// `<C_m|psi>` for every `m`.
    pub fn project(&self, psi: &[Complex64]) -> Vec<Complex64> {
        self.vectors.iter().map(|c| inner(c, psi)).collect()
    }

    /// `psi - P_C psi`.
    pub fn orthogonal_residual(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = psi.to_vec();
        for c in &self.vectors {
            let a = inner(c, psi);
            for (o, ci) in out.iter_mut().zip(c) {
                *o -= a * ci;
            }
        }
        out
    }
}

pub fn build_column_basis(spec: &TreeSpec) -> ColumnBasis {
    let d = spec.site_count();
    let vectors = (1..=spec.generations as usize)
        .map(|m| {
            let amp = Complex64::new(1.0 / (ColumnBasis::generation_size(m) as f64).sqrt(), 0.0);
            let mut v = vec![Complex64::new(0.0, 0.0); d];
            for j in spec.generation_sites(m) {
                v[j - 1] = amp;
            }
            v
        })
        .collect();
    ColumnBasis { vectors }
}

/// Uniform tight-binding chain seen by the column states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveChain {
    pub length: usize,
    pub onsite: f64,
    pub hopping: f64,
}

impl EffectiveChain {
    pub fn for_tree(spec: &TreeSpec) -> Self {
        EffectiveChain {
            length: spec.generations as usize,
            onsite: spec.qubit_frequency,
            hopping: SQRT_2 * spec.coupling,
        }
    }

    /// Chain matrix element, 1-based.
    pub fn element(&self, m: usize, k: usize) -> f64 {
        if m == k {
            self.onsite
        } else if m.abs_diff(k) == 1 {
            self.hopping
        } else {
            0.0
        }
    }

    pub fn matrix(&self) -> CMatrix {
        let mut h = CMatrix::zeros(self.length);
        for m in 1..=self.length {
            for k in 1..=self.length {
                h[(m - 1, k - 1)] = Complex64::new(self.element(m, k), 0.0);
            }
        }
        h
    }

    /// `onsite + 2 * hopping * cos(l pi / (N + 1))`, `l = 1..=N`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n1 = (self.length + 1) as f64;
        (1..=self.length)
            .map(|l| {
                self.onsite + 2.0 * self.hopping * (l as f64 * core::f64::consts::PI / n1).cos()
            })
            .collect()
    }
}

fn check_pair(h: &SingleExcitationHamiltonian, basis: &ColumnBasis) -> Result<()> {
    if h.dimension() != basis.dimension() {
        return Err(Error::DimensionMismatch {
            expected: h.dimension(),
            found: basis.dimension(),
        });
    }
    if basis.len() != h.spec.generations as usize {
        return Err(Error::DimensionMismatch {
            expected: h.spec.generations as usize,
            found: basis.len(),
        });
    }
    Ok(())
}

/// Sandwich `H` between every pair of column states and compare with the
/// uniform chain. Any entry off by more than [`STRUCTURE_TOLERANCE`] is a
/// construction error.
pub fn reduce_to_chain(
    h: &SingleExcitationHamiltonian,
    basis: &ColumnBasis,
) -> Result<EffectiveChain> {
    check_pair(h, basis)?;
    let chain = EffectiveChain::for_tree(&h.spec);
    let images: Vec<Vec<Complex64>> = basis.vectors.iter().map(|c| h.matrix.mul_vec(c)).collect();
    for m in 1..=basis.len() {
        for k in 1..=basis.len() {
            let value = inner(basis.vector(m), &images[k - 1]);
            let deviation = (value - Complex64::new(chain.element(m, k), 0.0)).norm();
            if deviation > STRUCTURE_TOLERANCE {
                return Err(Error::ReductionMismatch {
                    row: m,
                    col: k,
                    deviation,
                });
            }
        }
    }
    Ok(chain)
}

/// Frobenius norm of `(1 - P_C) H P_C`. Zero iff the column span is
/// invariant under `H`; it also bounds the operator norm from above.
pub fn invariant_subspace_residual(
    h: &SingleExcitationHamiltonian,
    basis: &ColumnBasis,
) -> Result<f64> {
    check_pair(h, basis)?;
    let total: f64 = basis
        .vectors
        .iter()
        .map(|c| {
            let r = basis.orthogonal_residual(&h.matrix.mul_vec(c));
            norm(&r).powi(2)
        })
        .sum();
    Ok(total.sqrt())
}

/// True iff `H|C_m>` lies in `span{|C_(m-1)>, |C_m>, |C_(m+1)>}` for every
/// `m`, up to [`STRUCTURE_TOLERANCE`].
pub fn verify_invariant_subspace(h: &SingleExcitationHamiltonian, basis: &ColumnBasis) -> bool {
    if check_pair(h, basis).is_err() {
        return false;
    }
    let n = basis.len();
    (1..=n).all(|m| {
        let mut r = h.matrix.mul_vec(basis.vector(m));
        for k in m.saturating_sub(1).max(1)..=(m + 1).min(n) {
            let c = basis.vector(k);
            let a = inner(c, &r);
            for (ri, ci) in r.iter_mut().zip(c) {
                *ri -= a * ci;
            }
        }
        norm(&r) < STRUCTURE_TOLERANCE
    })
}
