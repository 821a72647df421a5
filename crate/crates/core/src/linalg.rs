//! Minimal dense complex linear algebra for the desk-scale matrices used
//! here (at most 1023 x 1023).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Square complex matrix, row-major, 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<u|A|v>` with `u` conjugated.
    pub fn sandwich(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        inner(u, &self.mul_vec(v))
    }

    /// Largest `|A_ij - conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Nonzero off-diagonal entries of row `i` as `(column, value)`.
    pub fn row_neighbors(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.row(i)
            .iter()
            .enumerate()
            .filter(move |&(j, a)| j != i && (a.re != 0.0 || a.im != 0.0))
            .map(|(j, a)| (j, *a))
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// `<u|v>`, antilinear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    norm_sqr(v).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sandwich_and_hermiticity() {
        let mut m = CMatrix::zeros(2);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        m[(1, 0)] = Complex64::new(0.0, -1.0);
        assert_eq!(m.hermiticity_defect(), 0.0);
        let u = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let v = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(m.sandwich(&u, &v), Complex64::new(0.0, 1.0));
        m[(1, 0)] = Complex64::new(0.0, 1.0);
        assert!((m.hermiticity_defect() - 2.0).abs() < 1e-15);
        assert_eq!(m.row_neighbors(0).count(), 1);
    }
}
