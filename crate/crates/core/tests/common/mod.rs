//! Brute-force multi-qubit state vectors, used as an oracle for the reduced
//! states the protocol code builds analytically.

#![allow(dead_code)]

use treeqst_core::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `n` qubits; qubit `k` is bit `k` of the basis index.
pub struct Register {
    pub qubits: usize,
    pub amps: Vec<Complex64>,
}

impl Register {
    pub fn vacuum(qubits: usize) -> Self {
        let mut amps = vec![c(0.0, 0.0); 1 << qubits];
        amps[0] = c(1.0, 0.0);
        Register { qubits, amps }
    }

    pub fn zero(qubits: usize) -> Self {
        Register {
            qubits,
            amps: vec![c(0.0, 0.0); 1 << qubits],
        }
    }

    pub fn basis_index(excited: &[usize]) -> usize {
        excited.iter().map(|&q| 1usize << q).sum()
    }

    /// Apply a 2x2 operator `op[out][in]` to one qubit.
    pub fn apply(&mut self, qubit: usize, op: [[Complex64; 2]; 2]) {
        let bit = 1usize << qubit;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = op[0][0] * a0 + op[0][1] * a1;
                self.amps[i | bit] = op[1][0] * a0 + op[1][1] * a1;
            }
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Reduced density matrix of `keep` (first entry is the most
    /// significant label of the returned basis).
    pub fn partial_trace(&self, keep: &[usize]) -> Vec<Vec<Complex64>> {
        let k = keep.len();
        let dim = 1 << k;
        let label = |i: usize| {
            keep.iter()
                .fold(0usize, |acc, &q| (acc << 1) | ((i >> q) & 1))
        };
        let keep_mask: usize = keep.iter().map(|&q| 1usize << q).sum();
        let mut rho = vec![vec![c(0.0, 0.0); dim]; dim];
        for i in 0..self.amps.len() {
            if self.amps[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..self.amps.len() {
                if (i & !keep_mask) == (j & !keep_mask) {
                    rho[label(i)][label(j)] += self.amps[i] * self.amps[j].conj();
                }
            }
        }
        rho
    }
}

/// `diag(d0, d1)`.
pub fn diag(d0: Complex64, d1: Complex64) -> [[Complex64; 2]; 2] {
    [[d0, c(0.0, 0.0)], [c(0.0, 0.0), d1]]
}

/// Spread an excitation on `source` over `targets` with the given
/// amplitudes (an isometry on the vacuum + single-excitation sector that
/// leaves every other qubit alone). Components without `source` excited are
/// untouched.
pub fn spread_excitation(
    reg: &Register,
    source: usize,
    targets: &[(usize, Complex64)],
) -> Register {
    let mut out = Register::zero(reg.qubits);
    let sbit = 1usize << source;
    let occupied: usize = targets.iter().map(|&(q, _)| 1usize << q).sum::<usize>() | sbit;
    for (i, &a) in reg.amps.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        if i & sbit == 0 {
            out.amps[i] += a;
        } else {
            assert_eq!(i & occupied, sbit, "spread needs an otherwise empty sector");
            let rest = i & !sbit;
            for &(q, amp) in targets {
                out.amps[rest | (1 << q)] += a * amp;
            }
        }
    }
    out
}
