//! Quantum state transfer and entanglement distribution over dissipative
//! binary-tree spin networks, assisted by a weak measurement on the sender
//! and a measurement reversal on the receiver.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of immutable inputs; IO, configuration and the CLI live in the
//! `treeqst` companion crate.
//!
//! Layout:
//!
//! * [`tree`]: tree Hamiltonian, column-state basis, reduction to the
//!   uniform effective chain.
//! * [`bath`] and [`dynamics`]: Lorentzian reservoirs and the column-state
//!   amplitudes, both in closed form and through two ODE oracles.
//! * [`protocol`]: weak measurement, optimal reversal, fidelities and
//!   success probabilities for state transfer.
//! * [`entanglement`]: the two-qubit state shared with an idle ancilla and
//!   its concurrence.

#![no_std]

// Float math comes from `num_traits::Float` (libm). When std is anywhere in
// the crate graph its inherent methods take precedence and those imports go
// unused, hence the `allow` on each of them.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bath;
pub mod dynamics;
pub mod entanglement;
mod error;
pub mod linalg;
pub mod ode;
pub mod protocol;
pub mod quadrature;
pub mod tree;

pub use num_complex::Complex64;

pub use crate::bath::{BathSpec, MemoryKernel};
pub use crate::dynamics::{
    amplitudes_analytic, amplitudes_fulltree_oracle, amplitudes_pseudomode_oracle,
    chain_mode_amplitude_analytic, AmplitudeTrajectory, FullTreeTrajectory,
};
pub use crate::entanglement::{concurrence, distribute, optimal_ed, TwoQubitState};
pub use crate::error::{Error, Result};
pub use crate::protocol::{
    average_fidelity_closed, average_fidelity_natural, average_fidelity_numeric,
    average_success_probability, optimal_qmr_strength, transfer, weak_measurement, ProtocolParams,
    QubitState, TransferOutcome,
};
pub use crate::tree::{
    build_column_basis, build_tree_hamiltonian, reduce_to_chain, verify_invariant_subspace,
    ColumnBasis, EffectiveChain, SingleExcitationHamiltonian, TreeSpec,
};

/// Largest supported tree depth. Dense storage is used throughout, and
/// 2^10 - 1 = 1023 sites is the ceiling for that.
pub const MAX_GENERATIONS: u32 = 10;

/// Absolute tolerance for structural checks on the tree and its basis.
pub const STRUCTURE_TOLERANCE: f64 = 1e-10;
