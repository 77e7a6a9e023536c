//! Exact dense pure-state simulation.
//!
//! Everything the protocol touches (message states, decoy pairs and the
//! eavesdropper's ancillas) lives in a [`StateVector`]. Registers are capped
//! at [`MAX_QUBITS`] qubits; qubit 0 is the leftmost tensor factor.

mod density;
mod gate;
mod matrix;
mod state;

pub use density::{DensityMatrix, DENSITY_TOL, EIGEN_CUTOFF};
pub use gate::Gate;
pub use matrix::{complete_unitary, Matrix, ONE, ZERO};
pub use state::{
    apply_cnot_with_fresh_ancilla, apply_gate, measure_z, StateVector, MAX_QUBITS, NORM_TOL,
    SUPPORT_EPS,
};
pub use num_complex::Complex64;
