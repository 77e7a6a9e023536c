use super::matrix::Matrix;

/// A gate acting on named qubits of a [`StateVector`](super::StateVector).
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Cnot { control: usize, target: usize },
    /// Arbitrary `2^k x 2^k` unitary; `targets[0]` is the most significant
    /// factor of the matrix index.
    Unitary { matrix: Matrix, targets: Vec<usize> },
}
