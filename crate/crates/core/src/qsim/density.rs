use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::{Matrix, ONE};
use crate::error::{invalid, Result};

pub const DENSITY_TOL: f64 = 1e-9;

/// Eigenvalues below this are treated as exact zeros in entropies.
pub const EIGEN_CUTOFF: f64 = 1e-12;

/// A density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: Matrix,
}

impl DensityMatrix {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_hermitian(DENSITY_TOL) {
            return invalid("density matrix is not Hermitian");
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > DENSITY_TOL {
            return invalid(format!("density matrix trace is {tr}, expected 1"));
        }
        let rho = Self { matrix };
        if rho.eigenvalues().iter().any(|&l| l < -DENSITY_TOL) {
            return invalid("density matrix has a negative eigenvalue");
        }
        Ok(rho)
    }

    pub(crate) fn new_unchecked(matrix: Matrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut m = Matrix::identity(dim);
        let w = Complex64::new(1.0 / dim as f64, 0.0);
        for i in 0..dim {
            m.set(i, i, w);
        }
        Self { matrix: m }
    }

    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let dim = amplitudes.len();
        let mut m = Matrix::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m.set(r, c, amplitudes[r] * amplitudes[c].conj());
            }
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Distance to `I/d` in max-abs entry norm.
    pub fn distance_from_maximally_mixed(&self) -> f64 {
        self.matrix.max_abs_diff(Self::maximally_mixed(self.dim()).matrix())
    }

    /// Ascending real eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.dim();
        let m = DMatrix::from_fn(n, n, |r, c| {
            (self.matrix.get(r, c) + self.matrix.get(c, r).conj()) * 0.5
        });
        let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&l| l > EIGEN_CUTOFF)
            .map(|l| -l * l.log2())
            .sum()
    }

    pub fn scaled_sum(parts: &[(f64, &DensityMatrix)]) -> Result<Matrix> {
        let Some((_, first)) = parts.first() else {
            return invalid("empty mixture");
        };
        let dim = first.dim();
        let mut acc = Matrix::zeros(dim);
        for (p, rho) in parts {
            if rho.dim() != dim {
                return invalid("mixture components differ in dimension");
            }
            for r in 0..dim {
                for c in 0..dim {
                    acc.set(r, c, acc.get(r, c) + rho.matrix.get(r, c) * *p);
                }
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_of_pure_and_mixed() {
        let pure = DensityMatrix::pure(&[ONE, Complex64::new(0.0, 0.0)]).unwrap();
        assert!(pure.entropy().abs() < 1e-12);
        assert!((DensityMatrix::maximally_mixed(2).entropy() - 1.0).abs() < 1e-12);
        assert!((DensityMatrix::maximally_mixed(4).entropy() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        let not_herm = Matrix::from_real(2, &[0.5, 0.3, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(not_herm).is_err());
        let bad_trace = Matrix::from_real(2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = Matrix::from_real(2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(DensityMatrix::new(negative).is_err());
    }
}
