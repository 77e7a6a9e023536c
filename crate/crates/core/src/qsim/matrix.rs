use num_complex::Complex64;

use crate::error::{invalid, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return invalid("matrix must have at least one row");
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return invalid(format!("matrix row of length {} in a {dim}x{dim} matrix", row.len()));
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from real entries, row-major.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return invalid("entry count does not match dimension");
        }
        Ok(Self { dim, data: entries.iter().map(|&x| Complex64::new(x, 0.0)).collect() })
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let dim = columns.len();
        let mut m = Self::zeros(dim);
        for (c, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return invalid("column length does not match dimension");
            }
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    pub fn hadamard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real(2, &[s, s, s, -s]).expect("static shape")
    }

    pub fn pauli_x() -> Self {
        Self::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("static shape")
    }

    /// CNOT with the first tensor factor as control.
    pub fn cnot() -> Self {
        #[rustfmt::skip]
        let entries = [
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
        ];
        Self::from_real(4, &entries).expect("static shape")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch in matrix-vector product");
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Kronecker product `self ⊗ other`; `self` is the leftmost factor.
    pub fn kron(&self, other: &Matrix) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().mul(self).max_abs_diff(&Matrix::identity(self.dim)) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

/// Completes a set of orthonormal columns to a full unitary by Gram-Schmidt
/// over the canonical basis. `fixed` maps column index to a prescribed
/// column; remaining columns are filled in ascending order with the
/// canonical vectors `e_0, e_1, ...` orthogonalised against everything
/// placed so far (vectors that collapse below `1e-9` are skipped).
pub fn complete_unitary(dim: usize, fixed: &[(usize, Vec<Complex64>)]) -> Result<Matrix> {
    let mut columns: Vec<Option<Vec<Complex64>>> = vec![None; dim];
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for (idx, col) in fixed {
        if *idx >= dim || col.len() != dim {
            return invalid("prescribed column out of range");
        }
        if columns[*idx].is_some() {
            return invalid("column prescribed twice");
        }
        columns[*idx] = Some(col.clone());
        basis.push(col.clone());
    }
    let mut candidates = (0..dim).map(|k| {
        let mut e = vec![ZERO; dim];
        e[k] = ONE;
        e
    });
    for slot in columns.iter_mut().filter(|c| c.is_none()) {
        loop {
            let Some(mut v) = candidates.next() else {
                return invalid("prescribed columns are not linearly independent");
            };
            // Two passes of modified Gram-Schmidt for numerical stability.
            for _ in 0..2 {
                for b in &basis {
                    let proj = inner(b, &v);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= proj * y;
                    }
                }
            }
            let n = norm_sqr(&v).sqrt();
            if n > 1e-9 {
                v.iter_mut().for_each(|x| *x /= n);
                basis.push(v.clone());
                *slot = Some(v);
                break;
            }
        }
    }
    let columns: Vec<Vec<Complex64>> = columns.into_iter().map(|c| c.expect("filled")).collect();
    Matrix::from_columns(&columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_places_left_factor_most_significant() {
        let x = Matrix::pauli_x();
        let id = Matrix::identity(2);
        let xi = x.kron(&id);
        // X ⊗ I maps |00> (index 0) to |10> (index 2).
        assert_eq!(xi.get(2, 0), ONE);
        assert_eq!(xi.get(0, 2), ONE);
    }

    #[test]
    fn standard_gates_are_unitary() {
        assert!(Matrix::hadamard().is_unitary(1e-12));
        assert!(Matrix::cnot().is_unitary(1e-12));
        assert!(Matrix::pauli_x().is_unitary(1e-12));
    }

    #[test]
    fn completion_of_cnot_columns_is_cnot() {
        let mut c0 = vec![ZERO; 4];
        c0[0] = ONE;
        let mut c2 = vec![ZERO; 4];
        c2[3] = ONE;
        let u = complete_unitary(4, &[(0, c0), (2, c2)]).unwrap();
        assert!(u.max_abs_diff(&Matrix::cnot()) < 1e-12);
    }

    #[test]
    fn completion_rejects_dependent_columns() {
        let v = vec![ONE, ZERO];
        assert!(complete_unitary(2, &[(0, v.clone()), (0, v)]).is_err());
    }
}
