//! Collective-attack unitaries `U_E` on (transit qubit ⊗ ancilla).
//!
//! `U_E(|0⟩|e⟩) = a|0⟩|e00⟩ + b|1⟩|e01⟩` and
//! `U_E(|1⟩|e⟩) = c|0⟩|e10⟩ + d|1⟩|e11⟩`, with `|e⟩ = |0…0⟩` the fresh
//! ancilla. The transit qubit is the most significant tensor factor.

use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::qsim::{complete_unitary, Complex64, Matrix, NORM_TOL, ONE, ZERO};

#[derive(Clone, Debug, PartialEq)]
pub enum CollectiveSpec {
    Structured {
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
        /// `[e00, e01, e10, e11]`, each of the ancilla dimension (2 or 4).
        e_vectors: [Vec<Complex64>; 4],
    },
    /// An explicit 4×4 unitary on transit ⊗ one ancilla qubit.
    RandomUnitary { unitary: Matrix },
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

fn basis_vec(dim: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; dim];
    v[k] = ONE;
    v
}

impl CollectiveSpec {
    /// Structured spec with real coefficients and computational-basis ancilla
    /// vectors `|e_ij⟩ = |k_ij⟩` in a `dim`-dimensional ancilla.
    pub fn structured_basis(coeffs: [f64; 4], basis: [usize; 4], dim: usize) -> Result<Self> {
        if basis.iter().any(|&k| k >= dim) {
            return invalid("basis index outside the ancilla space");
        }
        let spec = Self::Structured {
            a: Complex64::new(coeffs[0], 0.0),
            b: Complex64::new(coeffs[1], 0.0),
            c: Complex64::new(coeffs[2], 0.0),
            d: Complex64::new(coeffs[3], 0.0),
            e_vectors: basis.map(|k| basis_vec(dim, k)),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `a = d = 1`, `b = c = 0`, `e00 = e11`: the ancilla never couples.
    pub fn passive(dim: usize) -> Self {
        Self::structured_basis([1.0, 0.0, 0.0, 1.0], [0, 0, 0, 0], dim).expect("valid spec")
    }

    /// `a = d = 1`, `b = c = 0`, `e00 = |0⟩`, `e11 = |1⟩`: a CNOT onto the
    /// ancilla, exactly the single-CNOT attack.
    pub fn cnot_equivalent() -> Self {
        Self::structured_basis([1.0, 0.0, 0.0, 1.0], [0, 0, 1, 1], 2).expect("valid spec")
    }

    pub fn ancilla_dim(&self) -> usize {
        match self {
            Self::Structured { e_vectors, .. } => e_vectors[0].len(),
            Self::RandomUnitary { .. } => 2,
        }
    }

    pub fn ancilla_qubits(&self) -> usize {
        self.ancilla_dim().trailing_zeros() as usize
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Structured { a, b, c, d, e_vectors } => {
                let dim = e_vectors[0].len();
                if dim != 2 && dim != 4 {
                    return invalid(format!("ancilla dimension must be 2 or 4, got {dim}"));
                }
                if e_vectors.iter().any(|e| e.len() != dim) {
                    return invalid("ancilla vectors differ in dimension");
                }
                if e_vectors.iter().any(|e| (norm_sqr(e) - 1.0).abs() > NORM_TOL) {
                    return invalid("ancilla vectors must be normalised");
                }
                if (a.norm_sqr() + b.norm_sqr() - 1.0).abs() > NORM_TOL
                    || (c.norm_sqr() + d.norm_sqr() - 1.0).abs() > NORM_TOL
                {
                    return invalid("coefficients violate |a|^2+|b|^2 = |c|^2+|d|^2 = 1");
                }
                let (v0, v1) = self.images();
                let overlap: Complex64 = v0.iter().zip(&v1).map(|(x, y)| x.conj() * y).sum();
                if overlap.norm() > NORM_TOL {
                    return invalid("images of |0>|e> and |1>|e> are not orthogonal");
                }
                Ok(())
            }
            Self::RandomUnitary { unitary } => {
                if unitary.dim() != 4 {
                    return invalid("random-unitary mode needs a 4x4 matrix");
                }
                if !unitary.is_unitary(NORM_TOL) {
                    return invalid("collective matrix is not unitary");
                }
                Ok(())
            }
        }
    }

    /// `U_E(|0⟩|e⟩)` and `U_E(|1⟩|e⟩)` as vectors on transit ⊗ ancilla.
    pub fn images(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        match self {
            Self::Structured { a, b, c, d, e_vectors: [e00, e01, e10, e11] } => {
                let v0 = e00.iter().map(|x| a * x).chain(e01.iter().map(|x| b * x)).collect();
                let v1 = e10.iter().map(|x| c * x).chain(e11.iter().map(|x| d * x)).collect();
                (v0, v1)
            }
            Self::RandomUnitary { unitary } => (unitary.column(0), unitary.column(2)),
        }
    }

    /// Haar-random 4×4 unitary via Gram-Schmidt on a complex Gaussian matrix.
    pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::RandomUnitary { unitary: haar_unitary(4, rng) }
    }

    /// Random structured spec with mutually orthonormal `|e_ij⟩` in a
    /// 4-dimensional ancilla and random complex coefficients.
    pub fn random_structured<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let frame = haar_unitary(4, rng);
        let (a, b) = random_pair(rng);
        let (c, d) = random_pair(rng);
        Self::Structured { a, b, c, d, e_vectors: [0, 1, 2, 3].map(|k| frame.column(k)) }
    }

    /// `U_E = I ⊗ V` with `V` a random unitary on one ancilla qubit: the
    /// ancilla evolves independently of the transit qubit.
    pub fn random_decoupled<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let v = haar_unitary(2, rng);
        Self::RandomUnitary { unitary: Matrix::identity(2).kron(&v) }
    }

    /// `b = c = 0`, `|a| = |d| = 1` with random phases and a shared random
    /// `e00 = e11`; error-free only when the two phases agree.
    pub fn random_phase_flip<R: Rng + ?Sized>(rng: &mut R, equal_phases: bool) -> Self {
        let e = haar_unitary(4, rng).column(0);
        let alpha: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let delta = if equal_phases { alpha } else { rng.random_range(0.0..std::f64::consts::TAU) };
        Self::Structured {
            a: Complex64::from_polar(1.0, alpha),
            b: ZERO,
            c: ZERO,
            d: Complex64::from_polar(1.0, delta),
            e_vectors: [e.clone(), e.clone(), e.clone(), e],
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CollectiveSpecFile = serde_json::from_str(text)?;
        let spec = file.into_spec()?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CollectiveSpecFile::from_spec(self))?)
    }
}

fn random_pair<R: Rng + ?Sized>(rng: &mut R) -> (Complex64, Complex64) {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
    let p1: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let p2: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    (Complex64::from_polar(theta.cos(), p1), Complex64::from_polar(theta.sin(), p2))
}

fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    loop {
        let columns: Vec<(usize, Vec<Complex64>)> = (0..dim)
            .map(|k| {
                let v: Vec<Complex64> = (0..dim)
                    .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect();
                (k, v)
            })
            .collect();
        if let Some(u) = orthonormalise(dim, columns) {
            return u;
        }
    }
}

fn orthonormalise(dim: usize, columns: Vec<(usize, Vec<Complex64>)>) -> Option<Matrix> {
    let mut done: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(dim);
    for (k, mut v) in columns {
        for _ in 0..2 {
            for (_, b) in &done {
                let proj: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= proj * y;
                }
            }
        }
        let n = norm_sqr(&v).sqrt();
        if n < 1e-6 {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= n);
        done.push((k, v));
    }
    complete_unitary(dim, &done).ok()
}

/// Explicit unitary on transit ⊗ ancilla implementing a `CollectiveSpec`.
///
/// Columns for `|0⟩|e⟩` and `|1⟩|e⟩` are the two images; the remaining
/// columns are completed by Gram-Schmidt over the canonical basis in
/// ascending order (see [`complete_unitary`]), which the attack never
/// reaches because the ancilla always starts in `|e⟩`.
pub fn build_collective_unitary(spec: &CollectiveSpec) -> Result<Matrix> {
    spec.validate()?;
    match spec {
        CollectiveSpec::RandomUnitary { unitary } => Ok(unitary.clone()),
        CollectiveSpec::Structured { .. } => {
            let d = spec.ancilla_dim();
            let (v0, v1) = spec.images();
            complete_unitary(2 * d, &[(0, v0), (d, v1)])
        }
    }
}

/// On-disk form: coefficients as `[re, im]` pairs.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CollectiveSpecFile {
    mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e_vectors: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unitary: Option<Vec<Vec<[f64; 2]>>>,
}

fn cx(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl CollectiveSpecFile {
    fn into_spec(self) -> Result<CollectiveSpec> {
        match self.mode.as_str() {
            "structured" => {
                let (Some(a), Some(b), Some(c), Some(d), Some(e)) = (self.a, self.b, self.c, self.d, self.e_vectors)
                else {
                    return invalid("structured mode needs a, b, c, d and e_vectors");
                };
                let e: Vec<Vec<Complex64>> = e.into_iter().map(|v| v.into_iter().map(cx).collect()).collect();
                let e_vectors: [Vec<Complex64>; 4] =
                    e.try_into().map_err(|_| crate::SqssError::InvalidArgument("e_vectors needs 4 entries".into()))?;
                Ok(CollectiveSpec::Structured { a: cx(a), b: cx(b), c: cx(c), d: cx(d), e_vectors })
            }
            "random_unitary" => {
                let Some(rows) = self.unitary else {
                    return invalid("random_unitary mode needs a unitary matrix");
                };
                let rows = rows.into_iter().map(|r| r.into_iter().map(cx).collect()).collect();
                Ok(CollectiveSpec::RandomUnitary { unitary: Matrix::from_rows(rows)? })
            }
            other => invalid(format!("unknown collective mode '{other}'")),
        }
    }

    fn from_spec(spec: &CollectiveSpec) -> Self {
        match spec {
            CollectiveSpec::Structured { a, b, c, d, e_vectors } => Self {
                mode: "structured".into(),
                a: Some(pair(*a)),
                b: Some(pair(*b)),
                c: Some(pair(*c)),
                d: Some(pair(*d)),
                e_vectors: Some(e_vectors.iter().map(|v| v.iter().copied().map(pair).collect()).collect()),
                unitary: None,
            },
            CollectiveSpec::RandomUnitary { unitary } => Self {
                mode: "random_unitary".into(),
                a: None,
                b: None,
                c: None,
                d: None,
                e_vectors: None,
                unitary: Some(unitary.rows().into_iter().map(|r| r.into_iter().map(pair).collect()).collect()),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn passive_spec_is_identity() {
        let u = build_collective_unitary(&CollectiveSpec::passive(4)).unwrap();
        assert!(u.max_abs_diff(&Matrix::identity(8)) < 1e-12);
    }

    #[test]
    fn cnot_equivalent_spec_is_cnot() {
        let u = build_collective_unitary(&CollectiveSpec::cnot_equivalent()).unwrap();
        assert!(u.max_abs_diff(&Matrix::cnot()) < 1e-12);
    }

    #[test]
    fn random_specs_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            for spec in [
                CollectiveSpec::random_unitary(&mut rng),
                CollectiveSpec::random_structured(&mut rng),
                CollectiveSpec::random_decoupled(&mut rng),
                CollectiveSpec::random_phase_flip(&mut rng, false),
            ] {
                let u = build_collective_unitary(&spec).unwrap();
                assert!(u.is_unitary(1e-9));
                let (v0, _) = spec.images();
                let col0 = u.column(0);
                assert!(v0.iter().zip(&col0).all(|(x, y)| (x - y).norm() < 1e-12));
            }
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(CollectiveSpec::structured_basis([1.0, 1.0, 0.0, 1.0], [0, 1, 2, 3], 4).is_err());
        // Images |0>|0> and |0>|0> coincide.
        assert!(CollectiveSpec::structured_basis([1.0, 0.0, 1.0, 0.0], [0, 0, 0, 0], 4).is_err());
        let bad = CollectiveSpec::RandomUnitary { unitary: Matrix::zeros(4) };
        assert!(build_collective_unitary(&bad).is_err());
        assert!(CollectiveSpec::from_json(r#"{"mode":"other"}"#).is_err());
        assert!(CollectiveSpec::from_json(r#"{"mode":"structured","a":[1,0]}"#).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for spec in [CollectiveSpec::random_structured(&mut rng), CollectiveSpec::random_unitary(&mut rng)] {
            let back = CollectiveSpec::from_json(&spec.to_json().unwrap()).unwrap();
            let (u, w) = (build_collective_unitary(&spec).unwrap(), build_collective_unitary(&back).unwrap());
            assert!(u.max_abs_diff(&w) < 1e-12);
        }
        let text = r#"{"mode":"structured","a":[1,0],"b":[0,0],"c":[0,0],"d":[1,0],
            "e_vectors":[[[1,0],[0,0]],[[1,0],[0,0]],[[0,0],[1,0]],[[0,0],[1,0]]]}"#;
        let spec = CollectiveSpec::from_json(text).unwrap();
        assert!(build_collective_unitary(&spec).unwrap().max_abs_diff(&Matrix::cnot()) < 1e-12);
    }
}
