use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::gate::Gate;
use super::matrix::{inner, norm_sqr, Matrix, ONE, ZERO};
use crate::error::{invalid, Result, SqssError};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 20;

/// Probabilities at or below this are dropped from outcome supports.
pub const SUPPORT_EPS: f64 = 1e-14;

/// Tolerance for the unit-norm invariant.
pub const NORM_TOL: f64 = 1e-9;

/// Pure state of `num_qubits` qubits as a dense amplitude vector.
///
/// Indexing is big-endian: qubit 0 is the leftmost ket symbol and the most
/// significant bit of the amplitude index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_size(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return invalid("a register needs at least one qubit");
    }
    if num_qubits > MAX_QUBITS {
        return invalid(format!("{num_qubits} qubits exceeds the {MAX_QUBITS}-qubit limit"));
    }
    Ok(())
}

impl StateVector {
    /// `|0...0⟩` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[0] = ONE;
        Ok(Self { num_qubits, amplitudes })
    }

    /// Computational basis state from a string of `'0'`/`'1'` characters.
    pub fn basis(bits: &str) -> Result<Self> {
        let parsed = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => invalid(format!("'{other}' is not a bit")),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::basis_from_bits(&parsed)
    }

    pub fn basis_from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() {
            return invalid("empty bit string");
        }
        let mut state = Self::zero(bits.len())?;
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
        state.amplitudes[0] = ZERO;
        state.amplitudes[index] = ONE;
        Ok(state)
    }

    /// Wraps raw amplitudes, checking length and normalisation.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return invalid(format!("amplitude count {len} is not a power of two >= 2"));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_size(num_qubits)?;
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return invalid("non-finite amplitude");
        }
        let n = norm_sqr(&amplitudes);
        if (n - 1.0).abs() > NORM_TOL {
            return invalid(format!("state norm^2 is {n}, expected 1"));
        }
        Ok(Self { num_qubits, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    fn shift(&self, qubit: usize) -> usize {
        self.num_qubits - 1 - qubit
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return invalid(format!("qubit {qubit} out of range for {} qubits", self.num_qubits));
        }
        Ok(())
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        check_size(n)?;
        let mut amplitudes = Vec::with_capacity(1 << n);
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(Self { num_qubits: n, amplitudes })
    }

    /// Appends `count` fresh `|0⟩` qubits on the right.
    pub fn append_zeros(&mut self, count: usize) -> Result<()> {
        let n = self.num_qubits + count;
        check_size(n)?;
        let mut amplitudes = vec![ZERO; 1 << n];
        for (i, a) in self.amplitudes.iter().enumerate() {
            amplitudes[i << count] = *a;
        }
        self.num_qubits = n;
        self.amplitudes = amplitudes;
        Ok(())
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match gate {
            Gate::H(q) => self.apply_single(*q, &Matrix::hadamard()),
            Gate::X(q) => {
                self.check_qubit(*q)?;
                let mask = 1 << self.shift(*q);
                for i in 0..self.amplitudes.len() {
                    if i & mask == 0 {
                        self.amplitudes.swap(i, i | mask);
                    }
                }
                Ok(())
            }
            Gate::Cnot { control, target } => {
                self.check_qubit(*control)?;
                self.check_qubit(*target)?;
                if control == target {
                    return invalid("CNOT control and target coincide");
                }
                let cmask = 1 << self.shift(*control);
                let tmask = 1 << self.shift(*target);
                for i in 0..self.amplitudes.len() {
                    if i & cmask != 0 && i & tmask == 0 {
                        self.amplitudes.swap(i, i | tmask);
                    }
                }
                Ok(())
            }
            Gate::Unitary { matrix, targets } => self.apply_matrix(matrix, targets),
        }
    }

    fn apply_single(&mut self, qubit: usize, m: &Matrix) -> Result<()> {
        self.check_qubit(qubit)?;
        let mask = 1 << self.shift(qubit);
        let (m00, m01, m10, m11) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i | mask];
                self.amplitudes[i] = m00 * a0 + m01 * a1;
                self.amplitudes[i | mask] = m10 * a0 + m11 * a1;
            }
        }
        Ok(())
    }

    fn apply_matrix(&mut self, m: &Matrix, targets: &[usize]) -> Result<()> {
        let k = targets.len();
        if k == 0 || m.dim() != 1 << k {
            return invalid(format!("{}x{} matrix does not act on {k} qubits", m.dim(), m.dim()));
        }
        for (i, &t) in targets.iter().enumerate() {
            self.check_qubit(t)?;
            if targets[..i].contains(&t) {
                return invalid(format!("target qubit {t} listed twice"));
            }
        }
        if !m.is_unitary(NORM_TOL) {
            return invalid("gate matrix is not unitary");
        }
        // targets[0] is the most significant bit of the local index.
        let masks: Vec<usize> = targets.iter().map(|&t| 1 << self.shift(t)).collect();
        let all: usize = masks.iter().sum();
        let offsets: Vec<usize> = (0..1usize << k)
            .map(|local| {
                masks
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| local >> (k - 1 - j) & 1 == 1)
                    .map(|(_, m)| m)
                    .sum()
            })
            .collect();
        let mut local = vec![ZERO; 1 << k];
        for base in 0..self.amplitudes.len() {
            if base & all != 0 {
                continue;
            }
            for (slot, off) in local.iter_mut().zip(&offsets) {
                *slot = self.amplitudes[base | off];
            }
            let out = m.apply(&local);
            for (v, off) in out.into_iter().zip(&offsets) {
                self.amplitudes[base | off] = v;
            }
        }
        Ok(())
    }

    /// Appends a `|0⟩` ancilla and applies CNOT(control → ancilla).
    /// Returns the ancilla's index.
    pub fn cnot_with_fresh_ancilla(&mut self, control: usize) -> Result<usize> {
        self.check_qubit(control)?;
        self.append_zeros(1)?;
        let ancilla = self.num_qubits - 1;
        self.apply(&Gate::Cnot { control, target: ancilla })?;
        Ok(ancilla)
    }

    /// Probability of reading `1` on `qubit`.
    pub fn prob_one(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = 1 << self.shift(qubit);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projects `qubit` onto `bit` and renormalises. Returns the branch
    /// probability together with the post-measurement state, or `None` when
    /// the branch has zero weight.
    pub fn project(&self, qubit: usize, bit: u8) -> Result<Option<(f64, StateVector)>> {
        self.check_qubit(qubit)?;
        let mask = 1 << self.shift(qubit);
        let want = if bit & 1 == 1 { mask } else { 0 };
        let mut amplitudes = self.amplitudes.clone();
        for (i, a) in amplitudes.iter_mut().enumerate() {
            if i & mask != want {
                *a = ZERO;
            }
        }
        let p = norm_sqr(&amplitudes);
        if p <= 0.0 {
            return Ok(None);
        }
        let s = p.sqrt();
        amplitudes.iter_mut().for_each(|a| *a /= s);
        Ok(Some((p, StateVector { num_qubits: self.num_qubits, amplitudes })))
    }

    /// Z-basis measurement of `qubit` with collapse.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, qubit: usize, rng: &mut R) -> Result<u8> {
        let p1 = self.prob_one(qubit)?;
        let bit = u8::from(rng.random::<f64>() < p1);
        match self.project(qubit, bit)? {
            Some((_, post)) => {
                *self = post;
                Ok(bit)
            }
            None => Err(SqssError::Internal(format!(
                "zero-norm branch {bit} selected on qubit {qubit}"
            ))),
        }
    }

    /// Measures `qubit` in Z and removes it from the register. The
    /// remaining qubits keep their relative order.
    pub fn measure_and_discard<R: Rng + ?Sized>(&mut self, qubit: usize, rng: &mut R) -> Result<u8> {
        if self.num_qubits == 1 {
            return invalid("cannot discard the last qubit of a register");
        }
        let bit = self.measure_z(qubit, rng)?;
        let shift = self.shift(qubit);
        let low = (1usize << shift) - 1;
        let keep = usize::from(bit) << shift;
        let n = self.num_qubits - 1;
        let mut amplitudes = vec![ZERO; 1 << n];
        for (j, slot) in amplitudes.iter_mut().enumerate() {
            let full = ((j & !low) << 1) | keep | (j & low);
            *slot = self.amplitudes[full];
        }
        self.num_qubits = n;
        self.amplitudes = amplitudes;
        Ok(bit)
    }

    fn check_distinct(&self, qubits: &[usize]) -> Result<()> {
        for (i, &q) in qubits.iter().enumerate() {
            self.check_qubit(q)?;
            if qubits[..i].contains(&q) {
                return invalid(format!("qubit {q} listed twice"));
            }
        }
        Ok(())
    }

    fn local_index(&self, index: usize, qubits: &[usize]) -> usize {
        qubits.iter().fold(0, |acc, &q| (acc << 1) | (index >> self.shift(q) & 1))
    }

    /// Exact joint Z-basis outcome distribution of `qubits`, keyed by the
    /// outcome bit string in the order given.
    pub fn outcome_distribution(&self, qubits: &[usize]) -> Result<BTreeMap<String, f64>> {
        if qubits.is_empty() {
            return invalid("no qubits selected");
        }
        self.check_distinct(qubits)?;
        let k = qubits.len();
        let mut probs = vec![0.0; 1 << k];
        for (i, a) in self.amplitudes.iter().enumerate() {
            probs[self.local_index(i, qubits)] += a.norm_sqr();
        }
        Ok(probs
            .into_iter()
            .enumerate()
            .filter(|(_, p)| *p > SUPPORT_EPS)
            .map(|(idx, p)| {
                let key: String = (0..k).map(|j| if idx >> (k - 1 - j) & 1 == 1 { '1' } else { '0' }).collect();
                (key, p)
            })
            .collect())
    }

    /// Reduced density matrix of `qubits` (in the given order), tracing out
    /// every other qubit.
    pub fn reduced_density_of(&self, qubits: &[usize]) -> Result<DensityMatrix> {
        if qubits.is_empty() {
            return invalid("no qubits selected");
        }
        self.check_distinct(qubits)?;
        let k = qubits.len();
        let dim = 1 << k;
        let keep_mask: usize = qubits.iter().map(|&q| 1 << self.shift(q)).sum();
        // Group amplitudes by the traced-out environment index.
        let mut by_env: BTreeMap<usize, Vec<Complex64>> = BTreeMap::new();
        for (i, a) in self.amplitudes.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            by_env.entry(i & !keep_mask).or_insert_with(|| vec![ZERO; dim])[self.local_index(i, qubits)] = *a;
        }
        let mut rho = Matrix::zeros(dim);
        for v in by_env.values() {
            for r in 0..dim {
                if v[r] == ZERO {
                    continue;
                }
                for c in 0..dim {
                    let cur = rho.get(r, c);
                    rho.set(r, c, cur + v[r] * v[c].conj());
                }
            }
        }
        Ok(DensityMatrix::new_unchecked(rho))
    }

    /// Single-qubit reduced density matrix.
    pub fn reduced_density(&self, qubit: usize) -> Result<DensityMatrix> {
        self.reduced_density_of(&[qubit])
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return invalid(format!(
                "dimension mismatch: {} vs {} qubits",
                self.num_qubits, other.num_qubits
            ));
        }
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    /// True iff `|⟨self|other⟩| = 1` within `1e-9`.
    pub fn equal_up_to_global_phase(&self, other: &StateVector) -> Result<bool> {
        self.equal_up_to_global_phase_within(other, NORM_TOL)
    }

    pub fn equal_up_to_global_phase_within(&self, other: &StateVector, tol: f64) -> Result<bool> {
        Ok((self.inner(other)?.norm() - 1.0).abs() <= tol)
    }
}

/// Functional form of [`StateVector::apply`].
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Functional form of [`StateVector::cnot_with_fresh_ancilla`].
pub fn apply_cnot_with_fresh_ancilla(state: &StateVector, control: usize) -> Result<StateVector> {
    let mut out = state.clone();
    out.cnot_with_fresh_ancilla(control)?;
    Ok(out)
}

/// Functional form of [`StateVector::measure_z`].
pub fn measure_z<R: Rng + ?Sized>(state: &StateVector, qubit: usize, rng: &mut R) -> Result<(u8, StateVector)> {
    let mut out = state.clone();
    let bit = out.measure_z(qubit, rng)?;
    Ok((bit, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn phi_plus() -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_amplitudes(vec![c(s), ZERO, ZERO, c(s)]).unwrap()
    }

    #[test]
    fn basis_states() {
        assert_eq!(StateVector::basis("0").unwrap().amplitude(0), ONE);
        let s = StateVector::basis("11").unwrap();
        assert_eq!(s.amplitude(3), ONE);
        assert_eq!(s.norm_sqr(), 1.0);
        let s = StateVector::basis("010").unwrap();
        assert_eq!(s.amplitude(2), ONE);
        assert!(StateVector::basis("").is_err());
        assert!(StateVector::basis("012").is_err());
    }

    #[test]
    fn register_size_is_capped() {
        assert!(StateVector::zero(MAX_QUBITS).is_ok());
        assert!(StateVector::zero(MAX_QUBITS + 1).is_err());
        let mut s = StateVector::zero(MAX_QUBITS).unwrap();
        assert!(s.append_zeros(1).is_err());
    }

    #[test]
    fn hadamard_on_zero_is_plus() {
        let s = apply_gate(&StateVector::basis("0").unwrap(), &Gate::H(0)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(0) - c(h)).norm() < 1e-12);
        assert!((s.amplitude(1) - c(h)).norm() < 1e-12);
    }

    #[test]
    fn gate_errors() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(s.apply(&Gate::H(2)).is_err());
        assert!(s.apply(&Gate::Cnot { control: 0, target: 0 }).is_err());
        let bad = Matrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(s.apply(&Gate::Unitary { matrix: bad, targets: vec![0] }).is_err());
        let id4 = Matrix::identity(4);
        assert!(s.apply(&Gate::Unitary { matrix: id4.clone(), targets: vec![1, 1] }).is_err());
        assert!(s.apply(&Gate::Unitary { matrix: id4, targets: vec![0] }).is_err());
    }

    #[test]
    fn unitary_gate_matches_named_gate() {
        let mut a = StateVector::basis("10").unwrap();
        a.apply(&Gate::H(1)).unwrap();
        let mut named = a.clone();
        named.apply(&Gate::Cnot { control: 1, target: 0 }).unwrap();
        let mut general = a.clone();
        general.apply(&Gate::Unitary { matrix: Matrix::cnot(), targets: vec![1, 0] }).unwrap();
        assert!(named.equal_up_to_global_phase_within(&general, 1e-12).unwrap());
    }

    #[test]
    fn fresh_ancilla_cnot() {
        let s = apply_cnot_with_fresh_ancilla(&StateVector::basis("0").unwrap(), 0).unwrap();
        assert_eq!(s, StateVector::basis("00").unwrap());
        let s = apply_cnot_with_fresh_ancilla(&phi_plus(), 0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut expected = vec![ZERO; 8];
        expected[0] = c(h);
        expected[7] = c(h);
        assert!(s
            .equal_up_to_global_phase_within(&StateVector::from_amplitudes(expected).unwrap(), 1e-12)
            .unwrap());
        assert!(apply_cnot_with_fresh_ancilla(&phi_plus(), 2).is_err());
    }

    #[test]
    fn measurement_collapses() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (bit, post) = measure_z(&StateVector::basis("1").unwrap(), 0, &mut rng).unwrap();
        assert_eq!(bit, 1);
        assert_eq!(post, StateVector::basis("1").unwrap());
        for _ in 0..20 {
            let (bit, post) = measure_z(&phi_plus(), 0, &mut rng).unwrap();
            let expect = if bit == 0 { "00" } else { "11" };
            assert!(post.equal_up_to_global_phase(&StateVector::basis(expect).unwrap()).unwrap());
        }
    }

    #[test]
    fn plus_state_frequency_within_five_standard_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let plus = apply_gate(&StateVector::basis("0").unwrap(), &Gate::H(0)).unwrap();
        let trials = 10_000;
        let ones: usize = (0..trials).map(|_| measure_z(&plus, 0, &mut rng).unwrap().0 as usize).sum();
        let se = (0.25f64 / trials as f64).sqrt();
        assert!((ones as f64 / trials as f64 - 0.5).abs() <= 5.0 * se);
    }

    #[test]
    fn measure_and_discard_keeps_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = StateVector::basis("101").unwrap();
        assert_eq!(s.measure_and_discard(1, &mut rng).unwrap(), 0);
        assert_eq!(s, StateVector::basis("11").unwrap());
        let mut s = StateVector::basis("011").unwrap();
        assert_eq!(s.measure_and_discard(0, &mut rng).unwrap(), 0);
        assert_eq!(s, StateVector::basis("11").unwrap());
    }

    #[test]
    fn distributions() {
        let d = StateVector::basis("00").unwrap().outcome_distribution(&[0, 1]).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d["00"], 1.0);
        assert!(phi_plus().outcome_distribution(&[0, 0]).is_err());
        let d = phi_plus().outcome_distribution(&[1]).unwrap();
        assert!((d["0"] - 0.5).abs() < 1e-12 && (d["1"] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn reduced_densities() {
        let rho = phi_plus().reduced_density(0).unwrap();
        assert!(rho.matrix().max_abs_diff(&DensityMatrix::maximally_mixed(2).matrix().clone()) < 1e-12);
        let rho = StateVector::basis("01").unwrap().reduced_density(1).unwrap();
        assert!((rho.matrix().get(1, 1) - ONE).norm() < 1e-12);
        assert!(rho.matrix().get(0, 0).norm() < 1e-12);
        assert!(phi_plus().reduced_density(2).is_err());
    }

    #[test]
    fn global_phase_equality() {
        let a = phi_plus();
        let neg = StateVector::from_amplitudes(a.amplitudes().iter().map(|x| -x).collect()).unwrap();
        assert!(a.equal_up_to_global_phase(&neg).unwrap());
        let zero = StateVector::basis("0").unwrap();
        let plus = apply_gate(&zero, &Gate::H(0)).unwrap();
        assert!(!zero.equal_up_to_global_phase(&plus).unwrap());
        assert!(zero.equal_up_to_global_phase(&a).is_err());
    }
}
