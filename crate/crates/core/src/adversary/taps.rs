//! Single-qubit channel taps acting on a qubit in transit inside its joint
//! register.

use rand::Rng;

use crate::error::{invalid, Result};
use crate::qsim::{Gate, Matrix, StateVector};

/// Appends a `|0⟩` ancilla and applies CNOT(transit → ancilla). Returns the
/// ancilla index; the transit qubit keeps its index.
pub fn dcna_tap(state: &mut StateVector, transit: usize) -> Result<usize> {
    state.cnot_with_fresh_ancilla(transit)
}

/// Z-measures the transit qubit. The collapsed qubit is forwarded and the
/// returned bit is what the eavesdropper records.
pub fn ir_measure_tap<R: Rng + ?Sized>(state: &mut StateVector, transit: usize, rng: &mut R) -> Result<u8> {
    state.measure_z(transit, rng)
}

/// Keeps the transit qubit and forwards a fresh uniformly random Z-basis
/// qubit instead. Returns the index of the forwarded qubit; the original
/// stays coherent at `transit`.
pub fn ir_fake_tap<R: Rng + ?Sized>(state: &mut StateVector, transit: usize, rng: &mut R) -> Result<usize> {
    if transit >= state.num_qubits() {
        return invalid(format!("qubit {transit} out of range"));
    }
    state.append_zeros(1)?;
    let fake = state.num_qubits() - 1;
    if rng.random::<bool>() {
        state.apply(&Gate::X(fake))?;
    }
    Ok(fake)
}

/// Appends `log2(U.dim()) - 1` fresh ancilla qubits in `|e⟩ = |0…0⟩` and
/// applies `U` to (transit ⊗ ancilla). Returns the ancilla indices.
pub fn collective_tap(state: &mut StateVector, transit: usize, unitary: &Matrix) -> Result<Vec<usize>> {
    let ancillas = unitary.dim().trailing_zeros() as usize - 1;
    let first = state.num_qubits();
    state.append_zeros(ancillas)?;
    let ancilla_idx: Vec<usize> = (first..first + ancillas).collect();
    let mut targets = vec![transit];
    targets.extend(&ancilla_idx);
    state.apply(&Gate::Unitary { matrix: unitary.clone(), targets })?;
    Ok(ancilla_idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::collective::{build_collective_unitary, CollectiveSpec};
    use crate::protocol::{prepare_decoy_pair, prepare_message_state, BellLabel};
    use crate::qsim::{Complex64, ZERO};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn real(amps: &[f64]) -> StateVector {
        StateVector::from_amplitudes(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn dcna_on_phi_minus() {
        let mut s = prepare_decoy_pair(BellLabel::PhiMinus);
        assert_eq!(dcna_tap(&mut s, 1).unwrap(), 2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want = real(&[h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -h]);
        assert!(s.equal_up_to_global_phase_within(&want, 1e-12).unwrap());
    }

    #[test]
    fn dcna_on_message_qubit_copies_z_value() {
        // M=3, bit 1, tap on participant 0's qubit: each odd-parity branch
        // gains an ancilla equal to its first bit.
        let mut s = prepare_message_state(1, 3).unwrap();
        dcna_tap(&mut s, 0).unwrap();
        let dist = s.outcome_distribution(&[0, 1, 2, 3]).unwrap();
        assert_eq!(dist.keys().cloned().collect::<Vec<_>>(), ["0010", "0100", "1001", "1111"]);
        for p in dist.values() {
            assert!((p - 0.25).abs() < 1e-12);
        }
        // Full-register tap: ancilla triple has the message parity.
        let mut s = prepare_message_state(0, 3).unwrap();
        for q in 0..3 {
            dcna_tap(&mut s, q).unwrap();
        }
        let anc = s.outcome_distribution(&[3, 4, 5]).unwrap();
        assert_eq!(anc.keys().cloned().collect::<Vec<_>>(), ["000", "011", "101", "110"]);
    }

    #[test]
    fn dcna_on_zero_leaves_product() {
        let mut s = StateVector::basis("0").unwrap();
        dcna_tap(&mut s, 0).unwrap();
        assert!(s.equal_up_to_global_phase_within(&StateVector::basis("00").unwrap(), 1e-12).unwrap());
    }

    #[test]
    fn ir_measure_keeps_z_correlation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut ones = 0;
        for _ in 0..2000 {
            let mut s = prepare_decoy_pair(BellLabel::PhiPlus);
            let e = ir_measure_tap(&mut s, 1, &mut rng).unwrap();
            let a = s.measure_z(0, &mut rng).unwrap();
            let b = s.measure_z(1, &mut rng).unwrap();
            assert!(a == b && b == e);
            ones += usize::from(e);
        }
        // Within 5 standard errors of 1/2.
        assert!((ones as f64 / 2000.0 - 0.5).abs() < 5.0 * (0.25f64 / 2000.0).sqrt());
    }

    #[test]
    fn ir_fake_forwards_mixed_qubit() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut ones = 0;
        for _ in 0..2000 {
            let mut s = StateVector::basis("0").unwrap();
            let fake = ir_fake_tap(&mut s, 0, &mut rng).unwrap();
            assert_eq!(fake, 1);
            ones += usize::from(s.measure_z(fake, &mut rng).unwrap());
            // The original is untouched.
            assert_eq!(s.prob_one(0).unwrap(), 0.0);
        }
        assert!((ones as f64 / 2000.0 - 0.5).abs() < 5.0 * (0.25f64 / 2000.0).sqrt());
    }

    #[test]
    fn collective_on_phi_plus_gives_four_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = CollectiveSpec::random_structured(&mut rng);
        let CollectiveSpec::Structured { a, b, c, d, ref e_vectors } = spec else { unreachable!() };
        let u = build_collective_unitary(&spec).unwrap();
        let mut s = prepare_decoy_pair(BellLabel::PhiPlus);
        let anc = collective_tap(&mut s, 1, &u).unwrap();
        assert_eq!(anc, vec![2, 3]);
        // (a|00⟩|e00⟩ + b|01⟩|e01⟩ + c|10⟩|e10⟩ + d|11⟩|e11⟩)/√2
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut want = vec![ZERO; 16];
        for (ab, coeff, e) in [(0, a, 0), (1, b, 1), (2, c, 2), (3, d, 3)] {
            for (k, x) in e_vectors[e].iter().enumerate() {
                want[ab * 4 + k] += coeff * x * h;
            }
        }
        let want = StateVector::from_amplitudes(want).unwrap();
        assert!((s.inner(&want).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collective_cnot_spec_matches_dcna() {
        let u = build_collective_unitary(&CollectiveSpec::cnot_equivalent()).unwrap();
        for label in BellLabel::ALL {
            let mut x = prepare_decoy_pair(label);
            let mut y = x.clone();
            collective_tap(&mut x, 1, &u).unwrap();
            dcna_tap(&mut y, 1).unwrap();
            assert!(x.equal_up_to_global_phase_within(&y, 1e-12).unwrap());
        }
    }
}
