use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::qsim::{Complex64, StateVector, ZERO};

/// Fewest and most participants a message state can be built for.
pub const MIN_PARTICIPANTS: usize = 2;
pub const MAX_PARTICIPANTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellLabel {
    #[serde(rename = "phi+")]
    PhiPlus,
    #[serde(rename = "phi-")]
    PhiMinus,
    #[serde(rename = "psi+")]
    PsiPlus,
    #[serde(rename = "psi-")]
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [Self::PhiPlus, Self::PhiMinus, Self::PsiPlus, Self::PsiMinus];

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i % 4]
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PhiPlus => "phi+",
            Self::PhiMinus => "phi-",
            Self::PsiPlus => "psi+",
            Self::PsiMinus => "psi-",
        })
    }
}

/// The two check operations available to a participant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckOp {
    /// Direct Z-basis measurement.
    #[serde(rename = "M")]
    Measure,
    /// Hadamard, then Z-basis measurement.
    #[serde(rename = "MH")]
    HadamardMeasure,
}

impl fmt::Display for CheckOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Measure => "M",
            Self::HadamardMeasure => "MH",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Equal,
    Opposite,
}

impl Parity {
    pub fn holds(self, dealer_bit: u8, participant_bit: u8) -> bool {
        match self {
            Parity::Equal => dealer_bit == participant_bit,
            Parity::Opposite => dealer_bit != participant_bit,
        }
    }
}

/// Expected relation between the dealer's and the participant's outcome on
/// an undisturbed decoy pair when both apply `op`.
///
/// Under `M` the Z correlation of the pair decides; under `MH` the pair is
/// first mapped by `H⊗H` (`phi+ → phi+`, `phi- → psi+`, `psi+ → phi-`,
/// `psi- → -psi-`), so only `phi+` and `psi+` stay correlated.
pub fn expected_parity(label: BellLabel, op: CheckOp) -> Parity {
    use BellLabel::*;
    use CheckOp::*;
    match (label, op) {
        (PhiPlus, _) | (PhiMinus, Measure) | (PsiPlus, HadamardMeasure) => Parity::Equal,
        (PsiPlus, Measure) | (PhiMinus, HadamardMeasure) | (PsiMinus, _) => Parity::Opposite,
    }
}

/// Exact two-qubit Bell state; qubit 0 is kept by the dealer, qubit 1 is
/// sent to the participant.
pub fn prepare_decoy_pair(label: BellLabel) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (p, m) = (Complex64::new(h, 0.0), Complex64::new(-h, 0.0));
    let amplitudes = match label {
        BellLabel::PhiPlus => [p, ZERO, ZERO, p],
        BellLabel::PhiMinus => [p, ZERO, ZERO, m],
        BellLabel::PsiPlus => [ZERO, p, p, ZERO],
        BellLabel::PsiMinus => [ZERO, p, m, ZERO],
    };
    StateVector::from_amplitudes(amplitudes.to_vec()).expect("Bell states are normalised")
}

/// `(|+⟩^⊗M ± |−⟩^⊗M)/√2`: uniform weight `2^{-(M-1)/2}` on every
/// `M`-bit string whose parity equals `bit`.
pub fn prepare_message_state(bit: u8, participants: usize) -> Result<StateVector> {
    if !(MIN_PARTICIPANTS..=MAX_PARTICIPANTS).contains(&participants) {
        return invalid(format!(
            "message states need {MIN_PARTICIPANTS}..={MAX_PARTICIPANTS} participants, got {participants}"
        ));
    }
    if bit > 1 {
        return invalid("encoded bit must be 0 or 1");
    }
    let weight = Complex64::new(2f64.powf(-((participants - 1) as f64) / 2.0), 0.0);
    let amplitudes = (0..1usize << participants)
        .map(|x| if x.count_ones() % 2 == u32::from(bit) { weight } else { ZERO })
        .collect();
    StateVector::from_amplitudes(amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{apply_gate, Gate};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// `(|+⟩^M + s|−⟩^M)/√2` built gate by gate.
    fn message_oracle(bit: u8, m: usize) -> StateVector {
        let mut plus = StateVector::zero(m).unwrap();
        let mut minus = StateVector::basis(&"1".repeat(m)).unwrap();
        for q in 0..m {
            plus.apply(&Gate::H(q)).unwrap();
            minus.apply(&Gate::H(q)).unwrap();
        }
        let sign = if bit == 0 { 1.0 } else { -1.0 };
        let amps = plus
            .amplitudes()
            .iter()
            .zip(minus.amplitudes())
            .map(|(a, b)| (a + b * sign) * std::f64::consts::FRAC_1_SQRT_2)
            .collect();
        StateVector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn message_state_matches_hadamard_construction() {
        for m in 2..=8 {
            for bit in 0..2 {
                let got = prepare_message_state(bit, m).unwrap();
                let want = message_oracle(bit, m);
                assert!(got.equal_up_to_global_phase_within(&want, 1e-12).unwrap());
            }
        }
    }

    #[test]
    fn two_party_zero_is_phi_plus() {
        let s = prepare_message_state(0, 2).unwrap();
        assert!(s.equal_up_to_global_phase_within(&prepare_decoy_pair(BellLabel::PhiPlus), 1e-12).unwrap());
    }

    #[test]
    fn three_party_supports() {
        let d0 = prepare_message_state(0, 3).unwrap().outcome_distribution(&[0, 1, 2]).unwrap();
        assert_eq!(d0.keys().cloned().collect::<Vec<_>>(), ["000", "011", "101", "110"]);
        let d1 = prepare_message_state(1, 3).unwrap().outcome_distribution(&[0, 1, 2]).unwrap();
        assert_eq!(d1.keys().cloned().collect::<Vec<_>>(), ["001", "010", "100", "111"]);
        for p in d0.values().chain(d1.values()) {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn message_state_range() {
        assert!(prepare_message_state(0, 1).is_err());
        assert!(prepare_message_state(0, 17).is_err());
        assert!(prepare_message_state(2, 3).is_err());
    }

    #[test]
    fn decoy_pairs() {
        let s = prepare_decoy_pair(BellLabel::PhiPlus);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(0).re - h).abs() < 1e-15 && (s.amplitude(3).re - h).abs() < 1e-15);
        let s = prepare_decoy_pair(BellLabel::PsiMinus);
        assert!((s.amplitude(1).re - h).abs() < 1e-15 && (s.amplitude(2).re + h).abs() < 1e-15);
        for label in BellLabel::ALL {
            let rho = prepare_decoy_pair(label).reduced_density(1).unwrap();
            assert!(rho.distance_from_maximally_mixed() < 1e-12);
        }
    }

    /// True action of `H⊗H` on the Bell basis, derived from the `|±⟩`
    /// expansions of each state.
    #[test]
    fn hadamard_pair_permutes_bell_basis() {
        use BellLabel::*;
        let table = [(PhiPlus, PhiPlus), (PhiMinus, PsiPlus), (PsiPlus, PhiMinus), (PsiMinus, PsiMinus)];
        for (from, to) in table {
            let mut s = prepare_decoy_pair(from);
            s.apply(&Gate::H(0)).unwrap();
            s.apply(&Gate::H(1)).unwrap();
            assert!(s.equal_up_to_global_phase_within(&prepare_decoy_pair(to), 1e-12).unwrap(), "{from}");
        }
        // psi- picks up an overall sign.
        let mut s = prepare_decoy_pair(PsiMinus);
        s.apply(&Gate::H(0)).unwrap();
        s.apply(&Gate::H(1)).unwrap();
        assert!((s.inner(&prepare_decoy_pair(PsiMinus)).unwrap().re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlation_table_has_eight_entries_matching_states() {
        for label in BellLabel::ALL {
            for op in [CheckOp::Measure, CheckOp::HadamardMeasure] {
                let mut s = prepare_decoy_pair(label);
                if op == CheckOp::HadamardMeasure {
                    s.apply(&Gate::H(0)).unwrap();
                    s.apply(&Gate::H(1)).unwrap();
                }
                let dist = s.outcome_distribution(&[0, 1]).unwrap();
                let rule = expected_parity(label, op);
                for key in dist.keys() {
                    let b: Vec<u8> = key.bytes().map(|c| c - b'0').collect();
                    assert!(rule.holds(b[0], b[1]), "{label} {op} {key}");
                }
            }
        }
    }

    #[test]
    fn sampled_checks_never_violate_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for label in BellLabel::ALL {
            for op in [CheckOp::Measure, CheckOp::HadamardMeasure] {
                for _ in 0..10_000 / 8 {
                    let mut s = prepare_decoy_pair(label);
                    if op == CheckOp::HadamardMeasure {
                        s = apply_gate(&apply_gate(&s, &Gate::H(0)).unwrap(), &Gate::H(1)).unwrap();
                    }
                    let a = s.measure_z(0, &mut rng).unwrap();
                    let b = s.measure_z(1, &mut rng).unwrap();
                    assert!(expected_parity(label, op).holds(a, b));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn parity_support_is_exact(m in 2usize..=8, bit in 0u8..2) {
            let s = prepare_message_state(bit, m).unwrap();
            let qubits: Vec<usize> = (0..m).collect();
            let dist = s.outcome_distribution(&qubits).unwrap();
            prop_assert_eq!(dist.len(), 1 << (m - 1));
            for (key, p) in dist {
                let ones = key.bytes().filter(|&c| c == b'1').count() as u8;
                prop_assert_eq!(ones % 2, bit);
                prop_assert!((p - 2f64.powi(-(m as i32 - 1))).abs() < 1e-12);
            }
        }
    }
}
