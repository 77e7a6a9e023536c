use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::oracle::{eve_ensemble_on_decoy_bit, per_pair_escape};
use crate::adversary::{dcna_tap, CollectiveSpec, Strategy};
use crate::error::{invalid, Result};
use crate::protocol::{prepare_message_state, BellLabel, CheckOp};
use crate::qsim::{DensityMatrix, DENSITY_TOL};

/// `χ = S(Σ pᵢ ρᵢ) − Σ pᵢ S(ρᵢ)` in bits.
pub fn holevo_information(ensemble: &[(f64, DensityMatrix)]) -> Result<f64> {
    if ensemble.is_empty() {
        return invalid("empty ensemble");
    }
    if ensemble.iter().any(|(p, _)| !(0.0..=1.0 + DENSITY_TOL).contains(p)) {
        return invalid("ensemble probabilities must lie in [0, 1]");
    }
    let total: f64 = ensemble.iter().map(|(p, _)| p).sum();
    if (total - 1.0).abs() > DENSITY_TOL {
        return invalid(format!("ensemble probabilities sum to {total}"));
    }
    let parts: Vec<(f64, &DensityMatrix)> = ensemble.iter().map(|(p, r)| (*p, r)).collect();
    let average = DensityMatrix::new(DensityMatrix::scaled_sum(&parts)?)?;
    let conditional: f64 = ensemble.iter().map(|(p, r)| p * r.entropy()).sum();
    Ok((average.entropy() - conditional).max(0.0))
}

/// Largest Holevo information of the eavesdropper's register about the
/// participant's check bit, over every Bell label and check operation.
pub fn decoy_bit_information(strategy: &Strategy) -> Result<f64> {
    let mut best = 0.0f64;
    for label in BellLabel::ALL {
        for op in [CheckOp::Measure, CheckOp::HadamardMeasure] {
            best = best.max(holevo_information(&eve_ensemble_on_decoy_bit(strategy, label, op)?)?);
        }
    }
    Ok(best)
}

/// Tapped message state with `M` trailing ancillas, one per participant.
fn dcna_tapped_message(bit: u8, m: usize) -> Result<crate::qsim::StateVector> {
    let mut s = prepare_message_state(bit, m)?;
    for q in 0..m {
        dcna_tap(&mut s, q)?;
    }
    Ok(s)
}

/// Holevo information of the single-CNOT ancilla on participant 0's qubit
/// about that participant's Z outcome, with the key bit uniform.
pub fn dcna_share_information(m: usize) -> Result<f64> {
    let mut ensemble = Vec::new();
    for r in 0..2u8 {
        let mut parts = Vec::new();
        for bit in 0..2u8 {
            if let Some((p, post)) = dcna_tapped_message(bit, m)?.project(0, r)? {
                parts.push((0.5 * p, post.reduced_density(m)?));
            }
        }
        let weight: f64 = parts.iter().map(|(w, _)| w).sum();
        if weight <= 1e-14 {
            continue;
        }
        let scaled: Vec<(f64, &DensityMatrix)> = parts.iter().map(|(w, rho)| (w / weight, rho)).collect();
        ensemble.push((weight, DensityMatrix::new(DensityMatrix::scaled_sum(&scaled)?)?));
    }
    holevo_information(&ensemble)
}

/// Holevo information of all `M` single-CNOT ancillas of one message state
/// about the key bit it carries.
pub fn dcna_key_information(m: usize) -> Result<f64> {
    let ancillas: Vec<usize> = (m..2 * m).collect();
    let ensemble = (0..2u8)
        .map(|bit| Ok((0.5, dcna_tapped_message(bit, m)?.reduced_density_of(&ancillas)?)))
        .collect::<Result<Vec<_>>>()?;
    holevo_information(&ensemble)
}

/// One collective-attack draw in the zero-error / zero-information sweep.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremPoint {
    pub family: &'static str,
    /// Per-pair failure probability under uniform labels and operations.
    pub pair_error: f64,
    /// Largest Holevo information about the participant's check bit.
    pub holevo: f64,
}

/// Evaluates `draws` random specs from each random family plus the fixed
/// corner cases.
pub fn theorem_sweep(draws: usize, seed: u64) -> Result<Vec<TheoremPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut specs: Vec<(&'static str, CollectiveSpec)> =
        vec![("passive", CollectiveSpec::passive(4)), ("cnot", CollectiveSpec::cnot_equivalent())];
    for _ in 0..draws {
        specs.push(("haar", CollectiveSpec::random_unitary(&mut rng)));
        specs.push(("structured", CollectiveSpec::random_structured(&mut rng)));
        specs.push(("decoupled", CollectiveSpec::random_decoupled(&mut rng)));
        specs.push(("phase_equal", CollectiveSpec::random_phase_flip(&mut rng, true)));
        specs.push(("phase_random", CollectiveSpec::random_phase_flip(&mut rng, false)));
    }
    specs
        .into_iter()
        .map(|(family, spec)| {
            let strategy = Strategy::Collective(spec);
            Ok(TheoremPoint {
                family,
                pair_error: 1.0 - per_pair_escape(&strategy)?,
                holevo: decoy_bit_information(&strategy)?,
            })
        })
        .collect()
}
