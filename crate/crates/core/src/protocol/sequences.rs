use rand::seq::index::sample;
use rand::Rng;

use super::bits::BitString;
use super::channel::{QuantumStore, QubitId, QubitRef, TransmittedSequence, UnitKind};
use super::config::SessionConfig;
use super::encode::EncodedSecret;
use super::ledger::DealerLedger;
use super::states::{prepare_decoy_pair, prepare_message_state, BellLabel};
use crate::error::Result;

/// Prepares every message state and decoy pair and lays out the `M`
/// sequences.
///
/// Message state `j` encodes `K_A[j]`; its qubit `i` becomes slot `j` of
/// participant `i`'s message stream. Each participant gets `K` decoy halves
/// at uniformly random positions among the `2N + K` slots.
pub fn build_sequences<R: Rng + ?Sized>(
    config: &SessionConfig,
    secret: &BitString,
    encoded: EncodedSecret,
    rng: &mut R,
) -> Result<(Vec<TransmittedSequence>, QuantumStore, DealerLedger)> {
    config.validate()?;
    let m = config.participants;
    let mut store = QuantumStore::default();

    let message_units = (0..encoded.key.len())
        .map(|j| Ok(store.add_prepared(UnitKind::Message { index: j }, prepare_message_state(encoded.key.get(j), m)?)))
        .collect::<Result<Vec<usize>>>()?;

    let len = config.sequence_len();
    let mut sequences = Vec::with_capacity(m);
    let mut decoy_positions = Vec::with_capacity(m);
    let mut decoy_labels = Vec::with_capacity(m);
    let mut retained_halves = Vec::with_capacity(m);
    for i in 0..m {
        let labels: Vec<BellLabel> = (0..config.decoys).map(|_| BellLabel::from_index(rng.random_range(0..4))).collect();
        let mut positions = sample(rng, len, config.decoys).into_vec();
        positions.sort_unstable();

        let mut halves = Vec::with_capacity(config.decoys);
        let decoy_units: Vec<usize> = labels
            .iter()
            .enumerate()
            .map(|(k, &label)| {
                let unit = store.add_prepared(UnitKind::Decoy { participant: i, pair: k }, prepare_decoy_pair(label));
                halves.push(QubitRef { unit, id: QubitId(0) });
                unit
            })
            .collect();

        let mut slots = Vec::with_capacity(len);
        let (mut next_decoy, mut next_msg) = (0, 0);
        for slot in 0..len {
            if positions.get(next_decoy) == Some(&slot) {
                slots.push(QubitRef { unit: decoy_units[next_decoy], id: QubitId(1) });
                next_decoy += 1;
            } else {
                slots.push(QubitRef { unit: message_units[next_msg], id: QubitId(i as u32) });
                next_msg += 1;
            }
        }
        sequences.push(TransmittedSequence { participant: i, slots });
        decoy_positions.push(positions);
        decoy_labels.push(labels);
        retained_halves.push(halves);
    }

    let ledger = DealerLedger { secret: secret.clone(), encoded, decoy_positions, decoy_labels, retained_halves };
    Ok((sequences, store, ledger))
}
