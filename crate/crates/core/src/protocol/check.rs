use rand::Rng;
use serde::Serialize;

use super::channel::{Holder, QuantumStore, TransmittedSequence};
use super::config::SessionConfig;
use super::ledger::DealerLedger;
use super::states::{expected_parity, BellLabel, CheckOp};
use crate::error::{Result, SqssError};
use crate::rng::SimRng;

/// One decoy-pair comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub participant: usize,
    pub pair: usize,
    pub position: usize,
    pub label: BellLabel,
    pub op: CheckOp,
    pub dealer_bit: u8,
    pub participant_bit: u8,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub failures: usize,
    pub total: usize,
    pub error_rate: f64,
    pub aborted: bool,
    pub log: Vec<CheckRecord>,
}

fn violation<T>(msg: String) -> Result<T> {
    Err(SqssError::ProtocolViolation(msg))
}

/// Checks that every participant holds a complete sequence.
pub(crate) fn check_received(
    config: &SessionConfig,
    store: &QuantumStore,
    sequences: &[TransmittedSequence],
) -> Result<()> {
    if sequences.len() != config.participants {
        return violation(format!("{} sequences for {} participants", sequences.len(), config.participants));
    }
    for (i, seq) in sequences.iter().enumerate() {
        if seq.participant != i || seq.slots.len() != config.sequence_len() {
            return violation(format!(
                "sequence {i} has {} slots, expected {}",
                seq.slots.len(),
                config.sequence_len()
            ));
        }
        for (slot, r) in seq.slots.iter().enumerate() {
            if store.holder(*r)? != Holder::Participant(i) {
                return violation(format!("participant {i} does not hold slot {slot}"));
            }
        }
    }
    Ok(())
}

/// Eavesdropping check over every decoy pair.
///
/// Each participant draws `M` or `MH` uniformly from their own stream,
/// applies it to their half and announces it; the dealer mirrors the
/// operation on the retained half. A pair fails when the two outcomes
/// break [`expected_parity`]. The session aborts when the failed fraction
/// exceeds the configured threshold.
pub fn run_decoy_check(
    config: &SessionConfig,
    ledger: &DealerLedger,
    store: &mut QuantumStore,
    sequences: &[TransmittedSequence],
    dealer_rng: &mut SimRng,
    participant_rngs: &mut [SimRng],
) -> Result<CheckOutcome> {
    check_received(config, store, sequences)?;
    if participant_rngs.len() != config.participants {
        return violation("one random stream per participant is required".into());
    }
    let mut log = Vec::with_capacity(config.total_pairs());
    for (i, seq) in sequences.iter().enumerate() {
        let rng = &mut participant_rngs[i];
        for (k, &position) in ledger.decoy_positions[i].iter().enumerate() {
            let op = if rng.random::<bool>() { CheckOp::HadamardMeasure } else { CheckOp::Measure };
            let theirs = seq.slots[position];
            let ours = ledger.retained_halves[i][k];
            if op == CheckOp::HadamardMeasure {
                store.hadamard(theirs)?;
            }
            let participant_bit = store.measure_z(theirs, rng)?;
            if op == CheckOp::HadamardMeasure {
                store.hadamard(ours)?;
            }
            let dealer_bit = store.measure_z(ours, dealer_rng)?;
            let label = ledger.decoy_labels[i][k];
            let pass = expected_parity(label, op).holds(dealer_bit, participant_bit);
            log.push(CheckRecord { participant: i, pair: k, position, label, op, dealer_bit, participant_bit, pass });
        }
    }
    let failures = log.iter().filter(|r| !r.pass).count();
    let total = log.len();
    let error_rate = failures as f64 / total as f64;
    Ok(CheckOutcome { failures, total, error_rate, aborted: error_rate > config.abort_threshold, log })
}
