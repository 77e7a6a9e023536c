use serde::Serialize;

use super::bits::BitString;
use super::channel::{QuantumStore, TransmittedSequence};
use super::config::SessionConfig;
use super::encode::EncodedSecret;
use super::ledger::PublicRecord;
use crate::error::{invalid, Result, SqssError};
use crate::rng::SimRng;

/// Each participant's `2N`-bit Z-measurement record `K_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShareSet {
    pub shares: Vec<BitString>,
}

impl ShareSet {
    /// XOR of all shares restricted to `positions`.
    pub fn combine_at(&self, positions: &[usize]) -> Result<BitString> {
        let selected: Vec<BitString> = self.shares.iter().map(|s| s.select(positions)).collect();
        BitString::xor_all(&selected)?.ok_or_else(|| SqssError::InvalidArgument("no shares".into()))
    }
}

/// Every participant measures the message slots of their sequence in Z.
pub fn measure_shares(
    config: &SessionConfig,
    public: &PublicRecord,
    store: &mut QuantumStore,
    sequences: &[TransmittedSequence],
    participant_rngs: &mut [SimRng],
) -> Result<ShareSet> {
    super::check::check_received(config, store, sequences)?;
    let shares = sequences
        .iter()
        .zip(participant_rngs.iter_mut())
        .map(|(seq, rng)| {
            let index = public.message_index(seq.participant, seq.slots.len());
            let bits = seq
                .slots
                .iter()
                .zip(index)
                .filter(|(_, j)| j.is_some())
                .map(|(r, _)| store.measure_z(*r, rng))
                .collect::<Result<Vec<u8>>>()?;
            BitString::from_bits(bits)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ShareSet { shares })
}

fn check_lengths(encoded: &EncodedSecret, shares: &ShareSet) -> Result<()> {
    if shares.shares.is_empty() {
        return invalid("no shares");
    }
    if shares.shares.iter().any(|s| s.len() != encoded.key.len()) {
        return invalid("share length differs from the key length");
    }
    Ok(())
}

/// True iff the XOR of all shares matches `K_A` on every test position.
pub fn validity_check(encoded: &EncodedSecret, shares: &ShareSet) -> Result<bool> {
    check_lengths(encoded, shares)?;
    Ok(shares.combine_at(&encoded.test_positions)? == encoded.key.select(&encoded.test_positions))
}

/// XOR of all shares at the secret positions, in ascending order.
pub fn recover_secret(encoded: &EncodedSecret, shares: &ShareSet) -> Result<BitString> {
    if !validity_check(encoded, shares)? {
        return Err(SqssError::ProtocolViolation("validity check failed; refusing to reconstruct".into()));
    }
    shares.combine_at(&encoded.secret_positions)
}
