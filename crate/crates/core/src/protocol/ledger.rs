use serde::Serialize;

use super::bits::BitString;
use super::channel::QubitRef;
use super::encode::EncodedSecret;
use super::states::BellLabel;

/// Everything the dealer keeps track of during a session.
#[derive(Clone, Debug, Serialize)]
pub struct DealerLedger {
    pub secret: BitString,
    pub encoded: EncodedSecret,
    /// Per participant: ascending decoy slot positions in the sequence.
    pub decoy_positions: Vec<Vec<usize>>,
    /// Per participant: Bell label of each decoy pair, in position order.
    pub decoy_labels: Vec<Vec<BellLabel>>,
    /// Per participant: the dealer's half of each decoy pair.
    #[serde(skip)]
    pub retained_halves: Vec<Vec<QubitRef>>,
}

impl DealerLedger {
    pub fn key(&self) -> &BitString {
        &self.encoded.key
    }

    /// What the dealer eventually announces on the public channel.
    pub fn public_record(&self) -> PublicRecord {
        PublicRecord {
            decoy_positions: self.decoy_positions.clone(),
            test_positions: self.encoded.test_positions.clone(),
            secret_positions: self.encoded.secret_positions.clone(),
        }
    }
}

/// Position announcements visible to everyone, eavesdropper included.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PublicRecord {
    pub decoy_positions: Vec<Vec<usize>>,
    pub test_positions: Vec<usize>,
    pub secret_positions: Vec<usize>,
}

impl PublicRecord {
    /// Maps each non-decoy slot of a sequence to its message index.
    pub fn message_index(&self, participant: usize, sequence_len: usize) -> Vec<Option<usize>> {
        let decoys = &self.decoy_positions[participant];
        let mut j = 0;
        (0..sequence_len)
            .map(|slot| {
                if decoys.binary_search(&slot).is_ok() {
                    None
                } else {
                    j += 1;
                    Some(j - 1)
                }
            })
            .collect()
    }
}
