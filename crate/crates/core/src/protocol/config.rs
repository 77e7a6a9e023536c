use serde::{Deserialize, Serialize};

use super::bits::BitString;
use super::states::{MAX_PARTICIPANTS, MIN_PARTICIPANTS};
use crate::error::{invalid, Result};

/// Full parameterisation of one protocol session.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    /// `M`, the number of classical participants.
    pub participants: usize,
    /// `N`, the secret length in bits.
    pub secret_len: usize,
    /// `K`, decoy Bell pairs per participant.
    pub decoys: usize,
    /// Largest tolerated fraction of failed decoy checks.
    pub abort_threshold: f64,
    pub seed: u64,
    /// Secret to share; drawn from the dealer stream when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secret: Option<BitString>,
}

impl SessionConfig {
    pub fn new(participants: usize, secret_len: usize, decoys: usize, seed: u64) -> Self {
        Self { participants, secret_len, decoys, abort_threshold: 0.0, seed, secret: None }
    }

    pub fn with_secret(mut self, secret: BitString) -> Self {
        self.secret_len = secret.len();
        self.secret = Some(secret);
        self
    }

    pub fn with_abort_threshold(mut self, threshold: f64) -> Self {
        self.abort_threshold = threshold;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_PARTICIPANTS..=MAX_PARTICIPANTS).contains(&self.participants) {
            return invalid(format!(
                "participants must be in {MIN_PARTICIPANTS}..={MAX_PARTICIPANTS}, got {}",
                self.participants
            ));
        }
        if self.secret_len == 0 {
            return invalid("secret length must be at least 1");
        }
        if self.decoys == 0 {
            return invalid("at least one decoy pair per participant is required");
        }
        if !(0.0..1.0).contains(&self.abort_threshold) {
            return invalid(format!("abort threshold {} is outside [0, 1)", self.abort_threshold));
        }
        if let Some(s) = &self.secret {
            if s.len() != self.secret_len {
                return invalid(format!("secret has {} bits but secret_len is {}", s.len(), self.secret_len));
            }
        }
        Ok(())
    }

    /// Qubit slots in each participant's transmitted sequence.
    pub fn sequence_len(&self) -> usize {
        2 * self.secret_len + self.decoys
    }

    pub fn total_pairs(&self) -> usize {
        self.participants * self.decoys
    }
}
