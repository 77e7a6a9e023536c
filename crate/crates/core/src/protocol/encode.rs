use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use super::bits::BitString;
use crate::error::{invalid, Result};

/// The dealer's key `K_A`: the secret interleaved with as many random test
/// bits at random positions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EncodedSecret {
    pub key: BitString,
    /// Ascending; reading `key` here yields the secret.
    pub secret_positions: Vec<usize>,
    /// Ascending; the inserted random bits later used for validation.
    pub test_positions: Vec<usize>,
}

pub fn encode_secret<R: Rng + ?Sized>(secret: &BitString, rng: &mut R) -> Result<EncodedSecret> {
    let n = secret.len();
    if n == 0 {
        return invalid("cannot encode an empty secret");
    }
    let mut test_positions = sample(rng, 2 * n, n).into_vec();
    test_positions.sort_unstable();
    let mut is_test = vec![false; 2 * n];
    for &p in &test_positions {
        is_test[p] = true;
    }
    let secret_positions: Vec<usize> = (0..2 * n).filter(|&p| !is_test[p]).collect();
    let mut bits = vec![0u8; 2 * n];
    for (&p, &b) in secret_positions.iter().zip(secret.bits()) {
        bits[p] = b;
    }
    for &p in &test_positions {
        bits[p] = u8::from(rng.random::<bool>());
    }
    Ok(EncodedSecret { key: BitString::from_bits(bits)?, secret_positions, test_positions })
}
