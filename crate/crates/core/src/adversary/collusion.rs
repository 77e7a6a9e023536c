use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::protocol::{BitString, ShareSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollusionGuess {
    pub guess: BitString,
    pub success: bool,
}

/// Dishonest participants XOR their own shares at the secret positions and
/// replace every honest share with uniform bits.
pub fn collusion_guess<R: Rng + ?Sized>(
    shares: &ShareSet,
    dishonest: &[usize],
    secret_positions: &[usize],
    secret: &BitString,
    rng: &mut R,
) -> Result<CollusionGuess> {
    if secret.len() != secret_positions.len() {
        return invalid("secret length does not match the secret positions");
    }
    if let Some(&bad) = dishonest.iter().find(|&&i| i >= shares.shares.len()) {
        return invalid(format!("dishonest participant {bad} has no share"));
    }
    let mut guess = BitString::zeros(secret_positions.len());
    for i in 0..shares.shares.len() {
        let part = if dishonest.contains(&i) {
            shares.shares[i].select(secret_positions)
        } else {
            BitString::random(secret_positions.len(), rng)
        };
        guess ^= &part;
    }
    let success = &guess == secret;
    Ok(CollusionGuess { guess, success })
}
