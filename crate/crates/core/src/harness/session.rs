use serde::Serialize;

use crate::adversary::{collusion_guess, AdversaryEcho, AdversaryModel, Eavesdropper, Strategy};
use crate::error::Result;
use crate::protocol::{
    build_sequences, encode_secret, measure_shares, recover_secret, run_decoy_check, transmit, validity_check,
    BitString, ChannelTap, CheckRecord, Holder, IdleChannel, SessionConfig, Transfer,
};
use crate::rng::{SessionRngs, StreamRole};

/// Counts of quantum transfers by direction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferSummary {
    pub dealer_to_participant: usize,
    pub participant_to_dealer: usize,
}

impl TransferSummary {
    fn from_transfers(transfers: &[Transfer]) -> Self {
        let count = |from: fn(&Holder) -> bool, to: fn(&Holder) -> bool| {
            transfers.iter().filter(|t| from(&t.from) && to(&t.to)).count()
        };
        let dealer = |h: &Holder| *h == Holder::Dealer;
        let participant = |h: &Holder| matches!(h, Holder::Participant(_));
        Self {
            dealer_to_participant: count(dealer, participant),
            participant_to_dealer: count(participant, dealer),
        }
    }
}

/// Outcome of one end-to-end session.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SessionReport {
    pub config: SessionConfig,
    pub adversary: AdversaryEcho,
    pub secret: BitString,
    pub aborted: bool,
    pub error_rate: f64,
    pub failed_pairs: usize,
    pub checked_pairs: usize,
    /// False when the session aborted before the validity check.
    pub validity: bool,
    pub recovered: Option<BitString>,
    pub eve_secret_guess: Option<BitString>,
    pub eve_guess_correct: Option<bool>,
    /// Fraction of the dealer's `2N`-bit key the eavesdropper guessed right.
    pub eve_key_accuracy: Option<f64>,
    pub qubits_generated: usize,
    pub transfers: TransferSummary,
    pub per_pair_check_log: Vec<CheckRecord>,
}

/// Which random substreams each step draws from, in order.
pub fn step_streams(participants: usize) -> Vec<(&'static str, Vec<String>)> {
    let all_participants: Vec<String> = (0..participants).map(|i| StreamRole::Participant(i).label()).collect();
    let mut check = all_participants.clone();
    check.push(StreamRole::Dealer.label());
    vec![
        ("secret", vec![StreamRole::Dealer.label()]),
        ("encode", vec![StreamRole::Dealer.label()]),
        ("prepare", vec![StreamRole::Dealer.label()]),
        ("transmit", vec![StreamRole::Adversary.label()]),
        ("decoy_check", check),
        ("measure_shares", all_participants),
        ("eve_guess", vec![StreamRole::Adversary.label()]),
    ]
}

/// Runs encode → prepare → transmit → decoy check → (abort | shares →
/// validity → recovery), then lets the adversary guess.
pub fn run_session(config: &SessionConfig, adversary: &AdversaryModel) -> Result<SessionReport> {
    config.validate()?;
    adversary.validate(config.participants)?;
    let mut rngs = SessionRngs::new(config.seed, config.participants);

    let secret = match &config.secret {
        Some(s) => s.clone(),
        None => BitString::random(config.secret_len, &mut rngs.dealer),
    };
    let encoded = encode_secret(&secret, &mut rngs.dealer)?;
    let (mut sequences, mut store, ledger) = build_sequences(config, &secret, encoded, &mut rngs.dealer)?;

    let mut eve = if adversary.taps_channel() { Some(Eavesdropper::new(adversary.clone())?) } else { None };
    let tap: &mut dyn ChannelTap = match eve.as_mut() {
        Some(e) => e,
        None => &mut IdleChannel,
    };
    let transfers = transmit(&mut store, &mut sequences, tap, &mut rngs.adversary)?;

    let check = run_decoy_check(config, &ledger, &mut store, &sequences, &mut rngs.dealer, &mut rngs.participants)?;
    let mut report = SessionReport {
        config: config.clone(),
        adversary: adversary.echo(),
        secret: secret.clone(),
        aborted: check.aborted,
        error_rate: check.error_rate,
        failed_pairs: check.failures,
        checked_pairs: check.total,
        validity: false,
        recovered: None,
        eve_secret_guess: None,
        eve_guess_correct: None,
        eve_key_accuracy: None,
        qubits_generated: store.qubits_prepared(),
        transfers: TransferSummary::from_transfers(&transfers),
        per_pair_check_log: check.log,
    };
    if report.aborted {
        return Ok(report);
    }

    let public = ledger.public_record();
    let shares = measure_shares(config, &public, &mut store, &sequences, &mut rngs.participants)?;
    report.validity = validity_check(&ledger.encoded, &shares)?;
    if report.validity {
        report.recovered = Some(recover_secret(&ledger.encoded, &shares)?);
    }

    if let Some(eve) = &eve {
        if let Some(key) = eve.guess_key(&public, config, &mut rngs.adversary) {
            let guess = key.select(&public.secret_positions);
            report.eve_key_accuracy = Some(key.agreement(ledger.key()) as f64 / key.len() as f64);
            report.eve_guess_correct = Some(guess == secret);
            report.eve_secret_guess = Some(guess);
        }
    } else if let Strategy::Collusion { dishonest } = &adversary.strategy {
        let g = collusion_guess(&shares, dishonest, &public.secret_positions, &secret, &mut rngs.adversary)?;
        report.eve_guess_correct = Some(g.success);
        report.eve_secret_guess = Some(g.guess);
    }
    Ok(report)
}

/// Replay record: configuration, the substreams each step consumes, and the
/// full transcript.
#[derive(Clone, Debug, Serialize)]
pub struct SessionReplay {
    pub config: SessionConfig,
    pub rng_streams: Vec<StepStreams>,
    pub transcript: SessionReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepStreams {
    pub step: &'static str,
    pub streams: Vec<String>,
}

impl SessionReplay {
    pub fn record(config: &SessionConfig, adversary: &AdversaryModel) -> Result<Self> {
        let transcript = run_session(config, adversary)?;
        let rng_streams = step_streams(config.participants)
            .into_iter()
            .map(|(step, streams)| StepStreams { step, streams })
            .collect();
        Ok(Self { config: config.clone(), rng_streams, transcript })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::CollectiveSpec;

    #[test]
    fn honest_session_recovers_secret() {
        let config = SessionConfig::new(3, 8, 8, 7);
        let r = run_session(&config, &AdversaryModel::none()).unwrap();
        assert!(!r.aborted && r.validity);
        assert_eq!(r.error_rate, 0.0);
        assert_eq!(r.recovered.as_ref(), Some(&r.secret));
        assert_eq!(r.qubits_generated, (2 * 8 + 2 * 8) * 3);
        assert_eq!(r.transfers.participant_to_dealer, 0);
        assert_eq!(r.transfers.dealer_to_participant, 3 * (16 + 8));
        assert_eq!(r.per_pair_check_log.len(), 24);
    }

    #[test]
    fn passive_collective_never_aborts() {
        let adv = AdversaryModel::new(Strategy::Collective(CollectiveSpec::passive(4)));
        for seed in 0..10 {
            let r = run_session(&SessionConfig::new(2, 4, 4, seed), &adv).unwrap();
            assert!(!r.aborted && r.validity);
            assert!(r.eve_secret_guess.is_none());
        }
    }

    #[test]
    fn undetected_dcna_knows_the_secret() {
        let adv = AdversaryModel::new(Strategy::Dcna);
        let mut survived = 0;
        for seed in 0..200 {
            let r = run_session(&SessionConfig::new(3, 8, 2, seed), &adv).unwrap();
            if !r.aborted {
                survived += 1;
                assert_eq!(r.eve_guess_correct, Some(true));
                assert_eq!(r.eve_key_accuracy, Some(1.0));
                assert_eq!(r.recovered.as_ref(), Some(&r.secret));
            }
        }
        assert!(survived > 0);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(run_session(&SessionConfig::new(1, 4, 4, 0), &AdversaryModel::none()).is_err());
        let adv = AdversaryModel::new(Strategy::Dcna).with_targets(vec![3]);
        assert!(run_session(&SessionConfig::new(2, 4, 4, 0), &adv).is_err());
    }
}
