use rayon::prelude::*;
use serde::Serialize;

use super::oracle::{exact_abort_probability, paper_detection_formula};
use super::session::run_session;
use crate::adversary::{AdversaryKind, AdversaryModel};
use crate::error::{invalid, Result};
use crate::protocol::SessionConfig;
use crate::rng::trial_seeds;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetectionEstimate {
    pub model: AdversaryKind,
    pub participants: usize,
    /// Decoy pairs per participant.
    pub decoys: usize,
    /// Decoy pairs the attack touched, summed over participants.
    pub tapped_pairs: usize,
    pub trials: usize,
    pub detected_fraction: f64,
    pub standard_error: f64,
    pub exact_value: f64,
    /// The closed form `1 − (1/4)^k` evaluated at `k = tapped_pairs`.
    pub paper_formula_value: f64,
}

impl DetectionEstimate {
    /// `|detected_fraction − exact_value|` in standard errors; zero when both
    /// agree exactly.
    pub fn deviation_in_se(&self) -> f64 {
        let diff = (self.detected_fraction - self.exact_value).abs();
        if diff == 0.0 {
            0.0
        } else if self.standard_error == 0.0 {
            f64::INFINITY
        } else {
            diff / self.standard_error
        }
    }
}

/// Outcome of `trials` independent sessions seeded from `config.seed`.
/// Trials run in parallel and are reduced in seed order.
pub fn run_trials(config: &SessionConfig, adversary: &AdversaryModel, trials: usize) -> Result<Vec<bool>> {
    if trials == 0 {
        return invalid("at least one trial is required");
    }
    config.validate()?;
    adversary.validate(config.participants)?;
    trial_seeds(config.seed, trials)
        .into_par_iter()
        .map(|seed| {
            let mut c = config.clone();
            c.seed = seed;
            run_session(&c, adversary).map(|r| r.aborted)
        })
        .collect()
}

/// Fraction of aborted sessions with `sqrt(p(1−p)/T)` standard error,
/// beside the exact oracle and the closed-form claim.
pub fn monte_carlo_detection(
    config: &SessionConfig,
    adversary: &AdversaryModel,
    trials: usize,
) -> Result<DetectionEstimate> {
    let aborted = run_trials(config, adversary, trials)?;
    let p = aborted.iter().filter(|&&a| a).count() as f64 / trials as f64;
    let tapped = adversary.tapped_pairs(config.participants, config.decoys);
    Ok(DetectionEstimate {
        model: adversary.kind(),
        participants: config.participants,
        decoys: config.decoys,
        tapped_pairs: tapped,
        trials,
        detected_fraction: p,
        standard_error: (p * (1.0 - p) / trials as f64).sqrt(),
        exact_value: exact_abort_probability(
            &adversary.strategy,
            tapped,
            config.total_pairs(),
            config.abort_threshold,
        )?,
        paper_formula_value: paper_detection_formula(tapped),
    })
}

/// Fraction of sessions in which the adversary's secret guess was right.
pub fn guess_success_rate(config: &SessionConfig, adversary: &AdversaryModel, trials: usize) -> Result<(f64, f64)> {
    if trials == 0 {
        return invalid("at least one trial is required");
    }
    let hits: Vec<bool> = trial_seeds(config.seed, trials)
        .into_par_iter()
        .map(|seed| {
            let mut c = config.clone();
            c.seed = seed;
            run_session(&c, adversary).map(|r| r.eve_guess_correct == Some(true))
        })
        .collect::<Result<_>>()?;
    let p = hits.iter().filter(|&&h| h).count() as f64 / trials as f64;
    Ok((p, (p * (1.0 - p) / trials as f64).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::Strategy;

    #[test]
    fn honest_channel_is_never_detected() {
        let est = monte_carlo_detection(&SessionConfig::new(2, 2, 2, 1), &AdversaryModel::none(), 200).unwrap();
        assert_eq!(est.detected_fraction, 0.0);
        assert_eq!(est.exact_value, 0.0);
        assert_eq!(est.tapped_pairs, 0);
        assert_eq!(est.deviation_in_se(), 0.0);
    }

    #[test]
    fn estimates_are_reproducible() {
        let config = SessionConfig::new(2, 2, 1, 5);
        let adv = AdversaryModel::new(Strategy::IrFake);
        let a = monte_carlo_detection(&config, &adv, 300).unwrap();
        let b = monte_carlo_detection(&config, &adv, 300).unwrap();
        assert_eq!(a, b);
        assert!(a.deviation_in_se() <= 5.0, "{a:?}");
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(monte_carlo_detection(&SessionConfig::new(2, 2, 1, 5), &AdversaryModel::none(), 0).is_err());
    }
}
