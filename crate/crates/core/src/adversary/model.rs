use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::collective::CollectiveSpec;
use crate::error::{invalid, Result, SqssError};

/// Attack family, as named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryKind {
    None,
    Dcna,
    IrMeasure,
    IrFake,
    Collective,
    Collusion,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 6] =
        [Self::None, Self::Dcna, Self::IrMeasure, Self::IrFake, Self::Collective, Self::Collusion];

    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Dcna => "dcna",
            Self::IrMeasure => "ir-measure",
            Self::IrFake => "ir-fake",
            Self::Collective => "collective",
            Self::Collusion => "collusion",
        }
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdversaryKind {
    type Err = SqssError;

    fn from_str(s: &str) -> Result<Self> {
        let normalised = s.replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == normalised)
            .ok_or_else(|| SqssError::InvalidArgument(format!("unknown adversary '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    None,
    /// One CNOT per transmitted qubit onto a fresh ancilla.
    Dcna,
    /// Z-measure each transmitted qubit and forward it.
    IrMeasure,
    /// Keep each transmitted qubit and forward a random Z-basis fake.
    IrFake,
    Collective(CollectiveSpec),
    /// Dishonest participants pooling their classical shares.
    Collusion { dishonest: Vec<usize> },
}

/// An adversary's configuration.
///
/// `targets` restricts a channel attack to the listed participants'
/// sequences; `None` taps every sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct AdversaryModel {
    pub strategy: Strategy,
    pub targets: Option<Vec<usize>>,
}

impl AdversaryModel {
    pub fn new(strategy: Strategy) -> Self {
        Self { strategy, targets: None }
    }

    pub fn none() -> Self {
        Self::new(Strategy::None)
    }

    pub fn with_targets(mut self, targets: Vec<usize>) -> Self {
        self.targets = Some(targets);
        self
    }

    pub fn kind(&self) -> AdversaryKind {
        match self.strategy {
            Strategy::None => AdversaryKind::None,
            Strategy::Dcna => AdversaryKind::Dcna,
            Strategy::IrMeasure => AdversaryKind::IrMeasure,
            Strategy::IrFake => AdversaryKind::IrFake,
            Strategy::Collective(_) => AdversaryKind::Collective,
            Strategy::Collusion { .. } => AdversaryKind::Collusion,
        }
    }

    /// Whether this model taps the quantum channel at all.
    pub fn taps_channel(&self) -> bool {
        !matches!(self.strategy, Strategy::None | Strategy::Collusion { .. })
    }

    pub fn targets_participant(&self, participant: usize) -> bool {
        self.taps_channel() && self.targets.as_ref().is_none_or(|t| t.contains(&participant))
    }

    /// Number of decoy pairs the channel attack touches.
    pub fn tapped_pairs(&self, participants: usize, decoys: usize) -> usize {
        (0..participants).filter(|&i| self.targets_participant(i)).count() * decoys
    }

    pub fn validate(&self, participants: usize) -> Result<()> {
        let in_range = |list: &[usize], what: &str| -> Result<()> {
            if let Some(&bad) = list.iter().find(|&&i| i >= participants) {
                return invalid(format!("{what} index {bad} out of range for {participants} participants"));
            }
            let mut sorted = list.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != list.len() {
                return invalid(format!("duplicate {what} index"));
            }
            Ok(())
        };
        if let Some(t) = &self.targets {
            in_range(t, "target")?;
        }
        match &self.strategy {
            Strategy::Collective(spec) => spec.validate(),
            Strategy::Collusion { dishonest } => {
                if dishonest.is_empty() {
                    return invalid("collusion needs at least one dishonest participant");
                }
                in_range(dishonest, "dishonest participant")
            }
            _ => Ok(()),
        }
    }

    /// Serializable summary for reports.
    pub fn echo(&self) -> AdversaryEcho {
        AdversaryEcho {
            kind: self.kind(),
            targets: self.targets.clone(),
            dishonest: match &self.strategy {
                Strategy::Collusion { dishonest } => Some(dishonest.clone()),
                _ => None,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdversaryEcho {
    pub kind: AdversaryKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dishonest: Option<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_roundtrip() {
        for k in AdversaryKind::ALL {
            assert_eq!(k.name().parse::<AdversaryKind>().unwrap(), k);
        }
        assert_eq!("ir_fake".parse::<AdversaryKind>().unwrap(), AdversaryKind::IrFake);
        assert!("eve".parse::<AdversaryKind>().is_err());
    }

    #[test]
    fn targeting() {
        let m = AdversaryModel::new(Strategy::Dcna).with_targets(vec![0]);
        assert!(m.targets_participant(0) && !m.targets_participant(1));
        assert_eq!(m.tapped_pairs(2, 4), 4);
        assert_eq!(AdversaryModel::new(Strategy::IrFake).tapped_pairs(3, 2), 6);
        assert_eq!(AdversaryModel::none().tapped_pairs(3, 2), 0);
        assert!(m.validate(2).is_ok());
        assert!(m.clone().with_targets(vec![2]).validate(2).is_err());
        assert!(m.with_targets(vec![1, 1]).validate(2).is_err());
        assert!(AdversaryModel::new(Strategy::Collusion { dishonest: vec![] }).validate(2).is_err());
    }
}
