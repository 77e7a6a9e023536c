use std::collections::BTreeMap;

use rand::Rng;

use super::collective::build_collective_unitary;
use super::model::{AdversaryModel, Strategy};
use crate::error::Result;
use crate::protocol::{BitString, ChannelTap, Holder, PublicRecord, QuantumUnit, QubitId, SessionConfig, TapSite};
use crate::qsim::{Gate, Matrix};
use crate::rng::SimRng;

/// The eavesdropper's private memory for one session.
#[derive(Clone, Debug, Default)]
pub struct EveMemory {
    /// Classical bits per tapped slot: measurement outcomes taken in
    /// transit and outcomes of qubits kept on message units.
    pub recorded: BTreeMap<TapSite, Vec<u8>>,
    /// Qubits still held coherently, per tapped slot.
    pub held: BTreeMap<TapSite, Vec<QubitId>>,
}

/// Runtime form of a channel-tapping [`AdversaryModel`].
#[derive(Clone, Debug)]
pub struct Eavesdropper {
    model: AdversaryModel,
    unitary: Option<Matrix>,
    memory: EveMemory,
}

impl Eavesdropper {
    pub fn new(model: AdversaryModel) -> Result<Self> {
        let unitary = match &model.strategy {
            Strategy::Collective(spec) => Some(build_collective_unitary(spec)?),
            _ => None,
        };
        Ok(Self { model, unitary, memory: EveMemory::default() })
    }

    pub fn model(&self) -> &AdversaryModel {
        &self.model
    }

    pub fn memory(&self) -> &EveMemory {
        &self.memory
    }

    /// Eve's estimate of the dealer's key `K_A` once positions are public.
    ///
    /// For each message index the recorded bits of every tapped participant
    /// are XORed; participants that were not tapped contribute a uniform
    /// guess. Strategies that yield no classical record return `None`.
    pub fn guess_key<R: Rng + ?Sized>(
        &self,
        public: &PublicRecord,
        config: &SessionConfig,
        rng: &mut R,
    ) -> Option<BitString> {
        if !matches!(self.model.strategy, Strategy::Dcna | Strategy::IrMeasure | Strategy::IrFake) {
            return None;
        }
        let mut key = vec![0u8; 2 * config.secret_len];
        for i in 0..config.participants {
            if !self.model.targets_participant(i) {
                key.iter_mut().for_each(|b| *b ^= u8::from(rng.random::<bool>()));
                continue;
            }
            for (slot, j) in public.message_index(i, config.sequence_len()).into_iter().enumerate() {
                let Some(j) = j else { continue };
                let site = TapSite { participant: i, slot };
                let bits = self.memory.recorded.get(&site).map(Vec::as_slice).unwrap_or_default();
                key[j] ^= bits.iter().fold(0, |acc, b| acc ^ b);
            }
        }
        Some(BitString::from_bits(key).expect("bits are 0 or 1"))
    }
}

impl ChannelTap for Eavesdropper {
    fn name(&self) -> &'static str {
        self.model.kind().name()
    }

    fn intercept(&mut self, unit: &mut QuantumUnit, transit: QubitId, site: TapSite, rng: &mut SimRng) -> Result<QubitId> {
        if !self.model.targets_participant(site.participant) {
            return Ok(transit);
        }
        let t = unit.index_of(transit)?;
        match &self.model.strategy {
            Strategy::None | Strategy::Collusion { .. } => Ok(transit),
            Strategy::Dcna => {
                let anc = unit.append_fresh(1, Holder::Eavesdropper)?;
                let a = unit.index_of(anc[0])?;
                unit.apply(&Gate::Cnot { control: t, target: a })?;
                self.memory.held.insert(site, anc);
                Ok(transit)
            }
            Strategy::IrMeasure => {
                let bit = unit.measure_z(transit, rng)?;
                self.memory.recorded.insert(site, vec![bit]);
                Ok(transit)
            }
            Strategy::IrFake => {
                let fake = unit.append_fresh(1, Holder::Eavesdropper)?[0];
                if rng.random::<bool>() {
                    let f = unit.index_of(fake)?;
                    unit.apply(&Gate::X(f))?;
                }
                unit.set_holder(transit, Holder::Eavesdropper)?;
                self.memory.held.insert(site, vec![transit]);
                Ok(fake)
            }
            Strategy::Collective(spec) => {
                let matrix = self.unitary.clone().expect("built with the model");
                let anc = unit.append_fresh(spec.ancilla_qubits(), Holder::Eavesdropper)?;
                let mut targets = vec![t];
                for id in &anc {
                    targets.push(unit.index_of(*id)?);
                }
                unit.apply(&Gate::Unitary { matrix, targets })?;
                self.memory.held.insert(site, anc);
                Ok(transit)
            }
        }
    }

    fn record_settled(&mut self, site: TapSite, bits: Vec<u8>) {
        self.memory.held.remove(&site);
        self.memory.recorded.insert(site, bits);
    }
}
