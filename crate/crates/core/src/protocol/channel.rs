//! Quantum storage and the one-way dealer → participant channel.
//!
//! Qubits live inside [`QuantumUnit`]s (one joint register per message
//! state or decoy pair, plus whatever an eavesdropper couples in). Each
//! qubit has a stable [`QubitId`] and a current [`Holder`]; registers may
//! grow or shrink without invalidating references.

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result, SqssError};
use crate::qsim::{Gate, StateVector};
use crate::rng::SimRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Holder {
    Dealer,
    Participant(usize),
    Eavesdropper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QubitId(pub u32);

/// What a unit was prepared as. Dealer-side knowledge only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitKind {
    Message { index: usize },
    Decoy { participant: usize, pair: usize },
}

#[derive(Clone, Debug)]
pub struct QuantumUnit {
    kind: UnitKind,
    state: StateVector,
    ids: Vec<QubitId>,
    holders: Vec<Holder>,
    next_id: u32,
}

impl QuantumUnit {
    /// Wraps a freshly prepared register; every qubit starts with the dealer.
    pub fn prepared(kind: UnitKind, state: StateVector) -> Self {
        let n = state.num_qubits();
        Self {
            kind,
            state,
            ids: (0..n as u32).map(QubitId).collect(),
            holders: vec![Holder::Dealer; n],
            next_id: n as u32,
        }
    }

    pub fn kind(&self) -> UnitKind {
        self.kind
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn num_qubits(&self) -> usize {
        self.state.num_qubits()
    }

    /// Current register index of `id`.
    pub fn index_of(&self, id: QubitId) -> Result<usize> {
        self.ids
            .iter()
            .position(|&x| x == id)
            .ok_or_else(|| SqssError::InvalidArgument(format!("qubit {id:?} is not in this unit")))
    }

    pub fn holder(&self, id: QubitId) -> Result<Holder> {
        Ok(self.holders[self.index_of(id)?])
    }

    pub fn set_holder(&mut self, id: QubitId, holder: Holder) -> Result<()> {
        let idx = self.index_of(id)?;
        self.holders[idx] = holder;
        Ok(())
    }

    pub fn held_by(&self, holder: Holder) -> Vec<QubitId> {
        self.ids.iter().zip(&self.holders).filter(|(_, h)| **h == holder).map(|(id, _)| *id).collect()
    }

    /// Appends `count` fresh `|0⟩` qubits owned by `holder`.
    pub fn append_fresh(&mut self, count: usize, holder: Holder) -> Result<Vec<QubitId>> {
        self.state.append_zeros(count)?;
        let new: Vec<QubitId> = (0..count as u32).map(|k| QubitId(self.next_id + k)).collect();
        self.next_id += count as u32;
        self.ids.extend(&new);
        self.holders.extend(std::iter::repeat_n(holder, count));
        Ok(new)
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        self.state.apply(gate)
    }

    pub fn measure_z<R: Rng + ?Sized>(&mut self, id: QubitId, rng: &mut R) -> Result<u8> {
        let idx = self.index_of(id)?;
        self.state.measure_z(idx, rng)
    }

    /// Measures `id` in Z and drops it from the register.
    pub fn measure_and_discard<R: Rng + ?Sized>(&mut self, id: QubitId, rng: &mut R) -> Result<u8> {
        let idx = self.index_of(id)?;
        let bit = self.state.measure_and_discard(idx, rng)?;
        self.ids.remove(idx);
        self.holders.remove(idx);
        Ok(bit)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QubitRef {
    pub unit: usize,
    pub id: QubitId,
}

/// Every quantum register of a session.
#[derive(Clone, Debug, Default)]
pub struct QuantumStore {
    units: Vec<QuantumUnit>,
    qubits_prepared: usize,
}

impl QuantumStore {
    /// Adds a dealer-prepared unit and counts its qubits as generated.
    pub fn add_prepared(&mut self, kind: UnitKind, state: StateVector) -> usize {
        self.qubits_prepared += state.num_qubits();
        self.units.push(QuantumUnit::prepared(kind, state));
        self.units.len() - 1
    }

    pub fn unit(&self, idx: usize) -> &QuantumUnit {
        &self.units[idx]
    }

    pub fn unit_mut(&mut self, idx: usize) -> &mut QuantumUnit {
        &mut self.units[idx]
    }

    pub fn units(&self) -> &[QuantumUnit] {
        &self.units
    }

    /// Total qubits the dealer generated, excluding anything added later.
    pub fn qubits_prepared(&self) -> usize {
        self.qubits_prepared
    }

    pub fn holder(&self, r: QubitRef) -> Result<Holder> {
        self.units[r.unit].holder(r.id)
    }

    pub fn measure_z<R: Rng + ?Sized>(&mut self, r: QubitRef, rng: &mut R) -> Result<u8> {
        self.units[r.unit].measure_z(r.id, rng)
    }

    pub fn hadamard(&mut self, r: QubitRef) -> Result<()> {
        let unit = &mut self.units[r.unit];
        let idx = unit.index_of(r.id)?;
        unit.apply(&Gate::H(idx))
    }
}

/// The ordered qubits the dealer sends to one participant. Positions that
/// carry decoys are known only through the dealer's ledger.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransmittedSequence {
    pub participant: usize,
    pub slots: Vec<QubitRef>,
}

/// Where a transmission is happening: participant and slot position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TapSite {
    pub participant: usize,
    pub slot: usize,
}

/// One quantum transfer over the channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Transfer {
    pub from: Holder,
    pub to: Holder,
    pub slot: usize,
}

/// A strategy sitting on the dealer → participant channel.
///
/// `intercept` sees the qubit in transit inside its joint register and
/// returns the id of the qubit that actually reaches the participant.
pub trait ChannelTap {
    fn name(&self) -> &'static str;

    fn intercept(
        &mut self,
        unit: &mut QuantumUnit,
        transit: QubitId,
        site: TapSite,
        rng: &mut SimRng,
    ) -> Result<QubitId>;

    /// Z outcomes of the tap's own qubits on a message unit, measured by the
    /// simulator right after the intercept.
    fn record_settled(&mut self, _site: TapSite, _bits: Vec<u8>) {}
}

/// A channel nobody touches.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdleChannel;

impl ChannelTap for IdleChannel {
    fn name(&self) -> &'static str {
        "none"
    }

    fn intercept(&mut self, _: &mut QuantumUnit, transit: QubitId, _: TapSite, _: &mut SimRng) -> Result<QubitId> {
        Ok(transit)
    }
}

/// Sends every sequence from the dealer to its participant through `tap`.
///
/// The only direction this channel supports is dealer → participant.
/// Qubits the tap keeps on a message unit are measured in Z immediately
/// after the intercept and removed from the register; nothing else in the
/// session acts on them, so this is statistically identical to the
/// eavesdropper measuring them at the end while keeping registers small.
pub fn transmit(
    store: &mut QuantumStore,
    sequences: &mut [TransmittedSequence],
    tap: &mut dyn ChannelTap,
    rng: &mut SimRng,
) -> Result<Vec<Transfer>> {
    let mut transfers = Vec::new();
    for seq in sequences.iter_mut() {
        let to = Holder::Participant(seq.participant);
        for (slot, r) in seq.slots.iter_mut().enumerate() {
            let unit = store.unit_mut(r.unit);
            if unit.holder(r.id)? != Holder::Dealer {
                return invalid(format!("slot {slot} for participant {} is not with the dealer", seq.participant));
            }
            let site = TapSite { participant: seq.participant, slot };
            let delivered = tap.intercept(unit, r.id, site, rng)?;
            unit.set_holder(delivered, to)?;
            if matches!(unit.kind(), UnitKind::Message { .. }) {
                let kept = unit.held_by(Holder::Eavesdropper);
                if !kept.is_empty() {
                    let bits = kept
                        .into_iter()
                        .map(|id| unit.measure_and_discard(id, rng))
                        .collect::<Result<Vec<u8>>>()?;
                    tap.record_settled(site, bits);
                }
            }
            r.id = delivered;
            transfers.push(Transfer { from: Holder::Dealer, to, slot });
        }
    }
    Ok(transfers)
}
