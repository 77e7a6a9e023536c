//! Channel attacks and dishonest-participant strategies.

mod collective;
mod collusion;
mod eve;
mod model;
mod taps;

pub use collective::{build_collective_unitary, CollectiveSpec};
pub use collusion::{collusion_guess, CollusionGuess};
pub use eve::{Eavesdropper, EveMemory};
pub use model::{AdversaryEcho, AdversaryKind, AdversaryModel, Strategy};
pub use taps::{collective_tap, dcna_tap, ir_fake_tap, ir_measure_tap};
