//! The four-step scheme: encoding, decoy insertion, eavesdropping check and
//! validity check with reconstruction.

mod bits;
mod channel;
mod check;
mod config;
mod encode;
mod ledger;
mod sequences;
mod shares;
mod states;

pub use bits::BitString;
pub use channel::{
    transmit, ChannelTap, Holder, IdleChannel, QuantumStore, QuantumUnit, QubitId, QubitRef, TapSite, Transfer,
    TransmittedSequence, UnitKind,
};
pub use check::{run_decoy_check, CheckOutcome, CheckRecord};
pub use config::SessionConfig;
pub use encode::{encode_secret, EncodedSecret};
pub use ledger::{DealerLedger, PublicRecord};
pub use sequences::build_sequences;
pub use shares::{measure_shares, recover_secret, validity_check, ShareSet};
pub use states::{
    expected_parity, prepare_decoy_pair, prepare_message_state, BellLabel, CheckOp, Parity, MAX_PARTICIPANTS,
    MIN_PARTICIPANTS,
};
