//! Simulator and verification harness for a one-way multi-party
//! semi-quantum secret sharing scheme.
//!
//! A quantum dealer splits a chosen secret across `M` classical participants
//! using `M`-qubit parity states, and guards the one-way channel with decoy
//! Bell pairs checked by direct (`M`) or Hadamard-then-measure (`MH`)
//! operations. The crate runs the scheme end to end, mounts eavesdropping
//! strategies on the channel, and computes exact detection and information
//! figures to compare against Monte Carlo estimates.

pub mod adversary;
pub mod analysis;
pub mod error;
pub mod harness;
pub mod protocol;
pub mod qsim;
pub mod rng;

pub use error::{Result, SqssError};
