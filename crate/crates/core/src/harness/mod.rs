//! Session orchestration, Monte Carlo estimation, exact oracles and
//! information measures.

mod information;
mod montecarlo;
mod oracle;
mod session;

pub use information::{
    dcna_key_information, dcna_share_information, decoy_bit_information, holevo_information, theorem_sweep,
    TheoremPoint,
};
pub use montecarlo::{guess_success_rate, monte_carlo_detection, run_trials, DetectionEstimate};
pub use oracle::{
    eve_ensemble_on_decoy_bit, exact_abort_probability, exact_detection_probability, pair_fail_probability,
    paper_detection_formula, per_pair_escape, tapped_pair_state,
};
pub use session::{run_session, step_streams, SessionReplay, SessionReport, StepStreams, TransferSummary};
