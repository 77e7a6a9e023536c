use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sqss", version, about = "Multi-party semi-quantum secret sharing simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one session and print its report.
    Run(RunArgs),
    /// Estimate how often an attack is detected over many sessions.
    Attack(AttackArgs),
    /// Detection estimates over a grid of adversaries, decoy counts and trial counts.
    Sweep(SweepArgs),
    /// Qubit-efficiency comparison table.
    Table(TableArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct SessionArgs {
    #[arg(long, default_value_t = 3)]
    pub participants: usize,
    #[arg(long, default_value_t = 16)]
    pub secret_len: usize,
    #[arg(long, default_value_t = 16)]
    pub decoys: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest tolerated fraction of failed decoy checks.
    #[arg(long, default_value_t = 0.0)]
    pub abort_threshold: f64,
}

#[derive(Debug, Args)]
pub struct AdversaryArgs {
    /// none | dcna | ir-measure | ir-fake | collective | collusion
    #[arg(long, default_value = "none")]
    pub adversary: String,
    /// Collective-attack JSON spec; required exactly when the adversary is collective.
    #[arg(long)]
    pub ue_spec: Option<PathBuf>,
    /// Participants whose sequences are tapped (default: all).
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<usize>>,
    /// Colluding participants (default: all but the last).
    #[arg(long, value_delimiter = ',')]
    pub dishonest: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub session: SessionArgs,
    #[command(flatten)]
    pub adversary: AdversaryArgs,
    /// Secret as a bit string; random when omitted.
    #[arg(long)]
    pub secret: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[command(flatten)]
    pub session: SessionArgs,
    #[command(flatten)]
    pub adversary: AdversaryArgs,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 3)]
    pub participants: usize,
    #[arg(long, default_value_t = 16)]
    pub secret_len: usize,
    /// Comma-separated decoy counts per participant.
    #[arg(long, value_delimiter = ',', default_value = "16")]
    pub decoys: Vec<usize>,
    /// Comma-separated adversaries.
    #[arg(long, value_delimiter = ',', default_value = "none")]
    pub adversary: Vec<String>,
    #[arg(long)]
    pub ue_spec: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<usize>>,
    /// Comma-separated trial counts.
    #[arg(long, value_delimiter = ',', default_value = "10000")]
    pub trials: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0)]
    pub abort_threshold: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub output: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 3)]
    pub participants: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
