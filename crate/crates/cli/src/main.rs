mod args;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use args::{AdversaryArgs, AttackArgs, Cli, Command, OutputFormat, RunArgs, SessionArgs, SweepArgs, TableArgs};
use sqss_core::adversary::{AdversaryKind, AdversaryModel, CollectiveSpec, Strategy};
use sqss_core::analysis::{efficiency_table, render_text, row_cells, TABLE_COLUMNS};
use sqss_core::harness::{monte_carlo_detection, run_session, DetectionEstimate, SessionReport};
use sqss_core::protocol::{BitString, SessionConfig};
use sqss_core::SqssError;

const EXIT_USAGE: u8 = 1;
const EXIT_ABORTED: u8 = 2;

fn main() -> ExitCode {
    ExitCode::from(execute(std::env::args_os()))
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
fn execute<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Attack(a) => cmd_attack(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Table(a) => cmd_table(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), SqssError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, SqssError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, SqssError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| SqssError::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| SqssError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| SqssError::Internal(e.to_string()))
}

fn session_config(s: &SessionArgs) -> SessionConfig {
    SessionConfig::new(s.participants, s.secret_len, s.decoys, s.seed).with_abort_threshold(s.abort_threshold)
}

fn adversary_model(
    name: &str,
    ue_spec: Option<&Path>,
    targets: Option<&Vec<usize>>,
    dishonest: Option<&Vec<usize>>,
    participants: usize,
) -> Result<AdversaryModel, SqssError> {
    let kind: AdversaryKind = name.parse()?;
    if (kind == AdversaryKind::Collective) != ue_spec.is_some() {
        return Err(SqssError::InvalidArgument("--ue-spec is required exactly when --adversary is collective".into()));
    }
    if dishonest.is_some() && kind != AdversaryKind::Collusion {
        return Err(SqssError::InvalidArgument("--dishonest only applies to the collusion adversary".into()));
    }
    let strategy = match kind {
        AdversaryKind::None => Strategy::None,
        AdversaryKind::Dcna => Strategy::Dcna,
        AdversaryKind::IrMeasure => Strategy::IrMeasure,
        AdversaryKind::IrFake => Strategy::IrFake,
        AdversaryKind::Collective => Strategy::Collective(CollectiveSpec::load(ue_spec.expect("checked above"))?),
        AdversaryKind::Collusion => Strategy::Collusion {
            dishonest: dishonest.cloned().unwrap_or_else(|| (0..participants.saturating_sub(1)).collect()),
        },
    };
    let mut model = AdversaryModel::new(strategy);
    if let Some(t) = targets {
        model = model.with_targets(t.clone());
    }
    model.validate(participants)?;
    Ok(model)
}

fn from_args(a: &AdversaryArgs, participants: usize) -> Result<AdversaryModel, SqssError> {
    adversary_model(&a.adversary, a.ue_spec.as_deref(), a.targets.as_ref(), a.dishonest.as_ref(), participants)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_owned(), T::to_string)
}

#[derive(Serialize)]
struct RunSummary {
    seed: u64,
    adversary: AdversaryKind,
    participants: usize,
    secret_len: usize,
    decoys: usize,
    secret: String,
    aborted: bool,
    error_rate: f64,
    failed_pairs: usize,
    checked_pairs: usize,
    validity: bool,
    recovered: String,
    eve_secret_guess: String,
    eve_guess_correct: String,
    qubits_generated: usize,
}

impl RunSummary {
    fn new(r: &SessionReport) -> Self {
        Self {
            seed: r.config.seed,
            adversary: r.adversary.kind,
            participants: r.config.participants,
            secret_len: r.config.secret_len,
            decoys: r.config.decoys,
            secret: r.secret.to_string(),
            aborted: r.aborted,
            error_rate: r.error_rate,
            failed_pairs: r.failed_pairs,
            checked_pairs: r.checked_pairs,
            validity: r.validity,
            recovered: opt(&r.recovered),
            eve_secret_guess: opt(&r.eve_secret_guess),
            eve_guess_correct: opt(&r.eve_guess_correct),
            qubits_generated: r.qubits_generated,
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "adversary         {}", self.adversary);
        let _ = writeln!(s, "M, N, K           {}, {}, {}", self.participants, self.secret_len, self.decoys);
        let _ = writeln!(s, "seed              {}", self.seed);
        let _ = writeln!(s, "secret            {}", self.secret);
        let _ = writeln!(s, "decoy failures    {}/{} ({})", self.failed_pairs, self.checked_pairs, self.error_rate);
        let _ = writeln!(s, "aborted           {}", self.aborted);
        let _ = writeln!(s, "validity          {}", self.validity);
        let _ = writeln!(s, "recovered         {}", self.recovered);
        let _ = writeln!(s, "eve guess         {}", self.eve_secret_guess);
        let _ = writeln!(s, "eve guess correct {}", self.eve_guess_correct);
        let _ = writeln!(s, "qubits generated  {}", self.qubits_generated);
        s
    }
}

fn cmd_run(a: RunArgs) -> Result<u8, SqssError> {
    let mut config = session_config(&a.session);
    if let Some(bits) = &a.secret {
        config = config.with_secret(bits.parse::<BitString>()?);
    }
    let model = from_args(&a.adversary, config.participants)?;
    let report = run_session(&config, &model)?;
    let text = match a.output {
        OutputFormat::Json => to_json(&report)?,
        OutputFormat::Csv => to_csv(&[RunSummary::new(&report)])?,
        OutputFormat::Text => RunSummary::new(&report).text(),
    };
    emit(&text, a.out.as_deref())?;
    Ok(if report.aborted || !report.validity { EXIT_ABORTED } else { 0 })
}

#[derive(Serialize)]
struct EstimateRow {
    model: AdversaryKind,
    participants: usize,
    secret_len: usize,
    decoys: usize,
    tapped_pairs: usize,
    trials: usize,
    detected_fraction: f64,
    standard_error: f64,
    exact: f64,
    paper_formula: f64,
}

impl EstimateRow {
    fn new(e: &DetectionEstimate, secret_len: usize) -> Self {
        Self {
            model: e.model,
            participants: e.participants,
            secret_len,
            decoys: e.decoys,
            tapped_pairs: e.tapped_pairs,
            trials: e.trials,
            detected_fraction: e.detected_fraction,
            standard_error: e.standard_error,
            exact: e.exact_value,
            paper_formula: e.paper_formula_value,
        }
    }
}

fn estimates_text(rows: &[EstimateRow]) -> String {
    let mut s = String::new();
    for r in rows {
        let _ = writeln!(
            s,
            "{:<11} M={} N={} K={} pairs={} trials={}  detected {:.6} ± {:.6}  exact {:.6}  closed-form {:.6}",
            r.model.name(),
            r.participants,
            r.secret_len,
            r.decoys,
            r.tapped_pairs,
            r.trials,
            r.detected_fraction,
            r.standard_error,
            r.exact,
            r.paper_formula
        );
    }
    s
}

fn render_estimates(rows: &[EstimateRow], format: OutputFormat) -> Result<String, SqssError> {
    match format {
        OutputFormat::Json => to_json(&rows),
        OutputFormat::Csv => to_csv(rows),
        OutputFormat::Text => Ok(estimates_text(rows)),
    }
}

fn cmd_attack(a: AttackArgs) -> Result<u8, SqssError> {
    let config = session_config(&a.session);
    let model = from_args(&a.adversary, config.participants)?;
    let estimate = monte_carlo_detection(&config, &model, a.trials)?;
    let rows = [EstimateRow::new(&estimate, config.secret_len)];
    let text = match a.output {
        OutputFormat::Json => to_json(&rows[0])?,
        other => render_estimates(&rows, other)?,
    };
    emit(&text, a.out.as_deref())?;
    Ok(0)
}

fn cmd_sweep(a: SweepArgs) -> Result<u8, SqssError> {
    if a.trials.iter().any(|&t| t == 0) {
        return Err(SqssError::InvalidArgument("trials must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for name in &a.adversary {
        let ue = if name == "collective" { a.ue_spec.as_deref() } else { None };
        if ue.is_none() && name == "collective" {
            return Err(SqssError::InvalidArgument("--ue-spec is required for the collective adversary".into()));
        }
        for &k in &a.decoys {
            for &t in &a.trials {
                let config = SessionConfig::new(a.participants, a.secret_len, k, a.seed)
                    .with_abort_threshold(a.abort_threshold);
                let model = adversary_model(name, ue, a.targets.as_ref(), None, a.participants)?;
                let estimate = monte_carlo_detection(&config, &model, t)?;
                rows.push(EstimateRow::new(&estimate, a.secret_len));
            }
        }
    }
    emit(&render_estimates(&rows, a.output)?, a.out.as_deref())?;
    Ok(0)
}

fn cmd_table(a: TableArgs) -> Result<u8, SqssError> {
    let rows = efficiency_table(a.participants)?;
    let text = match a.output {
        OutputFormat::Text => render_text(&rows),
        OutputFormat::Json => to_json(&rows)?,
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut write = |cells: &[&str]| w.write_record(cells).map_err(|e| SqssError::Internal(e.to_string()));
            write(&TABLE_COLUMNS)?;
            for r in &rows {
                let cells = row_cells(r);
                write(&cells.iter().map(String::as_str).collect::<Vec<_>>())?;
            }
            let bytes = w.into_inner().map_err(|e| SqssError::Internal(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| SqssError::Internal(e.to_string()))?
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(0)
}
