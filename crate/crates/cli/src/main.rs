mod error;
mod input;
mod sweep;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qubit_channels::channel::{self, bloch_from_choi, Channel, ChoiMatrix};
use qubit_channels::degradability::{antidegradable_test, classify, ClassificationReport, DEFAULT_TOL};
use qubit_channels::symext::{
    oracle_extendible_with, OracleStatus, DEFAULT_MAX_ITER, DEFAULT_ORACLE_TOL,
};
use serde_json::json;

use error::CliError;
use input::{matrix_to_json, ChannelSpec};
use sweep::{Axis, Family};

#[derive(Parser, Debug)]
#[command(name = "qchan", version, about = "Classify single-qubit channels")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Boundary tolerance on margins and rank cutoffs.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Convergence tolerance of the extension oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_TOL)]
    oracle_tol: f64,
    /// Iteration cap of the extension oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; json by default, csv by default for sweep.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Representation {
    Choi,
    Kraus,
    Bloch,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degradability, antidegradability and entanglement-breaking verdicts.
    Classify {
        /// Channel description (JSON); `-` reads standard input.
        input: PathBuf,
    },
    /// Rewrite a channel in another representation.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Representation,
    },
    /// Kraus operators of the complementary channel.
    Complement { input: PathBuf },
    /// Symmetric-extension search next to the analytic verdict.
    Oracle {
        input: PathBuf,
        /// Write the 8x8 extension here when one is found.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Classify every point of a parameter grid.
    Sweep {
        #[command(subcommand)]
        family: FamilyCommand,
        /// Comma-separated subset of anti_margin,deg_margin,eb_margin,anti_state,deg_state,eb_state.
        #[arg(long, global = true)]
        columns: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// Two-Kraus family, alpha and beta axes.
    Rank2 {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Axis,
        #[arg(long, allow_hyphen_values = true)]
        beta: Axis,
    },
    /// Depolarizing channel, p axis.
    Depolarizing {
        #[arg(long, allow_hyphen_values = true)]
        p: Axis,
    },
    /// Unital channels along the ray lambda = s * direction.
    Unital {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_direction)]
        direction: [f64; 3],
        #[arg(long, allow_hyphen_values = true)]
        s: Axis,
    },
}

fn parse_direction(s: &str) -> Result<[f64; 3], String> {
    let v = s.split(',').map(sweep::parse_real).collect::<Result<Vec<_>, _>>()?;
    v.try_into().map_err(|_| format!("direction needs three components, got \"{s}\""))
}

impl FamilyCommand {
    fn family(&self) -> Family {
        match self {
            FamilyCommand::Rank2 { alpha, beta } => Family::Rank2 { alpha: *alpha, beta: *beta },
            FamilyCommand::Depolarizing { p } => Family::Depolarizing { p: *p },
            FamilyCommand::Unital { direction, s } => Family::Unital { direction: *direction, s: *s },
        }
    }
}

fn read_spec(path: &Path) -> Result<ChannelSpec, CliError> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?
    };
    ChannelSpec::parse(&text)
}

/// The Choi matrix of a qubit-to-qubit CPTP map, or the reason it is not one.
fn checked_choi(ch: &Channel, tol: f64) -> Result<ChoiMatrix, CliError> {
    let c = ch.choi();
    if c.output_dim() != 2 {
        return Err(CliError::Input(format!("expected a qubit output, got dimension {}", c.output_dim())));
    }
    let tp_residual = c.tp_residual();
    if !c.is_cp(tol)? || tp_residual > channel::TP_TOL {
        return Err(qubit_channels::Error::NotAChannel {
            min_eigenvalue: c.min_eigenvalue()?,
            tp_residual,
        }
        .into());
    }
    Ok(c)
}

fn json_text(v: &impl serde::Serialize) -> Result<String, CliError> {
    Ok(serde_json::to_string(v)? + "\n")
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn json_only(format: Option<Format>, command: &str) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::Input(format!("{command} only supports --format json"))),
        _ => Ok(()),
    }
}

fn report_csv(r: &ClassificationReport) -> Result<String, CliError> {
    let header = [
        "anti_state", "anti_margin", "deg_state", "deg_margin", "eb_state", "eb_margin",
        "unital", "self_complementary", "choi_rank", "cp",
    ];
    let row = vec![
        r.antidegradable.state.as_str().to_string(),
        r.antidegradable.margin.to_string(),
        r.degradable.state.as_str().to_string(),
        r.degradable.margin.to_string(),
        r.entanglement_breaking.state.as_str().to_string(),
        r.entanglement_breaking.margin.to_string(),
        r.unital.to_string(),
        r.self_complementary.map(|b| b.to_string()).unwrap_or_default(),
        r.choi_rank.to_string(),
        r.cp.to_string(),
    ];
    csv_text(&header, &[row])
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let o = &cli.opts;
    if !(o.tol > 0.0 && o.tol.is_finite()) || !(o.oracle_tol > 0.0 && o.oracle_tol.is_finite()) {
        return Err(CliError::Input("tolerances must be positive and finite".into()));
    }
    match &cli.command {
        Command::Classify { input } => {
            let report = classify(&read_spec(input)?.to_channel()?, o.tol)?;
            match o.format {
                Some(Format::Csv) => report_csv(&report),
                _ => json_text(&report),
            }
        }
        Command::Convert { input, to } => {
            json_only(o.format, "convert")?;
            let ch = read_spec(input)?.to_channel()?;
            let c = checked_choi(&ch, o.tol)?;
            let out = match to {
                Representation::Choi => ChannelSpec::from_choi(&c),
                Representation::Kraus => ChannelSpec::from_kraus(&ch.kraus(o.tol)?),
                Representation::Bloch => ChannelSpec::from_pauli_transfer(&bloch_from_choi(&c)?, o.tol),
            };
            json_text(&out)
        }
        Command::Complement { input } => {
            json_only(o.format, "complement")?;
            let ch = read_spec(input)?.to_channel()?;
            checked_choi(&ch, o.tol)?;
            let comp = ch.kraus(o.tol)?.complement();
            let operators: Vec<_> = comp.operators().iter().map(matrix_to_json).collect();
            json_text(&json!({
                "kind": "kraus",
                "output_dim": comp.output_dim(),
                "operators": operators,
            }))
        }
        Command::Oracle { input, witness } => {
            let c = checked_choi(&read_spec(input)?.to_channel()?, o.tol)?;
            let analytic = antidegradable_test(&c, o.tol)?;
            let r = oracle_extendible_with(&c, o.oracle_tol, o.max_iter)?;
            if let Some(path) = witness {
                match &r.witness {
                    Some(w) => std::fs::write(path, json_text(&matrix_to_json(w))?)?,
                    None => eprintln!("no witness written: oracle status is {}", r.status.as_str()),
                }
            }
            let consistent = !matches!(
                (r.status, analytic.state),
                (OracleStatus::Feasible, qubit_channels::VerdictState::No)
                    | (OracleStatus::Infeasible, qubit_channels::VerdictState::Yes)
            );
            match o.format {
                Some(Format::Csv) => csv_text(
                    &["status", "residual", "iterations", "anti_state", "anti_margin", "consistent"],
                    &[vec![
                        r.status.as_str().to_string(),
                        r.residual.to_string(),
                        r.iterations.to_string(),
                        analytic.state.as_str().to_string(),
                        analytic.margin.to_string(),
                        consistent.to_string(),
                    ]],
                ),
                _ => json_text(&json!({
                    "oracle": {
                        "status": r.status,
                        "residual": r.residual,
                        "iterations": r.iterations,
                    },
                    "antidegradable": analytic,
                    "consistent": consistent,
                })),
            }
        }
        Command::Sweep { family, columns } => {
            let family = family.family();
            let columns = sweep::select_columns(columns.as_deref())?;
            let rows = sweep::run(&family, o.tol)?;
            match o.format {
                Some(Format::Json) => json_text(&sweep::to_json(&family, &columns, &rows)),
                _ => {
                    let mut buf = Vec::new();
                    sweep::write_csv(&mut buf, &family, &columns, &rows)?;
                    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
                }
            }
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli).and_then(|text| emit(cli.opts.out.as_deref(), &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qchan: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
