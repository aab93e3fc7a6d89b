//! `bsys`: command-line access to linear relations, graph spectra and transport.
//!
//! Exit codes: 0 on success, 1 for unreadable or malformed input, 2 when the
//! input is well formed but violates a mathematical requirement.

mod error;
mod graph_cmd;
mod relation_cmd;
mod transport_cmd;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;

use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "bsys", version, about = "Boundary systems, metric-graph spectra and transport")]
struct Cli {
    /// Tolerance for rank and equality decisions.
    #[arg(long, global = true, env = "BSYS_TOL")]
    tol: Option<f64>,
    /// Write the main result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Linear relations: classification, decomposition, Cayley maps, pullbacks.
    #[command(subcommand)]
    Relation(relation_cmd::RelationCmd),
    /// Metric graphs: validation, spectra and the boundary-system identity.
    #[command(subcommand)]
    Graph(graph_cmd::GraphCmd),
    /// The transport group with a unitary coupling.
    #[command(subcommand)]
    Transport(transport_cmd::TransportCmd),
}

/// Options shared by every command.
pub struct Context {
    pub tol: Option<f64>,
    pub output: Option<PathBuf>,
}

impl Context {
    /// Writes `text` to `--output` or standard output.
    pub fn emit(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(path) => write_file(path, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

/// Reads and parses a JSON document; parse errors name the file, line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::input(format!("tolerance must be positive, got {tol}")));
        }
    }
    let ctx = Context {
        tol: cli.tol,
        output: cli.output,
    };
    match cli.command {
        Command::Relation(cmd) => relation_cmd::run(cmd, &ctx),
        Command::Graph(cmd) => graph_cmd::run(cmd, &ctx),
        Command::Transport(cmd) => transport_cmd::run(cmd, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.exit_code() == 0 => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
