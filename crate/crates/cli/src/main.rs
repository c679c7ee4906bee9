//! `aklt-neg`: two-block negativity of the AKLT chain from the command line.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, LengthRange, Mode, RunConfig};
use error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "aklt-neg",
    version,
    about = "Exact two-block negativity of the spin-1 AKLT chain"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One row per geometry point.
    Eval(RunArgs),
    /// Like eval, with the matching closed-form value in an extra column.
    Sweep(RunArgs),
    /// Compare the edge-basis result against the explicit state for every small geometry.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Length of block A (N, A..B, A..=B or a comma list).
    #[arg(long)]
    la: LengthRange,
    /// Length of block B.
    #[arg(long)]
    lb: LengthRange,
    /// Sites between A and B (half, spin1).
    #[arg(long)]
    gap: Option<LengthRange>,
    /// Bulk sites left of A, besides the spin-1/2 end (half, default 1).
    #[arg(long)]
    lc: Option<LengthRange>,
    /// Bulk sites right of B, besides the spin-1/2 end (half, default 1).
    #[arg(long)]
    le: Option<LengthRange>,
    /// Ring sites between B and A (pbc).
    #[arg(long)]
    l1: Option<LengthRange>,
    /// Ring sites between A and B (pbc).
    #[arg(long)]
    l2: Option<LengthRange>,
    /// Boundary state for spin1: beta0..beta3, cc, cd, dc, dd or four
    /// complex amplitudes `re:im,...`. Repeat to sweep. Default beta0.
    #[arg(long)]
    weights: Vec<String>,
    /// Also compute every point from the explicit state.
    #[arg(long)]
    oracle: bool,
    /// Largest allowed |analytic - oracle|.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            mode: self.mode,
            la: self.la.clone(),
            lb: self.lb.clone(),
            gap: self.gap.clone(),
            lc: self.lc.clone(),
            le: self.le.clone(),
            l1: self.l1.clone(),
            l2: self.l2.clone(),
            weights: self.weights.clone(),
            oracle: self.oracle,
            tol: self.tol,
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Largest chain (spin-1 sites) to build explicitly.
    #[arg(long, default_value_t = 8)]
    max_sites: usize,
    /// Largest L_A + L_B.
    #[arg(long, default_value_t = 5)]
    max_block_sum: usize,
    #[arg(long, default_value_t = aklt_negativity::verify::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval(a) => commands::eval(&a.config(), a.format, a.out.as_deref()),
        Command::Sweep(a) => commands::sweep(&a.config(), a.format, a.out.as_deref()),
        Command::Verify(a) => commands::verify(a.max_sites, a.max_block_sum, a.tol, a.format, a.out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("aklt-neg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
