//! `mixcert`: mixed volumes of boxes, Shephard checks, certificates of
//! non-hyperbolic mixed volume matrices, and the property self-test.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{Outcome, UsageError};

#[derive(Parser, Debug)]
#[command(name = "mixcert", version, about = "Exact mixed volume computations and certificates")]
struct Cli {
    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the structured result (certificate or report) to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest index set searched exhaustively for a violating minor.
    #[arg(long, global = true, default_value_t = mixcert::hypmat::DEFAULT_ENUMERATION_CAP)]
    max_core_size: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the mixed volume of a body tuple file by both routes.
    Mixvol { file: PathBuf },
    /// Build a k = 1 matrix and check every principal minor sign.
    Shephard(ShephardArgs),
    /// Non-hyperbolic matrices for k >= 2.
    #[command(subcommand)]
    Fedotov(FedotovCommand),
    /// Primitive operators of the cube.
    #[command(subcommand)]
    Hodge(HodgeCommand),
    /// Run every property suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
pub struct ShephardArgs {
    /// JSON file with "bodies" and "c_list" box lists; random when absent.
    pub file: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
enum FedotovCommand {
    /// Build and verify an explicit certificate (k = 2 directly, k > 2 by
    /// polarization).
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Random boxes from a fixed grid, looking for a violating minor.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-verify a certificate file independently.
    Verify { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum HodgeCommand {
    /// Basis, dimension and Hodge-Riemann values of the primitive space.
    Primitive {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

fn dispatch(cli: &Cli) -> Result<Outcome, UsageError> {
    let cap = cli.max_core_size;
    match &cli.command {
        Command::Mixvol { file } => commands::mixvol(file),
        Command::Shephard(a) => commands::shephard(a),
        Command::Fedotov(FedotovCommand::Construct { n, k }) => commands::construct(*n, *k, cap),
        Command::Fedotov(FedotovCommand::Search { n, k, m, trials, seed }) => {
            commands::search(*n, *k, *m, *trials, *seed, cap)
        }
        Command::Fedotov(FedotovCommand::Verify { file }) => commands::verify(file),
        Command::Hodge(HodgeCommand::Primitive { n, k }) => commands::primitive(*n, *k),
        Command::Selftest { seed } => Ok(commands::selftest(*seed)),
    }
}

fn run(cli: &Cli) -> Result<bool, UsageError> {
    if cli.max_core_size == 0 || cli.max_core_size > 30 {
        return Err(UsageError::flag("--max-core-size", "must be between 1 and 30"));
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(UsageError::flag("--threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| UsageError::flag("--threads", &e.to_string()))?;
    }
    let outcome = dispatch(cli)?;
    match cli.format {
        Format::Text => print!("{}", outcome.text),
        Format::Json => print!("{}", outcome.json_string()),
    }
    if let Some(path) = &cli.output {
        let doc = outcome.artifact.clone().unwrap_or_else(|| outcome.json_string());
        std::fs::write(path, doc).map_err(|e| UsageError::flag("--output", &format!("{}: {e}", path.display())))?;
    }
    if !outcome.ok {
        for f in &outcome.failures {
            eprintln!("failure: {f}");
        }
    }
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
