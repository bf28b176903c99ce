use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qdecoherence_cli::config::KEYS;
use qdecoherence_cli::{output, run, split_overrides, Command, Failure, RawConfig, RunConfig};

#[derive(Parser)]
#[command(name = "qdeco", version, about = "Decoherence of a qubit register in a phonon bath")]
#[command(after_help = "Any config key may be given as a flag, e.g. --geometry.N 8 or --temperature_K=4.\nRun `qdeco keys` to list them with defaults.")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Decay quantities over a time, temperature or N sweep.
    Scan(Io),
    /// Scaled piezo kernels over a time sweep.
    QFunctions(Io),
    /// Density-matrix elements and their bounds over a time sweep.
    Rho(Io),
    /// Kernels against the discrete-mode lattice sum.
    OracleCompare(Io),
    /// Print every config key with its default.
    Keys,
}

#[derive(Args)]
struct Io {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination; a `<out>.meta` sidecar is written next to it.
    /// Without it the CSV goes to stdout and the sidecar to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(command: Command, io: Io, overrides: Vec<(String, String)>) -> Result<(), Failure> {
    let mut raw = match &io.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    for (k, v) in overrides {
        raw.set(&k, &v)?;
    }
    let config = RunConfig::from_raw(raw)?;
    let table = run(command, &config)?;
    let meta = output::meta(command, &config, &table);
    let io_err = |e: &dyn std::fmt::Display| Failure::Io(e.to_string());
    match &io.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| io_err(&e))?;
            output::write_csv(&table, io::BufWriter::new(file)).map_err(|e| io_err(&e))?;
            let mut meta_path = path.clone().into_os_string();
            meta_path.push(".meta");
            fs::write(meta_path, meta).map_err(|e| io_err(&e))?;
        }
        None => {
            output::write_csv(&table, io::stdout().lock()).map_err(|e| io_err(&e))?;
            io::stderr().write_all(meta.as_bytes()).map_err(|e| io_err(&e))?;
        }
    }
    if table.failed_cells > 0 {
        return Err(Failure::Numerical(format!("{} cells did not converge", table.failed_cells)));
    }
    Ok(())
}

fn main() -> ExitCode {
    let (args, overrides) = match split_overrides(std::env::args().collect()) {
        Ok(split) => split,
        Err(e) => {
            eprintln!("qdeco: config error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    let (command, io) = match cli.command {
        Sub::Scan(io) => (Command::Scan, io),
        Sub::QFunctions(io) => (Command::QFunctions, io),
        Sub::Rho(io) => (Command::Rho, io),
        Sub::OracleCompare(io) => (Command::OracleCompare, io),
        Sub::Keys => {
            for (k, v) in KEYS {
                println!("{k} = {v}");
            }
            return ExitCode::SUCCESS;
        }
    };
    match execute(command, io, overrides) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qdeco: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
