use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use usc_qed::cli::{parse_config, run, write_outputs};
use usc_qed::{checks, Error};

#[derive(Parser)]
#[command(name = "usc-qed", version, about = "Two qubits in a leaky ultrastrongly coupled cavity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file
    Run {
        config: PathBuf,
        /// CSV destination (summary goes next to it as .json); overrides output_path
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for sweeps (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the built-in invariant suite
    Check,
}

fn run_command(config: PathBuf, out: Option<PathBuf>, threads: Option<usize>) -> Result<(), Error> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::InvalidParameter("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    let text = std::fs::read_to_string(&config)
        .map_err(|e| Error::Io(format!("{}: {e}", config.display())))?;
    let cfg = parse_config(&text)?;
    log::info!("running {} with {:?}", cfg.experiment.name(), cfg.fock);
    let output = run(&cfg)?;
    let path = out.or_else(|| cfg.output_path.clone());
    write_outputs(&output, path.as_deref())?;
    if let Some(p) = path {
        log::info!("wrote {} rows to {}", output.table.rows.len(), p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, threads } => match run_command(config, out, threads) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
        Command::Check => {
            let outcomes = checks::run_all();
            for o in &outcomes {
                println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
            }
            if outcomes.iter().all(|o| o.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
    }
}
