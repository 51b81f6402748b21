use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use curvelab_cli::{load_config, run_to_dir, Experiment, Overrides};

#[derive(Parser)]
#[command(name = "curvelab", version, about = "Numerical experiments on Fourier extension from curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a configuration file.
    Run {
        config: PathBuf,
        /// Output directory (default: `out`, or `out` from the config).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; falls back to CURVELAB_THREADS.
        #[arg(long)]
        threads: Option<usize>,
        /// Panel budget per oscillatory integral.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// List experiments with their keys.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for e in Experiment::ALL {
                let required = e.required();
                let optional: Vec<&str> = e.keys().iter().copied().filter(|k| !required.contains(k)).collect();
                println!(
                    "{:<12} {}  required: experiment{}  optional: seed, out{}",
                    e.name(),
                    e.criterion(),
                    required.iter().map(|k| format!(", {k}")).collect::<String>(),
                    optional.iter().map(|k| format!(", {k}")).collect::<String>(),
                );
            }
            ExitCode::SUCCESS
        }
        Command::Run { config, out, seed, threads, budget } => {
            let threads = threads.or_else(|| std::env::var("CURVELAB_THREADS").ok().and_then(|v| v.parse().ok()));
            if let Some(n) = threads {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("error: cannot configure {n} threads: {e}");
                    return ExitCode::from(2);
                }
            }
            let cfg = match load_config(&config, &Overrides { seed, budget, out }) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            match run_to_dir(&cfg) {
                Ok((report, outputs)) => {
                    for v in &report.verdicts {
                        println!("{v}");
                    }
                    println!("wrote {}", outputs.csv.display());
                    if report.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
