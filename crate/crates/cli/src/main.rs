use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use contraswarm::runner::{self, RunConfig, RunnerError};

/// Contradiction-driven swarm experiments.
#[derive(Parser)]
#[command(name = "contraswarm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded simulation and write metrics.csv and summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the output directory in the config file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeded replicates over parameter values and aggregate medians.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// `path=v1,v2,...`, e.g. `pd.population=1000,3000`; repeat for a grid.
        #[arg(long, required = true)]
        vary: Vec<String>,
        #[arg(long, default_value_t = 1)]
        replicates: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Chart one metric of a metrics CSV as SVG.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        metric: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn dispatch(command: Command) -> Result<(), RunnerError> {
    match command {
        Command::Run { config, seed, out } => {
            let cfg = RunConfig::load(&config)?;
            let result = runner::run_to_dir(&cfg, seed, out.as_deref())?;
            let s = &result.summary;
            println!("{}: {} steps, {} records", s.run_id, s.steps, result.records.len());
        }
        Command::Sweep {
            config,
            vary,
            replicates,
            out,
        } => {
            let cfg = RunConfig::load(&config)?;
            let vary = vary.iter().map(|v| runner::parse_vary(v)).collect::<Result<Vec<_>, _>>()?;
            let result = runner::sweep(&cfg, &vary, replicates)?;
            runner::write_sweep(&result, &out)?;
            println!(
                "{} points x {} replicates written to {}",
                result.summary.points.len(),
                replicates,
                out.display()
            );
        }
        Command::Plot { input, metric, out } => {
            runner::plot_csv(&input, &metric, &out)?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 1 })
        }
    }
}
