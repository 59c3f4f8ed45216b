use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ghzlab::paradox::ReducibilityOptions;
use ghzlab::report::{self, Outcome, SimulateOptions, WitnessSource};
use ghzlab::sim::{CountModel, IntegrationMode, NoiseModel, EXPERIMENT_DURATION_S, EXPERIMENT_RATE_HZ};
use ghzlab::Result;

/// GHZ paradox verification, Bell bounds, noisy-experiment simulation,
/// entanglement witness and reducibility scans.
#[derive(Parser)]
#[command(name = "ghzlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check concurrency, multiplicity and contradiction certificates.
    Verify { spec: String },
    /// LHV bound, quantum value and threshold visibility.
    Bound { spec: String },
    /// Simulate counts for every setting and estimate B.
    Simulate {
        spec: String,
        #[command(flatten)]
        noise: NoiseArgs,
        #[command(flatten)]
        counts: CountArgs,
        /// Write the per-setting counts here.
        #[arg(long, value_name = "PATH")]
        out_csv: Option<PathBuf>,
    },
    /// GHZ₄ fidelity and entanglement witness.
    Witness {
        #[command(flatten)]
        source: WitnessArgs,
        #[command(flatten)]
        counts: CountArgs,
    },
    /// Search every bipartition for a biseparable common eigenstate.
    Reduce {
        spec: String,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, env = "GHZLAB_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// All of the above on the four-qubit paradox with reported values alongside.
    DemoPaper {
        #[arg(long, env = "GHZLAB_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct NoiseArgs {
    /// One visibility for every setting.
    #[arg(long)]
    visibility: Option<f64>,
    /// One visibility per setting, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    visibilities: Option<Vec<f64>>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct WitnessArgs {
    /// White-noise visibility of the simulated state.
    #[arg(long)]
    visibility: Option<f64>,
    /// Target fidelity of the simulated state.
    #[arg(long)]
    fidelity: Option<f64>,
    /// Directory of count CSV files for the five witness settings.
    #[arg(long, value_name = "DIR")]
    counts: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Integration {
    PerSetting,
    PerOutcome,
}

#[derive(Args)]
struct CountArgs {
    /// Coincidence rate in Hz.
    #[arg(long, default_value_t = EXPERIMENT_RATE_HZ)]
    rate: f64,
    /// Integration time in seconds.
    #[arg(long, default_value_t = EXPERIMENT_DURATION_S)]
    duration: f64,
    #[arg(long, env = "GHZLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Use rounded expected counts instead of sampling.
    #[arg(long)]
    deterministic: bool,
    #[arg(long, value_enum, default_value = "per-outcome")]
    integration: Integration,
}

impl CountArgs {
    fn model(&self) -> CountModel {
        if self.deterministic {
            return CountModel::deterministic(self.rate, self.duration);
        }
        let mode = match self.integration {
            Integration::PerSetting => IntegrationMode::PerSetting,
            Integration::PerOutcome => IntegrationMode::PerOutcome,
        };
        CountModel::sampled(self.rate, self.duration, self.seed, mode)
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Verify { spec } => report::cmd_verify(&report::load_spec(&spec)?),
        Command::Bound { spec } => report::cmd_bound(&report::load_spec(&spec)?),
        Command::Simulate { spec, noise, counts, out_csv } => {
            let noise = match (noise.visibility, noise.visibilities) {
                (Some(v), _) => NoiseModel::uniform(v)?,
                (None, Some(vs)) => NoiseModel::per_setting(vs)?,
                (None, None) => unreachable!("clap requires one visibility flag"),
            };
            let opts = SimulateOptions { noise, count_model: counts.model(), out_csv };
            report::cmd_simulate(&report::load_spec(&spec)?, &opts)
        }
        Command::Witness { source, counts } => {
            let source = match (source.visibility, source.fidelity, source.counts) {
                (Some(v), _, _) => WitnessSource::Visibility(v),
                (_, Some(f), _) => WitnessSource::Fidelity(f),
                (_, _, Some(dir)) => WitnessSource::Counts(dir),
                _ => unreachable!("clap requires one witness source"),
            };
            report::cmd_witness(&source, &counts.model())
        }
        Command::Reduce { spec, restarts, seed } => {
            let opts = ReducibilityOptions { restarts, seed, ..Default::default() };
            report::cmd_reduce(&report::load_spec(&spec)?, &opts)
        }
        Command::DemoPaper { seed } => report::cmd_demo_paper(seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli.command).and_then(|o| {
        if let Some(path) = &cli.out {
            o.report.write_json(path)?;
        }
        Ok(o)
    });
    match outcome {
        Ok(o) => {
            if cli.json {
                match o.report.to_json() {
                    Ok(j) => print!("{j}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(3);
                    }
                }
            } else {
                print!("{}", o.report.to_text());
            }
            ExitCode::from(o.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(report::exit_code_for(&e) as u8)
        }
    }
}
