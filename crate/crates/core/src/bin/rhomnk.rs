use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rhomnk::harness::{self, ConfigOverrides, WalkKind};
use rhomnk::landscape::{load_instance, save_instance};
use rhomnk::rng::{RandomStream, Substream};
use rhomnk::walks::{self, autocorrelation, WalkRecord, DEFAULT_BUDGET};
use rhomnk::{Error, Execution, InstanceParams, RhoMnkInstance, Solution};

#[derive(Parser)]
#[command(name = "rhomnk", version, about = "ρMNK-landscapes and set-based landscape analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and write it to a file.
    Generate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the objective vector of a bit string.
    Evaluate {
        #[command(flatten)]
        source: InstanceArgs,
        /// Bit string, bit 0 first.
        #[arg(long)]
        bits: String,
    },
    /// Random walk over solution-sets with autocorrelation analysis.
    RandomWalk {
        #[command(flatten)]
        source: InstanceArgs,
        #[arg(long, default_value_t = 100)]
        mu: usize,
        #[arg(long, default_value_t = 5000)]
        length: usize,
        /// Largest lag to report.
        #[arg(long, default_value_t = 100)]
        max_lag: usize,
        /// Seed for the walk (defaults to the instance seed).
        #[arg(long)]
        walk_seed: Option<u64>,
        /// Write the hypervolume series as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First-improvement hill climbing over solution-sets.
    AdaptiveWalk {
        #[command(flatten)]
        source: InstanceArgs,
        #[arg(long, default_value_t = 20)]
        mu: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        walk_seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep and write long-format CSV.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    rho: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct InstanceArgs {
    /// Load the instance from this file instead of generating it.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
}

impl InstanceArgs {
    fn load(&self) -> rhomnk::Result<RhoMnkInstance> {
        match &self.instance {
            Some(path) => load_instance(path),
            None => {
                let p = &self.params;
                RhoMnkInstance::generate(InstanceParams::new(p.n, p.m, p.k, p.rho, p.seed))
            }
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Key-value config file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    rho: Option<Vec<f64>>,
    #[arg(long)]
    mu: Option<usize>,
    /// `random` or `adaptive`.
    #[arg(long)]
    kind: Option<WalkKind>,
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    max_lag: Option<usize>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Rows go here, aggregates to `<stem>.summary.csv`; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    desk_scale: bool,
    #[arg(long)]
    threads: Option<usize>,
}

impl SweepArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            n_values: self.n.clone(),
            m_values: self.m.clone(),
            k_values: self.k.clone(),
            rho_values: self.rho.clone(),
            mu: self.mu,
            walk_kind: self.kind,
            walk_length: self.length,
            budget: self.budget,
            max_lag: self.max_lag,
            replicates: self.replicates,
            base_seed: self.seed,
            output_path: self.out.clone(),
            desk_scale: self.desk_scale.then_some(true),
            threads: self.threads,
        }
    }
}

fn write_series(path: &PathBuf, rec: &WalkRecord) -> rhomnk::Result<()> {
    let io = |e| Error::Io {
        path: path.clone(),
        source: e,
    };
    let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
    writeln!(w, "step,hypervolume").map_err(io)?;
    for (step, f) in rec.fitness_series.iter().enumerate() {
        writeln!(w, "{step},{f}").map_err(io)?;
    }
    w.flush().map_err(io)
}

fn run(cli: Cli) -> rhomnk::Result<()> {
    match cli.command {
        Command::Generate { params: p, out } => {
            let inst = RhoMnkInstance::generate(InstanceParams::new(p.n, p.m, p.k, p.rho, p.seed))?;
            save_instance(&inst, &out)?;
        }
        Command::Evaluate { source, bits } => {
            let inst = source.load()?;
            let s: Solution = bits.parse()?;
            let f = inst.evaluate(&s)?;
            let text: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            println!("{}", text.join(" "));
        }
        Command::RandomWalk {
            source,
            mu,
            length,
            max_lag,
            walk_seed,
            out,
        } => {
            let inst = source.load()?;
            let mut rng =
                RandomStream::new(walk_seed.unwrap_or(inst.params().seed), Substream::Walk);
            let rec = walks::random_walk(&inst, mu, length, &mut rng)?;
            let lags = max_lag.min(rec.fitness_series.len().saturating_sub(2)).max(1);
            let ac = autocorrelation(&rec.fitness_series, lags)?;
            match ac.tau {
                Some(t) => println!("tau {t}"),
                None => println!("tau undefined"),
            }
            for (lag, r) in ac.r.iter().enumerate() {
                println!("r{} {r}", lag + 1);
            }
            if let Some(path) = out {
                write_series(&path, &rec)?;
            }
        }
        Command::AdaptiveWalk {
            source,
            mu,
            budget,
            walk_seed,
            out,
        } => {
            let inst = source.load()?;
            let mut rng =
                RandomStream::new(walk_seed.unwrap_or(inst.params().seed), Substream::Walk);
            let rec = walks::adaptive_walk(&inst, mu, &mut rng, budget)?;
            println!("steps_taken {}", rec.steps_taken);
            println!("evaluations_used {}", rec.evaluations_used);
            println!("final_hypervolume {}", rec.final_fitness());
            println!("nondominated_count {}", rec.nondominated_count);
            println!("certified {}", rec.certified);
            if let Some(path) = out {
                write_series(&path, &rec)?;
            }
        }
        Command::Sweep(args) => {
            let file = match &args.config {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                        path: path.clone(),
                        source: e,
                    })?;
                    ConfigOverrides::parse(&text)?
                }
                None => ConfigOverrides::default(),
            };
            let cli = args.overrides();
            let config = ConfigOverrides::resolve(&file, &cli);
            let exec = Execution::with_threads(cli.threads.or(file.threads));
            let output = harness::run_sweep(&config, &exec)?;
            for s in &output.skipped {
                eprintln!(
                    "skipped cell n={} m={} k={} rho={}: {}",
                    s.n, s.m, s.k, s.rho, s.reason
                );
            }
            match &config.output_path {
                Some(path) => {
                    let summary = harness::write_outputs(&output, path)?;
                    eprintln!(
                        "wrote {} rows to {} and {} aggregates to {}",
                        output.rows.len(),
                        path.display(),
                        output.aggregates.len(),
                        summary.display()
                    );
                }
                None => harness::write_rows(&output.rows, std::io::stdout().lock())?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}
