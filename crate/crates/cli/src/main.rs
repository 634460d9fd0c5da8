use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mfba::environment::Preset;
use mfba_cli::commands::{self, AlgoChoice, Options};

#[derive(Parser)]
#[command(
    name = "mfba",
    version,
    about = "Bat-algorithm benchmarks and dynamic path planning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the benchmark functions and tabulate best/worst/mean/SD.
    Bench(Common),
    /// Plan paths through a dynamic environment.
    Plan(Common),
    /// Plan with both algorithms and compare run fitness.
    Compare(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Ba,
    Mfba,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Case1,
    Case2,
    Empty,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    algo: Option<Algo>,
    /// Number of independent runs.
    #[arg(long)]
    runs: Option<usize>,
    /// Seed of the first run; run i uses seed + i.
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces the configured obstacles.
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl From<Common> for Options {
    fn from(c: Common) -> Self {
        Options {
            config: c.config,
            algo: c.algo.map(|a| match a {
                Algo::Ba => AlgoChoice::Ba,
                Algo::Mfba => AlgoChoice::Mfba,
                Algo::Both => AlgoChoice::Both,
            }),
            runs: c.runs,
            seed: c.seed,
            preset: c.preset.map(|p| match p {
                PresetArg::Case1 => Preset::Case1,
                PresetArg::Case2 => Preset::Case2,
                PresetArg::Empty => Preset::Empty,
            }),
            out: c.out,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(c) => commands::bench(&c.into()).map(|o| o.files),
        Command::Plan(c) => commands::plan(&c.into()).map(|o| o.files),
        Command::Compare(c) => commands::compare(&c.into()).map(|o| o.files),
    };
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
