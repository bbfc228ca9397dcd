use std::path::PathBuf;

use bellbound::{run, Command, OutputFormat, RunConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Bell-inequality scores, nonlocal information and Fano-bound surfaces
/// for local hidden variable models with one-way communication.
#[derive(Parser)]
#[command(name = "bellbound", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct ProtocolArg {
    /// Builtin name (local:<fA>,<fB>, pr-onebit, biased:<p>:<flavor>,
    /// random-b-indep:<seed>, random:<seed>) or a JSON file.
    #[arg(value_name = "PROTOCOL", conflicts_with = "protocol")]
    positional: Option<String>,
    #[arg(long, value_name = "NAME|PATH")]
    protocol: Option<String>,
}

impl ProtocolArg {
    fn get(self) -> Option<String> {
        self.protocol.or(self.positional)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Scan the beta_max and alpha_max surfaces over (P1, P2).
    Scan {
        #[arg(long, default_value_t = 201, value_parser = clap::value_parser!(u32).range(2..))]
        resolution: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Exact scores and information quantities of one protocol.
    Analyze {
        #[command(flatten)]
        protocol: ProtocolArg,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo estimates next to the exact values.
    Simulate {
        #[command(flatten)]
        protocol: ProtocolArg,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Run the full property suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Monte Carlo trials per builtin; 0 skips the Monte Carlo check.
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 201, value_parser = clap::value_parser!(u32).range(2..))]
        resolution: u32,
        #[command(flatten)]
        output: Output,
        #[arg(long, hide = true)]
        inject_broken: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let (mut cfg, output) = match cli.command {
        Cmd::Scan { resolution, output } => {
            let mut c = RunConfig::new(Command::Scan);
            c.resolution = resolution as usize;
            (c, output)
        }
        Cmd::Analyze { protocol, output } => {
            let mut c = RunConfig::new(Command::Analyze);
            c.protocol_ref = protocol.get();
            (c, output)
        }
        Cmd::Simulate {
            protocol,
            trials,
            seed,
            output,
        } => {
            let mut c = RunConfig::new(Command::Simulate);
            c.protocol_ref = protocol.get();
            c.trials = trials;
            c.seed = seed;
            (c, output)
        }
        Cmd::Verify {
            seed,
            trials,
            resolution,
            output,
            inject_broken,
        } => {
            let mut c = RunConfig::new(Command::Verify);
            c.seed = seed;
            c.trials = trials;
            c.resolution = resolution as usize;
            c.inject_broken = inject_broken;
            (c, output)
        }
    };
    cfg.output_path = output.out;
    cfg.format = output.format.map(Into::into);
    std::process::exit(run(&cfg));
}
