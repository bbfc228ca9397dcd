//! File formats, reports and command implementations for the `bellbound`
//! binary. The numerical kernel lives in [`bellbound_core`].

pub mod error;
pub mod format;
pub mod protocol_file;
pub mod report;
pub mod resolve;
pub mod scan;
pub mod simulate;
pub mod verify;

use std::path::PathBuf;

pub use error::{CliError, CliResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

/// Worker-count override; `0` or unset lets rayon decide.
pub const THREADS_ENV: &str = "BELLBOUND_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Scan,
    Analyze,
    Simulate,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub resolution: usize,
    pub protocol_ref: Option<String>,
    pub trials: u64,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    /// `None` picks the command's natural format.
    pub format: Option<OutputFormat>,
    pub inject_broken: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let verify = verify::VerifyConfig::default();
        Self {
            command,
            resolution: verify.resolution,
            protocol_ref: None,
            trials: verify.mc_trials,
            seed: match command {
                Command::Verify => verify.seed,
                _ => verify.mc_seed,
            },
            output_path: None,
            format: None,
            inject_broken: false,
        }
    }
}

/// What a command produced, before it is written out.
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
    /// Extra line for stderr.
    pub note: Option<String>,
}

fn thread_count() -> CliResult<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a count, got `{v}`"))),
    }
}

/// Runs `f` on a pool sized by [`THREADS_ENV`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count()?)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn protocol_of(cfg: &RunConfig) -> CliResult<bellbound_core::protocol::Protocol> {
    let name = cfg
        .protocol_ref
        .as_deref()
        .ok_or_else(|| CliError::Usage("a protocol name or file is required".to_string()))?;
    resolve::resolve(name)
}

pub fn cmd_scan(cfg: &RunConfig) -> CliResult<Outcome> {
    if cfg.resolution < 2 {
        return Err(CliError::Usage(format!(
            "resolution must be at least 2, got {}",
            cfg.resolution
        )));
    }
    let surface = with_pool(|| scan::scan_parallel(cfg.resolution))??;
    let summary = report::SurfaceReport::new(cfg.resolution, &surface.summary);
    let exit_code = if summary.theorem_holds { EXIT_OK } else { EXIT_VERIFY_FAILED };
    let summary_json = format::to_json(&summary);
    // CSV is the data product; the summary goes to stderr unless JSON was asked for.
    Ok(match cfg.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => Outcome {
            text: scan::surface_csv(&surface),
            exit_code,
            note: Some(summary_json),
        },
        OutputFormat::Json => Outcome {
            text: summary_json,
            exit_code,
            note: None,
        },
    })
}

pub fn cmd_analyze(cfg: &RunConfig) -> CliResult<Outcome> {
    let protocol = protocol_of(cfg)?;
    let joint = protocol.exact_joint()?;
    let analysis = bellbound_core::protocol::Analysis::of_joint(&joint)?;
    let rep = report::AnalysisReport::build(&protocol, &joint, &analysis)?;
    if cfg.format == Some(OutputFormat::Csv) {
        return Err(CliError::Usage("analyze writes JSON only".to_string()));
    }
    let (exit_code, note) = if analysis.fano.holds {
        (EXIT_OK, None)
    } else {
        (
            EXIT_INVARIANT,
            Some(format!("Fano consistency violated for {}", protocol.label)),
        )
    };
    Ok(Outcome {
        text: format::to_json(&rep),
        exit_code,
        note,
    })
}

pub fn cmd_simulate(cfg: &RunConfig) -> CliResult<Outcome> {
    if cfg.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".to_string()));
    }
    let protocol = protocol_of(cfg)?;
    let rep = simulate::simulate(&protocol, cfg.trials, cfg.seed)?;
    let text = match cfg.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => format::to_json(&rep),
        OutputFormat::Csv => simulate::simulation_csv(&rep),
    };
    Ok(Outcome {
        text,
        exit_code: EXIT_OK,
        note: None,
    })
}

pub fn cmd_verify(cfg: &RunConfig) -> CliResult<Outcome> {
    let vc = verify::VerifyConfig {
        seed: cfg.seed,
        mc_trials: cfg.trials,
        resolution: cfg.resolution,
        inject_broken: cfg.inject_broken,
        ..verify::VerifyConfig::default()
    };
    if vc.resolution < 2 {
        return Err(CliError::Usage("resolution must be at least 2".to_string()));
    }
    let rep = with_pool(|| verify::run_suite(&vc))?;
    let text = match cfg.format {
        Some(OutputFormat::Json) => format::to_json(&rep),
        Some(OutputFormat::Csv) => return Err(CliError::Usage("verify writes a table or JSON".to_string())),
        None => verify::render_table(&rep),
    };
    Ok(Outcome {
        text,
        exit_code: if rep.passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
        note: None,
    })
}

/// Runs one command and writes its output; returns the exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let result = match cfg.command {
        Command::Scan => cmd_scan(cfg),
        Command::Analyze => cmd_analyze(cfg),
        Command::Simulate => cmd_simulate(cfg),
        Command::Verify => cmd_verify(cfg),
    };
    let outcome = result.and_then(|o| {
        format::emit(cfg.output_path.as_deref(), &o.text)?;
        Ok(o)
    });
    match outcome {
        Ok(o) => {
            if let Some(note) = o.note {
                eprint!("{note}");
                if !note.ends_with('\n') {
                    eprintln!();
                }
            }
            o.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
