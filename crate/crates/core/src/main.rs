use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use magstack::io::{run_diagnose, run_reconstruct, run_roundtrip, run_simulate, FieldFiles, Report, RunConfig};

/// Two-layer current density reconstruction from field maps above and below
/// a stack.
#[derive(Parser)]
#[command(name = "magstack", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize field maps at both planes from the configured scenario.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `output.dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also evaluate the direct Biot–Savart quadrature and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Reconstruct both layers from measured field maps.
    Reconstruct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        m1x: PathBuf,
        #[arg(long)]
        m1y: PathBuf,
        #[arg(long)]
        m2x: PathBuf,
        #[arg(long)]
        m2y: PathBuf,
        #[arg(long, requires = "truth_s2")]
        truth_s1: Option<PathBuf>,
        #[arg(long, requires = "truth_s1")]
        truth_s2: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate, reconstruct and score in one run.
    Roundtrip {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report conditioning, the automatic cutoff and the invertibility verdict.
    Diagnose {
        #[arg(long)]
        config: PathBuf,
    },
}

fn out_dir(cfg: &RunConfig, out: Option<PathBuf>) -> PathBuf {
    out.unwrap_or_else(|| cfg.output.dir.clone())
}

fn run(cli: Cli) -> magstack::Result<Report> {
    let load = |p: &Path| RunConfig::load(p);
    match cli.command {
        Command::Simulate { config, out, oracle } => {
            let cfg = load(&config)?;
            run_simulate(&cfg, &out_dir(&cfg, out), oracle)
        }
        Command::Reconstruct {
            config,
            m1x,
            m1y,
            m2x,
            m2y,
            truth_s1,
            truth_s2,
            out,
        } => {
            let cfg = load(&config)?;
            let files = FieldFiles { m1x, m1y, m2x, m2y };
            let truth = truth_s1.as_deref().zip(truth_s2.as_deref());
            run_reconstruct(&cfg, &files, truth, &out_dir(&cfg, out))
        }
        Command::Roundtrip { config, out } => {
            let cfg = load(&config)?;
            run_roundtrip(&cfg, &out_dir(&cfg, out))
        }
        Command::Diagnose { config } => run_diagnose(&load(&config)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", report.text);
            for (k, v) in &report.values {
                println!("{k}={v}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
