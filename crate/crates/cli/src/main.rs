use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

mod config;
mod gamma;
mod gkt;
mod out;
mod unique;

use config::Settings;
use out::Out;

/// v-adic gamma functions, Gauss sums and the uniqueness pipeline.
#[derive(Parser)]
#[command(name = "vadic", version)]
struct Cli {
    /// TOML file with default settings; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a gamma function
    Gamma {
        #[arg(value_enum)]
        kind: gamma::GammaKind,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[command(flatten)]
        settings: Settings,
    },
    /// Compute a Gauss sum g and the product G
    Gauss {
        #[arg(value_enum)]
        case: gkt::Case,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[command(flatten)]
        settings: Settings,
    },
    /// Check the Gross-Koblitz-Thakur identity at one argument or over all of them
    Gkt {
        #[arg(value_enum)]
        case: gkt::Case,
        /// Sweep every admissible argument
        #[arg(long)]
        all: bool,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[command(flatten)]
        settings: Settings,
    },
    /// Run the uniqueness pipeline on a product domain
    Unique {
        #[arg(value_enum)]
        mode: unique::Mode,
        #[command(flatten)]
        settings: Settings,
    },
}

fn run(cli: Cli) -> Result<bool> {
    let file = match &cli.config {
        Some(p) => Settings::load(p)?,
        None => Settings::default(),
    };
    let layered = |s: Settings| s.layered(file.clone());
    let (ok, text) = match cli.cmd {
        Cmd::Gamma { kind, x, y, settings } => {
            let s = layered(settings);
            let mut out = Out::new(s.format());
            (gamma::run(kind, x.as_deref(), y.as_deref(), &s, &mut out)?, out.finish())
        }
        Cmd::Gauss { case, x, y, settings } => {
            let s = layered(settings);
            let mut out = Out::new(s.format());
            (gkt::gauss(case, x.as_deref(), y.as_deref(), &s, &mut out)?, out.finish())
        }
        Cmd::Gkt { case, all, x, y, settings } => {
            let s = layered(settings);
            let mut out = Out::new(s.format());
            (gkt::gkt(case, all, x.as_deref(), y.as_deref(), &s, &mut out)?, out.finish())
        }
        Cmd::Unique { mode, settings } => {
            let s = layered(settings);
            let mut out = Out::new(s.format());
            (unique::run(mode, &s, &mut out)?, out.finish())
        }
    };
    print!("{text}");
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
