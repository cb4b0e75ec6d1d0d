//! Configuration parsing, command dispatch and report rendering for `formlab`.

pub mod commands;
pub mod config;
pub mod error;
pub mod records;

use std::path::PathBuf;

use clap::Parser;

pub use commands::{run_command, Command, Output, Status};
pub use config::Config;
pub use error::CliError;

/// Exhaustive searches for decomposable form inequalities over number fields.
#[derive(Clone, Debug, Parser)]
#[command(name = "formlab", version, about)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Experiment configuration (TOML).
    #[arg(long, short, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Emit JSON Lines instead of tables.
    #[arg(long)]
    pub json: bool,
    /// Interval width target, as an exact rational such as "1/1000000000000".
    #[arg(long, value_name = "RAT")]
    pub tolerance: Option<String>,
    /// Working precision cap in bits.
    #[arg(long, value_name = "BITS")]
    pub precision_cap: Option<u32>,
    /// Worker threads for the search.
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
    /// Search box bound, overriding the config.
    #[arg(long, value_name = "B")]
    pub bound: Option<u64>,
    /// Use the strict inequality.
    #[arg(long)]
    pub strict: bool,
}

/// Loads the config named on the command line and applies the flag overrides.
pub fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let text = match &cli.config {
        Some(p) => std::fs::read_to_string(p).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        })?,
        None => String::new(),
    };
    let mut cfg = Config::parse(&text)?;
    if let Some(t) = &cli.tolerance {
        let tol = config::parse_rational(&config::Literal::Text(t.clone()), "--tolerance")?;
        cfg.output.set_tolerance(tol, "--tolerance")?;
    }
    if let Some(cap) = cli.precision_cap {
        cfg.output.set_cap(cap, "--precision-cap")?;
    }
    if let Some(b) = cli.bound {
        if let Some(i) = &mut cfg.inequality {
            i.bound = b;
        }
        if let Some(e) = &mut cfg.equation {
            e.bound = b;
        }
    }
    if cli.strict {
        if let Some(i) = &mut cfg.inequality {
            i.strict = true;
        }
    }
    cfg.sync_accuracy();
    Ok(cfg)
}

/// Runs one command; the output is rendered but not written.
pub fn run(cli: &Cli) -> Result<(Config, Output), CliError> {
    let cfg = load_config(cli)?;
    let out = run_command(cli.command, &cfg)?;
    Ok((cfg, out))
}
