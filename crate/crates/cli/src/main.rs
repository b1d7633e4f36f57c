use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ecofire_cli::{run, Cli, CliError, RunConfig, OUT_DIR_ENV};

fn destination(cfg: &RunConfig) -> Option<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    match (&cfg.options.output, dir) {
        (Some(path), Some(dir)) if path.is_relative() => Some(dir.join(path)),
        (Some(path), _) => Some(path.clone()),
        (None, Some(dir)) => Some(dir.join(format!("{}.csv", cfg.command))),
        (None, None) => None,
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let cfg = cli.into_config()?;
    if cli.dump_config {
        print!("{}", cfg.to_config_string());
        return Ok(());
    }
    let warnings = match destination(&cfg) {
        Some(path) => {
            let io_err = |source| CliError::Io {
                path: path.display().to_string(),
                source,
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(io_err)?;
            }
            // Run into memory first so a failed command leaves no partial file.
            let mut buf = Vec::new();
            let warnings = run(&cfg, &mut buf)?;
            fs::write(&path, buf).map_err(io_err)?;
            warnings
        }
        None => {
            let mut out = BufWriter::new(io::stdout().lock());
            let warnings = run(&cfg, &mut out)?;
            out.flush().map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            })?;
            warnings
        }
    };
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
