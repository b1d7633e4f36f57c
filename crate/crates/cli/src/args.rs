//! Command-line flags. Flags override values read from `--config`.

use std::fs;
use std::path::PathBuf;

use clap::Parser;
use ecofire_core::ParamName;

use crate::config::{Command, ConfigFile, KernelName, MethodName, RunConfig};
use crate::error::CliError;

fn param_name(s: &str) -> Result<ParamName, String> {
    s.parse().map_err(|e: ecofire_core::Error| e.to_string())
}

#[derive(Debug, Clone, Parser)]
#[command(name = "ecofire", version, allow_negative_numbers = true, about = "Stability analysis and simulation of the fire-vegetation-water model")]
pub struct Cli {
    /// Command to run; may instead be given by `command = ...` in the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// Read a `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    pub dump_config: bool,

    #[arg(long, help_heading = "Model parameters")]
    pub alpha: Option<f64>,
    #[arg(long, help_heading = "Model parameters")]
    pub beta: Option<f64>,
    #[arg(long, help_heading = "Model parameters")]
    pub gamma: Option<f64>,
    #[arg(long, help_heading = "Model parameters")]
    pub delta: Option<f64>,
    #[arg(long, help_heading = "Model parameters")]
    pub epsilon: Option<f64>,
    #[arg(long, help_heading = "Model parameters")]
    pub eta: Option<f64>,
    #[arg(long, help_heading = "Model parameters")]
    pub zeta: Option<f64>,
    /// Fire diffusion.
    #[arg(long, help_heading = "Model parameters")]
    pub c: Option<f64>,
    /// Water diffusion.
    #[arg(long, help_heading = "Model parameters")]
    pub d: Option<f64>,
    /// Vegetation competition coefficient.
    #[arg(long, help_heading = "Model parameters")]
    pub ell: Option<f64>,

    /// Smallest squared wavenumber (dispersion).
    #[arg(long)]
    pub mu_min: Option<f64>,
    /// Largest squared wavenumber (dispersion).
    #[arg(long)]
    pub mu_max: Option<f64>,
    /// Number of samples (dispersion, sweep).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Squared wavenumber (competition, simulate-pde).
    #[arg(long)]
    pub mu: Option<f64>,
    /// Vegetation diagonal shift in (0, epsilon) (competition).
    #[arg(long)]
    pub varsigma: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<MethodName>,
    /// Fixed step for rk4.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub atol: Option<f64>,
    #[arg(long)]
    pub t_final: Option<f64>,
    /// Initial state (simulate-ode); defaults to E1 + 0.01.
    #[arg(long)]
    pub f0: Option<f64>,
    #[arg(long)]
    pub v0: Option<f64>,
    #[arg(long)]
    pub w0: Option<f64>,
    /// Grid points (simulate-pde).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Index of the seeded Fourier mode (simulate-pde).
    #[arg(long)]
    pub mode: Option<usize>,
    /// Perturbation amplitude (simulate-pde).
    #[arg(long)]
    pub rho: Option<f64>,
    /// Comma-separated snapshot times (simulate-pde).
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Fail instead of reducing a step above the diffusion bound.
    #[arg(long)]
    pub no_clamp: bool,
    #[arg(long, value_enum)]
    pub kernel: Option<KernelName>,
    /// Spatial dimension (kernel-moments).
    #[arg(long)]
    pub dimension: Option<usize>,
    #[arg(long)]
    pub j_max: Option<usize>,
    /// Parameter to sweep.
    #[arg(long, value_parser = param_name)]
    pub axis: Option<ParamName>,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    /// Logarithmic sweep spacing.
    #[arg(long)]
    pub log: bool,
    /// Output file; defaults to stdout, or `<command>.csv` under $ECOFIRE_OUT_DIR.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

impl Cli {
    pub fn into_config(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                ConfigFile::parse(&text)?
            }
            None => ConfigFile::default(),
        };
        let mut cfg = RunConfig::from_file(file, self.command)?;

        let params = [
            (ParamName::Alpha, self.alpha),
            (ParamName::Beta, self.beta),
            (ParamName::Gamma, self.gamma),
            (ParamName::Delta, self.delta),
            (ParamName::Epsilon, self.epsilon),
            (ParamName::Eta, self.eta),
            (ParamName::Zeta, self.zeta),
            (ParamName::C, self.c),
            (ParamName::D, self.d),
            (ParamName::Ell, self.ell),
        ];
        for (name, value) in params {
            if let Some(v) = value {
                cfg.params = cfg.params.with(name, v)?;
            }
        }

        let o = &mut cfg.options;
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field.clone() { o.$field = v; }
            )*};
        }
        take!(mu_min, mu_max, samples, method, dt, rtol, atol, t_final, grid, mode, rho, times, kernel, dimension, j_max, axis);
        macro_rules! take_opt {
            ($($field:ident),*) => {$(
                if self.$field.is_some() { o.$field = self.$field.clone(); }
            )*};
        }
        take_opt!(mu, varsigma, f0, v0, w0, from, to, output);
        if self.no_clamp {
            o.clamp = false;
        }
        if self.log {
            o.log = true;
        }
        Ok(cfg)
    }
}
