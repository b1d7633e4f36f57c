//! Run configuration and its plain-text `key = value` file format.
//!
//! ```text
//! command = dispersion
//!
//! [params]
//! alpha = 2
//! epsilon = 0.1
//!
//! [options]
//! mu-max = 2
//! samples = 201
//! ```

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use ecofire_core::{ModelParams, ParamName};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Equilibria,
    Stability,
    Dispersion,
    Wavetrain,
    Competition,
    SimulateOde,
    SimulatePde,
    KernelMoments,
    Sweep,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Equilibria,
        Command::Stability,
        Command::Dispersion,
        Command::Wavetrain,
        Command::Competition,
        Command::SimulateOde,
        Command::SimulatePde,
        Command::KernelMoments,
        Command::Sweep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Equilibria => "equilibria",
            Command::Stability => "stability",
            Command::Dispersion => "dispersion",
            Command::Wavetrain => "wavetrain",
            Command::Competition => "competition",
            Command::SimulateOde => "simulate-ode",
            Command::SimulatePde => "simulate-pde",
            Command::KernelMoments => "kernel-moments",
            Command::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodName {
    Rk4,
    Rk45,
}

impl MethodName {
    fn as_str(self) -> &'static str {
        match self {
            MethodName::Rk4 => "rk4",
            MethodName::Rk45 => "rk45",
        }
    }
}

impl FromStr for MethodName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rk4" => Ok(MethodName::Rk4),
            "rk45" => Ok(MethodName::Rk45),
            _ => Err(format!("expected rk4 or rk45, got `{s}`")),
        }
    }
}

/// Radial kernel profiles available to `kernel-moments`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KernelName {
    /// `exp(-r^2)`
    Gaussian,
    /// `exp(-r)`
    Exponential,
}

impl KernelName {
    fn as_str(self) -> &'static str {
        match self {
            KernelName::Gaussian => "gaussian",
            KernelName::Exponential => "exponential",
        }
    }

    pub fn eval(self, r: f64) -> f64 {
        match self {
            KernelName::Gaussian => (-r * r).exp(),
            KernelName::Exponential => (-r).exp(),
        }
    }
}

impl FromStr for KernelName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gaussian" => Ok(KernelName::Gaussian),
            "exponential" => Ok(KernelName::Exponential),
            _ => Err(format!("expected gaussian or exponential, got `{s}`")),
        }
    }
}

/// Command-specific options. Unused options are ignored by other commands.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub mu_min: f64,
    pub mu_max: f64,
    pub samples: usize,
    /// Squared wavenumber for `competition` and the seeded mode of `simulate-pde`.
    pub mu: Option<f64>,
    pub varsigma: Option<f64>,
    pub method: MethodName,
    pub dt: f64,
    pub rtol: f64,
    pub atol: f64,
    pub t_final: f64,
    pub f0: Option<f64>,
    pub v0: Option<f64>,
    pub w0: Option<f64>,
    pub grid: usize,
    pub mode: usize,
    pub rho: f64,
    pub times: Vec<f64>,
    pub clamp: bool,
    pub kernel: KernelName,
    pub dimension: usize,
    pub j_max: usize,
    pub axis: ParamName,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub log: bool,
    pub output: Option<PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            mu_min: 0.0,
            mu_max: 2.0,
            samples: 201,
            mu: None,
            varsigma: None,
            method: MethodName::Rk45,
            dt: 0.01,
            rtol: 1e-8,
            atol: 1e-10,
            t_final: 50.0,
            f0: None,
            v0: None,
            w0: None,
            grid: 128,
            mode: 1,
            rho: 1e-4,
            times: Vec::new(),
            clamp: true,
            kernel: KernelName::Gaussian,
            dimension: 1,
            j_max: 2,
            axis: ParamName::Alpha,
            from: None,
            to: None,
            log: false,
            output: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::validation(key, format!("cannot parse `{value}`: {e}")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|x| parse_value(key, x.trim())).collect()
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

impl Options {
    /// Set an option by its config-file key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "mu-min" => self.mu_min = parse_value(key, value)?,
            "mu-max" => self.mu_max = parse_value(key, value)?,
            "samples" => self.samples = parse_value(key, value)?,
            "mu" => self.mu = Some(parse_value(key, value)?),
            "varsigma" => self.varsigma = Some(parse_value(key, value)?),
            "method" => self.method = parse_value(key, value)?,
            "dt" => self.dt = parse_value(key, value)?,
            "rtol" => self.rtol = parse_value(key, value)?,
            "atol" => self.atol = parse_value(key, value)?,
            "t-final" => self.t_final = parse_value(key, value)?,
            "f0" => self.f0 = Some(parse_value(key, value)?),
            "v0" => self.v0 = Some(parse_value(key, value)?),
            "w0" => self.w0 = Some(parse_value(key, value)?),
            "grid" => self.grid = parse_value(key, value)?,
            "mode" => self.mode = parse_value(key, value)?,
            "rho" => self.rho = parse_value(key, value)?,
            "times" => self.times = parse_list(key, value)?,
            "clamp" => self.clamp = parse_value(key, value)?,
            "kernel" => self.kernel = parse_value(key, value)?,
            "dimension" => self.dimension = parse_value(key, value)?,
            "j-max" => self.j_max = parse_value(key, value)?,
            "axis" => self.axis = parse_value(key, value)?,
            "from" => self.from = Some(parse_value(key, value)?),
            "to" => self.to = Some(parse_value(key, value)?),
            "log" => self.log = parse_value(key, value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            _ => return Err(CliError::validation("options", format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// All set options as `(key, value)` pairs, in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            ("mu-min", self.mu_min.to_string()),
            ("mu-max", self.mu_max.to_string()),
            ("samples", self.samples.to_string()),
        ];
        let optional = [
            ("mu", self.mu),
            ("varsigma", self.varsigma),
            ("f0", self.f0),
            ("v0", self.v0),
            ("w0", self.w0),
            ("from", self.from),
            ("to", self.to),
        ];
        out.extend(optional.iter().filter_map(|(k, v)| v.map(|v| (*k, v.to_string()))));
        out.extend([
            ("method", self.method.as_str().to_string()),
            ("dt", self.dt.to_string()),
            ("rtol", self.rtol.to_string()),
            ("atol", self.atol.to_string()),
            ("t-final", self.t_final.to_string()),
            ("grid", self.grid.to_string()),
            ("mode", self.mode.to_string()),
            ("rho", self.rho.to_string()),
            ("times", join(&self.times)),
            ("clamp", self.clamp.to_string()),
            ("kernel", self.kernel.as_str().to_string()),
            ("dimension", self.dimension.to_string()),
            ("j-max", self.j_max.to_string()),
            ("axis", self.axis.to_string()),
            ("log", self.log.to_string()),
        ]);
        if let Some(path) = &self.output {
            out.push(("output", path.display().to_string()));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: ModelParams,
    pub options: Options,
}

/// Partially specified configuration, as read from a file.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub command: Option<Command>,
    pub params: Vec<(ParamName, f64)>,
    pub options: Vec<(String, String)>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        #[derive(PartialEq)]
        enum Section {
            Top,
            Params,
            Options,
        }
        let mut section = Section::Top;
        let mut file = ConfigFile::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |reason: String| CliError::validation("config", format!("line {}: {reason}", lineno + 1));
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = match name.trim() {
                    "params" => Section::Params,
                    "options" => Section::Options,
                    other => return Err(at(format!("unknown section `{other}`"))),
                };
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match section {
                Section::Top if key == "command" => {
                    file.command = Some(value.parse().map_err(at)?);
                }
                Section::Top => return Err(at(format!("unknown top-level key `{key}`"))),
                Section::Params => {
                    let name: ParamName = key.parse().map_err(|e| at(format!("{e}")))?;
                    let v: f64 = parse_value(name.as_str(), value)?;
                    file.params.push((name, v));
                }
                Section::Options => file.options.push((key.to_string(), value.to_string())),
            }
        }
        Ok(file)
    }
}

impl RunConfig {
    /// Serialize in the config-file format; [`ConfigFile::parse`] reads it back.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        writeln!(s, "command = {}", self.command).unwrap();
        writeln!(s, "\n[params]").unwrap();
        for name in ParamName::ALL {
            writeln!(s, "{name} = {}", self.params.get(name)).unwrap();
        }
        writeln!(s, "\n[options]").unwrap();
        for (key, value) in self.options.entries() {
            writeln!(s, "{key} = {value}").unwrap();
        }
        s
    }

    pub fn from_config_str(text: &str) -> Result<Self, CliError> {
        RunConfig::from_file(ConfigFile::parse(text)?, None)
    }

    /// Builds a config from a parsed file; `command` overrides the file's.
    pub fn from_file(file: ConfigFile, command: Option<Command>) -> Result<Self, CliError> {
        let command = command
            .or(file.command)
            .ok_or_else(|| CliError::validation("command", "missing".into()))?;
        let mut params = ModelParams::unit();
        for (name, value) in file.params {
            params = params.with(name, value)?;
        }
        let mut options = Options::default();
        for (key, value) in &file.options {
            options.set(key, value)?;
        }
        Ok(RunConfig {
            command,
            params,
            options,
        })
    }
}
