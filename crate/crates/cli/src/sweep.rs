//! One-parameter stability maps.

use std::io::{self, Write};

use ecofire_core::simulation::fmt_f64;
use ecofire_core::stability::{classify_equilibrium, find_k0, find_wavetrain, Classification};
use ecofire_core::{EquilibriumKind, Error as CoreError};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub upsilon: f64,
    pub classification: Classification,
    /// `None` when the coexistence point is unstable and there is no
    /// diffusion to restabilize short waves.
    pub mu_threshold: Option<f64>,
    /// `(mu*, sigma*)` when a wave train exists.
    pub wavetrain: Option<(f64, f64)>,
}

pub fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let o = &cfg.options;
    let from = o.from.ok_or_else(|| CliError::validation("from", "required by sweep".into()))?;
    let to = o.to.ok_or_else(|| CliError::validation("to", "required by sweep".into()))?;
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::validation("from", "range must be finite".into()));
    }
    if o.samples == 0 {
        return Err(CliError::validation("samples", "at least 1 sample is needed".into()));
    }
    if o.log && !(from > 0.0 && to > 0.0) {
        return Err(CliError::validation("from", "log spacing needs a positive range".into()));
    }
    // Both ends must give valid parameters; validation is monotone in between.
    cfg.params.with(o.axis, from)?;
    cfg.params.with(o.axis, to)?;
    Ok(())
}

/// Sample points, linear or logarithmic, including both ends.
pub fn grid(from: f64, to: f64, samples: usize, log: bool) -> Vec<f64> {
    if samples == 1 {
        return vec![from];
    }
    let (a, b) = if log { (from.ln(), to.ln()) } else { (from, to) };
    (0..samples)
        .map(|i| {
            let x = a + (b - a) * i as f64 / (samples - 1) as f64;
            if log {
                x.exp()
            } else {
                x
            }
        })
        .collect()
}

fn row(cfg: &RunConfig, value: f64) -> Result<SweepRow, CliError> {
    let p = cfg.params.with(cfg.options.axis, value)?;
    let verdict = classify_equilibrium(EquilibriumKind::Coexistence, &p);
    let upsilon = verdict.upsilon.expect("coexistence verdicts carry Upsilon");
    let mu_threshold = match find_k0(&p) {
        Ok(t) => Some(t.mu_threshold),
        Err(CoreError::DegenerateDiffusion) if upsilon >= 0.0 => Some(0.0),
        Err(CoreError::DegenerateDiffusion) => None,
        Err(e) => return Err(e.into()),
    };
    let wavetrain = match find_wavetrain(&p) {
        Ok(wt) => Some((wt.mu_star, wt.sigma_star)),
        Err(CoreError::NoWaveTrain { .. } | CoreError::DegenerateDiffusion) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(SweepRow {
        value,
        upsilon,
        classification: verdict.classification,
        mu_threshold,
        wavetrain,
    })
}

/// Rows are computed in parallel and returned in grid order.
pub fn sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>, CliError> {
    validate(cfg)?;
    let o = &cfg.options;
    let values = grid(o.from.unwrap(), o.to.unwrap(), o.samples, o.log);
    values.par_iter().map(|&v| row(cfg, v)).collect()
}

pub fn write_csv(rows: &[SweepRow], out: &mut dyn Write) -> io::Result<()> {
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    writeln!(out, "value,upsilon,classification,mu_threshold,mu_star,sigma_star")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(r.value),
            fmt_f64(r.upsilon),
            r.classification.as_str(),
            opt(r.mu_threshold),
            opt(r.wavetrain.map(|w| w.0)),
            opt(r.wavetrain.map(|w| w.1)),
        )?;
    }
    Ok(())
}
