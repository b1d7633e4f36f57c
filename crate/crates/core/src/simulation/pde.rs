//! Method-of-lines integration of the diffusive system on a 1D periodic
//! domain with second-order central differences.

use std::f64::consts::PI;
use std::io::{self, Write};

use super::csv::fmt_f64;
use super::integrate::{integrate, IntegratorConfig, Method, System};
use crate::error::{Error, Result};
use crate::model::{ModelParams, State};

pub const MIN_GRID_POINTS: usize = 8;

/// Fields `f, v, w` sampled at `x_i = i L / N`, `i = 0..N`, with `x_N = x_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub domain_length: f64,
    pub f: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub time: f64,
}

fn check_grid(n: usize, length: f64) -> Result<()> {
    if n < MIN_GRID_POINTS {
        return Err(Error::InvalidArgument {
            name: "grid_points",
            reason: format!("need at least {MIN_GRID_POINTS} grid points, got {n}"),
        });
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidArgument {
            name: "domain_length",
            reason: format!("must be finite and positive, got {length}"),
        });
    }
    Ok(())
}

impl FieldState {
    pub fn uniform(n: usize, length: f64, s: State) -> Result<Self> {
        check_grid(n, length)?;
        Ok(FieldState {
            domain_length: length,
            f: vec![s.f; n],
            v: vec![s.v; n],
            w: vec![s.w; n],
            time: 0.0,
        })
    }

    /// Single excited mode about `center`:
    /// `center + rho (sin_amp sin(k x) + cos_amp cos(k x))` with
    /// `k = 2 pi mode / L`, so that the grid resolves the wave exactly.
    pub fn single_mode(
        n: usize,
        length: f64,
        center: State,
        mode: usize,
        rho: f64,
        sin_amp: State,
        cos_amp: State,
    ) -> Result<Self> {
        let mut field = FieldState::uniform(n, length, center)?;
        if mode == 0 || 2 * mode >= n {
            return Err(Error::InvalidArgument {
                name: "mode",
                reason: format!("mode index must lie in 1..{}, got {mode}", n.div_ceil(2)),
            });
        }
        let k = field.wavenumber(mode);
        for i in 0..n {
            let (s, c) = (k * field.x(i)).sin_cos();
            let dev = rho * (s * sin_amp + c * cos_amp);
            field.f[i] += dev.f;
            field.v[i] += dev.v;
            field.w[i] += dev.w;
        }
        Ok(field)
    }

    pub fn grid_points(&self) -> usize {
        self.f.len()
    }

    pub fn spacing(&self) -> f64 {
        self.domain_length / self.grid_points() as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    pub fn wavenumber(&self, mode: usize) -> f64 {
        2.0 * PI * mode as f64 / self.domain_length
    }

    /// Eigenvalue of minus the discrete Laplacian for `mode`,
    /// `(4 / h^2) sin^2(k h / 2)`; tends to `k^2` as `h -> 0`.
    pub fn discrete_mu(&self, mode: usize) -> f64 {
        let h = self.spacing();
        let s = (0.5 * self.wavenumber(mode) * h).sin();
        4.0 * s * s / (h * h)
    }

    pub fn at(&self, i: usize) -> State {
        State::new(self.f[i], self.v[i], self.w[i])
    }

    pub fn min_component(&self) -> f64 {
        (0..self.grid_points()).map(|i| self.at(i).min_component()).fold(f64::INFINITY, f64::min)
    }

    /// Discrete `L^2` norm of `self - center`.
    pub fn deviation_norm(&self, center: State) -> f64 {
        let sum: f64 = (0..self.grid_points())
            .map(|i| {
                let d = self.at(i) - center;
                d.f * d.f + d.v * d.v + d.w * d.w
            })
            .sum();
        (sum * self.spacing()).sqrt()
    }

    /// Largest pointwise deviation between two fields on the same grid.
    pub fn max_difference(&self, other: &FieldState) -> f64 {
        (0..self.grid_points())
            .map(|i| (self.at(i) - other.at(i)).to_vector().amax())
            .fold(0.0, f64::max)
    }

    /// Discrete Fourier coefficients `(sin part, cos part)` of `self - center`
    /// for `mode`, so that `single_mode(.., rho = 1, sin, cos)` reproduces the
    /// projection.
    pub fn mode_coefficients(&self, center: State, mode: usize) -> (State, State) {
        let n = self.grid_points();
        let k = self.wavenumber(mode);
        let mut sin_part = State::default();
        let mut cos_part = State::default();
        for i in 0..n {
            let (s, c) = (k * self.x(i)).sin_cos();
            let d = self.at(i) - center;
            sin_part = sin_part + s * d;
            cos_part = cos_part + c * d;
        }
        let scale = 2.0 / n as f64;
        (scale * sin_part, scale * cos_part)
    }

    /// Long-form rows `t,x,f,v,w`, without header.
    pub fn write_rows<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let t = fmt_f64(self.time);
        for i in 0..self.grid_points() {
            writeln!(
                out,
                "{t},{},{},{},{}",
                fmt_f64(self.x(i)),
                fmt_f64(self.f[i]),
                fmt_f64(self.v[i]),
                fmt_f64(self.w[i])
            )?;
        }
        Ok(())
    }
}

pub fn write_snapshots_csv<W: Write>(snapshots: &[FieldState], mut out: W) -> io::Result<()> {
    writeln!(out, "t,x,f,v,w")?;
    for s in snapshots {
        s.write_rows(&mut out)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeOptions {
    /// Times at which snapshots are emitted; `t_final` is used when empty.
    pub snapshot_times: Vec<f64>,
    /// Reduce a fixed step that violates the diffusion bound instead of failing.
    pub clamp_dt: bool,
}

impl Default for PdeOptions {
    fn default() -> Self {
        PdeOptions {
            snapshot_times: Vec::new(),
            clamp_dt: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeRun {
    pub snapshots: Vec<FieldState>,
    /// Set when the requested fixed step exceeded the diffusion bound and was reduced.
    pub dt_clamped: bool,
    /// Largest admissible step `h^2 / (2 max(c, d))`.
    pub dt_bound: f64,
}

/// Explicit-stepping bound `h^2 / (2 max(c, d))`; infinite without diffusion.
pub fn diffusion_step_bound(spacing: f64, p: &ModelParams) -> f64 {
    let diff = p.c().max(p.d());
    if diff > 0.0 {
        spacing * spacing / (2.0 * diff)
    } else {
        f64::INFINITY
    }
}

struct PeriodicSystem<'a> {
    p: &'a ModelParams,
    n: usize,
    inv_h2: f64,
}

impl System for PeriodicSystem<'_> {
    fn dim(&self) -> usize {
        3 * self.n
    }

    fn rhs(&self, y: &[f64], dy: &mut [f64]) {
        let n = self.n;
        let (f, rest) = y.split_at(n);
        let (v, w) = rest.split_at(n);
        let (df, rest) = dy.split_at_mut(n);
        let (dv, dw) = rest.split_at_mut(n);
        let p = self.p;
        for i in 0..n {
            let left = if i == 0 { n - 1 } else { i - 1 };
            let right = if i + 1 == n { 0 } else { i + 1 };
            let lap_f = (f[left] - 2.0 * f[i] + f[right]) * self.inv_h2;
            let lap_w = (w[left] - 2.0 * w[i] + w[right]) * self.inv_h2;
            df[i] = f[i] * (p.alpha() * v[i] - p.beta() * w[i]) + p.c() * lap_f;
            dv[i] = v[i] * (p.zeta() * w[i] - p.eta() * f[i]);
            dw[i] = p.gamma() - p.delta() * v[i] * w[i] - p.epsilon() * w[i] + p.d() * lap_w;
        }
    }
}

/// Integrates the diffusive system from `field0` (whose `time` is taken as
/// the origin), returning one snapshot per requested time.
pub fn simulate_pde(
    field0: &FieldState,
    p: &ModelParams,
    cfg: &IntegratorConfig,
    opts: &PdeOptions,
) -> Result<PdeRun> {
    cfg.validate()?;
    if p.ell() != 0.0 {
        return Err(Error::UnsupportedCompetition { ell: p.ell() });
    }
    let n = field0.grid_points();
    check_grid(n, field0.domain_length)?;
    if field0.v.len() != n || field0.w.len() != n {
        return Err(Error::InvalidArgument {
            name: "field0",
            reason: "f, v and w must have the same length".into(),
        });
    }

    let mut stops = if opts.snapshot_times.is_empty() {
        vec![cfg.t_final]
    } else {
        opts.snapshot_times.clone()
    };
    if stops.iter().any(|t| !t.is_finite() || *t < 0.0 || *t > cfg.t_final) {
        return Err(Error::InvalidArgument {
            name: "snapshot_times",
            reason: format!("snapshot times must lie in [0, {}]", cfg.t_final),
        });
    }
    stops.sort_by(f64::total_cmp);
    stops.dedup();

    let h = field0.spacing();
    let dt_bound = diffusion_step_bound(h, p);
    let mut dt_clamped = false;
    let method = match cfg.method {
        Method::Rk4Fixed { dt } if dt > dt_bound => {
            if !opts.clamp_dt {
                return Err(Error::CflViolation { dt, bound: dt_bound });
            }
            dt_clamped = true;
            Method::Rk4Fixed { dt: dt_bound }
        }
        m => m,
    };

    let sys = PeriodicSystem {
        p,
        n,
        inv_h2: 1.0 / (h * h),
    };
    let mut y = Vec::with_capacity(3 * n);
    y.extend_from_slice(&field0.f);
    y.extend_from_slice(&field0.v);
    y.extend_from_slice(&field0.w);

    let mut snapshots = Vec::with_capacity(stops.len());
    integrate(&sys, &mut y, method, dt_bound, &stops, |t, y, at_stop| {
        if at_stop {
            snapshots.push(FieldState {
                domain_length: field0.domain_length,
                f: y[..n].to_vec(),
                v: y[n..2 * n].to_vec(),
                w: y[2 * n..].to_vec(),
                time: field0.time + t,
            });
        }
    })?;
    Ok(PdeRun {
        snapshots,
        dt_clamped,
        dt_bound,
    })
}
