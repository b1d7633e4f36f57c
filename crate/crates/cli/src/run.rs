//! Validation and dispatch of a [`RunConfig`].

use std::f64::consts::PI;
use std::io::Write;

use ecofire_core::cubic::RootSet;
use ecofire_core::simulation::{
    fmt_f64, integrate_ode, kernel_moments, pizzetti_constants, simulate_pde,
    write_snapshots_csv, FieldState, IntegratorConfig, KernelOptions, PdeOptions,
};
use ecofire_core::stability::{
    classify_equilibrium, competition_instability, dispersion_curve, find_wavetrain,
};
use ecofire_core::{equilibria, EquilibriumKind, State};

use crate::config::{Command, MethodName, Options, RunConfig};
use crate::error::CliError;
use crate::sweep;

type Result<T> = std::result::Result<T, CliError>;

fn invalid(field: &str, reason: impl Into<String>) -> CliError {
    CliError::validation(field, reason.into())
}

fn positive(field: &str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(invalid(field, format!("must be finite and positive, got {x}")))
    }
}

fn required(field: &str, x: Option<f64>) -> Result<f64> {
    x.ok_or_else(|| invalid(field, "required by this command"))
}

fn integrator(o: &Options) -> Result<IntegratorConfig> {
    positive("t-final", o.t_final)?;
    Ok(match o.method {
        MethodName::Rk4 => IntegratorConfig::rk4(positive("dt", o.dt)?, o.t_final)?,
        MethodName::Rk45 => {
            IntegratorConfig::rk45(positive("rtol", o.rtol)?, positive("atol", o.atol)?, o.t_final)?
        }
    })
}

/// Checks every option the command reads before any work is done.
pub fn validate(cfg: &RunConfig) -> Result<()> {
    let o = &cfg.options;
    match cfg.command {
        Command::Equilibria | Command::Stability | Command::Wavetrain => {}
        Command::Dispersion => {
            if !(o.mu_min.is_finite() && o.mu_min >= 0.0) {
                return Err(invalid("mu-min", format!("must be nonnegative, got {}", o.mu_min)));
            }
            if !(o.mu_max.is_finite() && o.mu_max > o.mu_min) {
                return Err(invalid("mu-max", format!("must exceed mu-min, got {}", o.mu_max)));
            }
            if o.samples < 2 {
                return Err(invalid("samples", "at least 2 samples are needed"));
            }
        }
        Command::Competition => {
            positive("mu", required("mu", o.mu)?)?;
            let varsigma = required("varsigma", o.varsigma)?;
            if !(varsigma > 0.0 && varsigma < cfg.params.epsilon()) {
                return Err(invalid(
                    "varsigma",
                    format!("must lie in (0, epsilon = {}), got {varsigma}", cfg.params.epsilon()),
                ));
            }
        }
        Command::SimulateOde => {
            integrator(o)?;
            for (name, x) in [("f0", o.f0), ("v0", o.v0), ("w0", o.w0)] {
                if x.is_some_and(|x| !x.is_finite()) {
                    return Err(invalid(name, "must be finite"));
                }
            }
        }
        Command::SimulatePde => {
            integrator(o)?;
            positive("mu", required("mu", o.mu)?)?;
            positive("rho", o.rho)?;
            if o.grid < 8 {
                return Err(invalid("grid", format!("at least 8 points, got {}", o.grid)));
            }
            if o.mode == 0 || 2 * o.mode >= o.grid {
                return Err(invalid("mode", format!("must lie in 1..{}, got {}", o.grid.div_ceil(2), o.mode)));
            }
            if let Some(t) = o.times.iter().find(|t| !(t.is_finite() && **t >= 0.0 && **t <= o.t_final)) {
                return Err(invalid("times", format!("{t} is outside [0, {}]", o.t_final)));
            }
            if cfg.params.ell() != 0.0 {
                return Err(invalid("ell", "the PDE simulator requires ell = 0"));
            }
        }
        Command::KernelMoments => {
            pizzetti_constants(o.dimension, o.j_max)?;
        }
        Command::Sweep => sweep::validate(cfg)?,
    }
    Ok(())
}

fn root_columns(roots: &RootSet) -> String {
    roots
        .iter()
        .map(|r| format!("{},{}", fmt_f64(r.re), fmt_f64(r.im)))
        .collect::<Vec<_>>()
        .join(",")
}

const ROOT_HEADER: &str = "re1,im1,re2,im2,re3,im3";

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "output".into(),
        source: e,
    }
}

/// Runs the command, writing its CSV table to `out`. Returns warnings for stderr.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<Vec<String>> {
    validate(cfg)?;
    let p = &cfg.params;
    let o = &cfg.options;
    let mut warnings = Vec::new();
    match cfg.command {
        Command::Equilibria => {
            let (e0, e1) = equilibria(p);
            writeln!(out, "label,f,v,w").map_err(io_err)?;
            for e in [e0, e1] {
                let s = e.point;
                writeln!(out, "{},{},{},{}", e.kind.label(), fmt_f64(s.f), fmt_f64(s.v), fmt_f64(s.w))
                    .map_err(io_err)?;
            }
        }
        Command::Stability => {
            writeln!(out, "label,classification,upsilon,{ROOT_HEADER}").map_err(io_err)?;
            for kind in [EquilibriumKind::Trivial, EquilibriumKind::Coexistence] {
                let v = classify_equilibrium(kind, p);
                let ups = v.upsilon.map(fmt_f64).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{ups},{}",
                    kind.label(),
                    v.classification.as_str(),
                    root_columns(&v.eigenvalues)
                )
                .map_err(io_err)?;
            }
        }
        Command::Dispersion => {
            let step = (o.mu_max - o.mu_min) / (o.samples - 1) as f64;
            let grid: Vec<f64> = (0..o.samples).map(|i| o.mu_min + step * i as f64).collect();
            let curve = dispersion_curve(p, &grid)?;
            writeln!(out, "mu,a2,a1,a0,phi,max_re,stable").map_err(io_err)?;
            for s in curve {
                let c = s.coefficients;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    fmt_f64(s.mu),
                    fmt_f64(c.a2),
                    fmt_f64(c.a1),
                    fmt_f64(c.a0),
                    fmt_f64(s.phi),
                    fmt_f64(s.max_growth_rate()),
                    s.stable
                )
                .map_err(io_err)?;
            }
        }
        Command::Wavetrain => {
            let wt = find_wavetrain(p)?;
            writeln!(
                out,
                "mu_star,sigma_star,decay_eigenvalue,f_re,f_im,v_re,v_im,w_re,w_im"
            )
            .map_err(io_err)?;
            let x = wt.eigvec;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                fmt_f64(wt.mu_star),
                fmt_f64(wt.sigma_star),
                fmt_f64(wt.decay_eigenvalue),
                fmt_f64(x[0].re),
                fmt_f64(x[0].im),
                fmt_f64(x[1].re),
                fmt_f64(x[1].im),
                fmt_f64(x[2].re),
                fmt_f64(x[2].im)
            )
            .map_err(io_err)?;
        }
        Command::Competition => {
            let mu = required("mu", o.mu)?;
            let varsigma = required("varsigma", o.varsigma)?;
            let spec = competition_instability(p, mu, varsigma)?;
            let q = spec.q_coeffs;
            writeln!(
                out,
                "mu,varsigma,gamma,ell,q2,q1,q0,{ROOT_HEADER},continuation_root,unstable"
            )
            .map_err(io_err)?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                fmt_f64(spec.mu),
                fmt_f64(spec.varsigma),
                fmt_f64(spec.gamma),
                fmt_f64(spec.ell),
                fmt_f64(q.a2),
                fmt_f64(q.a1),
                fmt_f64(q.a0),
                root_columns(&spec.eigenvalues),
                fmt_f64(spec.continuation_root),
                spec.unstable
            )
            .map_err(io_err)?;
        }
        Command::SimulateOde => {
            let e1 = p.coexistence_state();
            let s0 = State::new(
                o.f0.unwrap_or(e1.f + 0.01),
                o.v0.unwrap_or(e1.v + 0.01),
                o.w0.unwrap_or(e1.w + 0.01),
            );
            let traj = integrate_ode(s0, p, &integrator(o)?)?;
            if traj.negativity_flag {
                warnings.push("a state component dropped below -1e-9".into());
            }
            traj.write_csv(&mut *out).map_err(io_err)?;
        }
        Command::SimulatePde => {
            let mu = required("mu", o.mu)?;
            let length = 2.0 * PI * o.mode as f64 / mu.sqrt();
            let ones = State::new(1.0, 1.0, 1.0);
            let field = FieldState::single_mode(
                o.grid,
                length,
                p.coexistence_state(),
                o.mode,
                o.rho,
                ones,
                State::default(),
            )?;
            let opts = PdeOptions {
                snapshot_times: if o.times.is_empty() {
                    vec![0.0, o.t_final]
                } else {
                    o.times.clone()
                },
                clamp_dt: o.clamp,
            };
            let run = simulate_pde(&field, p, &integrator(o)?, &opts)?;
            if run.dt_clamped {
                warnings.push(format!("dt reduced to the diffusion bound {}", run.dt_bound));
            }
            write_snapshots_csv(&run.snapshots, &mut *out).map_err(io_err)?;
        }
        Command::KernelMoments => {
            let kernel = o.kernel;
            let m = kernel_moments(|r| kernel.eval(r), o.dimension, o.j_max, &KernelOptions::default())?;
            let constants = pizzetti_constants(o.dimension, o.j_max)?;
            writeln!(out, "j,c_nj,ell_j").map_err(io_err)?;
            for (&(j, ell), c) in m.orders.iter().zip(constants) {
                writeln!(out, "{j},{},{}", fmt_f64(c), fmt_f64(ell)).map_err(io_err)?;
            }
        }
        Command::Sweep => {
            let rows = sweep::sweep(cfg)?;
            sweep::write_csv(&rows, &mut *out).map_err(io_err)?;
        }
    }
    Ok(warnings)
}
