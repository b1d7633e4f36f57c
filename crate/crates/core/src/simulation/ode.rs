use std::io::{self, Write};

use super::csv::fmt_f64;
use super::integrate::{integrate, IntegratorConfig, System};
use crate::error::Result;
use crate::model::{reaction_rhs, ModelParams, State};

/// Components below this count as negative.
pub const NEGATIVITY_THRESHOLD: f64 = -1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    /// Set when any component dropped below [`NEGATIVITY_THRESHOLD`].
    pub negativity_flag: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, State)> {
        Some((*self.times.last()?, *self.states.last()?))
    }

    /// Columns `t,f,v,w`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,f,v,w")?;
        for (t, s) in self.times.iter().zip(&self.states) {
            writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(*t),
                fmt_f64(s.f),
                fmt_f64(s.v),
                fmt_f64(s.w)
            )?;
        }
        Ok(())
    }
}

struct Reaction<'a>(&'a ModelParams);

impl System for Reaction<'_> {
    fn dim(&self) -> usize {
        3
    }

    fn rhs(&self, y: &[f64], dy: &mut [f64]) {
        let r = reaction_rhs(State::new(y[0], y[1], y[2]), self.0);
        dy[0] = r.f;
        dy[1] = r.v;
        dy[2] = r.w;
    }
}

/// Integrates the spatially homogeneous system from `s0`, recording every
/// accepted step (including `t = 0`).
pub fn integrate_ode(s0: State, p: &ModelParams, cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![s0],
        negativity_flag: s0.min_component() < NEGATIVITY_THRESHOLD,
    };
    let mut y = [s0.f, s0.v, s0.w];
    integrate(
        &Reaction(p),
        &mut y,
        cfg.method,
        f64::INFINITY,
        &[cfg.t_final],
        |t, y, _| {
            let s = State::new(y[0], y[1], y[2]);
            traj.negativity_flag |= s.min_component() < NEGATIVITY_THRESHOLD;
            traj.times.push(t);
            traj.states.push(s);
        },
    )?;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::equilibria;

    fn unstable() -> ModelParams {
        ModelParams::new(2.0, 1.0, 1.0, 1.0, 0.1, 1.0, 1.0).unwrap()
    }

    #[test]
    fn equilibrium_stays_put() {
        let p = ModelParams::unit();
        let (_, e1) = equilibria(&p);
        let cfg = IntegratorConfig::rk45(1e-10, 1e-12, 50.0).unwrap();
        let traj = integrate_ode(e1.point, &p, &cfg).unwrap();
        let max_dev = traj.states.iter().map(|s| (*s - e1.point).norm()).fold(0.0, f64::max);
        assert!(max_dev <= 1e-8, "{max_dev}");
        assert!(!traj.negativity_flag);
        assert!(traj.times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn stable_spiral_contracts() {
        let p = ModelParams::unit();
        let (_, e1) = equilibria(&p);
        let s0 = e1.point + State::new(0.1, 0.1, 0.1);
        let cfg = IntegratorConfig::rk4(0.01, 50.0).unwrap();
        let (_, end) = integrate_ode(s0, &p, &cfg).unwrap().last().unwrap();
        assert!((end - e1.point).norm() < (s0 - e1.point).norm());
    }

    #[test]
    fn unstable_spiral_expands() {
        let p = unstable();
        let (_, e1) = equilibria(&p);
        let s0 = e1.point + State::new(0.01, 0.01, 0.01);
        let cfg = IntegratorConfig::rk45(1e-9, 1e-12, 50.0).unwrap();
        let (t, end) = integrate_ode(s0, &p, &cfg).unwrap().last().unwrap();
        assert_eq!(t, 50.0);
        assert!((end - e1.point).norm() > (s0 - e1.point).norm());
    }

    #[test]
    fn negativity_is_flagged() {
        let p = ModelParams::unit();
        let cfg = IntegratorConfig::rk4(0.01, 1.0).unwrap();
        // Water starts negative and rain pushes it back up.
        let traj = integrate_ode(State::new(0.0, 0.0, -0.5), &p, &cfg).unwrap();
        assert!(traj.negativity_flag);
        let traj = integrate_ode(State::new(0.5, 0.5, 0.5), &p, &cfg).unwrap();
        assert!(!traj.negativity_flag);
    }

    #[test]
    fn csv_layout() {
        let p = ModelParams::unit();
        let cfg = IntegratorConfig::rk4(0.5, 1.0).unwrap();
        let traj = integrate_ode(State::new(0.0, 0.0, 1.0), &p, &cfg).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t,f,v,w");
        assert_eq!(lines.len(), 4);
        assert_eq!(
            lines[1],
            "0.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0"
        );
    }
}
