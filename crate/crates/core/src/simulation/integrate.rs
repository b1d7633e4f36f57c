//! Explicit Runge-Kutta drivers shared by the ODE and PDE simulators.

use crate::error::{Error, Result};

/// Smallest step the adaptive driver accepts before giving up.
pub const MIN_ADAPTIVE_STEP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Classical fourth-order Runge-Kutta with a fixed step.
    Rk4Fixed { dt: f64 },
    /// Dormand-Prince 5(4) with error control.
    Rk45Adaptive { rtol: f64, atol: f64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Rk4Fixed { .. } => "rk4",
            Method::Rk45Adaptive { .. } => "rk45",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub t_final: f64,
}

impl IntegratorConfig {
    pub fn rk4(dt: f64, t_final: f64) -> Result<Self> {
        let cfg = IntegratorConfig {
            method: Method::Rk4Fixed { dt },
            t_final,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn rk45(rtol: f64, atol: f64, t_final: f64) -> Result<Self> {
        let cfg = IntegratorConfig {
            method: Method::Rk45Adaptive { rtol, atol },
            t_final,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument {
                    name,
                    reason: format!("must be finite and positive, got {x}"),
                })
            }
        };
        positive("t_final", self.t_final)?;
        match self.method {
            Method::Rk4Fixed { dt } => positive("dt", dt),
            Method::Rk45Adaptive { rtol, atol } => {
                positive("rtol", rtol)?;
                positive("atol", atol)
            }
        }
    }
}

/// Autonomous system `y' = F(y)`.
pub(crate) trait System {
    fn dim(&self) -> usize;
    fn rhs(&self, y: &[f64], dy: &mut [f64]);
}

/// Steps `y` from 0 to the last entry of `stops`, landing exactly on every
/// stop. `observe(t, y, at_stop)` is called after each accepted step.
pub(crate) fn integrate<S: System>(
    sys: &S,
    y: &mut [f64],
    method: Method,
    max_step: f64,
    stops: &[f64],
    mut observe: impl FnMut(f64, &[f64], bool),
) -> Result<()> {
    let mut stepper = Stepper::new(sys.dim());
    let mut t = 0.0;
    let mut h = match method {
        Method::Rk4Fixed { dt } => dt.min(max_step),
        Method::Rk45Adaptive { rtol, atol } => stepper.initial_step(sys, y, rtol, atol, max_step),
    };
    for &stop in stops {
        if stop <= t {
            if stop == t {
                observe(t, y, true);
            }
            continue;
        }
        match method {
            Method::Rk4Fixed { dt } => {
                let dt = dt.min(max_step);
                let span = stop - t;
                let n = ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
                let step = span / n as f64;
                let start = t;
                for i in 1..=n {
                    stepper.rk4(sys, y, step);
                    t = if i == n { stop } else { start + i as f64 * step };
                    check_finite(y, t)?;
                    observe(t, y, i == n);
                }
            }
            Method::Rk45Adaptive { rtol, atol } => loop {
                let remaining = stop - t;
                let last = h >= remaining;
                let step = if last { remaining } else { h };
                let err = stepper.dopri(sys, y, step, rtol, atol);
                if err <= 1.0 {
                    stepper.accept(y);
                    t = if last { stop } else { t + step };
                    check_finite(y, t)?;
                    observe(t, y, last);
                    let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    // Keep the nominal step when the last step was shortened to hit a stop.
                    h = if last { h.max(step * factor) } else { step * factor }.min(max_step);
                    if last {
                        break;
                    }
                } else {
                    h = step * (0.9 * err.powf(-0.2)).max(0.1);
                    if !h.is_finite() || h < MIN_ADAPTIVE_STEP {
                        return Err(Error::StepFailure { t, h });
                    }
                }
            },
        }
    }
    Ok(())
}

fn check_finite(y: &[f64], t: f64) -> Result<()> {
    if y.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { t })
    }
}

// Dormand-Prince 5(4) tableau; the system is autonomous so the nodes are not needed.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the fifth- and fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

struct Stepper {
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    next: Vec<f64>,
}

// Stage loops index several buffers in lockstep.
#[allow(clippy::needless_range_loop)]
impl Stepper {
    fn new(n: usize) -> Self {
        Stepper {
            k: std::array::from_fn(|_| vec![0.0; n]),
            tmp: vec![0.0; n],
            next: vec![0.0; n],
        }
    }

    fn stage(&mut self, y: &[f64], h: f64, coeffs: &[(usize, f64)]) {
        for i in 0..y.len() {
            let mut acc = y[i];
            for &(j, a) in coeffs {
                acc += h * a * self.k[j][i];
            }
            self.tmp[i] = acc;
        }
    }

    fn rk4<S: System>(&mut self, sys: &S, y: &mut [f64], h: f64) {
        sys.rhs(y, &mut self.k[0]);
        self.stage(y, h, &[(0, 0.5)]);
        sys.rhs(&self.tmp, &mut self.k[1]);
        self.stage(y, h, &[(1, 0.5)]);
        sys.rhs(&self.tmp, &mut self.k[2]);
        self.stage(y, h, &[(2, 1.0)]);
        sys.rhs(&self.tmp, &mut self.k[3]);
        for i in 0..y.len() {
            y[i] += h / 6.0 * (self.k[0][i] + 2.0 * self.k[1][i] + 2.0 * self.k[2][i] + self.k[3][i]);
        }
    }

    /// Computes a trial step into `self.next`; returns the scaled error norm.
    fn dopri<S: System>(&mut self, sys: &S, y: &[f64], h: f64, rtol: f64, atol: f64) -> f64 {
        sys.rhs(y, &mut self.k[0]);
        self.stage(y, h, &[(0, A21)]);
        sys.rhs(&self.tmp, &mut self.k[1]);
        self.stage(y, h, &[(0, A31), (1, A32)]);
        sys.rhs(&self.tmp, &mut self.k[2]);
        self.stage(y, h, &[(0, A41), (1, A42), (2, A43)]);
        sys.rhs(&self.tmp, &mut self.k[3]);
        self.stage(y, h, &[(0, A51), (1, A52), (2, A53), (3, A54)]);
        sys.rhs(&self.tmp, &mut self.k[4]);
        self.stage(y, h, &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)]);
        sys.rhs(&self.tmp, &mut self.k[5]);
        self.stage(y, h, &[(0, B1), (2, B3), (3, B4), (4, B5), (5, B6)]);
        self.next.copy_from_slice(&self.tmp);
        sys.rhs(&self.next, &mut self.k[6]);

        let mut sum = 0.0;
        for i in 0..y.len() {
            let e = h
                * (E1 * self.k[0][i]
                    + E3 * self.k[2][i]
                    + E4 * self.k[3][i]
                    + E5 * self.k[4][i]
                    + E6 * self.k[5][i]
                    + E7 * self.k[6][i]);
            let scale = atol + rtol * y[i].abs().max(self.next[i].abs());
            sum += (e / scale).powi(2);
        }
        let err = (sum / y.len() as f64).sqrt();
        if err.is_finite() {
            err
        } else {
            f64::INFINITY
        }
    }

    fn accept(&mut self, y: &mut [f64]) {
        y.copy_from_slice(&self.next);
    }

    fn initial_step<S: System>(&mut self, sys: &S, y: &[f64], rtol: f64, atol: f64, max_step: f64) -> f64 {
        sys.rhs(y, &mut self.k[0]);
        let n = y.len() as f64;
        let scale = |x: f64| atol + rtol * x.abs();
        let d0 = (y.iter().map(|&x| (x / scale(x)).powi(2)).sum::<f64>() / n).sqrt();
        let d1 = (y
            .iter()
            .zip(&self.k[0])
            .map(|(&x, &dx)| (dx / scale(x)).powi(2))
            .sum::<f64>()
            / n)
            .sqrt();
        let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h.min(max_step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Harmonic oscillator `x'' = -x`.
    struct Oscillator;

    impl System for Oscillator {
        fn dim(&self) -> usize {
            2
        }
        fn rhs(&self, y: &[f64], dy: &mut [f64]) {
            dy[0] = y[1];
            dy[1] = -y[0];
        }
    }

    fn run(method: Method, t_final: f64) -> Vec<f64> {
        let mut y = vec![1.0, 0.0];
        integrate(&Oscillator, &mut y, method, f64::INFINITY, &[t_final], |_, _, _| {}).unwrap();
        y
    }

    #[test]
    fn rk4_is_fourth_order() {
        let exact = [10f64.cos(), -10f64.sin()];
        let err = |dt| {
            let y = run(Method::Rk4Fixed { dt }, 10.0);
            ((y[0] - exact[0]).powi(2) + (y[1] - exact[1]).powi(2)).sqrt()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn adaptive_meets_tolerance() {
        let y = run(Method::Rk45Adaptive { rtol: 1e-10, atol: 1e-12 }, 10.0);
        assert!((y[0] - 10f64.cos()).abs() < 1e-8);
        assert!((y[1] + 10f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn stops_are_hit_exactly() {
        let mut y = vec![1.0, 0.0];
        let mut seen = Vec::new();
        integrate(
            &Oscillator,
            &mut y,
            Method::Rk45Adaptive { rtol: 1e-8, atol: 1e-10 },
            f64::INFINITY,
            &[0.0, 0.3, 1.7, 2.0],
            |t, _, at_stop| {
                if at_stop {
                    seen.push(t)
                }
            },
        )
        .unwrap();
        assert_eq!(seen, vec![0.0, 0.3, 1.7, 2.0]);
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::rk4(0.0, 1.0).is_err());
        assert!(IntegratorConfig::rk4(0.1, -1.0).is_err());
        assert!(IntegratorConfig::rk45(1e-6, 0.0, 1.0).is_err());
        assert!(IntegratorConfig::rk45(1e-6, 1e-9, 1.0).is_ok());
    }

    /// `y' = y^2` blows up at t = 1.
    struct BlowUp;

    impl System for BlowUp {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, y: &[f64], dy: &mut [f64]) {
            dy[0] = y[0] * y[0];
        }
    }

    #[test]
    fn adaptive_step_underflow_is_reported() {
        let mut y = vec![1.0];
        let err = integrate(
            &BlowUp,
            &mut y,
            Method::Rk45Adaptive { rtol: 1e-8, atol: 1e-10 },
            f64::INFINITY,
            &[2.0],
            |_, _, _| {},
        )
        .unwrap_err();
        assert!(matches!(err, Error::StepFailure { .. } | Error::NonFinite { .. }), "{err:?}");
    }
}
