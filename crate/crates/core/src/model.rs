//! Model parameters, the reaction right-hand side, equilibria and Jacobians.
//!
//! The spatially homogeneous system reads
//!
//! ```text
//! f' = f (alpha v - beta w)
//! v' = v (zeta w - eta f)
//! w' = gamma - delta v w - epsilon w
//! ```
//!
//! with fire intensity `f`, vegetation `v` and water `w`. The diffusive
//! system adds `c Δf` and `d Δw`; the competition variant adds `-ell v Δv`.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Names of the scalar model parameters, used for sweeps and config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamName {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Epsilon,
    Eta,
    Zeta,
    C,
    D,
    Ell,
}

impl ParamName {
    pub const ALL: [ParamName; 10] = [
        ParamName::Alpha,
        ParamName::Beta,
        ParamName::Gamma,
        ParamName::Delta,
        ParamName::Epsilon,
        ParamName::Eta,
        ParamName::Zeta,
        ParamName::C,
        ParamName::D,
        ParamName::Ell,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamName::Alpha => "alpha",
            ParamName::Beta => "beta",
            ParamName::Gamma => "gamma",
            ParamName::Delta => "delta",
            ParamName::Epsilon => "epsilon",
            ParamName::Eta => "eta",
            ParamName::Zeta => "zeta",
            ParamName::C => "c",
            ParamName::D => "d",
            ParamName::Ell => "ell",
        }
    }

    /// Reaction rates must be strictly positive; diffusion and competition
    /// coefficients may vanish.
    pub fn is_rate(self) -> bool {
        !matches!(self, ParamName::C | ParamName::D | ParamName::Ell)
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParamName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument {
                name: "parameter",
                reason: format!("unknown parameter name `{s}`"),
            })
    }
}

/// Reaction rates plus diffusion and competition coefficients.
///
/// Values are validated on construction and never mutated afterwards;
/// [`ModelParams::with`] returns a new, revalidated record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    epsilon: f64,
    eta: f64,
    zeta: f64,
    c: f64,
    d: f64,
    ell: f64,
}

impl ModelParams {
    /// Reaction-only parameters (`c = d = ell = 0`).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        epsilon: f64,
        eta: f64,
        zeta: f64,
    ) -> Result<Self> {
        let p = ModelParams {
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
            eta,
            zeta,
            c: 0.0,
            d: 0.0,
            ell: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// All seven rates equal to one, no diffusion.
    pub fn unit() -> Self {
        ModelParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).expect("unit parameters are valid")
    }

    pub fn with_diffusion(self, c: f64, d: f64) -> Result<Self> {
        self.with(ParamName::C, c)?.with(ParamName::D, d)
    }

    pub fn with_competition(self, ell: f64) -> Result<Self> {
        self.with(ParamName::Ell, ell)
    }

    /// Copy with one parameter replaced.
    pub fn with(self, name: ParamName, value: f64) -> Result<Self> {
        let mut p = self;
        *p.slot(name) = value;
        p.validate()?;
        Ok(p)
    }

    pub fn get(&self, name: ParamName) -> f64 {
        match name {
            ParamName::Alpha => self.alpha,
            ParamName::Beta => self.beta,
            ParamName::Gamma => self.gamma,
            ParamName::Delta => self.delta,
            ParamName::Epsilon => self.epsilon,
            ParamName::Eta => self.eta,
            ParamName::Zeta => self.zeta,
            ParamName::C => self.c,
            ParamName::D => self.d,
            ParamName::Ell => self.ell,
        }
    }

    fn slot(&mut self, name: ParamName) -> &mut f64 {
        match name {
            ParamName::Alpha => &mut self.alpha,
            ParamName::Beta => &mut self.beta,
            ParamName::Gamma => &mut self.gamma,
            ParamName::Delta => &mut self.delta,
            ParamName::Epsilon => &mut self.epsilon,
            ParamName::Eta => &mut self.eta,
            ParamName::Zeta => &mut self.zeta,
            ParamName::C => &mut self.c,
            ParamName::D => &mut self.d,
            ParamName::Ell => &mut self.ell,
        }
    }

    fn validate(&self) -> Result<()> {
        for name in ParamName::ALL {
            let value = self.get(name);
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name: name.as_str(),
                    value,
                    reason: "must be finite",
                });
            }
            if name.is_rate() && value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: name.as_str(),
                    value,
                    reason: "reaction rates must be strictly positive",
                });
            }
            if !name.is_rate() && value < 0.0 {
                return Err(Error::InvalidParameter {
                    name: name.as_str(),
                    value,
                    reason: "must be nonnegative",
                });
            }
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    /// Rainfall rate.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    /// Evaporation fraction per unit time.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn zeta(&self) -> f64 {
        self.zeta
    }
    /// Fire diffusion coefficient.
    pub fn c(&self) -> f64 {
        self.c
    }
    /// Water diffusion coefficient.
    pub fn d(&self) -> f64 {
        self.d
    }
    /// Vegetation competition coefficient.
    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn has_diffusion(&self) -> bool {
        self.c > 0.0 || self.d > 0.0
    }

    /// Water level of the coexistence equilibrium, the positive root of
    /// `beta delta w^2 + alpha epsilon w - alpha gamma = 0`.
    ///
    /// Written in rationalized form so that small `gamma` does not cancel.
    pub fn coexistence_water(&self) -> f64 {
        let ae = self.alpha * self.epsilon;
        let disc = (ae * ae + 4.0 * self.alpha * self.beta * self.delta * self.gamma).sqrt();
        2.0 * self.alpha * self.gamma / (disc + ae)
    }

    /// Coordinates `(f*, v*, w*)` of the coexistence equilibrium.
    pub fn coexistence_state(&self) -> State {
        let w = self.coexistence_water();
        State::new(self.zeta * w / self.eta, self.beta * w / self.alpha, w)
    }
}

/// A point `(f, v, w)` of phase space. Negative components are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub f: f64,
    pub v: f64,
    pub w: f64,
}

impl State {
    pub const fn new(f: f64, v: f64, w: f64) -> Self {
        State { f, v, w }
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.f, self.v, self.w)
    }

    pub fn from_vector(v: &Vector3<f64>) -> Self {
        State::new(v[0], v[1], v[2])
    }

    pub fn norm(self) -> f64 {
        self.to_vector().norm()
    }

    pub fn min_component(self) -> f64 {
        self.f.min(self.v).min(self.w)
    }

    pub fn is_finite(self) -> bool {
        self.f.is_finite() && self.v.is_finite() && self.w.is_finite()
    }
}

impl Add for State {
    type Output = State;
    fn add(self, rhs: State) -> State {
        State::new(self.f + rhs.f, self.v + rhs.v, self.w + rhs.w)
    }
}

impl Sub for State {
    type Output = State;
    fn sub(self, rhs: State) -> State {
        State::new(self.f - rhs.f, self.v - rhs.v, self.w - rhs.w)
    }
}

impl Mul<State> for f64 {
    type Output = State;
    fn mul(self, rhs: State) -> State {
        State::new(self * rhs.f, self * rhs.v, self * rhs.w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquilibriumKind {
    /// `E0`: no vegetation, no fire.
    Trivial,
    /// `E1`: fire, vegetation and water all present.
    Coexistence,
}

impl EquilibriumKind {
    pub fn label(self) -> &'static str {
        match self {
            EquilibriumKind::Trivial => "E0",
            EquilibriumKind::Coexistence => "E1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    pub point: State,
}

/// Right-hand side of the spatially homogeneous system.
pub fn reaction_rhs(s: State, p: &ModelParams) -> State {
    State::new(
        s.f * (p.alpha * s.v - p.beta * s.w),
        s.v * (p.zeta * s.w - p.eta * s.f),
        p.gamma - p.delta * s.v * s.w - p.epsilon * s.w,
    )
}

/// Returns `(E0, E1)`.
pub fn equilibria(p: &ModelParams) -> (Equilibrium, Equilibrium) {
    let e0 = Equilibrium {
        kind: EquilibriumKind::Trivial,
        point: State::new(0.0, 0.0, p.gamma / p.epsilon),
    };
    let e1 = Equilibrium {
        kind: EquilibriumKind::Coexistence,
        point: p.coexistence_state(),
    };
    (e0, e1)
}

pub fn equilibrium(kind: EquilibriumKind, p: &ModelParams) -> Equilibrium {
    let (e0, e1) = equilibria(p);
    match kind {
        EquilibriumKind::Trivial => e0,
        EquilibriumKind::Coexistence => e1,
    }
}

/// Jacobian of [`reaction_rhs`] at `s`.
pub fn jacobian(s: State, p: &ModelParams) -> Matrix3<f64> {
    Matrix3::new(
        p.alpha * s.v - p.beta * s.w,
        p.alpha * s.f,
        -p.beta * s.f,
        -p.eta * s.v,
        p.zeta * s.w - p.eta * s.f,
        p.zeta * s.v,
        0.0,
        -p.delta * s.w,
        -p.delta * s.v - p.epsilon,
    )
}
