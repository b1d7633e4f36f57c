//! Vegetation-rainfall-bushfire reaction-diffusion model.
//!
//! Three interacting fields on a flat, homogeneous terrain: fire intensity
//! `f`, vegetation `v` and water availability `w`. The crate provides the
//! equilibria and their linear stability, the single-mode dispersion
//! relation and its diffusive stabilization threshold, the neutral wave
//! trains living at that threshold, the spectrum of the vegetation
//! competition variant, and time-domain simulation of the homogeneous ODE
//! and of the 1D periodic PDE.

pub mod cubic;
pub mod error;
pub mod linalg;
pub mod model;
pub mod simulation;
pub mod stability;

pub use error::{Error, Result};
pub use model::{equilibria, jacobian, reaction_rhs, Equilibrium, EquilibriumKind, ModelParams, ParamName, State};
