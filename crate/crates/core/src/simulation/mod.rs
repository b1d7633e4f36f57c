//! Time-domain simulation: the homogeneous ODE, the 1D periodic PDE, the
//! linearized single-mode system, and kernel-moment reduction of nonlocal
//! competition.
//!
//! Spatial simulation is restricted to one periodic dimension; every
//! linear statement depends on the wave vector only through `mu = |k|^2`.

mod csv;
pub mod integrate;
pub mod kernel;
pub mod modes;
pub mod ode;
pub mod pde;
pub mod quadrature;

pub use csv::fmt_f64;
pub use integrate::{IntegratorConfig, Method};
pub use kernel::{kernel_moments, pizzetti_constants, KernelMoments, KernelOptions};
pub use modes::{linearized_mode_system, ModeSystem};
pub use ode::{integrate_ode, Trajectory};
pub use pde::{simulate_pde, write_snapshots_csv, FieldState, PdeOptions, PdeRun};
