//! Linearized single-mode dynamics: with `f = f* + rho (f1 sin(kx) + f2 cos(kx))`
//! (and likewise for `v`, `w`), dropping `O(rho^2)` terms leaves two copies of
//! `X' = A(mu) X`, one for the sine amplitudes and one for the cosine amplitudes.

use nalgebra::{Matrix3, SMatrix, Vector3};

use crate::error::Result;
use crate::model::{ModelParams, State};
use crate::stability::mode_matrix;

pub type Matrix6 = SMatrix<f64, 6, 6>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSystem {
    pub mu: f64,
    /// Acts on `(f1, v1, w1)`.
    pub sin_block: Matrix3<f64>,
    /// Acts on `(f2, v2, w2)`.
    pub cos_block: Matrix3<f64>,
}

impl ModeSystem {
    /// Block-diagonal generator on `(f1, v1, w1, f2, v2, w2)`.
    pub fn full_matrix(&self) -> Matrix6 {
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.sin_block);
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(&self.cos_block);
        m
    }

    /// Exact evolution of the sine and cosine amplitudes over time `t`.
    pub fn evolve(&self, sin_amp: State, cos_amp: State, t: f64) -> (State, State) {
        let mut x = [0.0; 6];
        x[..3].copy_from_slice(sin_amp.to_vector().as_slice());
        x[3..].copy_from_slice(cos_amp.to_vector().as_slice());
        let y = (self.full_matrix() * t).exp() * nalgebra::Vector6::from_row_slice(&x);
        (
            State::from_vector(&Vector3::new(y[0], y[1], y[2])),
            State::from_vector(&Vector3::new(y[3], y[4], y[5])),
        )
    }
}

pub fn linearized_mode_system(p: &ModelParams, mu: f64) -> Result<ModeSystem> {
    let a = mode_matrix(p, mu)?;
    Ok(ModeSystem {
        mu,
        sin_block: a,
        cos_block: a,
    })
}
