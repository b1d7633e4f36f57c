//! Reduction of a radial interaction kernel to a series of iterated
//! Laplacians, `∫ K(y) v(x + y) dy ≈ Σ_j ell_j Δ^j v(x)`.
//!
//! Integrating a smooth function over the sphere of radius `r` about `x`
//! gives `Σ_j C_{n,j} r^{n-1+2j} Δ^j v(x)`, so that for `K(y) = K0(|y|)`
//! the moments are `ell_j = C_{n,j} ∫_0^∞ r^{n-1+2j} K0(r) dr`.

use super::quadrature;
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 6;

/// Area of the unit sphere in `R^n`.
fn sphere_area(n: usize) -> f64 {
    use std::f64::consts::PI;
    // |S^0| = 2, |S^1| = 2 pi, |S^{n+1}| = 2 pi |S^{n-1}| / n.
    let (mut area, mut dim) = if n % 2 == 1 { (2.0, 1) } else { (2.0 * PI, 2) };
    while dim < n {
        area *= 2.0 * PI / dim as f64;
        dim += 2;
    }
    area
}

/// Sphere-mean expansion constants `C_{n,0}, ..., C_{n,j_max}`.
///
/// Integrating `|y|^{2j}` over the unit sphere and matching the action of
/// `Δ^j` on it yields `C_{n,j} = C_{n,j-1} / (2j (n + 2j - 2))` with
/// `C_{n,0} = |S^{n-1}|`.
pub fn pizzetti_constants(n: usize, j_max: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument {
            name: "dimension",
            reason: "must be at least 1".into(),
        });
    }
    if j_max > MAX_ORDER {
        return Err(Error::InvalidArgument {
            name: "j_max",
            reason: format!("at most {MAX_ORDER}, got {j_max}"),
        });
    }
    let mut constants = Vec::with_capacity(j_max + 1);
    constants.push(sphere_area(n));
    for j in 1..=j_max {
        let prev = constants[j - 1];
        constants.push(prev / (2.0 * j as f64 * (n + 2 * j - 2) as f64));
    }
    Ok(constants)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub rel_tol: f64,
    /// Give up if the kernel has not decayed by this radius.
    pub max_radius: f64,
    /// Truncate once `K0(r) < decay_ratio * K0(0)`.
    pub decay_ratio: f64,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            rel_tol: 1e-10,
            max_radius: 1e6,
            decay_ratio: 1e-16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelMoments {
    pub dimension: usize,
    pub truncation_radius: f64,
    /// `(j, ell_j)` for `j = 0..=j_max`.
    pub orders: Vec<(usize, f64)>,
}

impl KernelMoments {
    pub fn ell(&self, j: usize) -> Option<f64> {
        self.orders.get(j).map(|&(_, l)| l)
    }

    /// Fourier symbol of the truncated series at `|k|^2 = mu`:
    /// `Σ_j ell_j (-mu)^j`, since `Δ^j e^{ikx} = (-|k|^2)^j e^{ikx}`.
    pub fn symbol(&self, mu: f64) -> f64 {
        self.orders
            .iter()
            .rev()
            .fold(0.0, |acc, &(_, l)| acc * (-mu) + l)
    }
}

/// Moments of a radial kernel `K(y) = K0(|y|)` in dimension `n`.
pub fn kernel_moments(
    k0: impl Fn(f64) -> f64,
    n: usize,
    j_max: usize,
    opts: &KernelOptions,
) -> Result<KernelMoments> {
    let constants = pizzetti_constants(n, j_max)?;

    // Reference magnitude near the origin; K0(0) may vanish for ring-shaped kernels.
    let reference = (0..=64)
        .map(|i| k0(i as f64 / 64.0).abs())
        .fold(0.0, f64::max);
    if !(reference.is_finite() && reference > 0.0) {
        return Err(Error::InvalidArgument {
            name: "kernel",
            reason: "kernel must be finite and not identically zero near the origin".into(),
        });
    }
    let threshold = opts.decay_ratio * reference;
    let mut radius = 1.0;
    while k0(radius).abs() >= threshold {
        radius *= 2.0;
        if radius > opts.max_radius {
            return Err(Error::SlowDecay { radius: opts.max_radius });
        }
    }

    let orders = constants
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let power = (n - 1 + 2 * j) as i32;
            let integral = quadrature::integrate(
                |r| r.powi(power) * k0(r),
                0.0,
                radius,
                opts.rel_tol,
                0.0,
            );
            (j, c * integral)
        })
        .collect();
    Ok(KernelMoments {
        dimension: n,
        truncation_radius: radius,
        orders,
    })
}
