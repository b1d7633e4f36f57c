//! Small dense helpers for 3x3 real matrices with complex spectra.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::cubic::MonicCubic;

pub type CVector3 = Vector3<Complex64>;
pub type CMatrix3 = Matrix3<Complex64>;

/// Coefficients of `det(t I - m)` as a monic cubic.
pub fn characteristic_cubic(m: &Matrix3<f64>) -> MonicCubic {
    let trace = m.trace();
    let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
        + m[(0, 0)] * m[(2, 2)]
        - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)];
    MonicCubic::new(-trace, minors, -m.determinant())
}

pub fn complexify(m: &Matrix3<f64>) -> CMatrix3 {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn complex_vector(v: &Vector3<f64>) -> CVector3 {
    v.map(|x| Complex64::new(x, 0.0))
}

/// Unit eigenvector of `m` for a simple eigenvalue `lambda`.
///
/// The kernel of the rank-2 matrix `m - lambda I` is spanned by the
/// (bilinear) cross product of any two independent rows; the pair with the
/// largest product is used. The phase is fixed so that the largest-magnitude
/// component is real and positive.
pub fn eigenvector(m: &Matrix3<f64>, lambda: Complex64) -> CVector3 {
    let shifted = complexify(m) - CMatrix3::identity() * lambda;
    let rows: [CVector3; 3] = [0, 1, 2].map(|i| shifted.row(i).transpose());
    let candidates = [
        rows[0].cross(&rows[1]),
        rows[0].cross(&rows[2]),
        rows[1].cross(&rows[2]),
    ];
    let best = candidates
        .into_iter()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("three candidates");
    normalize_phase(best)
}

/// Scales to unit norm with the largest-magnitude component real positive.
pub fn normalize_phase(v: CVector3) -> CVector3 {
    let norm = v.norm();
    if norm == 0.0 {
        return v;
    }
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("nonempty");
    let phase = pivot.conj() / pivot.norm();
    v.map(|z| z * phase / norm)
}

/// Frobenius-norm condition number of a complex 3x3 matrix; infinite when
/// singular.
pub fn condition_number(m: &CMatrix3) -> f64 {
    match m.try_inverse() {
        Some(inv) => m.norm() * inv.norm(),
        None => f64::INFINITY,
    }
}

/// Distance from `x` to the complex span of `a` and `b` (Hermitian inner product).
pub fn distance_to_span(x: &CVector3, a: &CVector3, b: &CVector3) -> f64 {
    // Gram-Schmidt on {a, b}.
    let e1 = a / Complex64::new(a.norm(), 0.0);
    let b_perp = b - e1 * e1.dotc(b);
    let residual = x - e1 * e1.dotc(x);
    if b_perp.norm() <= 1e-14 * b.norm() {
        return residual.norm();
    }
    let e2 = b_perp / Complex64::new(b_perp.norm(), 0.0);
    (residual - e2 * e2.dotc(x)).norm()
}
