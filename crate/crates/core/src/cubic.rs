//! Monic cubics `t^3 + a2 t^2 + a1 t + a0`: root solving, the Routh-Hurwitz
//! test for positive coefficients and the purely-imaginary-root factorization.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonicCubic {
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

impl MonicCubic {
    pub const fn new(a2: f64, a1: f64, a0: f64) -> Self {
        MonicCubic { a2, a1, a0 }
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        ((t + self.a2) * t + self.a1) * t + self.a0
    }

    fn eval_real(&self, t: f64) -> f64 {
        ((t + self.a2) * t + self.a1) * t + self.a0
    }

    fn derivative(&self, t: Complex64) -> Complex64 {
        (3.0 * t + 2.0 * self.a2) * t + self.a1
    }

    /// Routh-Hurwitz gap `a1 a2 - a0`.
    pub fn hurwitz_gap(&self) -> f64 {
        self.a1 * self.a2 - self.a0
    }

    /// Width of the band around `a1 a2 = a0` treated as marginal.
    pub fn marginal_tolerance(&self) -> f64 {
        1e-9 * (1.0 + (self.a1 * self.a2).abs() + self.a0.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.a2.is_finite() && self.a1.is_finite() && self.a0.is_finite()
    }

    pub fn roots(&self) -> RootSet {
        solve_cubic(self)
    }
}

/// The three complex roots of a real cubic, sorted by `(Re, Im)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSet {
    roots: [Complex64; 3],
}

impl RootSet {
    pub fn as_slice(&self) -> &[Complex64; 3] {
        &self.roots
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.roots.iter()
    }

    pub fn max_real_part(&self) -> f64 {
        self.roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Root with the largest real part; ties resolved toward positive imaginary part.
    pub fn leading(&self) -> Complex64 {
        self.roots[2]
    }

    /// Real roots, i.e. those with vanishing imaginary part.
    pub fn real_roots(&self) -> impl Iterator<Item = f64> + '_ {
        self.roots.iter().filter(|r| r.im == 0.0).map(|r| r.re)
    }

    /// Elementary symmetric functions `(e1, e2, e3)`; for a monic cubic
    /// these equal `(-a2, a1, -a0)`.
    pub fn elementary_symmetric(&self) -> (Complex64, Complex64, Complex64) {
        let [r1, r2, r3] = self.roots;
        (r1 + r2 + r3, r1 * r2 + r1 * r3 + r2 * r3, r1 * r2 * r3)
    }

    /// Smallest distance between two roots.
    pub fn min_separation(&self) -> f64 {
        let [r1, r2, r3] = self.roots;
        (r1 - r2).norm().min((r1 - r3).norm()).min((r2 - r3).norm())
    }

    /// Builds a root set from known roots, sorting them.
    pub fn from_roots(roots: [Complex64; 3]) -> Self {
        RootSet::sorted(roots)
    }

    fn sorted(mut roots: [Complex64; 3]) -> Self {
        roots.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap_or(Ordering::Equal)
                .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
        });
        RootSet { roots }
    }
}

/// Roots of a monic cubic.
///
/// Closed form on the depressed cubic (trigonometric when all roots are
/// real, Cardano otherwise), then Newton polishing that is only accepted
/// while it reduces the residual. The complex pair is stored as exact
/// conjugates.
pub fn solve_cubic(p: &MonicCubic) -> RootSet {
    let shift = p.a2 / 3.0;
    // x = t + a2/3 gives x^3 + q1 x + q0.
    let q1 = p.a1 - p.a2 * shift;
    let q0 = 2.0 * shift * shift * shift - p.a1 * shift + p.a0;

    let half_q = 0.5 * q0;
    let third_p = q1 / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;

    if disc <= 0.0 {
        // Three real roots (possibly repeated).
        let roots = if third_p == 0.0 {
            [-shift; 3]
        } else {
            let m = 2.0 * (-third_p).sqrt();
            // cos(3 phi) = (3 q0 / (2 q1)) sqrt(-3 / q1)
            let arg = (3.0 * q0 / (q1 * m)).clamp(-1.0, 1.0);
            let phi = arg.acos() / 3.0;
            [0, 1, 2].map(|k| m * (phi - 2.0 * PI * k as f64 / 3.0).cos() - shift)
        };
        let roots = roots.map(|r| Complex64::new(polish_real(p, r), 0.0));
        RootSet::sorted(roots)
    } else {
        let sq = disc.sqrt();
        // Choose the sign that avoids cancellation.
        let big = if half_q >= 0.0 {
            -(half_q + sq).cbrt()
        } else {
            (-half_q + sq).cbrt()
        };
        let small = if big != 0.0 { -third_p / big } else { 0.0 };
        let real = polish_real(p, big + small - shift);
        let re = -0.5 * (big + small) - shift;
        let im = 0.5 * 3f64.sqrt() * (big - small).abs();
        let z = polish_complex(p, Complex64::new(re, im));
        let z = Complex64::new(z.re, z.im.abs());
        RootSet::sorted([Complex64::new(real, 0.0), z, z.conj()])
    }
}

fn polish_real(p: &MonicCubic, mut t: f64) -> f64 {
    let mut residual = p.eval_real(t).abs();
    for _ in 0..4 {
        if residual == 0.0 {
            break;
        }
        let dp = (3.0 * t + 2.0 * p.a2) * t + p.a1;
        if dp == 0.0 {
            break;
        }
        let candidate = t - p.eval_real(t) / dp;
        let r = p.eval_real(candidate).abs();
        if r < residual {
            t = candidate;
            residual = r;
        } else {
            break;
        }
    }
    t
}

fn polish_complex(p: &MonicCubic, mut z: Complex64) -> Complex64 {
    let mut residual = p.eval(z).norm();
    for _ in 0..4 {
        if residual == 0.0 {
            break;
        }
        let dp = p.derivative(z);
        if dp.norm() == 0.0 {
            break;
        }
        let candidate = z - p.eval(z) / dp;
        let r = p.eval(candidate).norm();
        if r < residual {
            z = candidate;
            residual = r;
        } else {
            break;
        }
    }
    z
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HurwitzVerdict {
    AllNegativeRealPart,
    Marginal,
    HasNonnegativeRealPart,
}

/// Routh-Hurwitz test for a cubic with positive coefficients: all roots lie
/// in the open left half plane iff `a1 a2 > a0`.
pub fn hurwitz_negative(p: &MonicCubic) -> Result<HurwitzVerdict> {
    if !(p.a2 > 0.0 && p.a1 > 0.0 && p.a0 > 0.0) {
        return Err(Error::HypothesisViolated {
            a2: p.a2,
            a1: p.a1,
            a0: p.a0,
        });
    }
    Ok(classify_gap(p.hurwitz_gap(), p.marginal_tolerance()))
}

pub(crate) fn classify_gap(gap: f64, tol: f64) -> HurwitzVerdict {
    if gap.abs() <= tol {
        HurwitzVerdict::Marginal
    } else if gap > 0.0 {
        HurwitzVerdict::AllNegativeRealPart
    } else {
        HurwitzVerdict::HasNonnegativeRealPart
    }
}

/// A cubic of the form `(t^2 + sigma^2)(t - real_root)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryPair {
    pub sigma: f64,
    pub real_root: f64,
}

/// Detects a nonzero purely imaginary root pair `±i sigma`.
///
/// Present iff `a1 > 0` and `a1 a2 = a0` (within the marginal band), in
/// which case the cubic factors as `(t^2 + a1)(t + a2)`.
pub fn imaginary_root_factorization(p: &MonicCubic) -> Option<ImaginaryPair> {
    if !p.is_finite() || p.a1 <= 0.0 || p.hurwitz_gap().abs() > p.marginal_tolerance() {
        return None;
    }
    // (t^2 + a1)(t + a2) = t^3 + a2 t^2 + a1 t + a1 a2
    debug_assert!((p.a1 * p.a2 - p.a0).abs() <= 1e-9 * (1.0 + p.a0.abs() + (p.a1 * p.a2).abs()));
    Some(ImaginaryPair {
        sigma: p.a1.sqrt(),
        real_root: -p.a2,
    })
}
