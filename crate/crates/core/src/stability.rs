//! Linear stability of the equilibria, the single-mode dispersion relation,
//! the diffusive stabilization threshold, wave trains at the threshold and
//! the spectrum of the competition-modified mode matrix.
//!
//! For a perturbation `sin(k x)`, `cos(k x)` of the coexistence state the
//! amplitudes obey `X' = A(mu) X` with `mu = |k|^2`. Its characteristic
//! polynomial `t^3 + a2(mu) t^2 + a1(mu) t + a0(mu)` has positive
//! coefficients, so stability is decided by the sign of
//! `Phi(mu) = a1 a2 - a0`, itself a cubic in `mu`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::cubic::{classify_gap, imaginary_root_factorization, HurwitzVerdict, MonicCubic, RootSet};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix3, CVector3};
use crate::model::{equilibrium, jacobian, EquilibriumKind, ModelParams};

/// Eigenbases worse conditioned than this fall back to the dense exponential.
pub const MAX_EIGENBASIS_CONDITION: f64 = 1e12;

/// Sign-determining scalar for the coexistence equilibrium:
/// stable when positive, unstable when negative.
pub fn upsilon(p: &ModelParams) -> f64 {
    let (a, b, g, d, e) = (p.alpha(), p.beta(), p.gamma(), p.delta(), p.epsilon());
    let root = (a * a * e * e + 4.0 * a * b * g * d).sqrt();
    2.0 * b * g * (d - a) / (root + a * e) + e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Stable,
    Unstable,
    Neutral,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Stable => "stable",
            Classification::Unstable => "unstable",
            Classification::Neutral => "neutral",
        }
    }

    fn from_hurwitz(v: HurwitzVerdict) -> Self {
        match v {
            HurwitzVerdict::AllNegativeRealPart => Classification::Stable,
            HurwitzVerdict::Marginal => Classification::Neutral,
            HurwitzVerdict::HasNonnegativeRealPart => Classification::Unstable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict {
    /// Only defined for the coexistence equilibrium.
    pub upsilon: Option<f64>,
    pub classification: Classification,
    pub eigenvalues: RootSet,
}

/// Scale factor `delta zeta v* w*` linking `Upsilon` to the Routh-Hurwitz gap.
fn gap_scale(p: &ModelParams) -> f64 {
    let s = p.coexistence_state();
    p.delta() * p.zeta() * s.v * s.w
}

/// Band around zero within which `Upsilon` is reported as neutral.
pub fn upsilon_tolerance(p: &ModelParams) -> f64 {
    characteristic_coefficients(p, 0.0).marginal_tolerance() / gap_scale(p)
}

pub fn classify_equilibrium(kind: EquilibriumKind, p: &ModelParams) -> StabilityVerdict {
    match kind {
        EquilibriumKind::Trivial => {
            // J(E0) is lower triangular: eigenvalues are its diagonal.
            let j = jacobian(equilibrium(kind, p).point, p);
            let eigenvalues =
                RootSet::from_roots([0, 1, 2].map(|i| Complex64::new(j[(i, i)], 0.0)));
            StabilityVerdict {
                upsilon: None,
                classification: Classification::Unstable,
                eigenvalues,
            }
        }
        EquilibriumKind::Coexistence => {
            let ups = upsilon(p);
            let coeffs = characteristic_coefficients(p, 0.0);
            StabilityVerdict {
                upsilon: Some(ups),
                classification: Classification::from_hurwitz(classify_gap(
                    ups,
                    upsilon_tolerance(p),
                )),
                eigenvalues: coeffs.roots(),
            }
        }
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu.is_finite() && mu >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument {
            name: "mu",
            reason: format!("squared wavenumber must be finite and nonnegative, got {mu}"),
        })
    }
}

/// Linearization of the diffusive system about the coexistence state for a
/// single spatial mode with `mu = |k|^2`.
pub fn mode_matrix(p: &ModelParams, mu: f64) -> Result<Matrix3<f64>> {
    check_mu(mu)?;
    let s = p.coexistence_state();
    Ok(Matrix3::new(
        -p.c() * mu,
        p.alpha() * s.f,
        -p.beta() * s.f,
        -p.eta() * s.v,
        0.0,
        p.zeta() * s.v,
        0.0,
        -p.delta() * s.w,
        -p.delta() * s.v - p.epsilon() - p.d() * mu,
    ))
}

/// Closed-form characteristic coefficients `(a2, a1, a0)` of `A(mu)`.
pub fn characteristic_coefficients(p: &ModelParams, mu: f64) -> MonicCubic {
    let s = p.coexistence_state();
    let (c, d) = (p.c(), p.d());
    let damping = p.delta() * s.v + p.epsilon();
    let fire_veg = p.alpha() * p.eta() * s.f * s.v;
    let veg_water = p.delta() * p.zeta() * s.v * s.w;
    MonicCubic::new(
        (c + d) * mu + damping,
        c * mu * (d * mu + damping) + fire_veg + veg_water,
        c * mu * veg_water
            + fire_veg * (damping + d * mu)
            + p.beta() * p.delta() * p.eta() * s.f * s.v * s.w,
    )
}

/// `Phi(mu) = b3 mu^3 + b2 mu^2 + b1 mu + b0`, equal to `a1(mu) a2(mu) - a0(mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiCubic {
    pub b3: f64,
    pub b2: f64,
    pub b1: f64,
    pub b0: f64,
}

impl PhiCubic {
    pub fn new(p: &ModelParams) -> Self {
        let s = p.coexistence_state();
        let (c, d) = (p.c(), p.d());
        let damping = p.delta() * s.v + p.epsilon();
        PhiCubic {
            b3: c * d * (c + d),
            b2: c * (c + 2.0 * d) * damping,
            b1: c * damping * damping
                + d * p.delta() * p.zeta() * s.v * s.w
                + c * p.alpha() * p.eta() * s.f * s.v,
            b0: gap_scale(p) * upsilon(p),
        }
    }

    pub fn eval(&self, mu: f64) -> f64 {
        ((self.b3 * mu + self.b2) * mu + self.b1) * mu + self.b0
    }

    pub fn derivative(&self, mu: f64) -> f64 {
        (3.0 * self.b3 * mu + 2.0 * self.b2) * mu + self.b1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSample {
    pub mu: f64,
    pub coefficients: MonicCubic,
    /// Routh-Hurwitz gap `a1 a2 - a0`.
    pub phi: f64,
    pub eigenvalues: RootSet,
    pub stable: bool,
}

impl DispersionSample {
    pub fn max_growth_rate(&self) -> f64 {
        self.eigenvalues.max_real_part()
    }
}

pub fn dispersion_sample(p: &ModelParams, mu: f64) -> Result<DispersionSample> {
    check_mu(mu)?;
    let coefficients = characteristic_coefficients(p, mu);
    let phi = coefficients.hurwitz_gap();
    let stable = phi > 0.0;
    Ok(DispersionSample {
        mu,
        coefficients,
        phi,
        eigenvalues: coefficients.roots(),
        stable,
    })
}

pub fn dispersion_curve(p: &ModelParams, mu_grid: &[f64]) -> Result<Vec<DispersionSample>> {
    mu_grid.iter().map(|&mu| dispersion_sample(p, mu)).collect()
}

/// Smallest `mu` beyond which every mode is stable, with `k0 = sqrt(mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub mu_threshold: f64,
    pub k0: f64,
}

/// Unique nonnegative root of `Phi` when `Phi(0) < 0`.
///
/// `Phi` is strictly increasing on `mu >= 0` because `b1, b2, b3 > 0`
/// whenever diffusion is present.
fn phi_root(phi: &PhiCubic) -> f64 {
    let mut hi = 1.0;
    while phi.eval(hi) <= 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if phi.eval(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut mu = 0.5 * (lo + hi);
    for _ in 0..3 {
        let slope = phi.derivative(mu);
        if slope <= 0.0 {
            break;
        }
        let next = mu - phi.eval(mu) / slope;
        if phi.eval(next).abs() < phi.eval(mu).abs() && next >= 0.0 {
            mu = next;
        } else {
            break;
        }
    }
    mu
}

pub fn find_k0(p: &ModelParams) -> Result<Threshold> {
    if !p.has_diffusion() {
        return Err(Error::DegenerateDiffusion);
    }
    let phi = PhiCubic::new(p);
    let mu_threshold = if phi.b0 >= 0.0 { 0.0 } else { phi_root(&phi) };
    Ok(Threshold {
        mu_threshold,
        k0: mu_threshold.sqrt(),
    })
}

/// Neutral mode at the threshold: `A(mu*)` has eigenvalues `±i sigma*` and
/// `-a2(mu*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveTrain {
    pub mu_star: f64,
    pub sigma_star: f64,
    /// Unit eigenvector `X* = (F0, V0, W0)` for `i sigma*`.
    pub eigvec: CVector3,
    /// `-a2(mu*)`.
    pub decay_eigenvalue: f64,
    /// Unit eigenvector for the decaying eigenvalue.
    pub decay_eigvec: CVector3,
    /// `(Re X*, Im X*)`; the periodic orbit lives in their span.
    pub span_basis: (Vector3<f64>, Vector3<f64>),
}

impl WaveTrain {
    /// Basis `{X*, conj X*, omega*}` as matrix columns.
    pub fn eigenbasis(&self) -> CMatrix3 {
        CMatrix3::from_columns(&[self.eigvec, self.eigvec.conjugate(), self.decay_eigvec])
    }

    pub fn eigenvalues(&self) -> [Complex64; 3] {
        [
            Complex64::new(0.0, self.sigma_star),
            Complex64::new(0.0, -self.sigma_star),
            Complex64::new(self.decay_eigenvalue, 0.0),
        ]
    }

    /// Coordinates `(theta1, theta2, theta3)` of `theta` in [`Self::eigenbasis`].
    pub fn decompose(&self, theta: &CVector3) -> Option<CVector3> {
        self.eigenbasis().lu().solve(theta)
    }

    /// Real profile `(F, V, W)(y) = Re(X* e^{iy})`.
    pub fn profile(&self, y: f64) -> Vector3<f64> {
        let (re, im) = &self.span_basis;
        re * y.cos() - im * y.sin()
    }
}

pub fn find_wavetrain(p: &ModelParams) -> Result<WaveTrain> {
    let ups = upsilon(p);
    if ups >= 0.0 {
        return Err(Error::NoWaveTrain { upsilon: ups });
    }
    if !p.has_diffusion() {
        return Err(Error::DegenerateDiffusion);
    }
    let phi = PhiCubic::new(p);
    if phi.b0 >= 0.0 {
        return Err(Error::NoWaveTrain { upsilon: ups });
    }
    let mu_star = phi_root(&phi);
    let coeffs = characteristic_coefficients(p, mu_star);
    let pair = imaginary_root_factorization(&coeffs);
    debug_assert!(pair.is_some(), "Phi(mu*) should vanish: {}", coeffs.hurwitz_gap());
    let sigma_star = pair.map_or_else(|| coeffs.a1.sqrt(), |pair| pair.sigma);

    let a = mode_matrix(p, mu_star)?;
    let eigvec = linalg::eigenvector(&a, Complex64::new(0.0, sigma_star));
    let decay_eigenvalue = -coeffs.a2;
    let decay_eigvec = linalg::eigenvector(&a, Complex64::new(decay_eigenvalue, 0.0));
    let span_basis = (eigvec.map(|z| z.re), eigvec.map(|z| z.im));
    Ok(WaveTrain {
        mu_star,
        sigma_star,
        eigvec,
        decay_eigenvalue,
        decay_eigvec,
        span_basis,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvolutionRoute {
    /// Exact evolution in the wave-train eigenbasis.
    Eigenbasis { condition: f64 },
    /// Dense matrix exponential (generic `mu`).
    Dense,
    /// Dense exponential used because the eigenbasis was ill-conditioned.
    DenseFallback { condition: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEvolution {
    pub theta: CVector3,
    pub route: EvolutionRoute,
}

/// `theta(t) = exp(A(mu) t) theta0` for the single-mode amplitude.
///
/// At a wave-train point the evolution is computed in the basis
/// `{X*, conj X*, omega*}`; otherwise a dense exponential is used.
pub fn mode_attraction(
    p: &ModelParams,
    mu: f64,
    theta0: &CVector3,
    t: f64,
) -> Result<ModeEvolution> {
    check_mu(mu)?;
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidArgument {
            name: "t",
            reason: format!("time must be finite and nonnegative, got {t}"),
        });
    }
    let a = mode_matrix(p, mu)?;
    let coeffs = characteristic_coefficients(p, mu);
    let dense = || (a * t).exp().map(|x| Complex64::new(x, 0.0)) * theta0;

    let Some(pair) = imaginary_root_factorization(&coeffs) else {
        return Ok(ModeEvolution {
            theta: dense(),
            route: EvolutionRoute::Dense,
        });
    };
    let x = linalg::eigenvector(&a, Complex64::new(0.0, pair.sigma));
    let omega = linalg::eigenvector(&a, Complex64::new(pair.real_root, 0.0));
    let basis = CMatrix3::from_columns(&[x, x.conjugate(), omega]);
    let condition = linalg::condition_number(&basis);
    let coords = match basis.lu().solve(theta0) {
        Some(c) if condition <= MAX_EIGENBASIS_CONDITION => c,
        _ => {
            return Ok(ModeEvolution {
                theta: dense(),
                route: EvolutionRoute::DenseFallback { condition },
            })
        }
    };
    let lambdas = [
        Complex64::new(0.0, pair.sigma),
        Complex64::new(0.0, -pair.sigma),
        Complex64::new(pair.real_root, 0.0),
    ];
    let mut theta = CVector3::zeros();
    for (i, lambda) in lambdas.iter().enumerate() {
        theta += basis.column(i) * (coords[i] * (lambda * t).exp());
    }
    Ok(ModeEvolution {
        theta,
        route: EvolutionRoute::Eigenbasis { condition },
    })
}

fn check_competition(p: &ModelParams, mu: f64, varsigma: f64) -> Result<()> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidArgument {
            name: "mu",
            reason: format!("squared wavenumber must be positive, got {mu}"),
        });
    }
    if !(varsigma > 0.0 && varsigma < p.epsilon()) {
        return Err(Error::VarsigmaOutOfRange {
            varsigma,
            epsilon: p.epsilon(),
        });
    }
    Ok(())
}

/// Competition coefficient `ell = varsigma / (mu v*)` implied by a shift `varsigma`.
pub fn implied_competition(p: &ModelParams, mu: f64, varsigma: f64) -> f64 {
    varsigma / (mu * p.coexistence_state().v)
}

/// Mode matrix with vegetation competition: `A(mu)` plus `ell mu v* = varsigma`
/// on the vegetation diagonal. The `ell` stored in `p` is ignored.
pub fn competition_matrix(p: &ModelParams, mu: f64, varsigma: f64) -> Result<Matrix3<f64>> {
    check_competition(p, mu, varsigma)?;
    let mut l = mode_matrix(p, mu)?;
    l[(1, 1)] += varsigma;
    Ok(l)
}

/// Closed-form characteristic coefficients of the competition matrix.
pub fn competition_coefficients(p: &ModelParams, mu: f64, varsigma: f64) -> MonicCubic {
    let s = p.coexistence_state();
    let a = characteristic_coefficients(p, mu);
    let damping = p.delta() * s.v + p.epsilon();
    MonicCubic::new(
        a.a2 - varsigma,
        a.a1 - varsigma * (damping + (p.c() + p.d()) * mu),
        a.a0 - p.c() * mu * varsigma * (damping + p.d() * mu),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompetitionSpectrum {
    pub varsigma: f64,
    pub gamma: f64,
    pub mu: f64,
    /// Implied `ell = varsigma / (mu v*)`.
    pub ell: f64,
    pub q_coeffs: MonicCubic,
    pub eigenvalues: RootSet,
    pub unstable: bool,
    /// Real root of `Q` nearest to `varsigma`, the continuation of the
    /// positive root `varsigma` of the unperturbed polynomial.
    pub continuation_root: f64,
}

pub fn competition_instability(
    p: &ModelParams,
    mu: f64,
    varsigma: f64,
) -> Result<CompetitionSpectrum> {
    check_competition(p, mu, varsigma)?;
    let q_coeffs = competition_coefficients(p, mu, varsigma);
    let eigenvalues = q_coeffs.roots();
    let unstable = eigenvalues.max_real_part() > q_coeffs.marginal_tolerance();
    let continuation_root = eigenvalues
        .real_roots()
        .min_by(|a, b| (a - varsigma).abs().total_cmp(&(b - varsigma).abs()))
        .expect("a real cubic has a real root");
    Ok(CompetitionSpectrum {
        varsigma,
        gamma: p.gamma(),
        mu,
        ell: implied_competition(p, mu, varsigma),
        q_coeffs,
        eigenvalues,
        unstable,
        continuation_root,
    })
}
