use std::f64::consts::PI;

use ecofire_core::linalg;
use ecofire_core::model::{ModelParams, State};
use ecofire_core::simulation::{
    integrate_ode, kernel_moments, simulate_pde, FieldState, IntegratorConfig, KernelOptions,
    PdeOptions,
};
use ecofire_core::stability::{dispersion_sample, find_k0, mode_matrix};
use num_complex::Complex64;

fn unstable_diffusive() -> ModelParams {
    ModelParams::new(2.0, 1.0, 1.0, 1.0, 0.1, 1.0, 1.0)
        .unwrap()
        .with_diffusion(1.0, 1.0)
        .unwrap()
}

#[test]
fn rk4_converges_at_fourth_order() {
    let p = ModelParams::unit();
    let s0 = p.coexistence_state() + State::new(0.1, 0.1, 0.1);
    let reference = integrate_ode(s0, &p, &IntegratorConfig::rk45(1e-13, 1e-15, 10.0).unwrap())
        .unwrap()
        .last()
        .unwrap()
        .1;
    let error = |dt| {
        let end = integrate_ode(s0, &p, &IntegratorConfig::rk4(dt, 10.0).unwrap())
            .unwrap()
            .last()
            .unwrap()
            .1;
        (end - reference).norm()
    };
    let ratio = error(0.2) / error(0.1);
    assert!((ratio - 16.0).abs() < 2.0, "error ratio {ratio}");
}

/// Single-mode field `E1 + rho sin(k x) X` on a domain holding one wavelength.
fn mode_field(p: &ModelParams, mu: f64, n: usize, rho: f64) -> FieldState {
    let length = 2.0 * PI / mu.sqrt();
    let e1 = p.coexistence_state();
    FieldState::single_mode(n, length, e1, 1, rho, State::new(1.0, 1.0, 1.0), State::default()).unwrap()
}

fn energy_history(p: &ModelParams, mu: f64, times: &[f64]) -> Vec<f64> {
    let field = mode_field(p, mu, 64, 1e-4);
    let cfg = IntegratorConfig::rk4(0.01, *times.last().unwrap()).unwrap();
    let opts = PdeOptions {
        snapshot_times: times.to_vec(),
        clamp_dt: true,
    };
    let run = simulate_pde(&field, p, &cfg, &opts).unwrap();
    let e1 = p.coexistence_state();
    run.snapshots.iter().map(|s| s.deviation_norm(e1)).collect()
}

#[test]
fn high_frequency_perturbation_decays() {
    let p = unstable_diffusive();
    let threshold = find_k0(&p).unwrap().mu_threshold;
    let mu = 0.5;
    assert!(mu > threshold);
    let times = [0.0, 4.0, 8.0, 12.0, 16.0, 20.0];
    let energy = energy_history(&p, mu, &times);
    assert!(energy.last().unwrap() < &energy[0]);
    // Envelope decays monotonically once the transient has passed.
    assert!(energy[1..].windows(2).all(|w| w[1] < w[0]), "{energy:?}");
}

#[test]
fn low_frequency_perturbation_grows() {
    let p = unstable_diffusive();
    let threshold = find_k0(&p).unwrap().mu_threshold;
    let mu = 0.05;
    assert!(mu < threshold);
    let energy = energy_history(&p, mu, &[0.0, 20.0]);
    assert!(energy[1] > energy[0], "{energy:?}");
}

/// Growth rate of the mode-1 amplitude seeded with the leading eigenvector
/// of `A(k^2)`, measured between `t1` and `t2`.
fn measured_rate(p: &ModelParams, mu: f64, n: usize, dt: f64, t1: f64, t2: f64) -> f64 {
    let a = mode_matrix(p, mu).unwrap();
    let lead = dispersion_sample(p, mu).unwrap().eigenvalues.leading();
    let x = linalg::eigenvector(&a, lead);
    let e1 = p.coexistence_state();
    let cos_amp = State::new(x[0].re, x[1].re, x[2].re);
    let sin_amp = State::new(-x[0].im, -x[1].im, -x[2].im);
    let length = 2.0 * PI / mu.sqrt();
    let field = FieldState::single_mode(n, length, e1, 1, 1e-6, sin_amp, cos_amp).unwrap();
    let cfg = IntegratorConfig::rk4(dt, t2).unwrap();
    let opts = PdeOptions {
        snapshot_times: vec![t1, t2],
        clamp_dt: true,
    };
    let run = simulate_pde(&field, p, &cfg, &opts).unwrap();
    let amp = |s: &FieldState| {
        let (sp, cp) = s.mode_coefficients(e1, 1);
        (sp.norm().powi(2) + cp.norm().powi(2)).sqrt()
    };
    (amp(&run.snapshots[1]) / amp(&run.snapshots[0])).ln() / (t2 - t1)
}

#[test]
fn mode_rate_converges_at_second_order_in_space() {
    let p = unstable_diffusive();
    let mu = 0.5;
    let exact = dispersion_sample(&p, mu).unwrap().max_growth_rate();
    let err = |n: usize| (measured_rate(&p, mu, n, 0.01, 2.0, 6.0) - exact).abs();
    let (e8, e16, e32) = (err(8), err(16), err(32));
    let (r1, r2) = (e8 / e16, e16 / e32);
    assert!((3.0..5.0).contains(&r1) && (3.0..5.0).contains(&r2), "{e8} {e16} {e32}");
}

#[test]
fn positivity_is_preserved_over_short_horizons() {
    let p = ModelParams::unit().with_diffusion(0.5, 0.5).unwrap();
    let n = 32;
    let mut field = FieldState::uniform(n, 10.0, State::new(0.5, 0.5, 0.5)).unwrap();
    for i in 0..n {
        let x = field.x(i);
        field.f[i] = 0.5 + 0.4 * (2.0 * PI * x / 10.0).sin();
        field.v[i] = 0.6 + 0.3 * (4.0 * PI * x / 10.0).cos();
        field.w[i] = 0.4 + 0.2 * (6.0 * PI * x / 10.0).sin();
    }
    let cfg = IntegratorConfig::rk45(1e-8, 1e-10, 2.0).unwrap();
    let opts = PdeOptions {
        snapshot_times: vec![0.5, 1.0, 1.5, 2.0],
        clamp_dt: true,
    };
    let run = simulate_pde(&field, &p, &cfg, &opts).unwrap();
    for s in &run.snapshots {
        assert!(s.min_component() >= 0.0, "t = {}: {}", s.time, s.min_component());
    }
}

/// Composite Simpson rule on `[0, b]`, used as an independent quadrature.
fn simpson(f: impl Fn(f64) -> f64, b: f64, intervals: usize) -> f64 {
    let h = b / intervals as f64;
    let mut sum = f(0.0) + f(b);
    for i in 1..intervals {
        sum += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

#[test]
fn gaussian_convolution_matches_expansion_to_sixth_order() {
    let k0 = |r: f64| (-r * r).exp();
    let moments = kernel_moments(k0, 1, 2, &KernelOptions::default()).unwrap();
    let defect = |k: f64| {
        // ∫ K(y) cos(k (x + y)) dy = cos(k x) ∫ K(y) cos(k y) dy for even K.
        let direct = 2.0 * simpson(|y| k0(y) * (k * y).cos(), 12.0, 20_000);
        (direct - moments.symbol(k * k)).abs()
    };
    let (d1, d2) = (defect(0.1), defect(0.05));
    let ratio = d1 / d2;
    assert!((ratio - 64.0).abs() < 64.0 * 0.1, "defects {d1:e} {d2:e}, ratio {ratio}");
    // Leading remainder term ell_3 k^6 with ell_3 = sqrt(pi) / 384.
    assert!((d1 - PI.sqrt() / 384.0 * 1e-6).abs() < 1e-2 * d1);
}

#[test]
fn neutral_mode_is_a_pure_rotation() {
    let p = unstable_diffusive();
    let wt = ecofire_core::stability::find_wavetrain(&p).unwrap();
    // The real profile rotates within span{Re X*, Im X*}.
    let (re, im) = &wt.span_basis;
    let normal = re.cross(im);
    for i in 0..16 {
        let y = 2.0 * PI * i as f64 / 16.0;
        assert!(wt.profile(y).dot(&normal).abs() < 1e-14);
    }
    let x = wt.eigvec;
    let a = linalg::complexify(&mode_matrix(&p, wt.mu_star).unwrap());
    let lhs = a * x;
    let rhs = x * Complex64::new(0.0, wt.sigma_star);
    assert!((lhs - rhs).norm() < 1e-8);
}
