use ecofire_core::cubic::{hurwitz_negative, solve_cubic, HurwitzVerdict, MonicCubic};
use ecofire_core::linalg::{self, CVector3};
use ecofire_core::model::ModelParams;
use ecofire_core::stability::{
    characteristic_coefficients, competition_instability, find_wavetrain, mode_attraction,
    mode_matrix, upsilon, EvolutionRoute,
};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Random diffusive parameter sets with `Upsilon < 0`.
fn unstable_draws(rng: &mut StdRng, count: usize) -> Vec<ModelParams> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut r = || log_uniform(rng, 0.1, 10.0);
        let p = ModelParams::new(r(), r(), r(), r(), r(), r(), r())
            .unwrap()
            .with_diffusion(r(), r())
            .unwrap();
        if upsilon(&p) < -1e-3 {
            out.push(p);
        }
    }
    out
}

fn random_theta(rng: &mut StdRng) -> CVector3 {
    CVector3::from_fn(|_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

#[test]
fn wave_train_spectrum_for_random_unstable_draws() {
    let mut rng = StdRng::seed_from_u64(7);
    for p in unstable_draws(&mut rng, 50) {
        let wt = find_wavetrain(&p).unwrap();
        let a = mode_matrix(&p, wt.mu_star).unwrap();
        let ac = linalg::complexify(&a);
        let coeffs = characteristic_coefficients(&p, wt.mu_star);
        assert!((wt.sigma_star - coeffs.a1.sqrt()).abs() <= 1e-8 * (1.0 + wt.sigma_star));
        for (lambda, x) in [
            (Complex64::new(0.0, wt.sigma_star), wt.eigvec),
            (Complex64::new(wt.decay_eigenvalue, 0.0), wt.decay_eigvec),
        ] {
            let residual = (ac * x - x * lambda).norm();
            assert!(residual <= 1e-8 * (1.0 + a.norm()), "{p:?}: residual {residual:e}");
        }
        let roots = solve_cubic(&coeffs);
        let pair_re = roots.iter().filter(|r| r.im != 0.0).map(|r| r.re.abs()).fold(0.0, f64::max);
        assert!(pair_re <= 1e-8 * (1.0 + coeffs.a2), "{p:?}: pair real part {pair_re:e}");
    }
}

#[test]
fn modes_at_threshold_approach_the_wave_train_plane() {
    let mut rng = StdRng::seed_from_u64(11);
    for p in unstable_draws(&mut rng, 20) {
        let wt = find_wavetrain(&p).unwrap();
        let a2 = -wt.decay_eigenvalue;
        let theta0 = random_theta(&mut rng);
        let x = wt.eigvec;
        let xc = x.conjugate();
        let d0 = linalg::distance_to_span(&theta0, &x, &xc);
        for t in [1.0, 5.0, 10.0] {
            let evo = mode_attraction(&p, wt.mu_star, &theta0, t).unwrap();
            assert!(matches!(evo.route, EvolutionRoute::Eigenbasis { .. }));
            let dist = linalg::distance_to_span(&evo.theta, &x, &xc);
            // The omega* component decays at rate a2; its projection off the
            // plane is at most its initial size.
            let coords = wt.decompose(&theta0).unwrap();
            let bound = (-a2 * t).exp() * coords[2].norm() * wt.decay_eigvec.norm();
            assert!(dist <= bound * (1.0 + 1e-6) + 1e-12, "t = {t}: {dist:e} > {bound:e}");
            assert!(dist <= d0.max(bound) * (1.0 + 1e-6) + 1e-12);
        }
    }
}

#[test]
fn competition_spectrum_converges_linearly() {
    let varsigma = 0.5;
    let errors: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&h| {
            let p = ModelParams::new(1.0, 1.0, h, 1.0, 1.0, 1.0, 1.0)
                .unwrap()
                .with_diffusion(1.0, 1.0)
                .unwrap();
            let spec = competition_instability(&p, h, varsigma).unwrap();
            assert!(spec.unstable, "h = {h}");
            let roots = spec.eigenvalues;
            let limits = [-1.0, 0.0, 0.5];
            roots
                .iter()
                .zip(limits)
                .map(|(r, l)| (r - Complex64::new(l, 0.0)).norm())
                .fold(0.0, f64::max)
        })
        .collect();
    for w in errors.windows(2) {
        let ratio = w[1] / w[0];
        assert!((0.05..=20.0).contains(&ratio), "{errors:?}");
        assert!(w[1] < w[0], "{errors:?}");
    }
}

#[test]
fn criterion_and_roots_agree_on_random_cubics() {
    let mut rng = StdRng::seed_from_u64(3);
    let mut checked = 0;
    for _ in 0..10_000 {
        let p = MonicCubic::new(
            log_uniform(&mut rng, 1e-2, 1e2),
            log_uniform(&mut rng, 1e-2, 1e2),
            log_uniform(&mut rng, 1e-2, 1e2),
        );
        let verdict = hurwitz_negative(&p).unwrap();
        let max_re = solve_cubic(&p).max_real_part();
        match verdict {
            HurwitzVerdict::AllNegativeRealPart => assert!(max_re < 0.0, "{p:?}"),
            HurwitzVerdict::HasNonnegativeRealPart => assert!(max_re >= 0.0, "{p:?}"),
            HurwitzVerdict::Marginal => continue,
        }
        checked += 1;
    }
    assert!(checked > 9_900);
}
