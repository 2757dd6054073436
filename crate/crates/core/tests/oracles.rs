//! Independent reference computations checked against the library.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ttc_core::floquet::{bch_short_time_residual, build_floquet, build_ut, FloquetFactory};
use ttc_core::matrix::{self, commutator, max_abs_diff, scale, transpose_deviation, unitarity_deviation};
use ttc_core::meanfield::{evolve_h1, phase_portrait, ClassicalState, PortraitInitial, DEFAULT_DT};
use ttc_core::model::{build_h1, build_h2};
use ttc_core::spectral::{spacing_ratios, SpectrumTopology};
use ttc_core::spin_algebra::{build_sx, build_sy, build_sz, eig_hermitian, expm_hermitian, wrap_phase};
use ttc_core::survival::{
    basis_averaged_survival, basis_ipr, ipr_of_state, make_random_basis, ttc_amplitude, AveragingWindow,
    QuantumState,
};
use ttc_core::{c64, ModelParams, SpinBasisSpec};

/// Number of eigenvalues of the symmetric tridiagonal matrix `(diag, off)` below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = 1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalues by bisection on the Sturm sequence.
fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let bound = diag.iter().map(|d| d.abs()).sum::<f64>() + 2.0 * off.iter().map(|b| b.abs()).sum::<f64>() + 1.0;
    (0..diag.len())
        .map(|k| {
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(diag, off, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

#[test]
fn h1_spectrum_matches_sturm_bisection() {
    let p = ModelParams::paper_default(4);
    let j = 2.0;
    let m: Vec<f64> = (0..5).map(|i| i as f64 - j).collect();
    let diag: Vec<f64> = m.iter().map(|&m| -(p.kz * m * m / 5.0 + p.alpha_z * m)).collect();
    let off: Vec<f64> = m[..4].iter().map(|&m| p.alpha_x / 2.0 * (j * (j + 1.0) - m * (m + 1.0)).sqrt()).collect();
    let want = tridiagonal_eigenvalues(&diag, &off);
    let got = eig_hermitian(&build_h1(&p).unwrap()).unwrap().eigenvalues;
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-10, "{got:?} vs {want:?}");
    }
}

#[test]
fn amplitude_matches_product_of_exponentials() {
    let p = ModelParams::paper_default(6);
    let t = 0.9;
    let f = &expm_hermitian(&build_h1(&p).unwrap(), c64::new(0.0, -t)).unwrap()
        * &expm_hermitian(&build_h2(&p).unwrap(), c64::new(0.0, -t)).unwrap();
    let psi: Vec<c64> = (0..7).map(|i| c64::new(1.0, 0.3 * i as f64)).collect();
    let nrm = matrix::norm(&psi);
    let psi: Vec<c64> = psi.iter().map(|a| a / nrm).collect();
    let mut v = psi.clone();
    for _ in 0..5 {
        v = matrix::matvec(&f, &v);
    }
    let want = matrix::inner(&psi, &v);
    let got = ttc_amplitude(&p, &QuantumState::new(psi).unwrap(), t, 5).unwrap();
    assert!((got - want).norm() < 1e-10);
}

#[test]
fn poisson_phases_give_poisson_ratio() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut phases: Vec<f64> = (0..100_000).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
    phases.sort_by(f64::total_cmp);
    let r = spacing_ratios(&phases, SpectrumTopology::Circular).unwrap().mean_r;
    assert!((r - 0.386).abs() < 0.01, "{r}");
}

#[test]
fn haar_states_have_unitary_ensemble_ipr() {
    let d = 61;
    let reference = matrix::identity(d);
    let samples = 1000;
    let mean = (0..samples)
        .map(|seed| {
            let b = make_random_basis(d, seed).unwrap();
            ipr_of_state(&b.state(0), &reference).unwrap()
        })
        .sum::<f64>()
        / samples as f64;
    let want = 2.0 / (d as f64 + 1.0);
    assert!((mean / want - 1.0).abs() < 0.05, "{mean} vs {want}");
}

#[test]
fn haar_entry_moments() {
    let d = 4;
    let samples = 4000;
    let (mut m2, mut m4) = (0.0, 0.0);
    for seed in 0..samples {
        let a = make_random_basis(d, 1000 + seed).unwrap().vectors()[(0, 0)].norm_sqr();
        m2 += a;
        m4 += a * a;
    }
    m2 /= samples as f64;
    m4 /= samples as f64;
    let df = d as f64;
    assert!((m2 * df - 1.0).abs() < 0.05, "{m2}");
    assert!((m4 * df * (df + 1.0) / 2.0 - 1.0).abs() < 0.08, "{m4}");
}

#[test]
fn rk4_converges_at_fourth_order() {
    let p = ModelParams::paper_default(10);
    let s0 = ClassicalState::new(0.35, 0.8);
    let run = |dt: f64| evolve_h1(&p, s0, 4.0, dt).unwrap();
    let (a, b, c) = (run(0.2), run(0.1), run(0.05));
    let ratio = (a.z - b.z).abs() / (b.z - c.z).abs();
    assert!((12.0..20.0).contains(&ratio), "{ratio}");
}

#[test]
fn conjugating_by_sigma_x_flips_sigma_z() {
    let sx = ttc_core::Mat::from_fn(2, 2, |i, j| if i != j { matrix::ONE } else { matrix::ZERO });
    let sz = ttc_core::Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => matrix::ONE,
        (1, 1) => -matrix::ONE,
        _ => matrix::ZERO,
    });
    for a in [0.3, 1.7, -2.2] {
        let plus = expm_hermitian(&sz, c64::new(0.0, a)).unwrap();
        let minus = expm_hermitian(&sz, c64::new(0.0, -a)).unwrap();
        assert!(max_abs_diff(&(&(&sx * &plus) * &sx), &minus) < 1e-14);
    }
}

#[test]
fn large_order_survival_approaches_diagonal_approximation() {
    let p = ModelParams::paper_default(30);
    let basis = make_random_basis(p.dim(), 3).unwrap();
    let window = AveragingWindow::default_for(&p);
    let grid = window.grid(400);
    let survival = basis_averaged_survival(&p, &basis, &grid, 50, window).unwrap().long_time_avg;
    let factory = FloquetFactory::new(&p).unwrap();
    let ipr = grid
        .iter()
        .map(|&t| basis_ipr(&basis, &factory.decompose(t).unwrap().eigen.eigenvectors).unwrap())
        .sum::<f64>()
        / grid.len() as f64;
    assert!((survival / ipr - 1.0).abs() < 0.05, "{survival} vs {ipr}");
}

#[test]
fn bch_residual_scales_quadratically() {
    let p = ModelParams::paper_default(8);
    let ratio = bch_short_time_residual(&p, 0.02).unwrap() / bch_short_time_residual(&p, 0.01).unwrap();
    assert!((3.5..=4.5).contains(&ratio), "{ratio}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spacing_ratios_are_rotation_invariant(seed in 0u64..1000, shift in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut phases: Vec<f64> = (0..40).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
        phases.sort_by(f64::total_cmp);
        let mut rotated: Vec<f64> = phases.iter().map(|&x| wrap_phase(x + shift)).collect();
        rotated.sort_by(f64::total_cmp);
        let a = spacing_ratios(&phases, SpectrumTopology::Circular).unwrap().mean_r;
        let b = spacing_ratios(&rotated, SpectrumTopology::Circular).unwrap().mean_r;
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn picket_fence_has_unit_ratios(d in 3usize..80, offset in -1.0f64..1.0) {
        let step = 2.0 * std::f64::consts::PI / d as f64;
        let mut phases: Vec<f64> = (0..d).map(|k| wrap_phase(offset + k as f64 * step)).collect();
        phases.sort_by(f64::total_cmp);
        let r = spacing_ratios(&phases, SpectrumTopology::Circular).unwrap();
        prop_assert_eq!(r.n_spacings, d);
        prop_assert!((r.mean_r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn floquet_operators_are_unitary(n in 1usize..24, kz in 0.0f64..6.0, alpha_z in -0.5f64..0.5, t in 0.0f64..6.0) {
        let p = ModelParams::paper_default(n).with_kz(kz).with_alpha_z(alpha_z);
        prop_assert!(unitarity_deviation(&build_floquet(&p, t).unwrap().operator) < 1e-10);
        let ut = build_ut(&p, t, 3).unwrap();
        prop_assert!(unitarity_deviation(&ut) < 1e-10);
        prop_assert!(transpose_deviation(&ut) < 1e-9);
    }

    #[test]
    fn spin_matrices_close_su2(n in 1usize..40) {
        let spec = SpinBasisSpec::new(n).unwrap();
        let (sx, sy, sz) = (build_sx(&spec), build_sy(&spec), build_sz(&spec));
        let i = c64::new(0.0, 1.0);
        prop_assert!(max_abs_diff(&commutator(&sx, &sy), &scale(&sz, i)) < 1e-11);
        prop_assert!(max_abs_diff(&commutator(&sy, &sz), &scale(&sx, i)) < 1e-11);
        prop_assert!(max_abs_diff(&commutator(&sz, &sx), &scale(&sy, i)) < 1e-11);
        let casimir = matrix::add(&matrix::add(&(&sx * &sx), &(&sy * &sy)), &(&sz * &sz));
        let j = n as f64 / 2.0;
        prop_assert!(max_abs_diff(&casimir, &scale(&matrix::identity(n + 1), c64::new(j * (j + 1.0), 0.0))) < 1e-11);
    }
}

#[test]
fn long_kicks_spread_orbits_over_the_sphere() {
    let p = ModelParams::paper_default(100);
    let starts = [PortraitInitial::SxPolarized, PortraitInitial::Random { seed: 7 }, PortraitInitial::Point { z: 0.9, phi: 0.0 }];
    for orbit in phase_portrait(&p, 5.0, 200, &starts, DEFAULT_DT).unwrap() {
        let (lo, hi) = orbit.rows.iter().fold((1.0f64, -1.0f64), |(lo, hi), r| (lo.min(r.z), hi.max(r.z)));
        assert!(hi - lo > 1.6, "{}: [{lo}, {hi}]", orbit.initial.label());
    }
}

#[test]
fn short_kicks_keep_the_sx_start_local() {
    let p = ModelParams::paper_default(100);
    let orbit = &phase_portrait(&p, 1.0, 200, &[PortraitInitial::SxPolarized], DEFAULT_DT).unwrap()[0];
    assert!(orbit.rows.iter().all(|r| r.z.abs() < 0.05));
}
