mod common;

use common::{dense_walk_operator, eigen_entropy, interleave, matvec, max_diff, random_density, random_field};
use proptest::prelude::*;
use qwalk_core::disorder::{
    angles_from_chain, empirical_autocorrelation, ingredient_fractions, sample_chain,
};
use qwalk_core::lattice::{evolve, NoopObserver, SpinorField};
use qwalk_core::observables::{
    entanglement_entropy, fit_alpha, interference_profile, jsd, predicted_next_distribution,
    probability_distribution, reduced_density, ReducedCoinDensity,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_4, PI};

fn field_strategy() -> impl Strategy<Value = (SpinorField, u64)> {
    (any::<u64>(), 2usize..30).prop_map(|(seed, half)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let radius = rng.random_range(0..half);
        (random_field(&mut rng, half, radius), seed)
    })
}

proptest! {
    #[test]
    fn coin_and_shift_are_unitary((field, seed) in field_strategy(), theta in -10.0f64..10.0) {
        let mut f = field;
        f.apply_coin(theta);
        prop_assert!((f.norm() - 1.0).abs() < 1e-12);
        if f.apply_shift().is_ok() {
            prop_assert!((f.norm() - 1.0).abs() < 1e-12);
        }
        let mut g = SpinorField::init_state(40).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..40 {
            g.step(rng.random_range(0.0..PI)).unwrap();
            prop_assert!((g.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coin_is_an_involution((field, _seed) in field_strategy(), theta in -10.0f64..10.0) {
        let mut f = field.clone();
        f.apply_coin(theta);
        f.apply_coin(theta);
        prop_assert!(max_diff(f.up(), field.up()) < 1e-12);
        prop_assert!(max_diff(f.down(), field.down()) < 1e-12);
    }

    #[test]
    fn shift_is_exactly_invertible((field, _seed) in field_strategy()) {
        let mut f = field.clone();
        if f.apply_shift().is_ok() {
            f.apply_inverse_shift().unwrap();
            prop_assert_eq!(f, field);
        }
    }

    #[test]
    fn light_cone_and_parity(seed in any::<u64>(), steps in 1usize..60) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = SpinorField::init_state(60).unwrap();
        for t in 1..=steps {
            f.step(rng.random_range(0.0..PI)).unwrap();
            let p = probability_distribution(&f);
            for (i, &pi) in p.iter().enumerate() {
                let x = f.position(i);
                if x.unsigned_abs() as usize > t || (x + t as i64) % 2 != 0 {
                    prop_assert_eq!(pi, 0.0);
                }
            }
        }
    }

    #[test]
    fn density_invariants((field, _seed) in field_strategy()) {
        let rho = reduced_density(&field);
        let direct_g_d: f64 = field.down().iter().map(|d| d.norm_sqr()).sum();
        prop_assert!((rho.g_d - direct_g_d).abs() < 1e-12);
        prop_assert!(rho.g_ud.norm_sqr() <= rho.g_u * rho.g_d + 1e-12);
        prop_assert!(ReducedCoinDensity::new(rho.g_u, rho.g_d, rho.g_ud).is_ok());
        let s = entanglement_entropy(&rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&s));
    }

    #[test]
    fn jsd_is_bounded_and_symmetric(a in prop::collection::vec(0.0f64..1.0, 9), b in prop::collection::vec(0.0f64..1.0, 9)) {
        let norm = |v: Vec<f64>| {
            let s: f64 = v.iter().sum();
            if s == 0.0 { let mut e = vec![0.0; v.len()]; e[0] = 1.0; e } else { v.iter().map(|x| x / s).collect::<Vec<_>>() }
        };
        let (p, q) = (norm(a), norm(b));
        let pq = jsd(&p, &q).unwrap();
        let qp = jsd(&q, &p).unwrap();
        prop_assert!((0.0..=1.0).contains(&pq));
        prop_assert!((pq - qp).abs() < 1e-12);
    }

    #[test]
    fn fit_alpha_recovers_power_laws(scale in 0.01f64..100.0, exponent in 0.2f64..3.0, n in 20usize..400) {
        let pts: Vec<(f64, f64)> = (1..=n).map(|t| (t as f64, scale * (t as f64).powf(exponent))).collect();
        let a = fit_alpha(&pts, 0.1).unwrap();
        prop_assert!((a - exponent).abs() < 1e-10);
    }

    #[test]
    fn chains_are_reproducible(w in 0.0f64..=1.0, len in 1usize..500, seed in any::<u64>()) {
        let a = sample_chain(w, len, seed).unwrap();
        prop_assert_eq!(&a, &sample_chain(w, len, seed).unwrap());
        prop_assert!(a.iter().all(|&z| z == -1 || z == 1));
    }

    #[test]
    fn angles_take_two_values(w in 0.0f64..=1.0, r in 0.0f64..=1.0, seed in any::<u64>()) {
        let z = sample_chain(w, 200, seed).unwrap();
        let seq = angles_from_chain(&z, FRAC_PI_4, r).unwrap();
        let (a, b) = ((1.0 + r) * FRAC_PI_4, (1.0 - r) * FRAC_PI_4);
        for (&s, &th) in seq.z.iter().zip(&seq.theta) {
            prop_assert_eq!(th, if s == -1 { a } else { b });
        }
    }
}

/// Streamed evolution against repeated multiplication by the explicit walk
/// operator, for up to ten random-angle steps on lattices of at most 21 sites.
#[test]
fn streamed_evolution_matches_dense_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..60 {
        let half = rng.random_range(1..=10usize);
        let steps = rng.random_range(1..=half);
        let start = if trial % 2 == 0 {
            // random coin state localised at the origin
            random_field(&mut rng, half, 0)
        } else {
            random_field(&mut rng, half, half - steps)
        };
        let angles: Vec<f64> = (0..steps).map(|_| rng.random_range(-PI..PI)).collect();

        let mut streamed = start.clone();
        evolve(&mut streamed, &angles, &mut NoopObserver).unwrap();

        let mut dense = interleave(&start);
        for &theta in &angles {
            dense = matvec(&dense_walk_operator(start.len(), theta), &dense);
        }
        let diff = max_diff(&interleave(&streamed), &dense);
        assert!(diff < 1e-12, "trial {trial}: max deviation {diff:e}");
    }
}

/// Entropy from the closed-form eigenvalues against `−Tr ρ log₂ ρ` from a
/// numerical Hermitian eigendecomposition.
#[test]
fn closed_form_entropy_matches_eigendecomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let worst = (0..10_000)
        .map(|k| {
            let rho = random_density(&mut rng, k);
            (entanglement_entropy(&rho).unwrap() - eigen_entropy(&rho)).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst < 1e-12, "worst deviation {worst:e}");
}

/// One-step population balance: the next distribution rebuilt from spin
/// populations and the local interference equals the evolved distribution.
#[test]
fn master_equation_reconstructs_next_distribution() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut f = SpinorField::init_state(200).unwrap();
    for _ in 0..200 {
        let theta = rng.random_range(0.0..PI / 2.0);
        let predicted = predicted_next_distribution(&f, theta);
        f.step(theta).unwrap();
        let actual = probability_distribution(&f);
        for (a, b) in predicted.iter().zip(&actual) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn interference_vanishes_without_coin_mixing() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = random_field(&mut rng, 8, 4);
    let (j, i) = interference_profile(&f, 0.0);
    assert!(j.iter().all(|&v| v == 0.0));
    assert_eq!(i, 0.0);
}

#[test]
fn long_chains_are_unbiased() {
    let n = 100_000;
    let tol = 3.0 * 0.5 / (n as f64).sqrt();
    for (k, w) in [0.1, 0.3, 0.5, 0.7, 0.9].into_iter().enumerate() {
        let z = sample_chain(w, n, 1000 + k as u64).unwrap();
        let (f_a, f_b) = ingredient_fractions(&z).unwrap();
        assert!((f_a - 0.5).abs() <= tol, "w={w}: f_a={f_a}");
        assert!((f_a + f_b - 1.0).abs() < 1e-15);
    }
}

#[test]
fn autocorrelation_tracks_persistence() {
    let n = 5000;
    let z = sample_chain(0.9, n, 31).unwrap();
    let c = empirical_autocorrelation(&z).unwrap();
    assert!((c - 0.8).abs() <= 3.0 / (n as f64).sqrt(), "C = {c}");
}
