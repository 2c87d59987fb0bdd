//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p qwalk-core --test acceptance -- --nocapture` to see them.

mod common;

use std::f64::consts::PI;

use common::{dense_walk_operator, eigen_entropy, interleave, matvec, max_diff, random_density, random_field};
use qwalk_core::disorder::{empirical_autocorrelation, sample_chain, DisorderParams};
use qwalk_core::ensemble::{
    run_ensemble, run_ensemble_with_workers, run_single, EnsembleConfig, EnsembleResult,
    Observable,
};
use qwalk_core::io::{write_ensemble_csv, write_json};
use qwalk_core::lattice::{evolve, NoopObserver, SpinorField};
use qwalk_core::observables::{
    entanglement_entropy, predicted_next_distribution, probability_distribution,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_201;

fn report(id: u32, name: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] AC{id} {name}: {detail}");
    assert!(pass, "acceptance criterion {id} ({name}) failed: {detail}");
}

fn ensemble(r: f64, c: f64, t_max: usize, samples: usize, observables: &[Observable]) -> EnsembleResult {
    let disorder = DisorderParams::new(r, c, t_max).unwrap();
    let config = EnsembleConfig::new(t_max, samples, SEED, disorder)
        .with_observables(observables.iter().copied())
        .with_record_every(t_max);
    run_ensemble(&config).unwrap()
}

fn single_alpha(r: f64, c: f64, t_max: usize) -> f64 {
    let disorder = DisorderParams::new(r, c, t_max).unwrap();
    let config =
        EnsembleConfig::new(t_max, 1, SEED, disorder).with_observables([Observable::M2]);
    let run = run_single(&config, 0).unwrap();
    qwalk_core::observables::fit_alpha(&run.m2_points().unwrap(), 0.1).unwrap()
}

#[test]
fn ac01_unitarity_over_long_disordered_walk() {
    let t_max = 10_000;
    let mut worst: f64 = 0.0;
    for (k, (r, c)) in [(0.5, 0.0), (0.9, -0.8), (0.3, 0.8)].into_iter().enumerate() {
        let angles = DisorderParams::new(r, c, t_max).unwrap().generate(SEED + k as u64).unwrap();
        let mut field = SpinorField::init_state(t_max).unwrap();
        let mut obs = |_t: usize, f: &SpinorField, _theta: f64| {
            let total: f64 = probability_distribution(f).iter().sum();
            worst = worst.max((total - 1.0).abs());
            Ok(())
        };
        evolve(&mut field, &angles.theta, &mut obs).unwrap();
    }
    report(1, "unitarity", worst < 1e-12, format!("max |ΣP - 1| over 3×10⁴ steps = {worst:.3e} (< 1e-12)"));
}

#[test]
fn ac02_clean_walk_entropy() {
    let disorder = DisorderParams::new(0.0, 1.0, 500).unwrap();
    let config = EnsembleConfig::new(500, 1, SEED, disorder).with_observables([Observable::Entropy]);
    let run = run_single(&config, 0).unwrap();
    let s = run.get(Observable::Entropy).unwrap();
    let window = &s[400..=500];
    let avg = window.iter().sum::<f64>() / window.len() as f64;
    report(
        2,
        "clean-walk entropy",
        (avg - 0.872).abs() <= 0.01,
        format!("mean S_e over t∈[400,500] = {avg:.5} (target 0.872 ± 0.01)"),
    );
}

#[test]
fn ac03_ballistic_limits() {
    let cases = [(0.0, 1.0), (0.5, 1.0), (0.5, -1.0)];
    let alphas: Vec<f64> = cases.iter().map(|&(r, c)| single_alpha(r, c, 10_000)).collect();
    let pass = alphas.iter().all(|a| (a - 2.0).abs() <= 0.05);
    let detail = cases
        .iter()
        .zip(&alphas)
        .map(|((r, c), a)| format!("α(r={r}, C={c:+}) = {a:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    report(3, "ballistic limits", pass, format!("{detail} (target 2 ± 0.05)"));
}

#[test]
fn ac04_diffusive_disorder() {
    let alpha = single_alpha(0.5, 0.0, 10_000);
    report(
        4,
        "diffusive disorder",
        (alpha - 1.0).abs() <= 0.1,
        format!("α(r=0.5, C=0, t_max=10⁴, one realisation) = {alpha:.4} (target 1 ± 0.1)"),
    );
}

#[test]
fn ac05_anticorrelation_entangles_faster() {
    let neg = ensemble(0.05, -0.8, 500, 100, &[Observable::Entropy]);
    let pos = ensemble(0.05, 0.8, 500, 100, &[Observable::Entropy]);
    let (m_neg, e_neg) = neg.final_value(Observable::Entropy).unwrap();
    let (m_pos, e_pos) = pos.final_value(Observable::Entropy).unwrap();
    let combined = (e_neg * e_neg + e_pos * e_pos).sqrt();
    let gap = m_neg - m_pos;
    report(
        5,
        "headline inequality",
        gap > 2.0 * combined,
        format!(
            "S_e(C=-0.8) = {m_neg:.4} ± {e_neg:.4}, S_e(C=+0.8) = {m_pos:.4} ± {e_pos:.4}, gap {gap:.4} > 2·{combined:.4}"
        ),
    );
}

#[test]
fn ac06_entropy_saturation() {
    let neg = ensemble(0.5, -0.8, 500, 100, &[Observable::Entropy]);
    let pos = ensemble(0.5, 0.8, 500, 100, &[Observable::Entropy]);
    let (m_neg, _) = neg.final_value(Observable::Entropy).unwrap();
    let (m_pos, _) = pos.final_value(Observable::Entropy).unwrap();
    report(
        6,
        "entropy saturation",
        m_neg >= 0.95 && m_pos >= 0.95,
        format!("S_e(C=-0.8) = {m_neg:.4}, S_e(C=+0.8) = {m_pos:.4} (both >= 0.95)"),
    );
}

#[test]
fn ac07_disorder_calibration() {
    let n = 5000;
    let tol = 3.0 / (n as f64).sqrt();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (k, w) in [0.1, 0.3, 0.5, 0.7, 0.9].into_iter().enumerate() {
        let z = sample_chain(w, n, SEED + k as u64).unwrap();
        let c = empirical_autocorrelation(&z).unwrap();
        let dev = (c - (2.0 * w - 1.0)).abs();
        worst = worst.max(dev);
        parts.push(format!("w={w}: C={c:+.4}"));
    }
    report(
        7,
        "disorder calibration",
        worst <= tol,
        format!("{}; max deviation {worst:.4} <= {tol:.4}", parts.join(", ")),
    );
}

/// Maximum at `r = 0` and a non-increasing sequence up to one combined
/// standard error between neighbouring grid points.
fn jsd_trend(r_grid: &[f64], c: f64) -> (bool, String) {
    let points: Vec<(f64, f64)> = r_grid
        .iter()
        .map(|&r| {
            ensemble(r, c, 500, 100, &[Observable::Jsd])
                .final_value(Observable::Jsd)
                .unwrap()
        })
        .collect();
    let (head, _) = points[0];
    let max_at_zero = points[1..].iter().all(|&(m, _)| m < head);
    let decreasing = points.windows(2).all(|p| {
        let ((m0, e0), (m1, e1)) = (p[0], p[1]);
        m1 - m0 <= (e0 * e0 + e1 * e1).sqrt()
    });
    let detail = r_grid
        .iter()
        .zip(&points)
        .map(|(r, (m, e))| format!("r={r}: {m:.4}±{e:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    (max_at_zero && decreasing, format!("C={c:+}: {detail}"))
}

#[test]
fn ac08_jsd_decreases_with_disorder() {
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let (neg_ok, neg) = jsd_trend(&grid, -0.8);
    let (pos_ok, pos) = jsd_trend(&grid, 0.8);
    report(8, "JSD monotone trend", neg_ok && pos_ok, format!("{neg}; {pos}"));
}

#[test]
fn ac09_oracle_equivalences() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let mut dense_worst: f64 = 0.0;
    for trial in 0..100 {
        let half = rng.random_range(1..=10usize);
        let steps = rng.random_range(1..=half);
        let start = if trial % 2 == 0 {
            SpinorField::init_state(half).unwrap()
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
        dense_worst = dense_worst.max(max_diff(&interleave(&streamed), &dense));
    }

    let entropy_worst = (0..10_000)
        .map(|k| {
            let rho = random_density(&mut rng, k);
            (entanglement_entropy(&rho).unwrap() - eigen_entropy(&rho)).abs()
        })
        .fold(0.0, f64::max);

    let angles = DisorderParams::new(0.5, -0.4, 500).unwrap().generate(SEED).unwrap();
    let mut field = SpinorField::init_state(500).unwrap();
    let mut master_worst: f64 = 0.0;
    for &theta in &angles.theta {
        let predicted = predicted_next_distribution(&field, theta);
        field.step(theta).unwrap();
        for (a, b) in predicted.iter().zip(probability_distribution(&field)) {
            master_worst = master_worst.max((a - b).abs());
        }
    }

    report(
        9,
        "oracle equivalences",
        dense_worst < 1e-12 && entropy_worst < 1e-12 && master_worst < 1e-10,
        format!(
            "(a) dense vs streamed {dense_worst:.2e} < 1e-12; (b) closed-form vs eigen entropy {entropy_worst:.2e} < 1e-12; (c) population balance {master_worst:.2e} < 1e-10"
        ),
    );
}

fn data_files(result: &EnsembleResult) -> (Vec<u8>, Vec<u8>) {
    let mut csv = Vec::new();
    write_ensemble_csv(&mut csv, result).unwrap();
    let mut json = Vec::new();
    write_json(&mut json, result).unwrap();
    (csv, json)
}

#[test]
fn ac10_determinism_across_worker_counts() {
    let disorder = DisorderParams::new(0.3, -0.6, 200).unwrap();
    let config = EnsembleConfig::new(200, 24, SEED, disorder).with_snapshots([0, 100, 200]);
    let reference = data_files(&run_ensemble_with_workers(&config, 1).unwrap());
    let mut identical = true;
    for workers in [1, 2, 3, 8] {
        identical &= data_files(&run_ensemble_with_workers(&config, workers).unwrap()) == reference;
    }
    report(
        10,
        "determinism",
        identical,
        format!(
            "CSV ({} B) and JSON ({} B) byte-identical across 1, 2, 3, 8 workers and reruns",
            reference.0.len(),
            reference.1.len()
        ),
    );
}
