//! Seeded Monte Carlo ensembles over disorder realisations.
//!
//! Every sample derives its own seed from `(master_seed, sample_index)`,
//! samples run in parallel, and results are reduced sequentially in ascending
//! sample order. The output is therefore bit-identical for any worker count.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disorder::{angles_from_chain, sample_chain, DisorderParams};
use crate::error::{invalid, Result, WalkError};
use crate::lattice::{evolve, SpinorField, StepObserver};
use crate::observables::{
    asymmetry_profile, classical_initial, classical_step, entanglement_entropy,
    field_second_moment, fit_alpha, interference_profile, jsd, probability_distribution,
    reduced_density,
};

/// Scalar observables recorded per time step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Observable {
    /// Second moment of the position distribution.
    #[serde(rename = "m2")]
    M2,
    /// Coin–position entanglement entropy (bits).
    #[serde(rename = "s_e")]
    Entropy,
    /// Jensen–Shannon dissimilarity against the co-evolved classical walk.
    #[serde(rename = "jsd")]
    Jsd,
    /// Total interference `I_t`.
    #[serde(rename = "i_t")]
    Interference,
}

impl Observable {
    pub const ALL: [Observable; 4] = [
        Observable::M2,
        Observable::Entropy,
        Observable::Jsd,
        Observable::Interference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::M2 => "m2",
            Observable::Entropy => "s_e",
            Observable::Jsd => "jsd",
            Observable::Interference => "i_t",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| invalid(format!("unknown observable '{s}' (expected m2, s_e, jsd or i_t)")))
    }
}

fn default_record_every() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub t_max: usize,
    pub samples: usize,
    pub master_seed: u64,
    pub disorder: DisorderParams,
    pub observables: BTreeSet<Observable>,
    /// Times at which full spatial profiles are stored.
    #[serde(default)]
    pub snapshot_times: Vec<usize>,
    /// Scalars are stored every `record_every` steps, plus always at `t_max`.
    #[serde(default = "default_record_every")]
    pub record_every: usize,
}

impl EnsembleConfig {
    /// Records every scalar observable at every step, with no snapshots.
    pub fn new(t_max: usize, samples: usize, master_seed: u64, disorder: DisorderParams) -> Self {
        Self {
            t_max,
            samples,
            master_seed,
            disorder,
            observables: Observable::ALL.into_iter().collect(),
            snapshot_times: Vec::new(),
            record_every: 1,
        }
    }

    pub fn with_observables(mut self, observables: impl IntoIterator<Item = Observable>) -> Self {
        self.observables = observables.into_iter().collect();
        self
    }

    pub fn with_snapshots(mut self, times: impl IntoIterator<Item = usize>) -> Self {
        self.snapshot_times = times.into_iter().collect();
        self
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_max < 1 {
            return Err(invalid("t_max must be >= 1"));
        }
        if self.samples < 1 {
            return Err(invalid("samples must be >= 1"));
        }
        if self.record_every < 1 {
            return Err(invalid("record_every must be >= 1"));
        }
        self.disorder.validate()?;
        if self.disorder.length < self.t_max {
            return Err(invalid(format!(
                "disorder length {} is shorter than t_max {}",
                self.disorder.length, self.t_max
            )));
        }
        if let Some(t) = self.snapshot_times.iter().find(|&&t| t > self.t_max) {
            return Err(invalid(format!("snapshot time {t} exceeds t_max {}", self.t_max)));
        }
        Ok(())
    }

    /// Whether scalars are stored at time `t`.
    pub fn records_at(&self, t: usize) -> bool {
        t.is_multiple_of(self.record_every) || t == self.t_max
    }

    pub fn record_times(&self) -> Vec<usize> {
        (0..=self.t_max).filter(|&t| self.records_at(t)).collect()
    }

    fn wants(&self, o: Observable) -> bool {
        self.observables.contains(&o)
    }
}

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Per-sample seed: output number `sample_index + 1` of a SplitMix64 generator
/// started at `master_seed`.
///
/// For a fixed master seed the map is injective in `sample_index`: the state
/// advances by an odd constant and the finaliser is a bijection on `u64`.
pub fn derive_seed(master_seed: u64, sample_index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(sample_index.wrapping_add(1).wrapping_mul(SPLITMIX_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Spatial profiles at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSnapshot {
    pub t: usize,
    pub probability: Vec<f64>,
    pub asymmetry: Vec<f64>,
    pub asymmetry_normalized: Vec<f64>,
    /// Local interference evaluated with the angle applied at `t`.
    pub interference: Vec<f64>,
}

/// Everything recorded along one disorder realisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub sample_index: usize,
    pub seed: u64,
    pub t: Vec<usize>,
    pub values: BTreeMap<Observable, Vec<f64>>,
    pub profiles: Vec<ProfileSnapshot>,
}

impl ObservableSeries {
    pub fn get(&self, o: Observable) -> Option<&[f64]> {
        self.values.get(&o).map(Vec::as_slice)
    }

    /// `(t, m2)` pairs for a spreading-exponent fit.
    pub fn m2_points(&self) -> Option<Vec<(f64, f64)>> {
        let m2 = self.get(Observable::M2)?;
        Some(self.t.iter().zip(m2).map(|(&t, &v)| (t as f64, v)).collect())
    }
}

struct Recorder<'a> {
    config: &'a EnsembleConfig,
    classical: Option<Vec<f64>>,
    series: ObservableSeries,
}

impl<'a> Recorder<'a> {
    fn new(config: &'a EnsembleConfig, sample_index: usize, seed: u64, lattice: usize) -> Self {
        let values = config
            .observables
            .iter()
            .map(|&o| (o, Vec::new()))
            .collect();
        Self {
            config,
            classical: config.wants(Observable::Jsd).then(|| classical_initial(lattice)),
            series: ObservableSeries {
                sample_index,
                seed,
                t: Vec::new(),
                values,
                profiles: Vec::new(),
            },
        }
    }

    fn push(&mut self, o: Observable, v: f64) {
        if let Some(vals) = self.series.values.get_mut(&o) {
            vals.push(v);
        }
    }

    /// Quantities of the time-`t` state alone.
    fn record_state(&mut self, t: usize, field: &SpinorField) -> Result<()> {
        if !self.config.records_at(t) {
            return Ok(());
        }
        self.series.t.push(t);
        if self.config.wants(Observable::M2) {
            self.push(Observable::M2, field_second_moment(field));
        }
        if let Some(q) = &self.classical {
            let d = jsd(&probability_distribution(field), q)?;
            self.push(Observable::Jsd, d);
        }
        if self.config.wants(Observable::Entropy) {
            let s = entanglement_entropy(&reduced_density(field))?;
            self.push(Observable::Entropy, s);
        }
        Ok(())
    }

    /// Quantities that also depend on the angle applied at `t`.
    fn record_with_angle(&mut self, t: usize, field: &SpinorField, theta: f64) {
        let snapshot = self.config.snapshot_times.contains(&t);
        let scalar = self.config.records_at(t) && self.config.wants(Observable::Interference);
        if !snapshot && !scalar {
            return;
        }
        let (j, total) = interference_profile(field, theta);
        if scalar {
            self.push(Observable::Interference, total);
        }
        if snapshot {
            let (a, a_norm) = asymmetry_profile(field);
            self.series.profiles.push(ProfileSnapshot {
                t,
                probability: probability_distribution(field),
                asymmetry: a,
                asymmetry_normalized: a_norm,
                interference: j,
            });
        }
    }
}

impl StepObserver for Recorder<'_> {
    fn before_step(&mut self, t: usize, field: &SpinorField, theta: f64) -> Result<()> {
        self.record_with_angle(t, field, theta);
        Ok(())
    }

    fn after_step(&mut self, t: usize, field: &SpinorField, _theta: f64) -> Result<()> {
        if let Some(q) = &self.classical {
            self.classical = Some(classical_step(q)?);
        }
        self.record_state(t, field)
    }
}

/// Evolves one disorder realisation from the localised initial state.
///
/// The chain has `t_max + 1` entries: angles `θ_0 … θ_{t_max−1}` drive the
/// walk and `θ_{t_max}` is only used for the interference at the final time.
pub fn run_single(config: &EnsembleConfig, sample_index: usize) -> Result<ObservableSeries> {
    config.validate()?;
    if sample_index >= config.samples {
        return Err(invalid(format!(
            "sample index {sample_index} out of range for {} samples",
            config.samples
        )));
    }
    let seed = derive_seed(config.master_seed, sample_index as u64);
    let d = &config.disorder;
    let z = sample_chain(d.persistence(), config.t_max + 1, seed)?;
    let angles = angles_from_chain(&z, d.theta0, d.strength)?;

    let mut field = SpinorField::init_state(config.t_max)?;
    let mut recorder = Recorder::new(config, sample_index, seed, field.len());
    recorder.record_state(0, &field)?;
    evolve(&mut field, &angles.theta[..config.t_max], &mut recorder)?;
    recorder.record_with_angle(config.t_max, &field, angles.theta[config.t_max]);
    Ok(recorder.series)
}

/// Mean and standard error of a scalar at each recorded time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesStats {
    pub mean: Vec<f64>,
    pub sem: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub config: EnsembleConfig,
    pub seeds: Vec<u64>,
    pub t: Vec<usize>,
    pub stats: BTreeMap<Observable, SeriesStats>,
    /// Value at `t_max` for each sample, in sample order.
    pub finals: BTreeMap<Observable, Vec<f64>>,
    /// Sample-averaged spatial profiles at the snapshot times.
    pub profiles: Vec<ProfileSnapshot>,
}

impl EnsembleResult {
    pub fn stats(&self, o: Observable) -> Option<&SeriesStats> {
        self.stats.get(&o)
    }

    /// Mean and standard error at time `t`, if recorded.
    pub fn at(&self, o: Observable, t: usize) -> Option<(f64, f64)> {
        let k = self.t.iter().position(|&x| x == t)?;
        let s = self.stats.get(&o)?;
        Some((s.mean[k], s.sem[k]))
    }

    /// Mean and standard error at `t_max`.
    pub fn final_value(&self, o: Observable) -> Option<(f64, f64)> {
        self.at(o, self.config.t_max)
    }

    /// Spreading exponent fitted to the sample-mean second moment.
    pub fn alpha(&self, discard_fraction: f64) -> Result<f64> {
        let m2 = self
            .stats(Observable::M2)
            .ok_or_else(|| invalid("m2 was not recorded"))?;
        let points: Vec<(f64, f64)> = self
            .t
            .iter()
            .zip(&m2.mean)
            .map(|(&t, &v)| (t as f64, v))
            .collect();
        fit_alpha(&points, discard_fraction)
    }
}

/// Mean and standard error (sample standard deviation over `√n`).
pub fn mean_sem(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn mean_vectors<'a>(rows: impl Iterator<Item = &'a Vec<f64>>, n: usize) -> Vec<f64> {
    let mut acc: Vec<f64> = Vec::new();
    for row in rows {
        if acc.is_empty() {
            acc = vec![0.0; row.len()];
        }
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    acc.iter_mut().for_each(|a| *a /= n as f64);
    acc
}

/// Reduces per-sample series (already in ascending sample order).
pub fn aggregate(config: &EnsembleConfig, runs: &[ObservableSeries]) -> Result<EnsembleResult> {
    let first = runs.first().ok_or_else(|| invalid("no samples to aggregate"))?;
    let n = runs.len();
    let mut stats = BTreeMap::new();
    let mut finals = BTreeMap::new();
    for &o in &config.observables {
        let len = first.t.len();
        let mut mean = Vec::with_capacity(len);
        let mut sem = Vec::with_capacity(len);
        let mut column = vec![0.0; n];
        for k in 0..len {
            for (slot, run) in column.iter_mut().zip(runs) {
                *slot = run.values[&o][k];
            }
            let (m, s) = mean_sem(&column);
            mean.push(m);
            sem.push(s);
        }
        finals.insert(o, runs.iter().map(|r| *r.values[&o].last().unwrap()).collect());
        stats.insert(o, SeriesStats { mean, sem });
    }
    let profiles = first
        .profiles
        .iter()
        .enumerate()
        .map(|(k, snap)| ProfileSnapshot {
            t: snap.t,
            probability: mean_vectors(runs.iter().map(|r| &r.profiles[k].probability), n),
            asymmetry: mean_vectors(runs.iter().map(|r| &r.profiles[k].asymmetry), n),
            asymmetry_normalized: mean_vectors(
                runs.iter().map(|r| &r.profiles[k].asymmetry_normalized),
                n,
            ),
            interference: mean_vectors(runs.iter().map(|r| &r.profiles[k].interference), n),
        })
        .collect();
    Ok(EnsembleResult {
        config: config.clone(),
        seeds: runs.iter().map(|r| r.seed).collect(),
        t: first.t.clone(),
        stats,
        finals,
        profiles,
    })
}

/// Runs every sample on the current rayon pool and aggregates in sample order.
pub fn run_ensemble(config: &EnsembleConfig) -> Result<EnsembleResult> {
    config.validate()?;
    let runs = (0..config.samples)
        .into_par_iter()
        .map(|i| run_single(config, i))
        .collect::<Result<Vec<_>>>()?;
    aggregate(config, &runs)
}

/// [`run_ensemble`] on a dedicated pool of `workers` threads.
pub fn run_ensemble_with_workers(config: &EnsembleConfig, workers: usize) -> Result<EnsembleResult> {
    if workers < 1 {
        return Err(invalid("worker count must be >= 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_ensemble(config))
}
