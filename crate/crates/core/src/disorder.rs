//! Correlated binary disorder for the coin angle.
//!
//! A symmetric two-state Markov chain `z_t ∈ {−1, +1}` keeps its state with
//! persistence probability `w` and flips otherwise, giving lag-1
//! autocorrelation `C = 2w − 1`. The chain selects between two coin angles,
//! `θ_a = (1 + r)·θ₀` for `z = −1` and `θ_b = (1 − r)·θ₀` for `z = +1`.
//!
//! Random numbers come from ChaCha8 seeded with [`rand::SeedableRng::seed_from_u64`].
//! Chains are prefix-stable: for a fixed `(w, seed)` the first `n` entries do
//! not depend on the requested length.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// The generator behind every chain in this crate.
pub type ChainRng = ChaCha8Rng;

/// Chain state selecting `θ_a`.
pub const STATE_A: i8 = -1;
/// Chain state selecting `θ_b`.
pub const STATE_B: i8 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderParams {
    /// Baseline angle θ₀ in radians.
    pub theta0: f64,
    /// Kick strength r ∈ [0, 1].
    pub strength: f64,
    /// Target lag-1 autocorrelation C ∈ [−1, 1].
    pub correlation: f64,
    /// Number of chain entries to generate.
    pub length: usize,
}

impl DisorderParams {
    /// Parameters with the conventional baseline θ₀ = π/4.
    pub fn new(strength: f64, correlation: f64, length: usize) -> Result<Self> {
        let params = Self {
            theta0: std::f64::consts::FRAC_PI_4,
            strength,
            correlation,
            length,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.theta0.is_finite() {
            return Err(invalid(format!("theta0 must be finite, got {}", self.theta0)));
        }
        check_strength(self.strength)?;
        persistence_from_correlation(self.correlation)?;
        if self.length < 1 {
            return Err(invalid("disorder length must be >= 1"));
        }
        Ok(())
    }

    pub fn persistence(&self) -> f64 {
        (self.correlation + 1.0) / 2.0
    }

    pub fn theta_a(&self) -> f64 {
        (1.0 + self.strength) * self.theta0
    }

    pub fn theta_b(&self) -> f64 {
        (1.0 - self.strength) * self.theta0
    }

    /// Samples a chain of `self.length` entries and maps it to angles.
    pub fn generate(&self, seed: u64) -> Result<AngleSequence> {
        self.validate()?;
        let z = sample_chain(self.persistence(), self.length, seed)?;
        angles_from_chain(&z, self.theta0, self.strength)
    }
}

/// A realised chain together with the coin angles it selects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSequence {
    pub z: Vec<i8>,
    pub theta: Vec<f64>,
}

impl AngleSequence {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

fn check_strength(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(invalid(format!("kick strength must lie in [0, 1], got {r}")));
    }
    Ok(())
}

/// `w = (C + 1) / 2`.
pub fn persistence_from_correlation(correlation: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&correlation) {
        return Err(invalid(format!(
            "correlation must lie in [-1, 1], got {correlation}"
        )));
    }
    Ok((correlation + 1.0) / 2.0)
}

/// Samples `len` states of the symmetric two-state chain with persistence `w`.
///
/// `z(0)` is uniform on `{−1, +1}`. Each later state keeps the previous value
/// when a uniform draw `u ∈ [0, 1)` satisfies `u < w`, so `w = 1` and `w = 0`
/// give exactly constant and exactly alternating chains.
pub fn sample_chain(w: f64, len: usize, seed: u64) -> Result<Vec<i8>> {
    if !(0.0..=1.0).contains(&w) {
        return Err(invalid(format!("persistence must lie in [0, 1], got {w}")));
    }
    if len < 1 {
        return Err(invalid("chain length must be >= 1"));
    }
    let mut rng = ChainRng::seed_from_u64(seed);
    let mut z = Vec::with_capacity(len);
    let mut state = if rng.random::<bool>() { STATE_B } else { STATE_A };
    z.push(state);
    for _ in 1..len {
        if rng.random::<f64>() >= w {
            state = -state;
        }
        z.push(state);
    }
    Ok(z)
}

/// Maps chain states to coin angles: `−1 → (1 + r)·θ₀`, `+1 → (1 − r)·θ₀`.
pub fn angles_from_chain(z: &[i8], theta0: f64, strength: f64) -> Result<AngleSequence> {
    check_strength(strength)?;
    let theta_a = (1.0 + strength) * theta0;
    let theta_b = (1.0 - strength) * theta0;
    let theta = z
        .iter()
        .enumerate()
        .map(|(t, &s)| match s {
            STATE_A => Ok(theta_a),
            STATE_B => Ok(theta_b),
            other => Err(invalid(format!("chain entry {t} is {other}, expected -1 or +1"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AngleSequence {
        z: z.to_vec(),
        theta,
    })
}

/// Lag-1 product mean `(1/(T−1))·Σ_{t≥1} z(t)·z(t−1)`, without mean subtraction.
pub fn empirical_autocorrelation(z: &[i8]) -> Result<f64> {
    if z.len() < 2 {
        return Err(invalid(format!(
            "autocorrelation needs at least 2 entries, got {}",
            z.len()
        )));
    }
    let sum: i64 = z.windows(2).map(|p| i64::from(p[0]) * i64::from(p[1])).sum();
    Ok(sum as f64 / (z.len() - 1) as f64)
}

/// Fractions of entries in state `a` (−1) and state `b` (+1).
pub fn ingredient_fractions(z: &[i8]) -> Result<(f64, f64)> {
    if z.is_empty() {
        return Err(invalid("fractions of an empty chain are undefined"));
    }
    let n_a = z.iter().filter(|&&s| s == STATE_A).count();
    let f_a = n_a as f64 / z.len() as f64;
    Ok((f_a, 1.0 - f_a))
}
