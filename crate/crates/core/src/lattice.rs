//! Walker state on a finite lattice and the coin/shift unitaries.
//!
//! The walk lives on ℤ, but after `t` steps from a site-localised state every
//! amplitude outside `|x| <= t` is exactly zero. A dense lattice of
//! `2 * t_max + 1` sites therefore represents the evolution exactly; the shift
//! refuses to move a nonzero amplitude off either edge instead of truncating.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, WalkError};
use crate::C64;

/// Norm tolerance accepted by [`SpinorField::from_amplitudes`].
const CONSTRUCT_NORM_TOL: f64 = 1e-10;

/// Lattice sizing for a walk of `t_max` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub t_max: usize,
}

impl WalkConfig {
    pub fn new(t_max: usize) -> Result<Self> {
        if t_max < 1 {
            return Err(invalid(format!("t_max must be >= 1, got {t_max}")));
        }
        Ok(Self { t_max })
    }

    /// `2 * t_max + 1`: the smallest lattice the ballistic fronts never leave.
    pub fn lattice_size(&self) -> usize {
        2 * self.t_max + 1
    }
}

/// Two-component amplitude field `ψ^U(x)`, `ψ^D(x)` over a finite lattice.
///
/// Array index `i` corresponds to the physical site `x = i - offset`.
#[derive(Debug, Clone)]
pub struct SpinorField {
    up: Vec<C64>,
    down: Vec<C64>,
    offset: usize,
    /// Inclusive index range outside of which every amplitude is zero.
    support: (usize, usize),
}

impl SpinorField {
    /// The localised initial condition `ψ^U(0) = 1/√2`, `ψ^D(0) = i/√2` on a
    /// lattice sized for `t_max` steps.
    pub fn init_state(t_max: usize) -> Result<Self> {
        let config = WalkConfig::new(t_max)?;
        let len = config.lattice_size();
        let mut up = vec![C64::new(0.0, 0.0); len];
        let mut down = vec![C64::new(0.0, 0.0); len];
        let amp = std::f64::consts::FRAC_1_SQRT_2;
        up[t_max] = C64::new(amp, 0.0);
        down[t_max] = C64::new(0.0, amp);
        Ok(Self {
            up,
            down,
            offset: t_max,
            support: (t_max, t_max),
        })
    }

    /// Builds a field from explicit amplitudes with `x = 0` at the central
    /// index. The lattice must have odd length of at least three sites and the
    /// state must be normalised.
    pub fn from_amplitudes(up: Vec<C64>, down: Vec<C64>) -> Result<Self> {
        if up.len() != down.len() {
            return Err(invalid(format!(
                "component lengths differ: up={}, down={}",
                up.len(),
                down.len()
            )));
        }
        let len = up.len();
        if len < 3 || len.is_multiple_of(2) {
            return Err(invalid(format!(
                "lattice length must be odd and >= 3, got {len}"
            )));
        }
        let nonzero = |i: &usize| up[*i] != C64::new(0.0, 0.0) || down[*i] != C64::new(0.0, 0.0);
        let lo = (0..len).find(nonzero).unwrap_or(len / 2);
        let hi = (0..len).rev().find(nonzero).unwrap_or(len / 2);
        let field = Self {
            up,
            down,
            offset: len / 2,
            support: (lo, hi),
        };
        let norm = field.norm();
        if (norm - 1.0).abs() > CONSTRUCT_NORM_TOL {
            return Err(invalid(format!("field is not normalised: norm = {norm}")));
        }
        Ok(field)
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    /// Lattice index of the physical site `x = 0`.
    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn up(&self) -> &[C64] {
        &self.up
    }

    pub fn down(&self) -> &[C64] {
        &self.down
    }

    /// Physical coordinate of lattice index `i`.
    pub fn position(&self, index: usize) -> i64 {
        index as i64 - self.offset as i64
    }

    /// Lattice index of physical site `x`, if it is on the lattice.
    pub fn index_of(&self, x: i64) -> Option<usize> {
        let i = x + self.offset as i64;
        (0..self.len() as i64).contains(&i).then_some(i as usize)
    }

    /// Physical coordinates of every lattice site in index order.
    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.len()).map(|i| self.position(i))
    }

    /// `Σ_x |ψ^U(x)|² + |ψ^D(x)|²`.
    pub fn norm(&self) -> f64 {
        self.up
            .iter()
            .zip(&self.down)
            .map(|(u, d)| u.norm_sqr() + d.norm_sqr())
            .sum()
    }

    /// Inclusive index range that contains every nonzero amplitude.
    pub fn support(&self) -> std::ops::RangeInclusive<usize> {
        self.support.0..=self.support.1
    }

    /// Number of steps this lattice can still absorb from a state localised at
    /// the origin.
    pub fn capacity(&self) -> usize {
        self.offset.min(self.len() - 1 - self.offset)
    }

    /// Site-wise coin rotation:
    /// `up' = cosθ·up + sinθ·down`, `down' = sinθ·up − cosθ·down`.
    pub fn apply_coin(&mut self, theta: f64) {
        let (s, c) = theta.sin_cos();
        let range = self.support();
        for (u, d) in self.up[range.clone()].iter_mut().zip(self.down[range].iter_mut()) {
            let (u0, d0) = (*u, *d);
            *u = u0 * c + d0 * s;
            *d = u0 * s - d0 * c;
        }
    }

    /// Spin-conditioned translation: up-movers hop to `x + 1`, down-movers to
    /// `x − 1`. This is a permutation, so the norm is preserved exactly.
    pub fn apply_shift(&mut self) -> Result<()> {
        let last = self.len() - 1;
        check_edge(&self.up, last)?;
        check_edge(&self.down, 0)?;
        let (lo, hi) = self.support;
        let (lo, hi) = (lo.saturating_sub(1), (hi + 1).min(last));
        self.up[lo..=hi].rotate_right(1);
        self.down[lo..=hi].rotate_left(1);
        self.support = (lo, hi);
        Ok(())
    }

    /// Inverse of [`apply_shift`](Self::apply_shift).
    pub fn apply_inverse_shift(&mut self) -> Result<()> {
        let last = self.len() - 1;
        check_edge(&self.up, 0)?;
        check_edge(&self.down, last)?;
        let (lo, hi) = self.support;
        let (lo, hi) = (lo.saturating_sub(1), (hi + 1).min(last));
        self.up[lo..=hi].rotate_left(1);
        self.down[lo..=hi].rotate_right(1);
        self.support = (lo, hi);
        Ok(())
    }

    /// One application of the walk operator: coin, then shift.
    pub fn step(&mut self, theta: f64) -> Result<()> {
        self.apply_coin(theta);
        self.apply_shift()
    }
}

impl PartialEq for SpinorField {
    fn eq(&self, other: &Self) -> bool {
        self.offset == other.offset && self.up == other.up && self.down == other.down
    }
}

fn check_edge(component: &[C64], index: usize) -> Result<()> {
    let amp = component[index];
    if amp.re != 0.0 || amp.im != 0.0 {
        return Err(WalkError::BoundaryLeak {
            index,
            magnitude: amp.norm(),
        });
    }
    Ok(())
}

/// Receives the walker state as [`evolve`] advances it.
pub trait StepObserver {
    /// Called with the time-`t` field just before the coin angle `theta` is
    /// applied to it.
    fn before_step(&mut self, _t: usize, _field: &SpinorField, _theta: f64) -> Result<()> {
        Ok(())
    }

    /// Called after each step with the new time index `t`, the evolved field,
    /// and the coin angle that produced it.
    fn after_step(&mut self, t: usize, field: &SpinorField, theta: f64) -> Result<()>;
}

/// Observer that ignores everything.
pub struct NoopObserver;

impl StepObserver for NoopObserver {
    fn after_step(&mut self, _t: usize, _field: &SpinorField, _theta: f64) -> Result<()> {
        Ok(())
    }
}

impl<F> StepObserver for F
where
    F: FnMut(usize, &SpinorField, f64) -> Result<()>,
{
    fn after_step(&mut self, t: usize, field: &SpinorField, theta: f64) -> Result<()> {
        self(t, field, theta)
    }
}

/// Applies one step per angle, in order, notifying `observer` around each.
pub fn evolve<O: StepObserver + ?Sized>(
    field: &mut SpinorField,
    angles: &[f64],
    observer: &mut O,
) -> Result<()> {
    if angles.len() > field.capacity() {
        return Err(invalid(format!(
            "{} steps requested but the lattice only holds {}",
            angles.len(),
            field.capacity()
        )));
    }
    for (t, &theta) in angles.iter().enumerate() {
        observer.before_step(t, field, theta)?;
        field.step(theta)?;
        observer.after_step(t + 1, field, theta)?;
    }
    Ok(())
}
