//! Diagnostics computed from a walker state or its time series.
//!
//! Distributions are plain slices indexed like [`SpinorField`]: a centred
//! lattice of odd length whose middle entry is the site `x = 0`. All
//! entropies are in bits with `0·log 0 = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, WalkError};
use crate::lattice::SpinorField;
use crate::C64;

/// Floating-point slack tolerated on quantities that are exact in theory.
pub const ROUNDOFF_TOL: f64 = 1e-12;

/// Allowed deviation of a distribution's total mass from one.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Coin-space density matrix `[[g_u, g_ud], [conj(g_ud), g_d]]` obtained by
/// tracing out position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedCoinDensity {
    pub g_u: f64,
    pub g_d: f64,
    pub g_ud: C64,
}

impl ReducedCoinDensity {
    /// Checks unit trace and positive semidefiniteness up to round-off.
    pub fn new(g_u: f64, g_d: f64, g_ud: C64) -> Result<Self> {
        let rho = Self { g_u, g_d, g_ud };
        if (g_u + g_d - 1.0).abs() > ROUNDOFF_TOL {
            return Err(invalid(format!("trace is {} not 1", g_u + g_d)));
        }
        if !(-ROUNDOFF_TOL..=1.0 + ROUNDOFF_TOL).contains(&g_u) {
            return Err(invalid(format!("g_u = {g_u} outside [0, 1]")));
        }
        if rho.determinant() < -ROUNDOFF_TOL {
            return Err(invalid(format!(
                "density is not positive semidefinite: det = {}",
                rho.determinant()
            )));
        }
        Ok(rho)
    }

    /// `g_u·g_d − |g_ud|²`.
    pub fn determinant(&self) -> f64 {
        self.g_u * self.g_d - self.g_ud.norm_sqr()
    }

    /// Eigenvalues `λ± = 1/2 ± √(1/4 − g_u·g_d + |g_ud|²)`, largest first.
    ///
    /// Fails when the discriminant is negative or `λ−` is negative beyond
    /// round-off, either of which means the input is not a density matrix.
    pub fn eigenvalues(&self) -> Result<(f64, f64)> {
        let disc = 0.25 - self.determinant();
        if disc < -ROUNDOFF_TOL {
            return Err(WalkError::NumericDomain(format!(
                "negative eigenvalue discriminant {disc}"
            )));
        }
        let root = disc.max(0.0).sqrt();
        let lo = 0.5 - root;
        if lo < -ROUNDOFF_TOL {
            return Err(WalkError::NumericDomain(format!(
                "negative eigenvalue {lo}: density is not positive semidefinite"
            )));
        }
        Ok((0.5 + root, lo.max(0.0)))
    }
}

/// `P(x) = |ψ^U(x)|² + |ψ^D(x)|²`.
pub fn probability_distribution(field: &SpinorField) -> Vec<f64> {
    field
        .up()
        .iter()
        .zip(field.down())
        .map(|(u, d)| u.norm_sqr() + d.norm_sqr())
        .collect()
}

/// `Σ_x x²·P(x)` on a centred lattice.
pub fn second_moment(p: &[f64]) -> f64 {
    let offset = (p.len() / 2) as f64;
    p.iter()
        .enumerate()
        .map(|(i, &pi)| {
            let x = i as f64 - offset;
            x * x * pi
        })
        .sum()
}

/// [`second_moment`] of a field's distribution, summed over its support only.
pub fn field_second_moment(field: &SpinorField) -> f64 {
    field
        .support()
        .map(|i| {
            let x = field.position(i) as f64;
            x * x * (field.up()[i].norm_sqr() + field.down()[i].norm_sqr())
        })
        .sum()
}

/// Least-squares slope of `ln m2` against `ln t`, keeping only points with
/// `t > discard_fraction · t_max`, where `t_max` is the largest `t` supplied.
pub fn fit_alpha(series: &[(f64, f64)], discard_fraction: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&discard_fraction) {
        return Err(invalid(format!(
            "discard fraction must lie in [0, 1), got {discard_fraction}"
        )));
    }
    let t_max = series.iter().map(|&(t, _)| t).fold(f64::NEG_INFINITY, f64::max);
    let cutoff = discard_fraction * t_max;
    let kept: Vec<(f64, f64)> = series.iter().copied().filter(|&(t, _)| t > cutoff).collect();
    if kept.len() < 10 {
        return Err(invalid(format!(
            "need at least 10 retained points for the fit, got {}",
            kept.len()
        )));
    }
    if let Some(&(t, m2)) = kept.iter().find(|&&(t, m2)| !(t >= 1.0 && m2 > 0.0)) {
        return Err(invalid(format!(
            "fit needs t >= 1 and m2 > 0, got t = {t}, m2 = {m2}"
        )));
    }
    let n = kept.len() as f64;
    let (sx, sy) = kept
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(t, m2)| (sx + t.ln(), sy + m2.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = kept.iter().fold((0.0, 0.0), |(sxy, sxx), &(t, m2)| {
        let dx = t.ln() - mx;
        (sxy + dx * (m2.ln() - my), sxx + dx * dx)
    });
    if sxx == 0.0 {
        return Err(invalid("all retained points share the same t"));
    }
    Ok(sxy / sxx)
}

/// Coin density after tracing out position.
pub fn reduced_density(field: &SpinorField) -> ReducedCoinDensity {
    let range = field.support();
    let (up, down) = (&field.up()[range.clone()], &field.down()[range]);
    let g_u: f64 = up.iter().map(|u| u.norm_sqr()).sum();
    let g_ud: C64 = up.iter().zip(down).map(|(u, d)| u * d.conj()).sum();
    ReducedCoinDensity {
        g_u,
        g_d: 1.0 - g_u,
        g_ud,
    }
}

/// Von Neumann entropy (bits) of the coin density.
pub fn entanglement_entropy(rho: &ReducedCoinDensity) -> Result<f64> {
    let (hi, lo) = rho.eigenvalues()?;
    let s = xlog2x(hi) + xlog2x(lo);
    Ok((-s).clamp(0.0, 1.0))
}

/// `x·log₂x`, zero for `x <= 0`.
fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Shannon entropy in bits.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter().map(|&v| xlog2x(v)).sum::<f64>()
}

/// Point mass at the centre of a lattice of `len` sites.
pub fn classical_initial(len: usize) -> Vec<f64> {
    let mut p = vec![0.0; len];
    p[len / 2] = 1.0;
    p
}

/// Unbiased classical random-walk step `P'(x) = ½P(x−1) + ½P(x+1)`.
pub fn classical_step(p: &[f64]) -> Result<Vec<f64>> {
    let n = p.len();
    if n < 3 {
        return Err(invalid(format!("lattice too short: {n} sites")));
    }
    for i in [0, n - 1] {
        if p[i] != 0.0 {
            return Err(WalkError::BoundaryLeak {
                index: i,
                magnitude: p[i],
            });
        }
    }
    let next = (0..n)
        .map(|i| {
            let left = if i > 0 { p[i - 1] } else { 0.0 };
            let right = if i + 1 < n { p[i + 1] } else { 0.0 };
            0.5 * left + 0.5 * right
        })
        .collect();
    Ok(next)
}

fn check_normalized(p: &[f64], name: &str) -> Result<()> {
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(invalid(format!("{name} sums to {total}, not 1")));
    }
    if let Some(v) = p.iter().find(|v| v.is_nan() || **v < 0.0) {
        return Err(invalid(format!("{name} has a negative or NaN entry {v}")));
    }
    Ok(())
}

/// Jensen–Shannon dissimilarity in bits:
/// `S((P + Q)/2) − (S(P) + S(Q))/2`.
pub fn jsd(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(invalid(format!(
            "distributions live on different grids: {} vs {} sites",
            p.len(),
            q.len()
        )));
    }
    check_normalized(p, "P")?;
    check_normalized(q, "Q")?;
    let mut value = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a == 0.0 && b == 0.0 {
            continue;
        }
        let m = 0.5 * (a + b);
        value += -xlog2x(m) + 0.5 * (xlog2x(a) + xlog2x(b));
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Local interference `J(x) = sin2θ·Re{u(x−1)d*(x−1) − u(x+1)d*(x+1)}` on the
/// time-`t` field with the angle about to be applied, and its absolute sum `I`.
pub fn interference_profile(field: &SpinorField, theta: f64) -> (Vec<f64>, f64) {
    let overlap: Vec<f64> = field
        .up()
        .iter()
        .zip(field.down())
        .map(|(u, d)| (u * d.conj()).re)
        .collect();
    let s2 = (2.0 * theta).sin();
    let n = overlap.len();
    let j: Vec<f64> = (0..n)
        .map(|i| {
            let left = if i > 0 { overlap[i - 1] } else { 0.0 };
            let right = if i + 1 < n { overlap[i + 1] } else { 0.0 };
            s2 * (left - right)
        })
        .collect();
    let total = j.iter().map(|v| v.abs()).sum();
    (j, total)
}

/// Distribution after one step, rebuilt from time-`t` spin populations:
/// `cos²θ·(P^U(x−1) + P^D(x+1)) + sin²θ·(P^D(x−1) + P^U(x+1)) + J(x)`.
pub fn predicted_next_distribution(field: &SpinorField, theta: f64) -> Vec<f64> {
    let pu: Vec<f64> = field.up().iter().map(|u| u.norm_sqr()).collect();
    let pd: Vec<f64> = field.down().iter().map(|d| d.norm_sqr()).collect();
    let (j, _) = interference_profile(field, theta);
    let (s, c) = theta.sin_cos();
    let (c2, s2) = (c * c, s * s);
    let n = pu.len();
    let at = |v: &[f64], i: isize| -> f64 {
        if i >= 0 && (i as usize) < n {
            v[i as usize]
        } else {
            0.0
        }
    };
    (0..n as isize)
        .map(|i| {
            c2 * (at(&pu, i - 1) + at(&pd, i + 1))
                + s2 * (at(&pd, i - 1) + at(&pu, i + 1))
                + j[i as usize]
        })
        .collect()
}

/// `A(x) = |ψ^U(x)|² − |ψ^D(x)|²` and `A(x) / max_x |A(x)|` (all zeros when
/// `A` vanishes identically).
pub fn asymmetry_profile(field: &SpinorField) -> (Vec<f64>, Vec<f64>) {
    let a: Vec<f64> = field
        .up()
        .iter()
        .zip(field.down())
        .map(|(u, d)| u.norm_sqr() - d.norm_sqr())
        .collect();
    let peak = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let normalized = if peak > 0.0 {
        a.iter().map(|v| v / peak).collect()
    } else {
        vec![0.0; a.len()]
    };
    (a, normalized)
}
