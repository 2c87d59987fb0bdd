//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use nalgebra::Matrix2;
use qwalk_core::lattice::SpinorField;
use qwalk_core::observables::ReducedCoinDensity;
use qwalk_core::C64;
use rand::Rng;

/// Normalised random field whose support is `|x| <= radius` on a lattice of
/// `2 * half + 1` sites.
pub fn random_field(rng: &mut impl Rng, half: usize, radius: usize) -> SpinorField {
    let len = 2 * half + 1;
    let mut up = vec![C64::new(0.0, 0.0); len];
    let mut down = up.clone();
    for i in half - radius..=half + radius {
        up[i] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        down[i] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let norm: f64 = up.iter().chain(&down).map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    up.iter_mut().chain(down.iter_mut()).for_each(|a| *a /= norm);
    SpinorField::from_amplitudes(up, down).unwrap()
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Explicit walk operator on `C^{2L}`, basis index `2 * site + spin` with
/// spin 0 = up. Off-lattice targets are dropped, which is exact while the
/// edge amplitudes are zero.
pub fn dense_walk_operator(len: usize, theta: f64) -> Vec<Vec<C64>> {
    let n = 2 * len;
    let zero = C64::new(0.0, 0.0);
    let mut coin = vec![vec![zero; n]; n];
    for s in 0..len {
        let (u, d) = (2 * s, 2 * s + 1);
        coin[u][u] = C64::new(theta.cos(), 0.0);
        coin[u][d] = C64::new(theta.sin(), 0.0);
        coin[d][u] = C64::new(theta.sin(), 0.0);
        coin[d][d] = C64::new(-theta.cos(), 0.0);
    }
    let mut shift = vec![vec![zero; n]; n];
    for s in 0..len {
        if s + 1 < len {
            shift[2 * (s + 1)][2 * s] = C64::new(1.0, 0.0);
        }
        if s >= 1 {
            shift[2 * (s - 1) + 1][2 * s + 1] = C64::new(1.0, 0.0);
        }
    }
    let mut w = vec![vec![zero; n]; n];
    for i in 0..n {
        for k in 0..n {
            if shift[i][k] == zero {
                continue;
            }
            for j in 0..n {
                w[i][j] += shift[i][k] * coin[k][j];
            }
        }
    }
    w
}

pub fn matvec(m: &[Vec<C64>], v: &[C64]) -> Vec<C64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn interleave(f: &SpinorField) -> Vec<C64> {
    f.up()
        .iter()
        .zip(f.down())
        .flat_map(|(&u, &d)| [u, d])
        .collect()
}

/// `−Tr ρ log₂ ρ` from a numerical Hermitian eigendecomposition.
pub fn eigen_entropy(rho: &ReducedCoinDensity) -> f64 {
    let m = Matrix2::new(
        C64::new(rho.g_u, 0.0),
        rho.g_ud,
        rho.g_ud.conj(),
        C64::new(rho.g_d, 0.0),
    );
    let s: f64 = -m
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&l| if l > 0.0 { l * l.log2() } else { 0.0 })
        .sum::<f64>();
    s.clamp(0.0, 1.0)
}

/// Random valid coin density; every tenth draw is diagonal-extreme and every
/// seventh is pure.
pub fn random_density(rng: &mut impl Rng, k: usize) -> ReducedCoinDensity {
    let g_u: f64 = match k % 10 {
        0 => 0.0,
        1 => 1.0,
        _ => rng.random_range(0.0..=1.0),
    };
    let g_d = 1.0 - g_u;
    let scale = if k.is_multiple_of(7) { 1.0 } else { rng.random::<f64>().sqrt() };
    let phase = rng.random_range(0.0..2.0 * std::f64::consts::PI);
    ReducedCoinDensity {
        g_u,
        g_d,
        g_ud: C64::from_polar((g_u * g_d).sqrt() * scale, phase),
    }
}
