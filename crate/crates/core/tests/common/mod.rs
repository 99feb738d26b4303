#![allow(dead_code)]

use cqexp_core::{CQChannel, DensityMatrix, HermitianMatrix, Prior};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn ginibre(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| Complex64::new(gaussian(rng), gaussian(rng)))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> HermitianMatrix {
    let g = ginibre(rng, d, d);
    HermitianMatrix::hermitized(&g + g.adjoint())
}

/// Random state of the given rank (full rank by default).
pub fn random_density_rank(rng: &mut ChaCha8Rng, d: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, d, rank);
    DensityMatrix::normalized(HermitianMatrix::hermitized(&g * g.adjoint())).unwrap()
}

pub fn random_density(rng: &mut ChaCha8Rng, d: usize) -> DensityMatrix {
    random_density_rank(rng, d, d)
}

pub fn random_psd(rng: &mut ChaCha8Rng, d: usize) -> HermitianMatrix {
    let g = ginibre(rng, d, d);
    HermitianMatrix::hermitized(&g * g.adjoint())
}

/// `exp(iH)` for a random Hermitian `H`.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<Complex64> {
    let e = random_hermitian(rng, d).eig();
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        d,
        e.values.iter().map(|l| Complex64::new(l.cos(), l.sin())),
    ));
    &e.vectors * phases * e.vectors.adjoint()
}

pub fn conjugate(u: &DMatrix<Complex64>, h: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::hermitized(u * h.matrix() * u.adjoint())
}

pub fn random_probabilities(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

pub fn random_prior(rng: &mut ChaCha8Rng, k: usize) -> Prior {
    Prior::new(random_probabilities(rng, k)).unwrap()
}

pub fn random_stochastic(rng: &mut ChaCha8Rng, k: usize, d: usize) -> Vec<Vec<f64>> {
    (0..k).map(|_| random_probabilities(rng, d)).collect()
}

pub fn random_channel(rng: &mut ChaCha8Rng, k: usize, d: usize) -> CQChannel {
    CQChannel::from_outputs((0..k).map(|_| random_density(rng, d)).collect()).unwrap()
}

pub fn bsc(flip: f64) -> Vec<Vec<f64>> {
    vec![vec![1.0 - flip, flip], vec![flip, 1.0 - flip]]
}

/// Gallager's `E_0(s, p) = −log₂ Σ_y (Σ_x p_x W(y|x)^{1/(1+s)})^{1+s}`.
pub fn gallager_e0(w: &[Vec<f64>], p: &[f64], s: f64) -> f64 {
    let dy = w[0].len();
    let total: f64 = (0..dy)
        .map(|y| {
            let inner: f64 = w.iter().zip(p).map(|(row, px)| px * row[y].powf(1.0 / (1.0 + s))).sum();
            inner.powf(1.0 + s)
        })
        .sum();
    -total.log2()
}

/// Classical Sibson information `I_α(W, p)` through the Gallager function.
pub fn classical_renyi_mi(w: &[Vec<f64>], p: &[f64], alpha: f64) -> f64 {
    let s = (1.0 - alpha) / alpha;
    gallager_e0(w, p, s) / s
}

pub fn mutual_information(w: &[Vec<f64>], p: &[f64]) -> f64 {
    let dy = w[0].len();
    let mut total = 0.0;
    for y in 0..dy {
        let py: f64 = w.iter().zip(p).map(|(row, px)| px * row[y]).sum();
        for (row, px) in w.iter().zip(p) {
            if px * row[y] > 0.0 {
                total += px * row[y] * (row[y] / py).log2();
            }
        }
    }
    total
}

pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Maximizes `f` over a 1-D grid of binary priors `(q, 1−q)`.
pub fn binary_grid_max(step: f64, mut f: impl FnMut(&[f64]) -> f64) -> (f64, f64) {
    let steps = (1.0 / step).round() as usize;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..=steps {
        let q = i as f64 / steps as f64;
        let v = f(&[q, 1.0 - q]);
        if v > best.0 {
            best = (v, q);
        }
    }
    best
}

pub fn max_abs_diff(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    a.sub(b).max_abs()
}

/// Reorders tensor factors: output factor `i` is input factor `perm[i]`.
pub fn permute_subsystems(m: &HermitianMatrix, dims: &[usize], perm: &[usize]) -> HermitianMatrix {
    let n = m.dim();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let digits = |mut idx: usize, ds: &[usize]| -> Vec<usize> {
        let mut out = vec![0; ds.len()];
        for k in (0..ds.len()).rev() {
            out[k] = idx % ds[k];
            idx /= ds[k];
        }
        out
    };
    let map: Vec<usize> = (0..n)
        .map(|new_idx| {
            let nd = digits(new_idx, &new_dims);
            let mut old = vec![0; dims.len()];
            for (i, &p) in perm.iter().enumerate() {
                old[p] = nd[i];
            }
            old.iter().zip(dims).fold(0, |acc, (&d, &size)| acc * size + d)
        })
        .collect();
    HermitianMatrix::hermitized(DMatrix::from_fn(n, n, |i, j| m.get(map[i], map[j])))
}

/// Classical Rényi divergence of probability vectors.
pub fn classical_renyi(p: &[f64], q: &[f64], alpha: f64) -> f64 {
    if (alpha - 1.0).abs() < 1e-15 {
        return p.iter().zip(q).filter(|(a, _)| **a > 0.0).map(|(a, b)| a * (a / b).log2()).sum();
    }
    let s: f64 = p.iter().zip(q).filter(|(a, _)| **a > 0.0).map(|(a, b)| a.powf(alpha) * b.powf(1.0 - alpha)).sum();
    s.log2() / (alpha - 1.0)
}
