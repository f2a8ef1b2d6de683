#![allow(dead_code)]

use crsparse::{trial_rng, GeneralMatrix, SymMatrix, WeightedGraph};
use rand::Rng;

/// Connected graph on `n` vertices: a random spanning path plus extra edges,
/// with weights spanning several orders of magnitude.
pub fn skewed_graph(n: usize, extra_prob: f64, seed: u64) -> WeightedGraph {
    let mut rng = trial_rng(seed, 1000);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let mut edges = Vec::new();
    let weight =
        |rng: &mut crsparse::SketchRng| 10f64.powf(rng.random_range(0.0..2.5)).round().max(1.0);
    for w in order.windows(2) {
        let x = weight(&mut rng);
        edges.push((w[0], w[1], x));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < extra_prob {
                let x = weight(&mut rng);
                edges.push((u, v, x));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> GeneralMatrix {
    let mut rng = trial_rng(seed, 2000);
    let data: Vec<f64> = (0..rows * cols)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    GeneralMatrix::from_row_major(rows, cols, &data).unwrap()
}

/// Matrices whose column/row norms differ by up to two orders of magnitude.
pub fn skewed_pair(l: usize, n: usize, m: usize, seed: u64) -> (GeneralMatrix, GeneralMatrix) {
    let mut rng = trial_rng(seed, 3000);
    let scales: Vec<f64> = (0..n)
        .map(|_| 10f64.powf(rng.random_range(-1.0..1.0)))
        .collect();
    let a: Vec<f64> = (0..l * n)
        .map(|k| scales[k % n] * rng.random_range(-1.0..1.0))
        .collect();
    let b: Vec<f64> = (0..n * m)
        .map(|k| scales[k / m] * rng.random_range(-1.0..1.0))
        .collect();
    (
        GeneralMatrix::from_row_major(l, n, &a).unwrap(),
        GeneralMatrix::from_row_major(n, m, &b).unwrap(),
    )
}

pub fn max_abs_diff(a: &SymMatrix, b: &SymMatrix) -> f64 {
    let n = a.n();
    let mut m = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            m = m.max((a.get(i, j) - b.get(i, j)).abs());
        }
    }
    m
}

/// Running per-entry mean and variance (Welford) over square or rectangular
/// matrices given as closures `(i, j) -> value`.
pub struct EntryStats {
    rows: usize,
    cols: usize,
    count: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl EntryStats {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            count: 0,
            mean: vec![0.0; rows * cols],
            m2: vec![0.0; rows * cols],
        }
    }

    pub fn push(&mut self, f: impl Fn(usize, usize) -> f64) {
        self.count += 1;
        let c = self.count as f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let k = i * self.cols + j;
                let x = f(i, j);
                let d = x - self.mean[k];
                self.mean[k] += d / c;
                self.m2[k] += d * (x - self.mean[k]);
            }
        }
    }

    pub fn mean(&self, i: usize, j: usize) -> f64 {
        self.mean[i * self.cols + j]
    }

    /// Standard error of the mean for entry `(i, j)`.
    pub fn std_error(&self, i: usize, j: usize) -> f64 {
        let var = self.m2[i * self.cols + j] / (self.count as f64 - 1.0);
        (var / self.count as f64).sqrt()
    }

    /// Largest `|mean − exact| / SE` over entries with nonzero spread, and the
    /// largest absolute deviation over zero-spread entries.
    pub fn worst_z(&self, exact: impl Fn(usize, usize) -> f64) -> (f64, f64) {
        let mut z = 0.0f64;
        let mut flat = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = (self.mean(i, j) - exact(i, j)).abs();
                let se = self.std_error(i, j);
                if se > 1e-12 * (1.0 + exact(i, j).abs()) {
                    z = z.max(d / se);
                } else {
                    flat = flat.max(d);
                }
            }
        }
        (z, flat)
    }

    /// Like [`EntryStats::worst_z`] restricted to the upper triangle, plus the
    /// number of entries with nonzero spread (the size of the test family).
    pub fn worst_z_upper(&self, exact: impl Fn(usize, usize) -> f64) -> (f64, f64, usize) {
        let mut z = 0.0f64;
        let mut flat = 0.0f64;
        let mut family = 0;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.mean(i, j) - exact(i, j)).abs();
                let se = self.std_error(i, j);
                if se > 1e-12 * (1.0 + exact(i, j).abs()) {
                    family += 1;
                    z = z.max(d / se);
                } else {
                    flat = flat.max(d);
                }
            }
        }
        (z, flat, family)
    }

    /// `‖mean − exact‖_F`.
    pub fn frobenius_gap(&self, exact: impl Fn(usize, usize) -> f64) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self.mean(i, j) - exact(i, j);
                s += d * d;
            }
        }
        s.sqrt()
    }
}

/// Two-sided z threshold giving a family of `k` tests the same overall
/// false-alarm rate (0.27%) as a single 3-sigma test (Šidák correction).
pub fn family_z(k: usize) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    let alpha = 0.0027f64;
    let per_test = 1.0 - (1.0 - alpha).powf(1.0 / k.max(1) as f64);
    Normal::standard().inverse_cdf(1.0 - per_test / 2.0)
}

pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
