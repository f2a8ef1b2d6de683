//! CR approximate matrix multiplication.
//!
//! `AB ≈ Σ_{j∈𝒮} A^{(j)} B_{(j)} / (r·p_j)` where the `r` indices of `𝒮` are
//! drawn with replacement from `p_i ∝ ‖A^{(i)}‖₂·‖B_{(i)}‖₂`. The estimator is
//! unbiased and this choice of `p` minimizes `E‖AB − Y‖_F²`.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, GeneralMatrix};
use crate::rng::trial_rng;

/// A probability vector over `N` indices with an inverse-CDF sampler.
///
/// Zero-probability indices are excluded from the CDF and can never be drawn.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplingDistribution {
    probs: Vec<f64>,
    support: Vec<usize>,
    cdf: Vec<f64>,
}

impl SamplingDistribution {
    /// Normalizes nonnegative weights into probabilities.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if let Some(bad) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "sampling weight {bad} is negative or non-finite"
            )));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::DegenerateDistribution);
        }
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let support: Vec<usize> = (0..probs.len()).filter(|&i| probs[i] > 0.0).collect();
        let mut acc = 0.0;
        let cdf = support
            .iter()
            .map(|&i| {
                acc += probs[i];
                acc
            })
            .collect();
        Ok(Self {
            probs,
            support,
            cdf,
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_weights(&vec![1.0; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Indices with positive probability, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// One draw by inverse CDF, `O(log N)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().expect("support is non-empty");
        let u = rng.random::<f64>() * total;
        let k = self.cdf.partition_point(|&c| c <= u);
        self.support[k.min(self.support.len() - 1)]
    }

    /// `r` independent draws with replacement.
    pub fn draw<R: Rng + ?Sized>(&self, r: usize, rng: &mut R) -> SampleMultiset {
        let draws = (0..r).map(|_| self.sample(rng)).collect();
        SampleMultiset::new(draws, self.len())
    }
}

/// The multiset `𝒮` of `r` sampled indices, in draw order, with counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleMultiset {
    draws: Vec<usize>,
    counts: Vec<usize>,
}

impl SampleMultiset {
    pub fn new(draws: Vec<usize>, universe: usize) -> Self {
        let mut counts = vec![0; universe];
        for &d in &draws {
            counts[d] += 1;
        }
        Self { draws, counts }
    }

    /// Number of sampling trials, `|𝒮|`.
    pub fn r(&self) -> usize {
        self.draws.len()
    }

    pub fn draws(&self) -> &[usize] {
        &self.draws
    }

    /// Per-index multiplicities, length `N`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of distinct indices drawn.
    pub fn distinct(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// Output of [`cr_multiply`]. `C` and `R` are built on demand by
/// [`CrProduct::factors`].
#[derive(Clone, Debug)]
pub struct CrProduct {
    pub y: GeneralMatrix,
    pub samples: SampleMultiset,
    pub distribution: SamplingDistribution,
}

impl CrProduct {
    /// The compressed factors `C ∈ ℝ^{L×r}` and `R ∈ ℝ^{r×M}`; column `j` of
    /// `C` is `A^{(i_j)}/√(r·p_{i_j})` for the `j`-th draw, and likewise for
    /// the rows of `R`.
    pub fn factors(
        &self,
        a: &GeneralMatrix,
        b: &GeneralMatrix,
    ) -> Result<(GeneralMatrix, GeneralMatrix)> {
        check_shapes(a, b)?;
        let r = self.samples.r();
        let (ad, bd) = (a.as_dense(), b.as_dense());
        let scale = |i: usize| 1.0 / (r as f64 * self.distribution.prob(i)).sqrt();
        let draws = self.samples.draws();
        let c = DMatrix::from_fn(a.rows(), r, |row, j| ad[(row, draws[j])] * scale(draws[j]));
        let rr = DMatrix::from_fn(r, b.cols(), |j, col| bd[(draws[j], col)] * scale(draws[j]));
        Ok((
            GeneralMatrix::from_dense(c)?,
            GeneralMatrix::from_dense(rr)?,
        ))
    }
}

fn check_shapes(a: &GeneralMatrix, b: &GeneralMatrix) -> Result<()> {
    if a.cols() != b.rows() {
        return Err(Error::Shape(format!(
            "A is {}x{} but B is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidMatrix);
    }
    Ok(())
}

/// `p_i = ‖A^{(i)}‖₂‖B_{(i)}‖₂ / Σ_l ‖A^{(l)}‖₂‖B_{(l)}‖₂`.
pub fn cr_probabilities(a: &GeneralMatrix, b: &GeneralMatrix) -> Result<SamplingDistribution> {
    check_shapes(a, b)?;
    let weights: Vec<f64> = (0..a.cols())
        .map(|i| a.column_norm(i) * b.row_norm(i))
        .collect();
    SamplingDistribution::from_weights(&weights)
}

/// CR product with a caller-supplied distribution and generator.
pub fn cr_multiply_with<R: Rng + ?Sized>(
    a: &GeneralMatrix,
    b: &GeneralMatrix,
    dist: &SamplingDistribution,
    r: usize,
    rng: &mut R,
) -> Result<CrProduct> {
    check_shapes(a, b)?;
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    if dist.len() != a.cols() {
        return Err(Error::Shape(format!(
            "distribution has {} entries, inner dimension is {}",
            dist.len(),
            a.cols()
        )));
    }
    let samples = dist.draw(r, rng);
    let (ad, bd) = (a.as_dense(), b.as_dense());
    let mut y = DMatrix::zeros(a.rows(), b.cols());
    for (i, &count) in samples.counts().iter().enumerate() {
        if count == 0 {
            continue;
        }
        let coef = count as f64 / (r as f64 * dist.prob(i));
        y.ger(coef, &ad.column(i), &bd.row(i).transpose(), 1.0);
    }
    Ok(CrProduct {
        y: GeneralMatrix::from_dense(y)?,
        samples,
        distribution: dist.clone(),
    })
}

/// CR product with norm-proportional probabilities; deterministic in `seed`.
pub fn cr_multiply(a: &GeneralMatrix, b: &GeneralMatrix, r: usize, seed: u64) -> Result<CrProduct> {
    let dist = cr_probabilities(a, b)?;
    cr_multiply_with(a, b, &dist, r, &mut trial_rng(seed, 0))
}

/// `‖AB − Y‖_F` for `trials` independent runs; run `t` uses stream `t` of `seed`.
pub fn frobenius_errors(
    a: &GeneralMatrix,
    b: &GeneralMatrix,
    dist: &SamplingDistribution,
    r: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let exact = a.matmul(b)?;
    (0..trials as u64)
        .map(|t| {
            let prod = cr_multiply_with(a, b, dist, r, &mut trial_rng(seed, t))?;
            Ok(frobenius_norm(&exact.sub(&prod.y)?))
        })
        .collect()
}

/// Monte Carlo estimate of `E‖AB − Y‖_F²` under norm-proportional sampling.
pub fn empirical_variance(
    a: &GeneralMatrix,
    b: &GeneralMatrix,
    r: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let dist = cr_probabilities(a, b)?;
    empirical_variance_with(a, b, &dist, r, trials, seed)
}

/// As [`empirical_variance`] with an arbitrary distribution.
pub fn empirical_variance_with(
    a: &GeneralMatrix,
    b: &GeneralMatrix,
    dist: &SamplingDistribution,
    r: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials < 2 {
        return Err(Error::InvalidParameter("need at least 2 trials".into()));
    }
    let errs = frobenius_errors(a, b, dist, r, trials, seed)?;
    Ok(errs.iter().map(|e| e * e).sum::<f64>() / trials as f64)
}

fn ceil_count(x: f64) -> u64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * x.abs().max(1.0) {
        nearest as u64
    } else {
        x.ceil() as u64
    }
}

fn require_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive, got {x}"
        )))
    }
}

fn require_eps_delta(eps: f64, delta: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1], got {delta}"
        )));
    }
    Ok(())
}

/// Trials for `‖AB − CR‖_F ≤ ε‖A‖_F‖B‖_F` with probability `1 − δ`:
/// `⌈1/(δ²ε²)⌉`.
pub fn r_min_frobenius(eps: f64, delta: f64) -> Result<u64> {
    require_positive("eps", eps)?;
    require_positive("delta", delta)?;
    Ok(ceil_count(1.0 / (delta * delta * eps * eps)))
}

/// Trials for `‖AAᵀ − Y‖₂ ≤ ε` with probability `1 − δ` when `‖A‖₂ ≤ 1`:
/// `⌈(96‖A‖_F²/ε²)·ln(96‖A‖_F²/(ε²√δ))⌉`. Requires `‖A‖_F² ≥ 1/24`.
pub fn r_min_spectral(frobsq: f64, eps: f64, delta: f64) -> Result<u64> {
    require_eps_delta(eps, delta)?;
    if frobsq.is_nan() || frobsq < 1.0 / 24.0 {
        return Err(Error::AssumptionViolated(format!(
            "squared Frobenius norm {frobsq} is below 1/24"
        )));
    }
    let x = 96.0 * frobsq / (eps * eps);
    Ok(ceil_count(x * (x / delta.sqrt()).ln()))
}

/// Trials for the multiplicative guarantee of the CR sparsifier:
/// `⌈6γ²·ln(γ²/√δ)⌉` with `γ = 8W/(ε·σ_max(B))`.
pub fn r_min_prop2(total_weight: f64, sigma_max_b: f64, eps: f64, delta: f64) -> Result<u64> {
    require_positive("W", total_weight)?;
    require_positive("sigma_max(B)", sigma_max_b)?;
    require_eps_delta(eps, delta)?;
    let gamma = 8.0 * total_weight / (eps * sigma_max_b);
    let g2 = gamma * gamma;
    Ok(ceil_count(6.0 * g2 * (g2 / delta.sqrt()).ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> GeneralMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<f64> = (0..rows * cols)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        GeneralMatrix::from_row_major(rows, cols, &data).unwrap()
    }

    #[test]
    fn identity_probabilities() {
        let id = GeneralMatrix::from_dense(DMatrix::identity(2, 2)).unwrap();
        assert_eq!(cr_probabilities(&id, &id).unwrap().probs(), &[0.5, 0.5]);
    }

    #[test]
    fn probabilities_are_scale_invariant() {
        let a = random_matrix(3, 5, 1);
        let b = random_matrix(5, 2, 2);
        let p = cr_probabilities(&a, &b).unwrap();
        let q = cr_probabilities(&a.scale(7.5), &b).unwrap();
        for (x, y) in p.probs().iter().zip(q.probs()) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn probability_errors() {
        let a = random_matrix(3, 4, 1);
        let b = random_matrix(5, 2, 2);
        assert!(matches!(cr_probabilities(&a, &b), Err(Error::Shape(_))));
        let z = GeneralMatrix::zeros(3, 4);
        let b = random_matrix(4, 2, 2);
        assert!(matches!(
            cr_probabilities(&z, &b),
            Err(Error::DegenerateDistribution)
        ));
        assert!(matches!(
            cr_multiply(&z, &b, 3, 0),
            Err(Error::DegenerateDistribution)
        ));
    }

    #[test]
    fn zero_probability_indices_never_drawn() {
        let d = SamplingDistribution::from_weights(&[0.0, 1.0, 0.0, 3.0, 0.0]).unwrap();
        assert_eq!(d.support(), &[1, 3]);
        let s = d.draw(10_000, &mut trial_rng(3, 0));
        assert_eq!(s.counts()[0] + s.counts()[2] + s.counts()[4], 0);
        let frac = s.counts()[3] as f64 / 10_000.0;
        assert!((frac - 0.75).abs() < 0.02);
    }

    #[test]
    fn single_pair_is_exact() {
        let a = random_matrix(3, 1, 4);
        let b = random_matrix(1, 2, 5);
        let exact = a.matmul(&b).unwrap();
        for (r, seed) in [(1, 0), (5, 9), (17, 3)] {
            let prod = cr_multiply(&a, &b, r, seed).unwrap();
            assert!(frobenius_norm(&exact.sub(&prod.y).unwrap()) < 1e-14);
        }
        assert!(empirical_variance(&a, &b, 4, 10, 1).unwrap() < 1e-28);
    }

    #[test]
    fn factors_reproduce_y() {
        let a = random_matrix(4, 6, 1);
        let b = random_matrix(6, 3, 2);
        let prod = cr_multiply(&a, &b, 9, 42).unwrap();
        let (c, r) = prod.factors(&a, &b).unwrap();
        assert_eq!((c.rows(), c.cols(), r.rows(), r.cols()), (4, 9, 9, 3));
        let cr = c.matmul(&r).unwrap();
        let rel = frobenius_norm(&cr.sub(&prod.y).unwrap()) / frobenius_norm(&prod.y);
        assert!(rel < 1e-10);
        let j = 0;
        let i = prod.samples.draws()[j];
        let s = (9.0 * prod.distribution.prob(i)).sqrt();
        assert!((c.get(2, j) - a.get(2, i) / s).abs() < 1e-15);
    }

    #[test]
    fn same_seed_same_result() {
        let a = random_matrix(4, 6, 1);
        let b = random_matrix(6, 3, 2);
        let x = cr_multiply(&a, &b, 11, 5).unwrap();
        let y = cr_multiply(&a, &b, 11, 5).unwrap();
        assert_eq!(x.samples, y.samples);
        assert_eq!(x.y, y.y);
        assert_eq!(x.samples.r(), 11);
    }

    #[test]
    fn variance_needs_two_trials() {
        let a = random_matrix(2, 2, 1);
        assert!(empirical_variance(&a, &a, 2, 1, 0).is_err());
    }

    #[test]
    fn frobenius_bound_examples() {
        assert_eq!(r_min_frobenius(0.5, 0.25).unwrap(), 64);
        assert_eq!(r_min_frobenius(1.0, 1.0).unwrap(), 1);
        assert_eq!(r_min_frobenius(0.1, 0.1).unwrap(), 10_000);
        assert!(r_min_frobenius(0.0, 0.5).is_err());
        assert!(r_min_frobenius(0.5, -1.0).is_err());
    }

    #[test]
    fn spectral_bound_examples() {
        // 384·ln 384 = 2285.0467…
        assert_eq!(r_min_spectral(1.0, 0.5, 1.0).unwrap(), 2286);
        // At the floor ‖A‖_F² = 1/24 the two sides of the chained bound agree.
        for (eps, delta) in [(0.3, 0.1), (0.5, 1.0), (0.9, 0.5)] {
            let floor =
                (4.0 / (eps * eps) * (4.0 / (eps * eps * f64::sqrt(delta))).ln()).ceil() as u64;
            assert!(r_min_spectral(1.0 / 24.0, eps, delta).unwrap() >= floor);
        }
        assert!(matches!(
            r_min_spectral(0.04, 0.5, 0.5),
            Err(Error::AssumptionViolated(_))
        ));
        assert!(r_min_spectral(1.0, 1.0, 0.5).is_err());
        assert!(r_min_spectral(1.0, 0.5, 0.0).is_err());
        let mut prev = 0;
        for k in 0..40 {
            let f = 1.0 / 24.0 + k as f64 * 0.37;
            let r = r_min_spectral(f, 0.4, 0.2).unwrap();
            assert!(r >= prev);
            prev = r;
        }
    }

    #[test]
    fn sparsifier_bound_examples() {
        // γ = 8, 384·ln 64 = 1597.011…
        assert_eq!(r_min_prop2(1.0, 2.0, 0.5, 1.0).unwrap(), 1598);
        let base = r_min_prop2(1.0, 2.0, 0.5, 0.5).unwrap();
        let doubled = r_min_prop2(2.0, 2.0, 0.5, 0.5).unwrap();
        assert!(doubled > 4 * base);
        assert!(r_min_prop2(1.0, 2.0, 0.5, 0.01).unwrap() > base);
        assert!(r_min_prop2(0.0, 2.0, 0.5, 0.5).is_err());
        assert!(r_min_prop2(1.0, -2.0, 0.5, 0.5).is_err());
    }
}
