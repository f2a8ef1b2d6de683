//! Monte Carlo checks of the CR estimator: unbiasedness, variance
//! optimality, 1/r variance decay and the Frobenius tail bound.

mod common;

use common::{family_z, mean_and_se, random_matrix, skewed_pair, EntryStats};
use crsparse::{
    cr_multiply, cr_multiply_with, cr_probabilities, empirical_variance, empirical_variance_with,
    frobenius_errors, frobenius_norm, r_min_frobenius, trial_rng, SamplingDistribution,
};

#[test]
fn mean_of_estimates_matches_product() {
    let a = random_matrix(4, 6, 1);
    let b = random_matrix(6, 3, 2);
    let exact = a.matmul(&b).unwrap();
    let dist = cr_probabilities(&a, &b).unwrap();
    let mut stats = EntryStats::new(4, 3);
    for t in 0..20_000 {
        let y = cr_multiply_with(&a, &b, &dist, 3, &mut trial_rng(11, t))
            .unwrap()
            .y;
        stats.push(|i, j| y.get(i, j));
    }
    let rel = stats.frobenius_gap(|i, j| exact.get(i, j)) / frobenius_norm(&exact);
    assert!(rel <= 0.02, "relative gap {rel}");
    let (z, flat) = stats.worst_z(|i, j| exact.get(i, j));
    assert!(z <= family_z(12), "worst z-score {z}");
    assert!(flat <= 1e-12);
}

#[test]
fn rms_error_scales_as_inverse_sqrt_r() {
    let a = random_matrix(4, 6, 1);
    let b = random_matrix(6, 3, 2);
    let dist = cr_probabilities(&a, &b).unwrap();
    let rms = |r: usize| {
        let e = frobenius_errors(&a, &b, &dist, r, 4000, 5).unwrap();
        (e.iter().map(|x| x * x).sum::<f64>() / e.len() as f64).sqrt()
    };
    let ratio = rms(64) / rms(32);
    assert!((ratio * 2f64.sqrt() - 1.0).abs() <= 0.2, "ratio {ratio}");
}

#[test]
fn variance_halves_when_r_doubles() {
    let (a, b) = skewed_pair(5, 12, 4, 3);
    let v1 = empirical_variance(&a, &b, 10, 20_000, 1).unwrap();
    let v2 = empirical_variance(&a, &b, 20, 20_000, 2).unwrap();
    assert!((v2 / v1 - 0.5).abs() <= 0.5 * 0.15, "ratio {}", v2 / v1);
}

#[test]
fn norm_proportional_probabilities_minimize_variance() {
    for pair in 0..10 {
        let (a, b) = skewed_pair(5, 10, 4, 100 + pair);
        let n = a.cols();
        let optimal = cr_probabilities(&a, &b).unwrap();
        let alternatives = [
            SamplingDistribution::uniform(n).unwrap(),
            SamplingDistribution::from_weights(&(1..=n).map(|i| i as f64).collect::<Vec<_>>())
                .unwrap(),
            // Over-concentrated: squares of the optimal weights.
            SamplingDistribution::from_weights(
                &(0..n)
                    .map(|i| (a.column_norm(i) * b.row_norm(i)).powi(2))
                    .collect::<Vec<_>>(),
            )
            .unwrap(),
        ];
        let sq = |d: &SamplingDistribution, seed| -> Vec<f64> {
            frobenius_errors(&a, &b, d, 4, 20_000, seed)
                .unwrap()
                .into_iter()
                .map(|e| e * e)
                .collect()
        };
        let (v_opt, se_opt) = mean_and_se(&sq(&optimal, 1));
        for (k, alt) in alternatives.iter().enumerate() {
            let (v_alt, se_alt) = mean_and_se(&sq(alt, 2 + k as u64));
            assert!(
                v_opt < v_alt,
                "pair {pair} alt {k}: {v_opt} ± {se_opt} vs {v_alt} ± {se_alt}"
            );
        }
        let v = empirical_variance_with(&a, &b, &optimal, 4, 2000, 9).unwrap();
        assert!(v > 0.0);
    }
}

#[test]
fn frobenius_tail_bound_holds() {
    let (eps, delta) = (0.5, 0.25);
    let r = r_min_frobenius(eps, delta).unwrap() as usize;
    let a = random_matrix(5, 8, 7);
    let b = random_matrix(8, 6, 8);
    let bound = eps * frobenius_norm(&a) * frobenius_norm(&b);
    let dist = cr_probabilities(&a, &b).unwrap();
    let errs = frobenius_errors(&a, &b, &dist, r, 5000, 3).unwrap();
    let hit = errs.iter().filter(|&&e| e <= bound).count() as f64 / 5000.0;
    assert!(hit >= 1.0 - delta, "coverage {hit}");
}

#[test]
fn cr_multiply_is_deterministic() {
    let (a, b) = skewed_pair(3, 7, 2, 1);
    let x = cr_multiply(&a, &b, 13, 77).unwrap();
    let y = cr_multiply(&a, &b, 13, 77).unwrap();
    assert_eq!(x.samples, y.samples);
    assert_eq!(x.y.as_dense().as_slice(), y.y.as_dense().as_slice());
}
