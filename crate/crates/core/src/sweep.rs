//! Sparsification-rate and error sweep over trial counts and methods.

use std::fmt::Write as _;
use std::time::Instant;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::metrics::IsotropicMetric;
use crate::rng::trial_rng;
use crate::sparsify::{EdgeSampler, Method};

pub const CSV_HEADER: &str = "r,method,retained_fraction,isotropic_error,seed,wall_ms";

const MAX_REPEATS: usize = 1 << 20;

/// One `(r, method, repeat)` sparsification.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub r: usize,
    pub method: Method,
    pub repeat: usize,
    /// `|Ẽ| / |E|`.
    pub retained_fraction: f64,
    pub isotropic_error: f64,
    /// Seed that reproduces this record through `sparsify(g, method, r, seed)`.
    pub seed: u64,
    pub wall_ms: f64,
    /// Set when the record failed; the numeric fields are then NaN.
    pub failure: Option<String>,
}

impl SweepRecord {
    pub fn is_ok(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepConfig {
    pub r_values: Vec<usize>,
    pub methods: Vec<Method>,
    pub repeats: usize,
    pub seed: u64,
    /// Measure wall time per record. Off by default so output is
    /// reproducible bit-for-bit.
    pub timing: bool,
}

/// Per-record seed, independent of the order of `r_values` and `methods`.
pub fn record_seed(seed: u64, r: usize, method: Method, repeat: usize) -> u64 {
    let method_id = match method {
        Method::Cr => 0u64,
        Method::Er => 1,
    };
    let stream = ((r as u64) << 24) | (method_id << 20) | repeat as u64;
    trial_rng(seed, stream).next_u64()
}

/// Runs every `(r, method, repeat)` combination. Records are ordered by `r`,
/// then method, then repeat. A failing method yields failed records without
/// aborting the sweep.
pub fn run_sweep(g: &WeightedGraph, cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    if cfg.repeats == 0 || cfg.repeats > MAX_REPEATS {
        return Err(Error::InvalidParameter(format!(
            "repeats must lie in 1..={MAX_REPEATS}"
        )));
    }
    if cfg.r_values.contains(&0) {
        return Err(Error::InvalidParameter("r values must be positive".into()));
    }
    if cfg.r_values.iter().any(|&r| r as u64 >= 1 << 40) {
        return Err(Error::InvalidParameter(
            "r values must be below 2^40".into(),
        ));
    }
    let mut r_values = cfg.r_values.clone();
    r_values.sort_unstable();
    r_values.dedup();
    let mut methods = cfg.methods.clone();
    methods.sort_unstable();
    methods.dedup();

    let metric = IsotropicMetric::with_default_tol(&g.laplacian())?;
    let samplers: Vec<(Method, std::result::Result<EdgeSampler<'_>, String>)> = methods
        .iter()
        .map(|&m| (m, EdgeSampler::for_method(g, m).map_err(|e| e.to_string())))
        .collect();

    let mut records = Vec::with_capacity(r_values.len() * methods.len() * cfg.repeats);
    for &r in &r_values {
        for (method, sampler) in &samplers {
            for repeat in 0..cfg.repeats {
                let seed = record_seed(cfg.seed, r, *method, repeat);
                let start = Instant::now();
                let outcome = match sampler {
                    Ok(s) => s.sample(r, &mut trial_rng(seed, 0)).and_then(|out| {
                        let err = metric.error(&out.laplacian())?;
                        Ok((out.retained_fraction(), err))
                    }),
                    Err(msg) => Err(Error::InvalidParameter(msg.clone())),
                };
                let wall_ms = if cfg.timing {
                    start.elapsed().as_secs_f64() * 1e3
                } else {
                    0.0
                };
                let (retained_fraction, isotropic_error, failure) = match outcome {
                    Ok((f, e)) => (f, e, None),
                    Err(e) => (f64::NAN, f64::NAN, Some(e.to_string())),
                };
                records.push(SweepRecord {
                    r,
                    method: *method,
                    repeat,
                    retained_fraction,
                    isotropic_error,
                    seed,
                    wall_ms,
                    failure,
                });
            }
        }
    }
    Ok(records)
}

/// CSV with [`CSV_HEADER`]; reals in scientific notation with 13
/// significant digits.
pub fn records_to_csv(records: &[SweepRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for rec in records {
        let _ = writeln!(
            s,
            "{},{},{:.12e},{:.12e},{},{:.3}",
            rec.r, rec.method, rec.retained_fraction, rec.isotropic_error, rec.seed, rec.wall_ms
        );
    }
    s
}

/// Median over successful records of one `(r, method)` cell.
pub fn median_by(
    records: &[SweepRecord],
    r: usize,
    method: Method,
    field: impl Fn(&SweepRecord) -> f64,
) -> Option<f64> {
    let mut xs: Vec<f64> = records
        .iter()
        .filter(|rec| rec.r == r && rec.method == method && rec.is_ok())
        .map(field)
        .collect();
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    Some(if xs.len().is_multiple_of(2) {
        0.5 * (xs[mid - 1] + xs[mid])
    } else {
        xs[mid]
    })
}
