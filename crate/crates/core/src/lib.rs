//! Spectral sparsification of weighted undirected graphs by CR approximate
//! matrix multiplication on the boundary matrix, with an effective-resistance
//! baseline and additive / multiplicative error metrics.
//!
//! ```
//! use crsparse::{cr_sparsify, gen_barbell, IsotropicMetric};
//!
//! let g = gen_barbell(6, 3, 10, 1).unwrap();
//! let out = cr_sparsify(&g, 200, 7).unwrap();
//! let metric = IsotropicMetric::with_default_tol(&g.laplacian()).unwrap();
//! let err = metric.error(&out.laplacian()).unwrap();
//! assert!(err >= 0.0 && out.retained_fraction() <= 1.0);
//! ```

pub mod crmm;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod rng;
pub mod sparsify;
pub mod sweep;

pub use crmm::{
    cr_multiply, cr_multiply_with, cr_probabilities, empirical_variance, empirical_variance_with,
    frobenius_errors, r_min_frobenius, r_min_prop2, r_min_spectral, CrProduct, SampleMultiset,
    SamplingDistribution,
};
pub use error::{Error, Result};
pub use generate::{gen_barbell, gen_random};
pub use graph::{laplacian_from_boundary, Edge, IncidenceVector, WeightedGraph};
pub use io::{format_graph, parse_graph, read_graph, write_atomic, write_graph, ParsedGraph};
pub use linalg::{
    condition_number_laplacian, default_null_tol, eig_sym, frobenius_norm, pseudo_inv_sqrt,
    spectral_norm, GeneralMatrix, Spectrum, SymMatrix,
};
pub use metrics::{
    additive_error, check_additive_certificate, check_multiplicative_certificate, isotropic_error,
    quadratic_form_ratio, ErrorReport, IsotropicMetric,
};
pub use rng::{trial_rng, SketchRng};
pub use sparsify::{
    aligned_boundaries, cr_sparsify, effective_resistances, er_sparsify, intersection_approx,
    sparsify, EdgeSampler, Method, ResistanceTable, SketchingDiag, SparsifyOutput,
};
pub use sweep::{records_to_csv, run_sweep, SweepConfig, SweepRecord, CSV_HEADER};
