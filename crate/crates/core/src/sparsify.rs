//! Edge-sampling sparsifiers.
//!
//! The CR sparsifier draws `r` edges with replacement from `p_e = w_e/W` and
//! gives each draw weight `W/r`, so `L̃ = BᵀSB` with the diagonal sketching
//! matrix `S_ee = count(e)/(r·p_e)`. The effective-resistance baseline draws
//! from `q_e ∝ w_e·r_e` instead and reweights by `w_e/(r·q_e)`. Repeated
//! draws of one edge collapse into a single heavier edge.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::crmm::{cr_multiply, SampleMultiset, SamplingDistribution};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{default_null_tol, pseudo_inv_sqrt, GeneralMatrix, SymMatrix};
use crate::rng::trial_rng;

/// Sampling scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Weight-proportional sampling (CR matrix multiplication on `BᵀB`).
    Cr,
    /// Effective-resistance sampling.
    Er,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Cr => "CR",
            Method::Er => "ER",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cr" => Ok(Method::Cr),
            "er" => Ok(Method::Er),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

/// Diagonal of the sketching matrix `S`, one entry per source edge.
#[derive(Clone, Debug, PartialEq)]
pub struct SketchingDiag {
    pub r: usize,
    pub entries: Vec<f64>,
}

impl SketchingDiag {
    /// `B̃ = √S·B`.
    pub fn sketched_boundary(&self, b: &GeneralMatrix) -> Result<GeneralMatrix> {
        if b.rows() != self.entries.len() {
            return Err(Error::Shape(format!(
                "boundary has {} rows, sketch has {} entries",
                b.rows(),
                self.entries.len()
            )));
        }
        let mut d = b.as_dense().clone();
        for (row, s) in self.entries.iter().enumerate() {
            let f = s.sqrt();
            d.row_mut(row).scale_mut(f);
        }
        GeneralMatrix::from_dense(d)
    }

    /// `BᵀSB`.
    pub fn weighted_gram(&self, b: &GeneralMatrix) -> Result<SymMatrix> {
        let bt = self.sketched_boundary(b)?;
        let d = bt.as_dense();
        SymMatrix::from_dense(d.transpose() * d)
    }
}

/// A sparsified graph together with the sampling record that produced it.
#[derive(Clone, Debug)]
pub struct SparsifyOutput {
    pub sketch: WeightedGraph,
    pub s: SketchingDiag,
    pub samples: SampleMultiset,
    /// Total weight `W` of the source graph.
    pub source_w: f64,
    pub source_m: usize,
}

impl SparsifyOutput {
    pub fn r(&self) -> usize {
        self.samples.r()
    }

    pub fn distinct_edges(&self) -> usize {
        self.sketch.m()
    }

    /// `|Ẽ| / |E|`.
    pub fn retained_fraction(&self) -> f64 {
        self.sketch.m() as f64 / self.source_m as f64
    }

    pub fn laplacian(&self) -> SymMatrix {
        self.sketch.laplacian()
    }
}

#[derive(Clone, Debug)]
enum Reweight {
    /// Every draw adds `W/r`.
    Uniform { total_weight: f64 },
    /// A draw of `e` adds `w_e/(r·q_e)`.
    Importance,
}

/// Prepared edge sampler: the distribution is built once and reused across
/// trials.
#[derive(Clone, Debug)]
pub struct EdgeSampler<'g> {
    graph: &'g WeightedGraph,
    dist: SamplingDistribution,
    reweight: Reweight,
}

impl<'g> EdgeSampler<'g> {
    /// `p_e = w_e / W`.
    pub fn cr(graph: &'g WeightedGraph) -> Result<Self> {
        if graph.m() == 0 {
            return Err(Error::NoEdges);
        }
        Ok(Self {
            graph,
            dist: SamplingDistribution::from_weights(&graph.weights())?,
            reweight: Reweight::Uniform {
                total_weight: graph.total_weight(),
            },
        })
    }

    /// `q_e ∝ w_e·r_e`, with exact effective resistances.
    pub fn er(graph: &'g WeightedGraph) -> Result<Self> {
        let table = effective_resistances(graph)?;
        Self::er_from_table(graph, &table)
    }

    pub fn er_from_table(graph: &'g WeightedGraph, table: &ResistanceTable) -> Result<Self> {
        if graph.m() == 0 {
            return Err(Error::NoEdges);
        }
        let leverage: Vec<f64> = graph
            .edges()
            .iter()
            .zip(table.values())
            .map(|(e, r)| e.w * r)
            .collect();
        Self::with_weights(graph, &leverage)
    }

    /// Arbitrary sampling weights (normalized internally) with unbiased
    /// importance reweighting.
    pub fn with_weights(graph: &'g WeightedGraph, weights: &[f64]) -> Result<Self> {
        if graph.m() == 0 {
            return Err(Error::NoEdges);
        }
        if weights.len() != graph.m() {
            return Err(Error::Shape(format!(
                "{} sampling weights for {} edges",
                weights.len(),
                graph.m()
            )));
        }
        let dist = SamplingDistribution::from_weights(weights)?;
        if dist.support().len() != graph.m() {
            // An edge that can never be drawn makes the estimator biased.
            return Err(Error::InvalidParameter(
                "every edge needs positive sampling probability".into(),
            ));
        }
        Ok(Self {
            graph,
            dist,
            reweight: Reweight::Importance,
        })
    }

    pub fn for_method(graph: &'g WeightedGraph, method: Method) -> Result<Self> {
        match method {
            Method::Cr => Self::cr(graph),
            Method::Er => Self::er(graph),
        }
    }

    pub fn distribution(&self) -> &SamplingDistribution {
        &self.dist
    }

    pub fn sample<R: Rng + ?Sized>(&self, r: usize, rng: &mut R) -> Result<SparsifyOutput> {
        if r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        let samples = self.dist.draw(r, rng);
        let rf = r as f64;
        let edges = self.graph.edges();
        let mut s = vec![0.0; edges.len()];
        let mut kept = Vec::with_capacity(samples.distinct());
        for (e, &count) in samples.counts().iter().enumerate() {
            if count == 0 {
                continue;
            }
            let edge = edges[e];
            let c = count as f64;
            let w_new = match self.reweight {
                Reweight::Uniform { total_weight } if count == r => total_weight,
                Reweight::Uniform { total_weight } => c * total_weight / rf,
                Reweight::Importance => c * edge.w / (rf * self.dist.prob(e)),
            };
            s[e] = w_new / edge.w;
            kept.push((edge.u, edge.v, w_new));
        }
        Ok(SparsifyOutput {
            sketch: WeightedGraph::new(self.graph.n(), kept)?,
            s: SketchingDiag { r, entries: s },
            samples,
            source_w: self.graph.total_weight(),
            source_m: self.graph.m(),
        })
    }
}

/// CR spectral sparsifier with `r` trials; deterministic in `seed`.
pub fn cr_sparsify(g: &WeightedGraph, r: usize, seed: u64) -> Result<SparsifyOutput> {
    EdgeSampler::cr(g)?.sample(r, &mut trial_rng(seed, 0))
}

/// Effective-resistance sparsifier with `r` trials; deterministic in `seed`.
pub fn er_sparsify(g: &WeightedGraph, r: usize, seed: u64) -> Result<SparsifyOutput> {
    EdgeSampler::er(g)?.sample(r, &mut trial_rng(seed, 0))
}

pub fn sparsify(g: &WeightedGraph, method: Method, r: usize, seed: u64) -> Result<SparsifyOutput> {
    EdgeSampler::for_method(g, method)?.sample(r, &mut trial_rng(seed, 0))
}

/// Effective resistances `r_e = ‖L^{-1/2}χ_e‖₂²` and the CR rescaling
/// `Π = diag(w_e/W)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResistanceTable {
    resistances: Vec<f64>,
    pi: Vec<f64>,
    n: usize,
    endpoints: Vec<(usize, usize)>,
}

impl ResistanceTable {
    pub fn values(&self) -> &[f64] {
        &self.resistances
    }

    pub fn resistance(&self, e: usize) -> f64 {
        self.resistances[e]
    }

    /// Diagonal of `Π`.
    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    /// `x_e = √Π_ee · χ_e`. Since `‖χ_e‖² = 2`, `‖x_e‖² = 2·w_e/W`.
    pub fn cr_vector(&self, e: usize) -> Vec<f64> {
        let (u, v) = self.endpoints[e];
        let s = self.pi[e].sqrt();
        let mut x = vec![0.0; self.n];
        x[u] = s;
        x[v] = -s;
        x
    }
}

pub fn effective_resistances(g: &WeightedGraph) -> Result<ResistanceTable> {
    let comps = g.connected_components();
    if comps != 1 {
        return Err(Error::DisconnectedGraph { components: comps });
    }
    let p = pseudo_inv_sqrt(&g.laplacian(), default_null_tol(g.n()))?;
    let pd = p.as_dense();
    let resistances = g
        .edges()
        .iter()
        .map(|e| {
            (0..g.n())
                .map(|k| {
                    let d = pd[(k, e.u)] - pd[(k, e.v)];
                    d * d
                })
                .sum()
        })
        .collect();
    let total = g.total_weight();
    Ok(ResistanceTable {
        resistances,
        pi: g.edges().iter().map(|e| e.w / total).collect(),
        n: g.n(),
        endpoints: g.edges().iter().map(|e| (e.u, e.v)).collect(),
    })
}

/// `(B₁, B₂, union edge list)` from [`aligned_boundaries`].
pub type AlignedBoundaries = (GeneralMatrix, GeneralMatrix, Vec<(usize, usize)>);

/// Boundary matrices of two graphs on the same vertex set, row-aligned on the
/// sorted union of their edge sets. Absent edges give zero rows.
pub fn aligned_boundaries(g1: &WeightedGraph, g2: &WeightedGraph) -> Result<AlignedBoundaries> {
    if g1.n() != g2.n() {
        return Err(Error::Shape(format!(
            "graphs have {} and {} vertices",
            g1.n(),
            g2.n()
        )));
    }
    let mut union: Vec<(usize, usize)> = g1
        .edges()
        .iter()
        .chain(g2.edges())
        .map(|e| (e.u, e.v))
        .collect();
    union.sort_unstable();
    union.dedup();
    let n = g1.n();
    let build = |g: &WeightedGraph| {
        let mut b = GeneralMatrix::zeros(union.len(), n);
        for (row, &(u, v)) in union.iter().enumerate() {
            if let Some(e) = g.edge_index(u, v) {
                let s = g.edges()[e].w.sqrt();
                b.set(row, u, -s);
                b.set(row, v, s);
            }
        }
        b
    };
    let (b1, b2) = (build(g1), build(g2));
    Ok((b1, b2, union))
}

/// CR estimate of the intersection Laplacian `L₁,₂ = B₁ᵀB₂`.
///
/// Sampling probabilities are `∝ 2√(w₁_e·w₂_e)`, supported on `E₁ ∩ E₂`.
pub fn intersection_approx(
    g1: &WeightedGraph,
    g2: &WeightedGraph,
    r: usize,
    seed: u64,
) -> Result<GeneralMatrix> {
    let (b1, b2, _) = aligned_boundaries(g1, g2)?;
    Ok(cr_multiply(&b1.transpose(), &b2, r, seed)?.y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn single_edge_recovered_exactly() {
        let g = WeightedGraph::new(2, [(0, 1, 3.5)]).unwrap();
        for (r, seed) in [(1, 0), (7, 3), (100, 11)] {
            let out = cr_sparsify(&g, r, seed).unwrap();
            assert_eq!(out.sketch.laplacian(), g.laplacian());
            let out = er_sparsify(&g, r, seed).unwrap();
            assert!((out.sketch.edges()[0].w - 3.5).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_weight_bookkeeping() {
        let g = triangle();
        for seed in 0..20 {
            let out = cr_sparsify(&g, 3, seed).unwrap();
            let total: f64 = out.sketch.edges().iter().map(|e| e.w).sum();
            assert_eq!(total, 3.0);
            for e in out.sketch.edges() {
                assert_eq!(e.w.fract(), 0.0);
                assert!(e.w >= 1.0);
            }
        }
    }

    #[test]
    fn triangle_er_matches_cr_distribution() {
        let g = triangle();
        let er = EdgeSampler::er(&g).unwrap();
        for &q in er.distribution().probs() {
            assert!((q - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_graph_is_rejected() {
        let g = WeightedGraph::new(3, []).unwrap();
        assert!(matches!(cr_sparsify(&g, 5, 0), Err(Error::NoEdges)));
        assert!(cr_sparsify(&triangle(), 0, 0).is_err());
    }

    #[test]
    fn er_rejects_disconnected() {
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(matches!(
            er_sparsify(&g, 5, 0),
            Err(Error::DisconnectedGraph { components: 2 })
        ));
    }

    #[test]
    fn resistance_examples() {
        let g = WeightedGraph::new(2, [(0, 1, 4.0)]).unwrap();
        assert!((effective_resistances(&g).unwrap().resistance(0) - 0.25).abs() < 1e-12);

        let t = effective_resistances(&triangle()).unwrap();
        for &r in t.values() {
            assert!((r - 2.0 / 3.0).abs() < 1e-12);
        }

        let p3 = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let t = effective_resistances(&p3).unwrap();
        assert!((t.resistance(0) - 1.0).abs() < 1e-12);
        assert!((t.resistance(1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cr_vectors_carry_the_sampling_mass() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 3.0)]).unwrap();
        let t = effective_resistances(&g).unwrap();
        assert_eq!(t.pi(), &[0.25, 0.75]);
        let x = t.cr_vector(1);
        let sq: f64 = x.iter().map(|a| a * a).sum();
        assert!((sq - 2.0 * 0.75).abs() < 1e-15);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("cr".parse::<Method>().unwrap(), Method::Cr);
        assert_eq!("ER".parse::<Method>().unwrap(), Method::Er);
        assert!("xx".parse::<Method>().is_err());
        assert_eq!(Method::Er.to_string(), "ER");
    }

    #[test]
    fn self_intersection_reduces_to_cr_sparsify() {
        let g =
            WeightedGraph::new(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 5.0), (0, 3, 3.0)]).unwrap();
        for seed in 0..5 {
            let y = intersection_approx(&g, &g, 6, seed).unwrap();
            let lt = cr_sparsify(&g, 6, seed).unwrap().laplacian();
            for i in 0..4 {
                for j in 0..4 {
                    assert!((y.get(i, j) - lt.get(i, j)).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn intersection_errors() {
        let g1 = WeightedGraph::new(4, [(0, 1, 1.0)]).unwrap();
        let g2 = WeightedGraph::new(4, [(2, 3, 1.0)]).unwrap();
        assert!(matches!(
            intersection_approx(&g1, &g2, 5, 0),
            Err(Error::DegenerateDistribution)
        ));
        let g3 = WeightedGraph::new(5, [(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            intersection_approx(&g1, &g3, 5, 0),
            Err(Error::Shape(_))
        ));
    }
}
