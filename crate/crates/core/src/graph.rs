//! Weighted undirected simple graphs, their Laplacians and boundary matrices.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{GeneralMatrix, SymMatrix};

/// An undirected edge stored canonically with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// `χ_e = e_u − e_v` in `ℝⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IncidenceVector {
    pub u: usize,
    pub v: usize,
    pub n: usize,
}

impl IncidenceVector {
    pub fn to_dense(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        x[self.u] = 1.0;
        x[self.v] = -1.0;
        x
    }

    /// `√w · χ_e`.
    pub fn weighted(&self, w: f64) -> Vec<f64> {
        let s = w.sqrt();
        self.to_dense().into_iter().map(|x| x * s).collect()
    }
}

/// A weighted undirected simple graph on vertices `0..n`.
///
/// Edges are kept sorted by `(u, v)`; an edge's position in that order is its
/// id, and row `e` of the boundary matrix belongs to edge `e`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Builds a graph, merging duplicate `{u, v}` pairs by summing weights.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        Self::with_merge_count(n, edges).map(|(g, _)| g)
    }

    /// Like [`WeightedGraph::new`], also returning how many input edges were
    /// folded into an earlier occurrence of the same pair.
    pub fn with_merge_count(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<(Self, usize)> {
        if n == 0 {
            return Err(Error::Validation("graph needs at least one vertex".into()));
        }
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut duplicates = 0;
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::Validation(format!(
                    "edge ({a}, {b}) references a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::Validation(format!("self-loop at vertex {a}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Validation(format!(
                    "edge ({a}, {b}) has non-positive or non-finite weight {w}"
                )));
            }
            let key = (a.min(b), a.max(b));
            match merged.get_mut(&key) {
                Some(acc) => {
                    *acc += w;
                    duplicates += 1;
                }
                None => {
                    merged.insert(key, w);
                }
            }
        }
        let edges = merged
            .into_iter()
            .map(|((u, v), w)| Edge { u, v, w })
            .collect();
        Ok((WeightedGraph { n, edges }, duplicates))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.w).collect()
    }

    /// `W = Σ w_e`, which equals `‖B‖_F² / 2`.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Position of edge `{u, v}` in the canonical order.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search_by(|e| (e.u, e.v).cmp(&key)).ok()
    }

    pub fn incidence(&self, e: usize) -> IncidenceVector {
        let edge = self.edges[e];
        IncidenceVector {
            u: edge.u,
            v: edge.v,
            n: self.n,
        }
    }

    /// `L = D − A`.
    pub fn laplacian(&self) -> SymMatrix {
        let mut l = SymMatrix::zeros(self.n);
        for e in &self.edges {
            l.add_edge_term(e.u, e.v, e.w);
        }
        l
    }

    /// The `m × n` boundary matrix with row `e = (u, v)` equal to `−√w` at
    /// column `u` and `+√w` at column `v`.
    pub fn boundary(&self) -> GeneralMatrix {
        let mut b = GeneralMatrix::zeros(self.m(), self.n);
        for (row, e) in self.edges.iter().enumerate() {
            let s = e.w.sqrt();
            b.set(row, e.u, -s);
            b.set(row, e.v, s);
        }
        b
    }

    /// Number of connected components (isolated vertices count).
    pub fn connected_components(&self) -> usize {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut seen = vec![false; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components() == 1
    }
}

/// Reassembles `BᵀB = Σ_e a_e² χ_eχ_eᵀ` from a boundary matrix whose rows are
/// either all zero or hold exactly two entries `±a_e` of opposite sign.
pub fn laplacian_from_boundary(b: &GeneralMatrix) -> Result<SymMatrix> {
    if !b.is_finite() {
        return Err(Error::InvalidMatrix);
    }
    let n = b.cols();
    let mut l = SymMatrix::zeros(n);
    for row in 0..b.rows() {
        let nz: Vec<usize> = (0..n).filter(|&j| b.get(row, j) != 0.0).collect();
        match nz.as_slice() {
            [] => {}
            &[i, j] => {
                let (x, y) = (b.get(row, i), b.get(row, j));
                let scale = x.abs().max(y.abs());
                if x.signum() == y.signum() || (x + y).abs() > 1e-12 * scale {
                    return Err(Error::InvalidBoundary { row });
                }
                l.add_edge_term(i, j, x.abs() * y.abs());
            }
            _ => return Err(Error::InvalidBoundary { row }),
        }
    }
    Ok(l)
}
