//! Dense linear algebra: symmetric matrices, eigendecomposition, norms and
//! the pseudo-inverse square root used by the isotropic error metric.
//!
//! Storage is dense throughout. The eigensolver is nalgebra's symmetric QR
//! iteration, which is deterministic for a fixed input.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Default relative null-space threshold for an `n × n` matrix: `n · 2⁻⁵⁰`.
///
/// An eigenvalue `λ` counts as zero iff `λ ≤ tol · λ_max`.
pub fn default_null_tol(n: usize) -> f64 {
    n as f64 * 2f64.powi(-50)
}

/// Dense symmetric matrix. Symmetry is exact: constructors symmetrize.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    inner: DMatrix<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "SymMatrix dimension must be at least 1");
        Self {
            inner: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "SymMatrix dimension must be at least 1");
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    /// Builds a symmetric matrix from a square dense matrix, replacing it
    /// by `(M + Mᵀ)/2`. Already-symmetric input is reproduced exactly.
    pub fn from_dense(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Shape(format!(
                "symmetric matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(Error::Shape("symmetric matrix must be at least 1x1".into()));
        }
        let mut m = m;
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        Ok(Self { inner: m })
    }

    /// Row-major nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("rows must all have length n".into()));
        }
        Self::from_dense(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n >= 1, "SymMatrix dimension must be at least 1");
        Self {
            inner: DMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 }),
        }
    }

    pub fn n(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn as_dense(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_dense(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn to_general(&self) -> GeneralMatrix {
        GeneralMatrix {
            inner: self.inner.clone(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.inner.iter().all(|x| x.is_finite())
    }

    /// Adds `w · χχᵀ` for `χ = e_u − e_v`.
    pub(crate) fn add_edge_term(&mut self, u: usize, v: usize, w: f64) {
        self.inner[(u, u)] += w;
        self.inner[(v, v)] += w;
        self.inner[(u, v)] -= w;
        self.inner[(v, u)] -= w;
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.check_same_dim(other)?;
        Ok(SymMatrix {
            inner: &self.inner - &other.inner,
        })
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.check_same_dim(other)?;
        Ok(SymMatrix {
            inner: &self.inner + &other.inner,
        })
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix {
            inner: &self.inner * c,
        }
    }

    /// `P · self · P` for symmetric `P`, symmetrized to absorb rounding.
    pub fn congruence(&self, p: &SymMatrix) -> Result<SymMatrix> {
        self.check_same_dim(p)?;
        SymMatrix::from_dense(&p.inner * &self.inner * &p.inner)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| (0..n).map(|j| self.inner[(i, j)] * x[j]).sum())
            .collect()
    }

    /// `xᵀ · self · x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest absolute eigenvalue, which is the spectral norm of a
    /// symmetric matrix.
    pub fn spectral_norm(&self) -> Result<f64> {
        let spec = eig_sym(self)?;
        Ok(spec.spectral_radius())
    }

    fn check_same_dim(&self, other: &SymMatrix) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Shape(format!(
                "dimension mismatch: {} vs {}",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }
}

/// Dense rectangular matrix. Zero rows are allowed (an edgeless boundary
/// matrix is `0 × n`); at least one column is required.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralMatrix {
    inner: DMatrix<f64>,
}

impl GeneralMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols >= 1, "GeneralMatrix needs at least one column");
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    /// Row-major data of length `rows · cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if cols == 0 {
            return Err(Error::Shape("matrix needs at least one column".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for {rows}x{cols}, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(rows, cols, data),
        })
    }

    pub fn from_dense(m: DMatrix<f64>) -> Result<Self> {
        if m.ncols() == 0 {
            return Err(Error::Shape("matrix needs at least one column".into()));
        }
        Ok(Self { inner: m })
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, x: f64) {
        self.inner[(i, j)] = x;
    }

    pub fn as_dense(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_dense(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn is_finite(&self) -> bool {
        self.inner.iter().all(|x| x.is_finite())
    }

    pub fn column_norm(&self, j: usize) -> f64 {
        self.inner.column(j).norm()
    }

    pub fn row_norm(&self, i: usize) -> f64 {
        self.inner.row(i).norm()
    }

    pub fn transpose(&self) -> GeneralMatrix {
        GeneralMatrix {
            inner: self.inner.transpose(),
        }
    }

    pub fn scale(&self, c: f64) -> GeneralMatrix {
        GeneralMatrix {
            inner: &self.inner * c,
        }
    }

    pub fn matmul(&self, other: &GeneralMatrix) -> Result<GeneralMatrix> {
        if self.cols() != other.rows() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(GeneralMatrix {
            inner: &self.inner * &other.inner,
        })
    }

    pub fn sub(&self, other: &GeneralMatrix) -> Result<GeneralMatrix> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::Shape("matrices differ in shape".into()));
        }
        Ok(GeneralMatrix {
            inner: &self.inner - &other.inner,
        })
    }
}

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("spectrum is never empty")
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .fold(0.0f64, |acc, l| acc.max(l.abs()))
    }

    /// Absolute threshold `tol · λ_max` below which eigenvalues count as null.
    pub fn null_threshold(&self, tol: f64) -> f64 {
        tol * self.lambda_max().max(0.0)
    }

    pub fn null_count(&self, tol: f64) -> usize {
        let t = self.null_threshold(tol);
        self.eigenvalues.iter().filter(|&&l| l <= t).count()
    }

    /// `V · diag(f(λ)) · Vᵀ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            let s = f(l);
            for i in 0..n {
                scaled[(i, k)] *= s;
            }
        }
        SymMatrix::from_dense(&scaled * self.eigenvectors.transpose())
            .expect("square by construction")
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.map(|l| l)
    }
}

/// Symmetric eigendecomposition with ascending eigenvalues.
pub fn eig_sym(m: &SymMatrix) -> Result<Spectrum> {
    if !m.is_finite() {
        return Err(Error::InvalidMatrix);
    }
    let n = m.n();
    let eig = SymmetricEigen::new(m.inner.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Largest singular value.
pub fn spectral_norm(m: &GeneralMatrix) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::InvalidMatrix);
    }
    if m.rows() == 0 {
        return Ok(0.0);
    }
    let sv = m.inner.clone().svd(false, false).singular_values;
    Ok(sv.iter().fold(0.0f64, |acc, &s| acc.max(s)))
}

pub fn frobenius_norm(m: &GeneralMatrix) -> f64 {
    m.inner.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `L^{-1/2} = √(L†)`: eigenvalues above `tol · λ_max` map to `1/√λ`, the
/// rest to zero.
pub fn pseudo_inv_sqrt(l: &SymMatrix, tol: f64) -> Result<SymMatrix> {
    let spec = eig_sym(l)?;
    pseudo_inv_sqrt_from(&spec, tol)
}

pub(crate) fn pseudo_inv_sqrt_from(spec: &Spectrum, tol: f64) -> Result<SymMatrix> {
    let thresh = spec.null_threshold(tol);
    let lowest = spec.eigenvalues[0];
    if lowest < -thresh {
        return Err(Error::NotPsd { eigenvalue: lowest });
    }
    Ok(spec.map(|l| if l > thresh { 1.0 / l.sqrt() } else { 0.0 }))
}

/// `κ₂(L) = λ_max / λ₂` with `λ₂` the smallest eigenvalue above the null
/// threshold. Requires exactly one null eigenvalue.
pub fn condition_number_laplacian(l: &SymMatrix) -> Result<f64> {
    let spec = eig_sym(l)?;
    condition_number_from(&spec, default_null_tol(l.n()))
}

pub(crate) fn condition_number_from(spec: &Spectrum, tol: f64) -> Result<f64> {
    let lmax = spec.lambda_max();
    if lmax <= 0.0 {
        return Err(Error::DegenerateLaplacian);
    }
    let thresh = spec.null_threshold(tol);
    let nulls = spec.null_count(tol);
    if nulls == spec.eigenvalues.len() {
        return Err(Error::DegenerateLaplacian);
    }
    if nulls > 1 {
        return Err(Error::DisconnectedGraph { components: nulls });
    }
    let lambda2 = spec
        .eigenvalues
        .iter()
        .copied()
        .find(|&l| l > thresh)
        .ok_or(Error::DegenerateLaplacian)?;
    Ok(lmax / lambda2)
}
