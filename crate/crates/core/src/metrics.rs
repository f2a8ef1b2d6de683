//! Approximation error of a sparsifier `L̃` against the source Laplacian `L`.
//!
//! With `Δ = L − L̃`:
//! * the additive constant is `max_{‖x‖=1} |xᵀΔx| = ‖Δ‖₂`, and `‖Δ‖_F` is the
//!   looser certificate `‖Δ‖_F ≤ 2Wε`;
//! * the isotropic (multiplicative) error is `‖L^{-1/2} Δ L^{-1/2}‖₂`.

use crate::error::{Error, Result};
use crate::linalg::{
    condition_number_from, default_null_tol, eig_sym, pseudo_inv_sqrt_from, Spectrum, SymMatrix,
};

/// Tight additive constant `‖L − L̃‖₂`.
pub fn additive_error(l: &SymMatrix, l_tilde: &SymMatrix) -> Result<f64> {
    l.sub(l_tilde)?.spectral_norm()
}

/// Whether `L̃` is an additive `2Wε`-sparsifier of `L`.
pub fn check_additive_certificate(
    l: &SymMatrix,
    l_tilde: &SymMatrix,
    total_weight: f64,
    eps: f64,
) -> Result<bool> {
    if !(total_weight.is_finite() && total_weight > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "W must be positive, got {total_weight}"
        )));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let bound = 2.0 * total_weight * eps;
    let delta = l.sub(l_tilde)?;
    if delta.frobenius_norm() <= bound {
        return Ok(true);
    }
    Ok(delta.spectral_norm()? <= bound)
}

/// Precomputed `L^{-1/2}` for repeated isotropic-error evaluations against
/// one source Laplacian.
#[derive(Clone, Debug)]
pub struct IsotropicMetric {
    l: SymMatrix,
    spectrum: Spectrum,
    inv_sqrt: SymMatrix,
    tol: f64,
}

impl IsotropicMetric {
    pub fn new(l: &SymMatrix, tol: f64) -> Result<Self> {
        let spectrum = eig_sym(l)?;
        let inv_sqrt = pseudo_inv_sqrt_from(&spectrum, tol)?;
        Ok(Self {
            l: l.clone(),
            spectrum,
            inv_sqrt,
            tol,
        })
    }

    pub fn with_default_tol(l: &SymMatrix) -> Result<Self> {
        Self::new(l, default_null_tol(l.n()))
    }

    /// `‖L^{-1/2}(L − L̃)L^{-1/2}‖₂`. Components of `Δ` outside `range(L)`
    /// are projected away by the pseudo-inverse.
    pub fn error(&self, l_tilde: &SymMatrix) -> Result<f64> {
        let delta = self.l.sub(l_tilde)?;
        delta.congruence(&self.inv_sqrt)?.spectral_norm()
    }

    /// `κ₂(L)`, erroring unless `L` has exactly one null eigenvalue.
    pub fn condition_number(&self) -> Result<f64> {
        condition_number_from(&self.spectrum, self.tol)
    }

    /// True when `L̃` does not annihilate exactly the null space of `L`
    /// (for a sketch, usually because sampling disconnected it).
    pub fn null_space_mismatch(&self, l_tilde: &SymMatrix) -> Result<bool> {
        let own = eig_sym(l_tilde)?;
        if own.null_count(default_null_tol(l_tilde.n())) != self.spectrum.null_count(self.tol) {
            return Ok(true);
        }
        let scale = l_tilde.frobenius_norm().max(f64::MIN_POSITIVE);
        let thresh = self.spectrum.null_threshold(self.tol);
        let n = self.l.n();
        for (k, &lambda) in self.spectrum.eigenvalues.iter().enumerate() {
            if lambda > thresh {
                continue;
            }
            let v: Vec<f64> = (0..n).map(|i| self.spectrum.eigenvectors[(i, k)]).collect();
            let lv = l_tilde.matvec(&v);
            let norm = lv.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-9 * scale {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// `‖L^{-1/2}(L − L̃)L^{-1/2}‖₂` with null threshold `tol · λ_max(L)`.
pub fn isotropic_error(l: &SymMatrix, l_tilde: &SymMatrix, tol: f64) -> Result<f64> {
    IsotropicMetric::new(l, tol)?.error(l_tilde)
}

/// Whether the isotropic error is at most `κ₂(L)·ε`.
pub fn check_multiplicative_certificate(
    l: &SymMatrix,
    l_tilde: &SymMatrix,
    eps: f64,
) -> Result<bool> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let metric = IsotropicMetric::with_default_tol(l)?;
    let kappa = metric.condition_number()?;
    Ok(metric.error(l_tilde)? <= kappa * eps)
}

/// `xᵀLx / xᵀL̃x`.
pub fn quadratic_form_ratio(l: &SymMatrix, l_tilde: &SymMatrix, x: &[f64]) -> Result<f64> {
    if l.n() != l_tilde.n() || x.len() != l.n() {
        return Err(Error::Shape(
            "vector and matrices must share dimension".into(),
        ));
    }
    let xx: f64 = x.iter().map(|a| a * a).sum();
    if xx == 0.0 {
        return Err(Error::InvalidParameter("test vector is zero".into()));
    }
    let denom = l_tilde.quadratic_form(x);
    if denom <= 1e-12 * l_tilde.frobenius_norm() * xx {
        return Err(Error::NullQuadraticForm);
    }
    Ok(l.quadratic_form(x) / denom)
}

/// All error measures for one `(L, L̃)` pair.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    /// `‖Δ‖_F`.
    pub delta_frobenius: f64,
    /// `‖Δ‖₂`, the tight additive constant.
    pub delta_spectral: f64,
    pub isotropic_error: f64,
    /// `2Wε` when `(W, ε)` was supplied.
    pub additive_bound_frobenius: Option<f64>,
    pub null_space_mismatch: bool,
}

impl ErrorReport {
    pub fn compute(
        l: &SymMatrix,
        l_tilde: &SymMatrix,
        additive: Option<(f64, f64)>,
    ) -> Result<Self> {
        let metric = IsotropicMetric::with_default_tol(l)?;
        Self::with_metric(&metric, l_tilde, additive)
    }

    pub fn with_metric(
        metric: &IsotropicMetric,
        l_tilde: &SymMatrix,
        additive: Option<(f64, f64)>,
    ) -> Result<Self> {
        let delta = metric.l.sub(l_tilde)?;
        Ok(Self {
            delta_frobenius: delta.frobenius_norm(),
            delta_spectral: delta.spectral_norm()?,
            isotropic_error: metric.error(l_tilde)?,
            additive_bound_frobenius: additive.map(|(w, eps)| 2.0 * w * eps),
            null_space_mismatch: metric.null_space_mismatch(l_tilde)?,
        })
    }
}
