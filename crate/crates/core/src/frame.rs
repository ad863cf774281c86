//! Weighted fusion frames, their operators, and the exact polynomial
//! certificate of `p`-tightness.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::gram::Subspace;
use crate::poly::{check_size, HomogeneousPoly};
use crate::special::pochhammer;

/// Default max-norm tolerance on the coefficient residual of [`certify_tight`].
pub const DEFAULT_TIGHT_TOL: f64 = 1e-9;

/// Tolerance used when re-certifying frames produced by the optimizer.
pub const OPTIMIZED_TIGHT_TOL: f64 = 1e-6;

/// Upper bound on the number of degree-`2p` monomials `power_form` will expand.
pub const POWER_FORM_LIMIT: u128 = 1_000_000;

/// Smallest eigenvalue of the frame operator below which it counts as singular.
pub const SINGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct FrameEntry {
    pub subspace: Subspace,
    pub weight: f64,
}

/// A nonempty list of weighted nontrivial subspaces of a common `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFrame {
    ambient_dim: usize,
    entries: Vec<FrameEntry>,
}

impl WeightedFrame {
    pub fn new(ambient_dim: usize, entries: Vec<FrameEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(FrameError::EmptyFrame);
        }
        for e in &entries {
            if e.subspace.ambient_dim() != ambient_dim {
                return Err(FrameError::Dimension(format!(
                    "subspace lives in R^{} but the frame is in R^{ambient_dim}",
                    e.subspace.ambient_dim()
                )));
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(FrameError::NonPositiveWeight(e.weight));
            }
        }
        Ok(Self { ambient_dim, entries })
    }

    /// Every subspace with the same weight.
    pub fn uniform(subspaces: Vec<Subspace>, weight: f64) -> Result<Self> {
        let d = subspaces.first().ok_or(FrameError::EmptyFrame)?.ambient_dim();
        Self::new(d, subspaces.into_iter().map(|subspace| FrameEntry { subspace, weight }).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[FrameEntry] {
        &self.entries
    }

    pub fn subspaces(&self) -> impl Iterator<Item = &Subspace> {
        self.entries.iter().map(|e| &e.subspace)
    }

    pub fn weights(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.weight).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }

    /// `Σ ω_j dim(V_j)`.
    pub fn weighted_dim_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.weight * e.subspace.dim() as f64).sum()
    }

    /// The common subspace dimension, if there is one.
    pub fn common_dim(&self) -> Option<usize> {
        let k = self.entries[0].subspace.dim();
        self.entries.iter().all(|e| e.subspace.dim() == k).then_some(k)
    }

    pub fn require_common_dim(&self) -> Result<usize> {
        self.common_dim().ok_or(FrameError::MixedDimensions)
    }

    /// Dimension masses `m_k = Σ_{dim V_j = k} ω_j`, indexed by `k - 1` for
    /// `k = 1..d-1`.
    pub fn dimension_masses(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.ambient_dim - 1];
        for e in &self.entries {
            m[e.subspace.dim() - 1] += e.weight;
        }
        m
    }

    /// Same subspaces, weights multiplied by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        self.map_weights(|e| e.weight * s)
    }

    /// Same subspaces, weights rescaled to sum to one.
    pub fn normalized(&self) -> Self {
        let t = self.total_weight();
        self.map_weights(|e| e.weight / t).expect("positive weights stay positive")
    }

    /// Same subspaces with replacement weights.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.len() {
            return Err(FrameError::LengthMismatch { expected: self.len(), found: weights.len() });
        }
        let entries = self
            .entries
            .iter()
            .zip(weights)
            .map(|(e, &weight)| FrameEntry { subspace: e.subspace.clone(), weight })
            .collect();
        Self::new(self.ambient_dim, entries)
    }

    fn map_weights(&self, f: impl Fn(&FrameEntry) -> f64) -> Result<Self> {
        let w: Vec<f64> = self.entries.iter().map(f).collect();
        self.with_weights(&w)
    }

    fn check_vector(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.ambient_dim {
            return Err(FrameError::Dimension(format!(
                "vector of length {} for a frame in R^{}",
                x.len(),
                self.ambient_dim
            )));
        }
        Ok(())
    }
}

/// `S = Σ ω_j P_{V_j}`.
pub fn frame_operator(frame: &WeightedFrame) -> DMatrix<f64> {
    let d = frame.ambient_dim();
    let mut s = DMatrix::zeros(d, d);
    for e in frame.entries() {
        let b = e.subspace.basis();
        s.gemm(e.weight, b, &b.transpose(), 1.0);
    }
    s
}

/// `x ↦ (P_{V_j} x)_j`.
pub fn analysis(frame: &WeightedFrame, x: &DVector<f64>) -> Result<Vec<DVector<f64>>> {
    frame.check_vector(x)?;
    Ok(frame.subspaces().map(|s| s.project(x)).collect())
}

/// `(f_j)_j ↦ Σ ω_j f_j`.
pub fn synthesis(frame: &WeightedFrame, fs: &[DVector<f64>]) -> Result<DVector<f64>> {
    if fs.len() != frame.len() {
        return Err(FrameError::LengthMismatch { expected: frame.len(), found: fs.len() });
    }
    let mut out = DVector::zeros(frame.ambient_dim());
    for (e, f) in frame.entries().iter().zip(fs) {
        frame.check_vector(f)?;
        out.axpy(e.weight, f, 1.0);
    }
    Ok(out)
}

/// `S^{-1} Σ ω_j f_j`; inverts [`analysis`] whenever the frame operator is
/// invertible.
pub fn reconstruct(frame: &WeightedFrame, fs: &[DVector<f64>]) -> Result<DVector<f64>> {
    let y = synthesis(frame, fs)?;
    let eig = SymmetricEigen::new(frame_operator(frame));
    let smallest = eig.eigenvalues.min();
    if smallest <= SINGULAR_TOL {
        return Err(FrameError::NotAFrame(smallest));
    }
    let coords = eig.eigenvectors.tr_mul(&y);
    let scaled = coords.component_div(&eig.eigenvalues);
    Ok(&eig.eigenvectors * scaled)
}

/// Exact expansion of `Σ ω_j (x^T P_j x)^p` in the monomial basis.
pub fn power_form(frame: &WeightedFrame, p: usize) -> Result<HomogeneousPoly> {
    if p == 0 {
        return Err(FrameError::Parameter("power must be at least 1".into()));
    }
    let d = frame.ambient_dim();
    check_size(d, 2 * p, POWER_FORM_LIMIT)?;
    let mut total = HomogeneousPoly::zero(d, 2 * p);
    for e in frame.entries() {
        let q = HomogeneousPoly::quadratic_form(&e.subspace.projector());
        total.add_scaled(&q.pow(p), e.weight);
    }
    Ok(total)
}

/// `Σ_j ω_j (x^T P_j x)^p` evaluated at a point.
pub fn power_form_value(frame: &WeightedFrame, x: &DVector<f64>, p: usize) -> f64 {
    frame
        .entries()
        .iter()
        .map(|e| e.weight * e.subspace.projection_norm_sq(x).powi(p as i32))
        .sum()
}

/// The only constant a tight `p`-fusion frame can have:
/// `A_p = Σ_k m_k (k/2)_p / (d/2)_p`.
pub fn tightness_constant(frame: &WeightedFrame, p: usize) -> f64 {
    let d = frame.ambient_dim() as f64;
    let denom = pochhammer(d / 2.0, p);
    frame
        .entries()
        .iter()
        .map(|e| e.weight * pochhammer(e.subspace.dim() as f64 / 2.0, p) / denom)
        .sum()
}

/// Result of comparing the power form with `A_p ||x||^{2p}` coefficientwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightnessCertificate {
    pub p: usize,
    pub target_a: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub tight: bool,
}

/// Certifies `Σ ω_j ||P_{V_j} x||^{2p} = A_p ||x||^{2p}` by comparing all
/// coefficients of the two homogeneous polynomials.
pub fn certify_tight(frame: &WeightedFrame, p: usize, tol: f64) -> Result<TightnessCertificate> {
    let mut diff = power_form(frame, p)?;
    let target_a = tightness_constant(frame, p);
    diff.add_scaled(&HomogeneousPoly::norm_power(frame.ambient_dim(), p), -target_a);
    let residual = diff.max_abs_coeff();
    Ok(TightnessCertificate { p, target_a, residual, tolerance: tol, tight: residual <= tol })
}

/// Reweighting `ω_j ↦ ω_j (p - 1 + dim(V_j)/2)`, which sends tight
/// `p`-fusion frames to tight `(p-1)`-fusion frames.
pub fn reweight_down(frame: &WeightedFrame, p: usize) -> Result<WeightedFrame> {
    if p < 2 {
        return Err(FrameError::Parameter(format!("reweighting needs p >= 2, got {p}")));
    }
    frame.map_weights(|e| e.weight * (p as f64 - 1.0 + e.subspace.dim() as f64 / 2.0))
}

/// Iterated reweighting from `p` all the way to `1`:
/// `ω_j ↦ ω_j Π_{l=1}^{p-1} (l + dim(V_j)/2)`.
pub fn reweight_to_one(frame: &WeightedFrame, p: usize) -> Result<WeightedFrame> {
    if p == 0 {
        return Err(FrameError::Parameter("power must be at least 1".into()));
    }
    frame.map_weights(|e| {
        let half = e.subspace.dim() as f64 / 2.0;
        e.weight * (1..p).map(|l| l as f64 + half).product::<f64>()
    })
}

/// Replaces every subspace by its orthogonal complement.
pub fn complement_frame(frame: &WeightedFrame) -> Result<WeightedFrame> {
    frame.require_common_dim()?;
    let entries = frame
        .entries()
        .iter()
        .map(|e| FrameEntry { subspace: e.subspace.complement(), weight: e.weight })
        .collect();
    WeightedFrame::new(frame.ambient_dim(), entries)
}

/// Concatenation of two frames in the same ambient space.
pub fn union(a: &WeightedFrame, b: &WeightedFrame) -> Result<WeightedFrame> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(FrameError::Dimension(format!(
            "cannot join frames in R^{} and R^{}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    let entries = a.entries().iter().chain(b.entries()).cloned().collect();
    WeightedFrame::new(a.ambient_dim(), entries)
}
