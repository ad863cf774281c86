//! Subspaces of `R^d` stored by orthonormal basis, projector algebra, principal
//! angles and Haar-random sampling on the Grassmannian.

use nalgebra::{DMatrix, DVector, SymmetricEigen, QR, SVD};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{FrameError, Result};

/// Smallest singular value accepted by [`Subspace::new`].
pub const RANK_TOL: f64 = 1e-10;

/// Max-norm distance between projectors below which two subspaces are the same.
pub const SAME_SUBSPACE_TOL: f64 = 1e-8;

/// A nontrivial linear subspace `V` of `R^d` (`1 <= dim V <= d-1`).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Orthonormalizes the columns of `raw` and wraps the result.
    ///
    /// The columns must be linearly independent and their number must lie in
    /// `1..d`. The basis is produced by a QR factorization with the diagonal of
    /// `R` forced positive, so the output is a deterministic function of `raw`.
    pub fn new(raw: DMatrix<f64>) -> Result<Self> {
        let (d, k) = raw.shape();
        if k == 0 || k >= d {
            return Err(FrameError::Dimension(format!(
                "subspace dimension {k} must lie in 1..={} for ambient dimension {d}",
                d.saturating_sub(1)
            )));
        }
        let basis = orthonormalize(raw)?;
        Ok(Self { basis })
    }

    /// Builds a subspace from column vectors of length `d`.
    pub fn from_columns(d: usize, columns: &[Vec<f64>]) -> Result<Self> {
        for c in columns {
            if c.len() != d {
                return Err(FrameError::LengthMismatch { expected: d, found: c.len() });
            }
        }
        let raw = DMatrix::from_fn(d, columns.len(), |i, j| columns[j][i]);
        Self::new(raw)
    }

    /// Wraps a basis that is already orthonormal, skipping the factorization.
    pub(crate) fn from_orthonormal(basis: DMatrix<f64>) -> Self {
        debug_assert!(orthonormality_defect(&basis) < 1e-9);
        Self { basis }
    }

    /// Line spanned by `(cos t, sin t)` in `R^2`.
    pub fn line_at_angle(theta: f64) -> Self {
        Self::from_orthonormal(DMatrix::from_column_slice(2, 1, &[theta.cos(), theta.sin()]))
    }

    /// Span of the coordinate vectors `e_i` for `i` in `indices`.
    pub fn coordinate(d: usize, indices: &[usize]) -> Result<Self> {
        let mut raw = DMatrix::zeros(d, indices.len());
        for (c, &i) in indices.iter().enumerate() {
            if i >= d {
                return Err(FrameError::Dimension(format!("coordinate {i} out of range for d = {d}")));
            }
            if raw[(i, c)] != 0.0 || raw.row(i).amax() != 0.0 {
                return Err(FrameError::RankDeficient(0.0));
            }
            raw[(i, c)] = 1.0;
        }
        if indices.is_empty() || indices.len() >= d {
            return Err(FrameError::Dimension(format!(
                "subspace dimension {} must lie in 1..={} for ambient dimension {d}",
                indices.len(),
                d.saturating_sub(1)
            )));
        }
        // exact unit vectors; a QR pass would only add rounding noise
        Ok(Self::from_orthonormal(raw))
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Orthonormal basis, one column per basis vector.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Orthogonal projector `P = B B^T`.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// `P_V x`.
    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.basis * (self.basis.tr_mul(x))
    }

    /// `||P_V x||^2`, computed as `||B^T x||^2`.
    pub fn projection_norm_sq(&self, x: &DVector<f64>) -> f64 {
        self.basis.tr_mul(x).norm_squared()
    }

    /// Orthogonal complement `V^⊥`.
    pub fn complement(&self) -> Subspace {
        let d = self.ambient_dim();
        let q = DMatrix::<f64>::identity(d, d) - self.projector();
        let eig = SymmetricEigen::new(q);
        let cols: Vec<usize> = (0..d).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
        let raw = DMatrix::from_fn(d, cols.len(), |i, j| eig.eigenvectors[(i, cols[j])]);
        // eigenvectors of a symmetric matrix are orthonormal already; the QR pass
        // only fixes signs so the result is reproducible
        Subspace { basis: orthonormalize(raw).expect("complement basis is orthonormal") }
    }

    /// Image `g(V)` under an orthogonal map `g`.
    pub fn transformed(&self, g: &DMatrix<f64>) -> Result<Subspace> {
        if g.nrows() != self.ambient_dim() || g.ncols() != self.ambient_dim() {
            return Err(FrameError::Dimension(format!(
                "map of shape {:?} cannot act on R^{}",
                g.shape(),
                self.ambient_dim()
            )));
        }
        Subspace::new(g * &self.basis)
    }

    /// Whether the two subspaces coincide, compared through their projectors.
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.dim() == other.dim()
            && projector_distance(self, other) <= SAME_SUBSPACE_TOL
    }
}

/// `max_ij |(B^T B - I)_ij|`.
pub fn orthonormality_defect(basis: &DMatrix<f64>) -> f64 {
    let k = basis.ncols();
    (basis.tr_mul(basis) - DMatrix::<f64>::identity(k, k)).amax()
}

/// Rank-checked, sign-fixed QR orthonormalization of the columns of `raw`.
pub fn orthonormalize(raw: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (d, k) = raw.shape();
    if k > d {
        return Err(FrameError::RankDeficient(0.0));
    }
    let smallest = SVD::new(raw.clone(), false, false).singular_values.min();
    // also rejects NaN entries
    if smallest.is_nan() || smallest <= RANK_TOL {
        return Err(FrameError::RankDeficient(smallest));
    }
    let qr = QR::new(raw);
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..k {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Ok(q)
}

fn check_same_ambient(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(FrameError::Dimension(format!(
            "ambient dimensions differ: {} vs {}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    Ok(())
}

/// Hilbert–Schmidt inner product `trace(P_V P_W) = ||B_V^T B_W||_F^2`.
pub fn hs_inner(a: &Subspace, b: &Subspace) -> Result<f64> {
    check_same_ambient(a, b)?;
    Ok(hs_inner_unchecked(a, b))
}

pub(crate) fn hs_inner_unchecked(a: &Subspace, b: &Subspace) -> f64 {
    a.basis.tr_mul(&b.basis).norm_squared()
}

/// Squared cosines of the principal angles between two subspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAngleProfile {
    /// Descending, each in `[0, 1]`; length `min(dim V, dim W)`.
    pub y: Vec<f64>,
}

impl PrincipalAngleProfile {
    pub fn sum(&self) -> f64 {
        self.y.iter().sum()
    }

    /// Principal angles in radians, ascending.
    pub fn angles(&self) -> Vec<f64> {
        self.y.iter().map(|&c| c.sqrt().acos()).collect()
    }
}

/// Squared singular values of `B_V^T B_W`, clamped to `[0, 1]`.
pub fn principal_angles(a: &Subspace, b: &Subspace) -> Result<PrincipalAngleProfile> {
    check_same_ambient(a, b)?;
    let m = a.basis.tr_mul(&b.basis);
    let mut y: Vec<f64> = SVD::new(m, false, false)
        .singular_values
        .iter()
        .map(|s| (s * s).clamp(0.0, 1.0))
        .collect();
    y.sort_by(|p, q| q.total_cmp(p));
    Ok(PrincipalAngleProfile { y })
}

/// `d_c^2(V, W) = k - <P_V, P_W>` for subspaces of equal dimension `k`.
pub fn chordal_distance_sq(a: &Subspace, b: &Subspace) -> Result<f64> {
    check_same_ambient(a, b)?;
    if a.dim() != b.dim() {
        return Err(FrameError::Dimension(format!(
            "chordal distance needs equal dimensions, got {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok((a.dim() as f64 - hs_inner_unchecked(a, b)).max(0.0))
}

/// `max_ij |(P_V - P_W)_ij|`; infinite when the ambient dimensions differ.
pub fn projector_distance(a: &Subspace, b: &Subspace) -> f64 {
    if a.ambient_dim() != b.ambient_dim() {
        return f64::INFINITY;
    }
    (a.projector() - b.projector()).amax()
}

/// Haar-distributed `k`-dimensional subspace of `R^d`.
///
/// Orthonormalizes a `d × k` standard Gaussian matrix with the sign-fixed QR,
/// which makes the column space exactly `O(d)`-invariant in distribution.
pub fn haar_random<R: Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> Result<Subspace> {
    if k == 0 || k >= d {
        return Err(FrameError::Dimension(format!("cannot sample a {k}-plane in R^{d}")));
    }
    loop {
        let raw = DMatrix::from_fn(d, k, |_, _| rng.sample::<f64, _>(StandardNormal));
        match Subspace::new(raw) {
            Ok(s) => return Ok(s),
            // probability zero, but resample rather than fail
            Err(FrameError::RankDeficient(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Uniform point on the unit sphere `S^{d-1}`.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Haar-distributed orthogonal matrix in `O(d)`.
pub fn haar_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<f64> {
    loop {
        let raw = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
        if let Ok(q) = orthonormalize(raw) {
            return q;
        }
    }
}
