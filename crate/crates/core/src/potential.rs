//! The `p`-fusion frame potential and its lower bounds.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::frame::{certify_tight, WeightedFrame, DEFAULT_TIGHT_TOL};
use crate::gram::hs_inner_unchecked;
use crate::moments::TMatrix;
use crate::special::binomial;

/// Default tolerance on the spread of off-diagonal inner products.
pub const EQUIANGULAR_TOL: f64 = 1e-8;

/// Tolerance of the simplex-bound equality detector.
pub const SIMPLEX_EQUALITY_TOL: f64 = 1e-8;

/// Symmetric table of `<P_{V_i}, P_{V_j}>`, diagonal included.
pub fn inner_product_table(frame: &WeightedFrame) -> Vec<Vec<f64>> {
    let subs: Vec<_> = frame.subspaces().collect();
    let n = subs.len();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (i..n).map(|j| hs_inner_unchecked(subs[i], subs[j])).collect())
        .collect();
    let mut table = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            table[i][j] = upper[i][j - i];
            table[j][i] = upper[i][j - i];
        }
    }
    table
}

fn ffp_from_table(frame: &WeightedFrame, table: &[Vec<f64>], p: usize) -> f64 {
    let w = frame.weights();
    let mut total = 0.0;
    for i in 0..w.len() {
        for j in 0..w.len() {
            total += w[i] * w[j] * table[i][j].powi(p as i32);
        }
    }
    total
}

/// `FFP = Σ_{i,j} ω_i ω_j <P_{V_i}, P_{V_j}>^p`, diagonal terms included.
pub fn ffp(frame: &WeightedFrame, p: usize) -> f64 {
    ffp_from_table(frame, &inner_product_table(frame), p)
}

/// The pieces shared by the generalized simplex bounds.
#[derive(Debug, Clone, Copy)]
struct SimplexTerms {
    /// `m^2/d - Σ ω_j^2 dim(V_j)`.
    numerator: f64,
    /// `Σ_{i≠j} ω_i ω_j`.
    off_diagonal_mass: f64,
}

fn simplex_terms(frame: &WeightedFrame) -> SimplexTerms {
    let m = frame.weighted_dim_sum();
    let d = frame.ambient_dim() as f64;
    let w = frame.weights();
    let sum_w: f64 = w.iter().sum();
    let sum_w2: f64 = w.iter().map(|x| x * x).sum();
    let diag: f64 = frame.entries().iter().map(|e| e.weight * e.weight * e.subspace.dim() as f64).sum();
    SimplexTerms { numerator: m * m / d - diag, off_diagonal_mass: sum_w * sum_w - sum_w2 }
}

/// Right-hand side of the weighted simplex bound:
/// `max_{i≠j} <P_i, P_j> >= (m^2/d - Σ ω_j^2 dim V_j) / Σ_{i≠j} ω_i ω_j`.
pub fn simplex_bound_rhs(frame: &WeightedFrame) -> Result<f64> {
    if frame.len() < 2 {
        return Err(FrameError::SingleSubspace);
    }
    let t = simplex_terms(frame);
    Ok(t.numerator / t.off_diagonal_mass)
}

/// Whether the numerator `m^2/d - Σ ω_j^2 dim V_j` is negative, in which case
/// [`ffp_lower_bound_p`] falls back to the diagonal sum.
pub fn simplex_numerator_negative(frame: &WeightedFrame) -> bool {
    simplex_terms(frame).numerator < 0.0
}

/// Generalized simplex lower bound on the potential,
/// `(m^2/d - Σ ω_j^2 dim V_j)^p / (Σ_{i≠j} ω_i ω_j)^{p-1} + Σ ω_j^2 dim(V_j)^p`.
///
/// A negative numerator is clamped to zero, leaving only the diagonal sum.
pub fn ffp_lower_bound_p(frame: &WeightedFrame, p: usize) -> f64 {
    let diag: f64 = frame
        .entries()
        .iter()
        .map(|e| e.weight * e.weight * (e.subspace.dim() as f64).powi(p as i32))
        .sum();
    if frame.len() < 2 {
        return diag;
    }
    let t = simplex_terms(frame);
    let num = t.numerator.max(0.0);
    num.powi(p as i32) / t.off_diagonal_mass.powi(p as i32 - 1) + diag
}

/// Largest off-diagonal `<P_i, P_j>`.
pub fn max_off_diagonal(frame: &WeightedFrame) -> Result<f64> {
    if frame.len() < 2 {
        return Err(FrameError::SingleSubspace);
    }
    let t = inner_product_table(frame);
    Ok(off_diagonal(&t).fold(f64::NEG_INFINITY, f64::max))
}

fn off_diagonal(t: &[Vec<f64>]) -> impl Iterator<Item = f64> + '_ {
    let n = t.len();
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| t[i][j]))
}

/// Simplex-bound equality: the maximal off-diagonal inner product meets the
/// bound within `tol`. Happens exactly for equiangular tight fusion frames.
pub fn simplex_equality(frame: &WeightedFrame, tol: f64) -> Result<bool> {
    Ok((max_off_diagonal(frame)? - simplex_bound_rhs(frame)?).abs() <= tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct EquiangularityReport {
    pub is_equiangular: bool,
    pub common_value: Option<f64>,
    /// `max - min` of the off-diagonal inner products.
    pub spread: f64,
    pub pairwise_distinct: bool,
    /// `n <= C(d+1, 2)`.
    pub gerzon_ok: bool,
    /// `k(nk - d)/((n-1)d)`, filled in when the frame is tight (p = 1) with equal
    /// dimensions and equal weights.
    pub predicted_value: Option<f64>,
    pub tolerance: f64,
}

impl EquiangularityReport {
    /// Equiangular with pairwise distinct members, the hypothesis of the
    /// counting bound.
    pub fn equiangular_and_distinct(&self) -> bool {
        self.is_equiangular && self.pairwise_distinct
    }
}

/// Off-diagonal spread, distinctness and the counting bound `n <= C(d+1, 2)`.
pub fn equiangularity(frame: &WeightedFrame, tol: f64) -> Result<EquiangularityReport> {
    if frame.len() < 2 {
        return Err(FrameError::SingleSubspace);
    }
    let table = inner_product_table(frame);
    let (lo, hi) = off_diagonal(&table).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let spread = hi - lo;
    let is_equiangular = spread <= tol;
    let subs: Vec<_> = frame.subspaces().collect();
    let pairwise_distinct =
        (0..subs.len()).all(|i| ((i + 1)..subs.len()).all(|j| !subs[i].same_as(subs[j])));
    let n = frame.len() as u128;
    let d = frame.ambient_dim() as u64;
    let gerzon_ok = n <= binomial(d + 1, 2);

    let w = frame.weights();
    let equal_weights = w.iter().all(|x| (x - w[0]).abs() <= 1e-12 * w[0].abs().max(1.0));
    let predicted_value = match frame.common_dim() {
        Some(k) if equal_weights && certify_tight(frame, 1, DEFAULT_TIGHT_TOL)?.tight => {
            let (k, n, d) = (k as f64, frame.len() as f64, frame.ambient_dim() as f64);
            Some(k * (n * k - d) / ((n - 1.0) * d))
        }
        _ => None,
    };
    Ok(EquiangularityReport {
        is_equiangular,
        common_value: is_equiangular.then_some(0.5 * (lo + hi)),
        spread,
        pairwise_distinct,
        gerzon_ok,
        predicted_value,
        tolerance: tol,
    })
}

/// Lower bound `M T_d(p) M^T` with its error propagated from the table entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedBound {
    pub value: f64,
    pub error: f64,
}

/// `M T_d(p) M^T` with `M` the vector of dimension masses `m_k`.
pub fn ffp_lower_bound_mixed(frame: &WeightedFrame, table: &TMatrix) -> Result<MixedBound> {
    if table.d() != frame.ambient_dim() {
        return Err(FrameError::Dimension(format!(
            "moment table for d = {} used with a frame in R^{}",
            table.d(),
            frame.ambient_dim()
        )));
    }
    let masses = frame.dimension_masses();
    let mut value = 0.0;
    let mut error = 0.0;
    for (k, &mk) in masses.iter().enumerate() {
        for (l, &ml) in masses.iter().enumerate() {
            if mk == 0.0 || ml == 0.0 {
                continue;
            }
            let e = table.get(k + 1, l + 1).ok_or(FrameError::MissingMoment { k: k + 1, l: l + 1 })?;
            value += mk * ml * e.value;
            error += mk * ml * e.error;
        }
    }
    Ok(MixedBound { value, error })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    SimplexGeneral,
    EqualDimMinimum,
    MixedMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct PotentialReport {
    pub p: usize,
    pub value: f64,
    pub lower_bound: f64,
    pub bound_kind: BoundKind,
    pub gap: f64,
    /// Set when the simplex numerator was negative and got clamped.
    pub clamped: bool,
}

/// Potential against the generalized simplex bound.
pub fn simplex_report(frame: &WeightedFrame, p: usize) -> PotentialReport {
    let value = ffp(frame, p);
    let lower_bound = ffp_lower_bound_p(frame, p);
    PotentialReport {
        p,
        value,
        lower_bound,
        bound_kind: BoundKind::SimplexGeneral,
        gap: value - lower_bound,
        clamped: frame.len() >= 2 && simplex_numerator_negative(frame),
    }
}

/// Potential against `M T_d(p) M^T`; the kind is `EqualDimMinimum` when only
/// one dimension occurs, since the bound then reads `(Σ ω)^2 T_{k,d}(p)`.
pub fn moment_report(frame: &WeightedFrame, table: &TMatrix) -> Result<PotentialReport> {
    let p = table.p();
    let value = ffp(frame, p);
    let bound = ffp_lower_bound_mixed(frame, table)?;
    let bound_kind = if frame.common_dim().is_some() { BoundKind::EqualDimMinimum } else { BoundKind::MixedMatrix };
    Ok(PotentialReport { p, value, lower_bound: bound.value, bound_kind, gap: value - bound.value, clamped: false })
}
