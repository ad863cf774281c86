//! Gauss–Jacobi rules on `[0, 1]` by the Golub–Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{FrameError, Result};

/// Nodes and weights of an `n`-point rule for the weight `y^a (1-y)^b` on
/// `[0, 1]`. Weights are normalized to sum to one, i.e. the rule integrates
/// against the probability measure proportional to the weight function.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&y, &w)| w * f(y)).sum()
    }
}

/// `n`-point Gauss–Jacobi rule for `y^a (1-y)^b dy` on `[0, 1]`, `a, b > -1`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<GaussRule> {
    if !(a > -1.0 && b > -1.0) {
        return Err(FrameError::Parameter(format!("Jacobi exponents must exceed -1, got ({a}, {b})")));
    }
    if n == 0 {
        return Err(FrameError::Parameter("a quadrature rule needs at least one node".into()));
    }
    // y = (1 + x)/2 turns y^a (1-y)^b into (1+x)^a (1-x)^b on [-1, 1], i.e. the
    // classical Jacobi weight with alpha = b, beta = a.
    let (al, be) = (b, a);
    let s = al + be;
    let diag: Vec<f64> = (0..n)
        .map(|k| {
            let k = k as f64;
            if k == 0.0 {
                (be - al) / (s + 2.0)
            } else {
                (be * be - al * al) / ((2.0 * k + s) * (2.0 * k + s + 2.0))
            }
        })
        .collect();
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            let b2 = if k == 1.0 {
                4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s).powi(2) * (3.0 + s))
            } else {
                let t = 2.0 * k + s;
                4.0 * k * (k + al) * (k + be) * (k + s) / (t * t * (t + 1.0) * (t - 1.0))
            };
            b2.sqrt()
        })
        .collect();
    let jac = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if i == j + 1 {
            off[j]
        } else if j == i + 1 {
            off[i]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| ((eig.eigenvalues[i] + 1.0) / 2.0, eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    Ok(GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1 / total).collect(),
    })
}

/// Gauss–Legendre rule on `[0, 1]` (weights sum to one).
pub fn gauss_legendre(n: usize) -> GaussRule {
    gauss_jacobi(n, 0.0, 0.0).expect("Legendre parameters are valid")
}
