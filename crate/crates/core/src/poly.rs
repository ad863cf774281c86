//! Sparse homogeneous polynomials over `R^d`, the currency of the exact
//! tightness certificate and of the Reynolds operator.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{FrameError, Result};
use crate::special::monomial_count;

/// Exponent vector of a monomial; entry `i` is the power of `x_i`.
pub type Exponent = Vec<u8>;

/// Homogeneous polynomial of fixed degree in `d` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoly {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Exponent, f64>,
}

impl HomogeneousPoly {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self { dim, degree, coeffs: BTreeMap::new() }
    }

    /// The constant polynomial `c` (degree 0).
    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Self::zero(dim, 0);
        p.add_term(vec![0; dim], c);
        p
    }

    /// Linear form `Σ a_i x_i`.
    pub fn linear(a: &[f64]) -> Self {
        let dim = a.len();
        let mut p = Self::zero(dim, 1);
        for (i, &c) in a.iter().enumerate() {
            let mut e = vec![0; dim];
            e[i] = 1;
            p.add_term(e, c);
        }
        p
    }

    /// Quadratic form `x^T Q x` of a symmetric matrix.
    pub fn quadratic_form(q: &DMatrix<f64>) -> Self {
        let dim = q.nrows();
        let mut p = Self::zero(dim, 2);
        for i in 0..dim {
            for j in i..dim {
                let mut e = vec![0; dim];
                e[i] += 1;
                e[j] += 1;
                let c = if i == j { q[(i, i)] } else { q[(i, j)] + q[(j, i)] };
                p.add_term(e, c);
            }
        }
        p
    }

    /// `(x_1^2 + ... + x_d^2)^p`.
    pub fn norm_power(dim: usize, p: usize) -> Self {
        Self::quadratic_form(&DMatrix::identity(dim, dim)).pow(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: &[u8]) -> f64 {
        self.coeffs.get(e).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, f64)> {
        self.coeffs.iter().map(|(e, &c)| (e, c))
    }

    /// Adds `c x^e`. Panics if `e` does not have this polynomial's shape.
    pub fn add_term(&mut self, e: Exponent, c: f64) {
        assert_eq!(e.len(), self.dim, "exponent length must equal the number of variables");
        assert_eq!(
            e.iter().map(|&v| v as usize).sum::<usize>(),
            self.degree,
            "exponent must have the polynomial's degree"
        );
        if c != 0.0 {
            *self.coeffs.entry(e).or_insert(0.0) += c;
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let coeffs = self.coeffs.iter().map(|(e, &c)| (e.clone(), c * s)).collect();
        Self { dim: self.dim, degree: self.degree, coeffs }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &Self, s: f64) {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        for (e, &c) in &other.coeffs {
            *self.coeffs.entry(e.clone()).or_insert(0.0) += s * c;
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (ea, &ca) in &self.coeffs {
            for (eb, &cb) in &other.coeffs {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *out.coeffs.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        out
    }

    /// `self^p` by repeated multiplication; `p = 0` gives the constant 1.
    pub fn pow(&self, p: usize) -> Self {
        let mut acc = Self::constant(self.dim, 1.0);
        for _ in 0..p {
            acc = acc.mul(self);
        }
        acc
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim);
        self.coeffs
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(&k, xi)| xi.powi(k as i32)).product::<f64>())
            .sum()
    }
}

/// Fails with `SizeGuardExceeded` when degree-`degree` monomials in `d`
/// variables outnumber `limit`.
pub fn check_size(d: usize, degree: usize, limit: u128) -> Result<u128> {
    let count = monomial_count(d, degree);
    // exponents are stored as u8
    if count > limit || degree > u8::MAX as usize {
        return Err(FrameError::SizeGuardExceeded { monomials: count, limit });
    }
    Ok(count)
}

/// All exponent vectors of total degree `degree` in `d` variables, in
/// lexicographically decreasing order.
pub fn monomials(d: usize, degree: usize) -> Vec<Exponent> {
    fn rec(i: usize, left: usize, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if i + 1 == cur.len() {
            cur[i] = left as u8;
            out.push(cur.clone());
            return;
        }
        for v in (0..=left).rev() {
            cur[i] = v as u8;
            rec(i + 1, left - v, cur, out);
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    rec(0, degree, &mut vec![0; d], &mut out);
    out
}
