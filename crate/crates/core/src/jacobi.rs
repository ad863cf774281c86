//! Univariate zonal Jacobi polynomials for lines against `k`-planes in `R^d`.
//!
//! `y = <P_x, P_V>` for a Haar line `x` and a fixed `k`-plane `V` has density
//! proportional to `y^{(k-2)/2} (1-y)^{(d-2-k)/2}` on `[0, 1]`. The family below
//! is orthogonal for that weight and normalized by `P_l(1) = 1`. Everything is
//! computed in exact rational arithmetic: the moments of the weight are the
//! rationals `(k/2)_m / (d/2)_m`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{FrameError, Result};

type Q = BigRational;

fn half(n: usize) -> Q {
    Q::new(BigInt::from(n), BigInt::from(2))
}

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
struct RatPoly(Vec<Q>);

impl RatPoly {
    fn degree(&self) -> usize {
        self.0.len() - 1
    }

    fn eval(&self, y: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * y + c)
    }

    fn scale(&self, s: &Q) -> Self {
        RatPoly(self.0.iter().map(|c| c * s).collect())
    }

    fn times_y(&self) -> Self {
        let mut v = vec![Q::zero()];
        v.extend(self.0.iter().cloned());
        RatPoly(v)
    }

    fn sub_scaled(&mut self, other: &Self, s: &Q) {
        if other.0.len() > self.0.len() {
            self.0.resize(other.0.len(), Q::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a -= b * s;
        }
    }
}

/// The orthogonal family `P_0, ..., P_{p_max}` with its three-term relation
/// `y P_l = a_l P_{l+1} + b_l P_l + c_l P_{l-1}`.
#[derive(Debug, Clone)]
pub struct JacobiFamily {
    k: usize,
    d: usize,
    exact: Vec<RatPoly>,
    coeffs: Vec<Vec<f64>>,
    recurrence: Vec<(f64, f64, f64)>,
}

impl JacobiFamily {
    /// Gram–Schmidt on `1, y, y^2, ...` against the exact Beta moments, then
    /// rescaled so that every polynomial equals one at `y = 1`.
    pub fn new(k: usize, d: usize, p_max: usize) -> Result<Self> {
        if k == 0 || k >= d {
            return Err(FrameError::Parameter(format!(
                "weight exponents ({}/2 - 1, {}/2 - 1) must exceed -1; need 1 <= k <= d-1",
                k as i64,
                d as i64 - k as i64
            )));
        }
        if p_max > 10 {
            return Err(FrameError::Parameter(format!("p_max = {p_max} exceeds 10")));
        }
        // one extra polynomial so the recurrence is available at l = p_max
        let top = p_max + 1;
        let moments: Vec<Q> = {
            let mut m = vec![Q::one()];
            for i in 0..(2 * top + 2) {
                let next = &m[i] * (half(k) + Q::from_integer(BigInt::from(i)))
                    / (half(d) + Q::from_integer(BigInt::from(i)));
                m.push(next);
            }
            m
        };
        let inner = |p: &RatPoly, q: &RatPoly| -> Q {
            let mut s = Q::zero();
            for (i, a) in p.0.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in q.0.iter().enumerate() {
                    s += a * b * &moments[i + j];
                }
            }
            s
        };

        let mut polys: Vec<RatPoly> = Vec::with_capacity(top + 1);
        let mut norms: Vec<Q> = Vec::with_capacity(top + 1);
        for deg in 0..=top {
            let mut v = vec![Q::zero(); deg + 1];
            v[deg] = Q::one();
            let mut p = RatPoly(v);
            let mono = p.clone();
            for (q, nq) in polys.iter().zip(&norms) {
                let c = inner(&mono, q) / nq;
                p.sub_scaled(q, &c);
            }
            let at_one = p.eval(&Q::one());
            let p = p.scale(&(Q::one() / at_one));
            norms.push(inner(&p, &p));
            polys.push(p);
        }

        let mut recurrence = Vec::with_capacity(p_max + 1);
        for l in 0..=p_max {
            let yp = polys[l].times_y();
            let a = polys[l].0[l].clone() / polys[l + 1].0[l + 1].clone();
            let b = inner(&yp, &polys[l]) / &norms[l];
            let c = if l == 0 { Q::zero() } else { inner(&yp, &polys[l - 1]) / &norms[l - 1] };
            recurrence.push((to_f64(&a), to_f64(&b), to_f64(&c)));
        }
        polys.truncate(p_max + 1);
        let coeffs = polys.iter().map(|p| p.0.iter().map(to_f64).collect()).collect();
        Ok(Self { k, d, exact: polys, coeffs, recurrence })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Monomial coefficients of `P_l`, lowest degree first.
    pub fn coefficients(&self, l: usize) -> &[f64] {
        &self.coeffs[l]
    }

    /// `(a_l, b_l, c_l)`; `c_0 = 0`.
    pub fn recurrence(&self, l: usize) -> (f64, f64, f64) {
        self.recurrence[l]
    }

    /// `P_l(y)` by the three-term recurrence, which stays accurate where
    /// Horner's rule on the alternating monomial coefficients does not.
    pub fn eval(&self, l: usize, y: f64) -> f64 {
        let (mut prev, mut cur) = (0.0, 1.0);
        for m in 0..l {
            let (a, b, c) = self.recurrence[m];
            let next = ((y - b) * cur - c * prev) / a;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Whether `P_l(1) = 1` holds in exact arithmetic.
    pub fn normalized_exactly(&self, l: usize) -> bool {
        self.exact[l].eval(&Q::one()).is_one() && self.exact[l].degree() == l
    }

    /// Exponents `(a, b)` of the weight `y^a (1-y)^b`.
    pub fn weight_exponents(&self) -> (f64, f64) {
        ((self.k as f64 - 2.0) / 2.0, (self.d as f64 - 2.0 - self.k as f64) / 2.0)
    }
}

fn to_f64(q: &Q) -> f64 {
    q.to_f64().expect("finite rational")
}
