//! Grassmannian moments `T_{k,l,d}(p) = E[<P_V, P_W>^p]` for independent Haar
//! subspaces, cubature certification through the potential minimum, per-degree
//! design diagnostics and the counting bounds.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::frame::WeightedFrame;
use crate::gram::{haar_random, random_unit_vector};
use crate::jacobi::JacobiFamily;
use crate::potential::ffp;
use crate::quadrature::{gauss_jacobi, gauss_legendre};
use crate::special::{binomial, pochhammer};

/// `T_{1,k,d}(p) = (k/2)_p / (d/2)_p`.
pub fn t_one(k: usize, d: usize, p: usize) -> f64 {
    pochhammer(k as f64 / 2.0, p) / pochhammer(d as f64 / 2.0, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMethod {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl MomentMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MomentMethod::ClosedForm => "closed-form",
            MomentMethod::Quadrature => "quadrature",
            MomentMethod::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub error: f64,
    pub method: MomentMethod,
}

/// Work limits for moment computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentBudget {
    /// Haar pairs drawn by the Monte-Carlo method.
    pub mc_samples: usize,
    /// Seed of the Monte-Carlo and probe streams.
    pub seed: u64,
    /// Gauss nodes per axis for quadrature.
    pub nodes: usize,
}

impl Default for MomentBudget {
    fn default() -> Self {
        Self { mc_samples: 100_000, seed: 0, nodes: 64 }
    }
}

const MC_CHUNK: usize = 4096;

/// `<P_V, P_W> = offset + sign * <P_V', P_W'>` with `V', W'` the subspaces of
/// dimensions `k`, `l` that actually get integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Reduction {
    k: usize,
    l: usize,
    offset: f64,
    sign: f64,
}

/// Chooses complements so that the integrated pair satisfies `k + l <= d` and
/// has the fewest nontrivial principal angles. Uses
/// `<P_{V⊥}, P_W> = l - <P_V, P_W>` and
/// `<P_{V⊥}, P_{W⊥}> = d - k - l + <P_V, P_W>`.
fn reduce(k: usize, l: usize, d: usize) -> Reduction {
    let (kf, lf, df) = (k as f64, l as f64, d as f64);
    let options = [
        Reduction { k, l, offset: 0.0, sign: 1.0 },
        Reduction { k: d - k, l, offset: lf, sign: -1.0 },
        Reduction { k, l: d - l, offset: kf, sign: -1.0 },
        Reduction { k: d - k, l: d - l, offset: kf + lf - df, sign: 1.0 },
    ];
    options
        .into_iter()
        .filter(|r| r.k + r.l <= d)
        .min_by_key(|r| r.k.min(r.l))
        .expect("one of the complement pairs always fits")
}

fn check_dims(k: usize, l: usize, d: usize) -> Result<()> {
    if k == 0 || l == 0 || k >= d || l >= d {
        return Err(FrameError::Dimension(format!("need 1 <= k, l <= d-1, got k={k}, l={l}, d={d}")));
    }
    Ok(())
}

/// Best available estimate: closed form for `p <= 1` or when one angle
/// remains after the complement reduction, quadrature for two, Monte-Carlo
/// otherwise.
pub fn t_moment_auto(k: usize, l: usize, d: usize, p: usize, budget: &MomentBudget) -> Result<MomentEstimate> {
    check_dims(k, l, d)?;
    let r = reduce(k, l, d);
    let method = match r.k.min(r.l) {
        _ if p <= 1 => MomentMethod::ClosedForm,
        1 => MomentMethod::ClosedForm,
        2 => MomentMethod::Quadrature,
        _ => MomentMethod::MonteCarlo,
    };
    t_moment(k, l, d, p, method, budget)
}

/// `T_{k,l,d}(p)` by the requested method.
pub fn t_moment(
    k: usize,
    l: usize,
    d: usize,
    p: usize,
    method: MomentMethod,
    budget: &MomentBudget,
) -> Result<MomentEstimate> {
    check_dims(k, l, d)?;
    if method == MomentMethod::MonteCarlo {
        let (value, error) = monte_carlo(k, l, d, p, budget.mc_samples, budget.seed)?;
        return Ok(MomentEstimate { value, error, method });
    }
    if method == MomentMethod::ClosedForm && p <= 1 {
        // E[P_V] = (k/d) I, so the first moment is kl/d for every pair
        let value = if p == 0 { 1.0 } else { (k * l) as f64 / d as f64 };
        return Ok(MomentEstimate { value, error: f64::EPSILON * value, method });
    }
    let r = reduce(k, l, d);
    let m = r.k.min(r.l);
    let base: Vec<(f64, f64)> = match (method, m) {
        (MomentMethod::ClosedForm, 1) => (0..=p).map(|q| (t_one(r.k.max(r.l), d, q), 0.0)).collect(),
        (MomentMethod::ClosedForm, _) => {
            return Err(FrameError::Parameter(format!(
                "no closed form for T_{{{k},{l},{d}}}: {m} principal angles remain after reduction"
            )))
        }
        (_, 1) => line_quadrature(r.k.max(r.l), d, p, budget.nodes)?,
        (_, 2) => plane_quadrature(r.k.max(r.l), d, p, budget.nodes)?,
        (_, m) => return Err(FrameError::UnsupportedQuadratureDim(m)),
    };
    // E[(offset + sign X)^p] by the binomial theorem
    let mut value = 0.0;
    let mut error = 0.0;
    for (q, (mq, eq)) in base.iter().enumerate() {
        let c = binomial(p as u64, q as u64) as f64 * r.offset.powi((p - q) as i32) * r.sign.powi(q as i32);
        value += c * mq;
        error += c.abs() * eq;
    }
    if method == MomentMethod::ClosedForm {
        error = 4.0 * f64::EPSILON * value.abs();
    }
    Ok(MomentEstimate { value, error, method })
}

/// Moments `E[y^q]`, `q = 0..=p`, of `y = <P_x, P_V>` for a line against a
/// `big`-plane, by Gauss–Jacobi quadrature on the induced Beta law.
fn line_quadrature(big: usize, d: usize, p: usize, nodes: usize) -> Result<Vec<(f64, f64)>> {
    let a = (big as f64 - 2.0) / 2.0;
    let b = (d as f64 - big as f64 - 2.0) / 2.0;
    let rule = gauss_jacobi(nodes, a, b)?;
    let coarse = gauss_jacobi(nodes.saturating_sub(16).max(4), a, b)?;
    Ok((0..=p)
        .map(|q| {
            let v = rule.integrate(|y| y.powi(q as i32));
            let w = coarse.integrate(|y| y.powi(q as i32));
            (v, (v - w).abs() + 4.0 * f64::EPSILON * v.abs())
        })
        .collect())
}

/// Moments `E[(y_1 + y_2)^q]` for a 2-plane against a `big`-plane with
/// `2 + big <= d`, from the joint density of the squared cosines,
/// `|y_1 - y_2| Π y_i^{(big-3)/2} (1 - y_i)^{(d-big-3)/2}`.
///
/// Integrates over the ordered region `y_1 > y_2` (where the absolute value
/// drops) after the substitution `y = sin^2 φ`, which turns both half-integer
/// endpoint exponents into the smooth factor `sin^{big-2} φ cos^{d-big-2} φ`.
/// The triangle `0 < φ_2 < φ_1 < π/2` is mapped to the unit square by
/// `φ_2 = t φ_1` and integrated with a tensor Gauss–Legendre rule. The density
/// is normalized numerically.
fn plane_quadrature(big: usize, d: usize, p: usize, nodes: usize) -> Result<Vec<(f64, f64)>> {
    if big < 2 || big + 2 > d {
        return Err(FrameError::Parameter(format!("plane quadrature needs 2 <= {big} <= {d} - 2")));
    }
    let run = |n: usize| -> Vec<f64> {
        let rule = gauss_legendre(n);
        let (es, ec) = ((big - 2) as i32, (d - big - 2) as i32);
        let half_pi = std::f64::consts::FRAC_PI_2;
        let mut sums = vec![0.0; p + 1];
        for (&u, &wu) in rule.nodes.iter().zip(&rule.weights) {
            let phi1 = u * half_pi;
            let (s1, c1) = phi1.sin_cos();
            let y1 = s1 * s1;
            let g1 = s1.powi(es) * c1.powi(ec);
            for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
                let phi2 = t * phi1;
                let (s2, c2) = phi2.sin_cos();
                let y2 = s2 * s2;
                let g2 = s2.powi(es) * c2.powi(ec);
                // dφ1 dφ2 = (π/2) φ1 du dt; the Jacobians 2 sin φ cos φ are in g
                let base = wu * wt * phi1 * g1 * g2 * (y1 - y2);
                let mut pw = 1.0;
                for s in sums.iter_mut() {
                    *s += base * pw;
                    pw *= y1 + y2;
                }
            }
        }
        let mass = sums[0];
        sums.iter().map(|s| s / mass).collect()
    };
    let fine = run(nodes);
    let coarse = run(nodes.saturating_sub(16).max(8));
    Ok(fine
        .iter()
        .zip(&coarse)
        .map(|(f, c)| (*f, (f - c).abs() + 8.0 * f64::EPSILON * f.abs()))
        .collect())
}

/// Sample mean and standard error of `<P_V, P_W>^p` over `samples` Haar pairs.
///
/// By invariance `W` is fixed to the first `l` coordinates. Chunks draw from
/// independent ChaCha streams, so the result does not depend on scheduling.
pub fn monte_carlo(k: usize, l: usize, d: usize, p: usize, samples: usize, seed: u64) -> Result<(f64, f64)> {
    check_dims(k, l, d)?;
    let mut all = monte_carlo_powers(k, l, d, p, samples, seed)?;
    Ok(all.pop().expect("p + 1 entries"))
}

/// Like [`monte_carlo`] but for every power `0..=p` from the same draws.
pub fn monte_carlo_powers(
    k: usize,
    l: usize,
    d: usize,
    p: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    check_dims(k, l, d)?;
    if samples < 2 {
        return Err(FrameError::Parameter("Monte-Carlo needs at least two samples".into()));
    }
    let chunks = samples.div_ceil(MC_CHUNK);
    let partial: Vec<Vec<(f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut acc = vec![(0.0, 0.0); p + 1];
            for _ in 0..count {
                let v = haar_random(d, k, &mut rng).expect("dimensions checked");
                let b = v.basis();
                let y: f64 = (0..l).map(|i| b.row(i).norm_squared()).sum();
                let mut pw = 1.0;
                for a in acc.iter_mut() {
                    a.0 += pw;
                    a.1 += pw * pw;
                    pw *= y;
                }
            }
            acc
        })
        .collect();
    let n = samples as f64;
    Ok((0..=p)
        .map(|q| {
            let (s, s2) = partial.iter().fold((0.0, 0.0), |(a, b), c| (a + c[q].0, b + c[q].1));
            let mean = s / n;
            let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
            (mean, (var / n).sqrt())
        })
        .collect())
}

/// Table of `T_{k,l,d}(p)` for `k, l = 1..d-1`.
#[derive(Debug, Clone, Serialize)]
pub struct TMatrix {
    d: usize,
    p: usize,
    entries: Vec<Vec<MomentEstimate>>,
}

impl TMatrix {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Entry for dimensions `k, l` (1-based).
    pub fn get(&self, k: usize, l: usize) -> Option<&MomentEstimate> {
        self.entries.get(k.checked_sub(1)?)?.get(l.checked_sub(1)?)
    }

    /// CSV with columns `k,l,p,value,error,method`, one row per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,l,p,value,error,method\n");
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{:.17e},{:.3e},{}",
                    i + 1,
                    j + 1,
                    self.p,
                    e.value,
                    e.error,
                    e.method.as_str()
                );
            }
        }
        out
    }
}

/// Fills the moment table with the best method per entry; only the upper
/// triangle is computed, the lower one is mirrored.
pub fn t_matrix(d: usize, p: usize, budget: &MomentBudget) -> Result<TMatrix> {
    if d < 2 {
        return Err(FrameError::Dimension(format!("moment table needs d >= 2, got {d}")));
    }
    let n = d - 1;
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|k| (k..=n).map(move |l| (k, l))).collect();
    let computed: Vec<MomentEstimate> = pairs
        .iter()
        .map(|&(k, l)| {
            // distinct seeds per entry keep Monte-Carlo entries independent
            let b = MomentBudget { seed: budget.seed.wrapping_add((k * 1000 + l) as u64), ..*budget };
            t_moment_auto(k, l, d, p, &b)
        })
        .collect::<Result<_>>()?;
    let placeholder = MomentEstimate { value: 0.0, error: 0.0, method: MomentMethod::ClosedForm };
    let mut entries = vec![vec![placeholder; n]; n];
    for (&(k, l), e) in pairs.iter().zip(computed) {
        entries[k - 1][l - 1] = e;
        entries[l - 1][k - 1] = e;
    }
    Ok(TMatrix { d, p, entries })
}

/// For each degree `l = 1..=p`, the largest `|Σ_j ω_j P_l(<P_x, P_{V_j}>)|`
/// over `n_probes` random unit vectors `x`. All entries vanish for tight
/// `p`-fusion frames; the first large entry locates the failing degree.
///
/// The weights are used as given, so the residuals are linear in them.
pub fn design_diagnostic<R: Rng + ?Sized>(
    frame: &WeightedFrame,
    p: usize,
    n_probes: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let k = frame.require_common_dim()?;
    let fam = JacobiFamily::new(k, frame.ambient_dim(), p)?;
    let mut residuals = vec![0.0f64; p];
    for _ in 0..n_probes {
        let x = random_unit_vector(frame.ambient_dim(), rng);
        let ys: Vec<(f64, f64)> =
            frame.entries().iter().map(|e| (e.weight, e.subspace.projection_norm_sq(&x))).collect();
        for (l, r) in residuals.iter_mut().enumerate() {
            let s: f64 = ys.iter().map(|&(w, y)| w * fam.eval(l + 1, y)).sum();
            *r = r.max(s.abs());
        }
    }
    Ok(residuals)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubatureVerdict {
    Cubature,
    NotCubature,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct CubatureCertificate {
    pub p: usize,
    /// Potential of the frame with weights normalized to sum one.
    pub ffp_value: f64,
    pub t_value: f64,
    pub t_error: f64,
    pub t_method: MomentMethod,
    pub margin: f64,
    pub tolerance: f64,
    pub verdict: CubatureVerdict,
    /// `max - min` of `Σ ω_j <P_W, P_{V_j}>^p` over random `W`; advisory.
    pub probe_spread: f64,
    pub probe_mean: f64,
}

/// Random `W` used by the constancy probe.
pub const CUBATURE_PROBES: usize = 1000;

/// Compares the potential of the normalized frame with `T_{k,k,d}(p)`, its
/// minimum over all weighted collections of `k`-planes.
pub fn certify_cubature(
    frame: &WeightedFrame,
    p: usize,
    tol: f64,
    budget: &MomentBudget,
) -> Result<CubatureCertificate> {
    let k = frame.require_common_dim()?;
    let d = frame.ambient_dim();
    let normalized = frame.normalized();
    let ffp_value = ffp(&normalized, p);
    let t = t_moment_auto(k, k, d, p, budget)?;
    let margin = ffp_value - t.value;
    let verdict = if margin > tol + t.error {
        CubatureVerdict::NotCubature
    } else if t.error > tol {
        CubatureVerdict::Inconclusive
    } else {
        CubatureVerdict::Cubature
    };

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for _ in 0..CUBATURE_PROBES {
        let w = haar_random(d, k, &mut rng)?;
        let v: f64 = normalized
            .entries()
            .iter()
            .map(|e| e.weight * crate::gram::hs_inner_unchecked(&w, &e.subspace).powi(p as i32))
            .sum();
        lo = lo.min(v);
        hi = hi.max(v);
        sum += v;
    }
    Ok(CubatureCertificate {
        p,
        ffp_value,
        t_value: t.value,
        t_error: t.error,
        t_method: t.method,
        margin,
        tolerance: tol,
        verdict,
        probe_spread: hi - lo,
        probe_mean: sum / CUBATURE_PROBES as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeBounds {
    /// `C(2p+d-1, d-1) - 1`: a tight `p`-fusion frame of at most this many
    /// subspaces exists.
    pub tight_p_existence_bound: u128,
    /// Dimensions of the degree-`2l` harmonic spaces on `S^{d-1}`, `l = 1..=p`.
    pub harmonic_dims: Vec<u128>,
    /// `C(d+1, 2)`: most pairwise distinct equiangular subspaces in `R^d`.
    pub max_equiangular: u128,
}

pub fn size_bounds(d: usize, p: usize) -> SizeBounds {
    let d64 = d as u64;
    let harm = |l: u64| {
        let top = binomial(d64 + 2 * l - 1, d64 - 1);
        let below = if 2 * l >= 2 { binomial(d64 + 2 * l - 3, d64 - 1) } else { 0 };
        top - below
    };
    SizeBounds {
        tight_p_existence_bound: binomial(2 * p as u64 + d64 - 1, d64 - 1) - 1,
        harmonic_dims: (1..=p as u64).map(harm).collect(),
        max_equiangular: binomial(d64 + 1, 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::tests::{mercedes, ortho_lines};
    use crate::frame::{certify_tight, DEFAULT_TIGHT_TOL};

    #[test]
    fn t_one_examples() {
        for d in 2..8 {
            for k in 1..d {
                assert!((t_one(k, d, 1) - k as f64 / d as f64).abs() < 1e-15);
            }
        }
        assert_eq!(t_one(1, 2, 2), 3.0 / 8.0);
        let (m, se) = monte_carlo(3, 1, 4, 3, 100_000, 5).unwrap();
        assert!((t_one(3, 4, 3) - m).abs() <= 3.0 * se);
    }

    #[test]
    fn p_one_moments_are_kl_over_d() {
        let budget = MomentBudget::default();
        for d in 2..=6 {
            for k in 1..d {
                for l in 1..d {
                    let e = t_moment_auto(k, l, d, 1, &budget).unwrap();
                    let exact = (k * l) as f64 / d as f64;
                    assert!((e.value - exact).abs() < 1e-12, "T_{{{k},{l},{d}}}(1) = {}", e.value);
                }
            }
        }
    }

    #[test]
    fn reduction_keeps_pairs_inside_the_density_domain() {
        for d in 2..10 {
            for k in 1..d {
                for l in 1..d {
                    let r = reduce(k, l, d);
                    assert!(r.k + r.l <= d && r.k >= 1 && r.l >= 1);
                    assert!(r.k.min(r.l) <= k.min(l).min(d - k).min(d - l));
                }
            }
        }
    }

    #[test]
    fn plane_quadrature_agrees_with_monte_carlo() {
        let budget = MomentBudget { mc_samples: 1_000_000, seed: 99, nodes: 64 };
        let q = t_moment(2, 2, 5, 2, MomentMethod::Quadrature, &budget).unwrap();
        let mc = t_moment(2, 2, 5, 2, MomentMethod::MonteCarlo, &budget).unwrap();
        assert_eq!(q.method, MomentMethod::Quadrature);
        assert!(q.error < 1e-12, "quadrature error {}", q.error);
        assert!((q.value - mc.value).abs() <= 3.0 * mc.error, "{} vs {} ± {}", q.value, mc.value, mc.error);
    }

    #[test]
    fn quadrature_routes_match_closed_form_for_lines() {
        let budget = MomentBudget::default();
        for d in 2..7 {
            for k in 1..d {
                for p in 0..6 {
                    let q = t_moment(1, k, d, p, MomentMethod::Quadrature, &budget).unwrap();
                    assert!((q.value - t_one(k, d, p)).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn quadrature_rejects_three_angles() {
        let budget = MomentBudget::default();
        assert!(matches!(
            t_moment(3, 3, 6, 2, MomentMethod::Quadrature, &budget),
            Err(FrameError::UnsupportedQuadratureDim(3))
        ));
        assert!(t_moment(3, 3, 6, 2, MomentMethod::ClosedForm, &budget).is_err());
        assert_eq!(t_moment(3, 3, 6, 1, MomentMethod::ClosedForm, &budget).unwrap().value, 1.5);
        assert_eq!(t_moment_auto(3, 3, 6, 2, &budget).unwrap().method, MomentMethod::MonteCarlo);
    }

    #[test]
    fn t_matrix_examples() {
        let budget = MomentBudget::default();
        let t = t_matrix(3, 1, &budget).unwrap();
        let expect = [[1.0 / 3.0, 2.0 / 3.0], [2.0 / 3.0, 4.0 / 3.0]];
        for k in 1..3 {
            for l in 1..3 {
                assert!((t.get(k, l).unwrap().value - expect[k - 1][l - 1]).abs() < 1e-14);
            }
        }
        for p in 1..6 {
            let t = t_matrix(2, p, &budget).unwrap();
            assert_eq!(t.get(1, 1).unwrap().value, pochhammer(0.5, p) / pochhammer(1.0, p));
            assert!(t.get(2, 1).is_none());
        }
        for d in 3..7 {
            let t = t_matrix(d, 2, &MomentBudget { mc_samples: 20_000, ..budget }).unwrap();
            for k in 1..d {
                assert_eq!(t.get(1, k).unwrap().value, t_one(k, d, 2));
                assert_eq!(t.get(1, k).unwrap().method, MomentMethod::ClosedForm);
                for l in 1..d {
                    let e = t.get(k, l).unwrap();
                    assert_eq!(e, t.get(l, k).unwrap());
                    assert!(e.value > 0.0 && e.value <= (k.min(l) as f64).powi(2) + e.error);
                }
            }
        }
    }

    #[test]
    fn csv_layout() {
        let csv = t_matrix(3, 1, &MomentBudget::default()).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,l,p,value,error,method");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("1,1,1,"));
        assert!(lines[1].ends_with(",closed-form"));
    }

    #[test]
    fn design_diagnostic_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = design_diagnostic(&mercedes(), 2, 200, &mut rng).unwrap();
        assert!(r.iter().all(|v| *v < 1e-10), "{r:?}");

        let r = design_diagnostic(&ortho_lines(2), 2, 200, &mut rng).unwrap();
        assert!(r[0] < 1e-12 && r[1] > 0.1, "{r:?}");

        let mut a = ChaCha8Rng::seed_from_u64(4);
        let mut b = ChaCha8Rng::seed_from_u64(4);
        let f = ortho_lines(3);
        let base = design_diagnostic(&f, 3, 50, &mut a).unwrap();
        let scaled = design_diagnostic(&f.scaled(2.5).unwrap(), 3, 50, &mut b).unwrap();
        for (x, y) in base.iter().zip(scaled) {
            assert!((2.5 * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn cubature_examples() {
        let budget = MomentBudget::default();
        let c = certify_cubature(&mercedes(), 2, 1e-9, &budget).unwrap();
        // weights 1/3: (1/9)(3 + 6/16) = 3/8
        assert!((c.ffp_value - 3.0 / 8.0).abs() < 1e-15);
        assert!(c.margin.abs() < 1e-9 && c.verdict == CubatureVerdict::Cubature);
        assert!(c.probe_spread < 1e-12);
        assert!(certify_tight(&mercedes(), 2, DEFAULT_TIGHT_TOL).unwrap().tight);

        let c = certify_cubature(&ortho_lines(2), 2, 1e-9, &budget).unwrap();
        assert!((c.ffp_value - 0.5).abs() < 1e-15);
        assert_eq!(c.verdict, CubatureVerdict::NotCubature);
    }

    #[test]
    fn size_bound_examples() {
        let s = size_bounds(2, 2);
        assert_eq!(s.tight_p_existence_bound, 4);
        assert_eq!(s.max_equiangular, 3);
        assert_eq!(size_bounds(3, 1).harmonic_dims, vec![5]);
        // degree-2l harmonics on S^2 have dimension 4l + 1
        assert_eq!(size_bounds(3, 4).harmonic_dims, vec![5, 9, 13, 17]);
    }
}
