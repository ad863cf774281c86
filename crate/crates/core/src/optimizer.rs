//! Riemannian descent of the fusion frame potential over products of
//! Grassmannians, and sphere extrema of the power form for frame bounds.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::frame::{power_form_value, FrameEntry, WeightedFrame};
use crate::gram::{haar_random, orthonormalize, random_unit_vector, Subspace};
use crate::moments::{t_moment_auto, MomentBudget, MomentEstimate};

const ARMIJO_C: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 60;
/// Restarts whose final potentials differ by less than this count as tied.
const TIE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    /// Number of subspaces.
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub p: usize,
    pub restarts: usize,
    pub max_iters: usize,
    /// Trial step of the first line search.
    pub step: f64,
    /// Stop once the Riemannian gradient norm drops below this.
    pub tol_grad: f64,
    /// Relative excess over `T_{k,k,d}(p)` still counted as success.
    pub target_margin: f64,
}

impl OptimizerConfig {
    pub fn new(d: usize, k: usize, n: usize, p: usize) -> Self {
        Self { n, k, d, p, restarts: 16, max_iters: 5000, step: 0.1, tol_grad: 1e-12, target_margin: 1e-5 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 || self.restarts == 0 || self.max_iters == 0 {
            return Err(FrameError::Parameter("n, p, restarts and max_iters must be positive".into()));
        }
        if self.k == 0 || self.k >= self.d {
            return Err(FrameError::Dimension(format!("need 1 <= k <= d-1, got k={}, d={}", self.k, self.d)));
        }
        if !(self.step > 0.0 && self.tol_grad >= 0.0 && self.target_margin >= 0.0) {
            return Err(FrameError::Parameter("step must be positive, tolerances non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct OptimizerTrace {
    /// Potential after every accepted step of the best restart, starting with
    /// the initial configuration.
    pub ffp_values: Vec<f64>,
    /// Best frame found, weights `1/n`.
    pub frame: WeightedFrame,
    pub final_ffp: f64,
    /// The minimum `T_{k,k,d}(p)` the potential is compared against.
    pub target: MomentEstimate,
    /// `final_ffp / target - 1`.
    pub margin: f64,
    pub success: bool,
    /// Index of the winning restart.
    pub best_restart: usize,
    /// Final potential of every restart, in restart order.
    pub restart_values: Vec<f64>,
}

impl OptimizerTrace {
    /// Two-column CSV `iteration,ffp`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,ffp\n");
        for (i, v) in self.ffp_values.iter().enumerate() {
            out.push_str(&format!("{i},{v:.17e}\n"));
        }
        out
    }
}

/// Potential `Σ_{i,j} ω_i ω_j ||Y_i^T Y_j||_F^{2p}` of orthonormal bases.
fn potential(bases: &[DMatrix<f64>], weights: &[f64], p: usize) -> f64 {
    let mut total = 0.0;
    for i in 0..bases.len() {
        total += weights[i] * weights[i] * (bases[i].ncols() as f64).powi(p as i32);
        for j in i + 1..bases.len() {
            let t = bases[i].tr_mul(&bases[j]).norm_squared();
            total += 2.0 * weights[i] * weights[j] * t.powi(p as i32);
        }
    }
    total
}

/// Horizontal gradients `4p ω_i Σ_{j≠i} ω_j t_ij^{p-1} P_j Y_i`, projected by
/// `G ↦ G - Y_i (Y_i^T G)`.
fn gradient(bases: &[DMatrix<f64>], weights: &[f64], p: usize) -> Vec<DMatrix<f64>> {
    let n = bases.len();
    (0..n)
        .map(|i| {
            let y = &bases[i];
            let mut g = DMatrix::zeros(y.nrows(), y.ncols());
            for j in (0..n).filter(|&j| j != i) {
                let c = bases[j].tr_mul(y);
                let t = c.norm_squared();
                g += (4.0 * p as f64 * weights[i] * weights[j] * t.powi(p as i32 - 1)) * (&bases[j] * c);
            }
            let vertical = y * y.tr_mul(&g);
            g - vertical
        })
        .collect()
}

/// Riemannian gradient of the potential with respect to each basis matrix.
pub fn ffp_gradient(frame: &WeightedFrame, p: usize) -> Result<Vec<DMatrix<f64>>> {
    frame.require_common_dim()?;
    if p == 0 {
        return Err(FrameError::Parameter("power must be at least 1".into()));
    }
    let bases: Vec<DMatrix<f64>> = frame.subspaces().map(|s| s.basis().clone()).collect();
    Ok(gradient(&bases, &frame.weights(), p))
}

fn retract(y: &DMatrix<f64>, g: &DMatrix<f64>, eta: f64) -> Option<DMatrix<f64>> {
    orthonormalize(y - g * eta).ok()
}

/// One descent run; returns the final bases and the accepted potentials.
fn descend(mut bases: Vec<DMatrix<f64>>, weights: &[f64], cfg: &OptimizerConfig, floor: f64) -> (Vec<DMatrix<f64>>, Vec<f64>) {
    let mut f = potential(&bases, weights, cfg.p);
    let mut history = vec![f];
    let mut eta = cfg.step;
    for _ in 0..cfg.max_iters {
        let g = gradient(&bases, weights, cfg.p);
        let gnorm_sq: f64 = g.iter().map(|m| m.norm_squared()).sum();
        if gnorm_sq.sqrt() <= cfg.tol_grad || f - floor <= 1e-15 * floor {
            break;
        }
        // the trial step grows after successes and shrinks by backtracking
        eta *= 2.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Option<Vec<DMatrix<f64>>> = bases.iter().zip(&g).map(|(y, gi)| retract(y, gi, eta)).collect();
            if let Some(trial) = trial {
                let ft = potential(&trial, weights, cfg.p);
                if ft <= f - ARMIJO_C * eta * gnorm_sq {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            eta *= BACKTRACK;
        }
        match accepted {
            Some((trial, ft)) => {
                bases = trial;
                f = ft;
                history.push(f);
            }
            None => break,
        }
    }
    (bases, history)
}

/// Searches for `n` equally weighted `k`-planes minimizing the `p`-potential.
/// Success means reaching `T_{k,k,d}(p)` up to the relative margin, i.e. a
/// cubature of strength `2p` was found.
pub fn minimize_ffp<R: Rng + ?Sized>(cfg: &OptimizerConfig, rng: &mut R) -> Result<OptimizerTrace> {
    cfg.validate()?;
    let budget = MomentBudget { seed: rng.random(), ..MomentBudget::default() };
    let target = t_moment_auto(cfg.k, cfg.k, cfg.d, cfg.p, &budget)?;
    let seeds: Vec<u64> = (0..cfg.restarts).map(|_| rng.random()).collect();
    let weights = vec![1.0 / cfg.n as f64; cfg.n];
    let floor = (target.value - 3.0 * target.error).max(0.0);

    let runs: Vec<(Vec<DMatrix<f64>>, Vec<f64>)> = seeds
        .par_iter()
        .map(|&s| {
            let mut r = ChaCha8Rng::seed_from_u64(s);
            let start = (0..cfg.n)
                .map(|_| haar_random(cfg.d, cfg.k, &mut r).map(|v| v.basis().clone()))
                .collect::<Result<Vec<_>>>()
                .expect("config validated");
            descend(start, &weights, cfg, floor)
        })
        .collect();

    let restart_values: Vec<f64> = runs.iter().map(|(_, h)| *h.last().expect("nonempty")).collect();
    let best_value = restart_values.iter().copied().fold(f64::INFINITY, f64::min);
    let best_restart = restart_values.iter().position(|v| *v <= best_value + TIE_TOL).expect("one restart");
    let (bases, ffp_values) = runs.into_iter().nth(best_restart).expect("index in range");
    let final_ffp = *ffp_values.last().expect("nonempty");
    let entries = bases
        .into_iter()
        .zip(&weights)
        .map(|(b, &weight)| Ok(FrameEntry { subspace: Subspace::new(b)?, weight }))
        .collect::<Result<Vec<_>>>()?;
    let frame = WeightedFrame::new(cfg.d, entries)?;
    let margin = final_ffp / target.value - 1.0;
    Ok(OptimizerTrace {
        ffp_values,
        frame,
        final_ffp,
        target,
        margin,
        success: final_ffp <= target.value * (1.0 + cfg.target_margin),
        best_restart,
        restart_values,
    })
}

/// Estimates `min` and `max` of `Σ ω_j ||P_j x||^{2p}` over the unit sphere by
/// projected gradient descent and ascent from random starts.
pub fn sphere_extrema<R: Rng + ?Sized>(frame: &WeightedFrame, p: usize, restarts: usize, rng: &mut R) -> (f64, f64) {
    let d = frame.ambient_dim();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..restarts.max(1) {
        let x = random_unit_vector(d, rng);
        lo = lo.min(sphere_run(frame, p, x.clone(), -1.0));
        hi = hi.max(sphere_run(frame, p, x, 1.0));
    }
    (lo, hi)
}

/// Default number of random starts for [`sphere_extrema`].
pub const SPHERE_RESTARTS: usize = 32;

fn sphere_gradient(frame: &WeightedFrame, p: usize, x: &DVector<f64>) -> DVector<f64> {
    let mut g = DVector::zeros(x.len());
    for e in frame.entries() {
        let px = e.subspace.project(x);
        let y = px.dot(x);
        g += px * (2.0 * p as f64 * e.weight * y.powi(p as i32 - 1));
    }
    let radial = x * x.dot(&g);
    g - radial
}

/// `sign = 1` ascends, `sign = -1` descends; returns the final value.
fn sphere_run(frame: &WeightedFrame, p: usize, mut x: DVector<f64>, sign: f64) -> f64 {
    let value = |x: &DVector<f64>| sign * power_form_value(frame, x, p);
    let mut f = value(&x);
    let mut eta = 0.1;
    for _ in 0..5000 {
        let g = sphere_gradient(frame, p, &x) * sign;
        let gn = g.norm_squared();
        if gn.sqrt() < 1e-13 {
            break;
        }
        eta *= 2.0;
        let mut moved = false;
        for _ in 0..MAX_BACKTRACKS {
            let trial = (&x + &g * eta).normalize();
            let ft = value(&trial);
            if ft >= f + ARMIJO_C * eta * gn {
                x = trial;
                f = ft;
                moved = true;
                break;
            }
            eta *= BACKTRACK;
        }
        if !moved {
            break;
        }
    }
    sign * f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::tests::{mercedes, ortho_lines};
    use crate::frame::{certify_tight, tightness_constant, OPTIMIZED_TIGHT_TOL};
    use crate::potential::{equiangularity, ffp};

    #[test]
    fn potential_matches_frame_potential() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in 1..=3 {
            let subs: Vec<Subspace> = (0..4).map(|_| haar_random(5, 2, &mut rng).unwrap()).collect();
            let f = WeightedFrame::new(
                5,
                subs.iter().enumerate().map(|(i, s)| FrameEntry { subspace: s.clone(), weight: 0.5 + i as f64 }).collect(),
            )
            .unwrap();
            let bases: Vec<_> = subs.iter().map(|s| s.basis().clone()).collect();
            assert!((potential(&bases, &f.weights(), p) - ffp(&f, p)).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_vanishes_at_critical_points() {
        let m = mercedes().normalized();
        let g = ffp_gradient(&m, 2).unwrap();
        assert!(g.iter().map(|x| x.norm_squared()).sum::<f64>().sqrt() < 1e-8);
        let o = ortho_lines(2);
        let g = ffp_gradient(&o, 1).unwrap();
        assert!(g.iter().all(|x| x.amax() < 1e-15));
        assert!((ffp(&o, 1) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let f = WeightedFrame::uniform(
            vec![Subspace::coordinate(3, &[0]).unwrap(), Subspace::coordinate(3, &[0, 1]).unwrap()],
            1.0,
        )
        .unwrap();
        assert!(matches!(ffp_gradient(&f, 2), Err(FrameError::MixedDimensions)));
    }

    #[test]
    fn recovers_mercedes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let trace = minimize_ffp(&OptimizerConfig::new(2, 1, 3, 2), &mut rng).unwrap();
        assert!(trace.success, "margin {}", trace.margin);
        assert!((trace.final_ffp - 3.0 / 8.0).abs() < 1e-6);
        assert!(trace.ffp_values.windows(2).all(|w| w[1] <= w[0]));
        let eq = equiangularity(&trace.frame, 1e-5).unwrap();
        assert!(eq.is_equiangular && (eq.common_value.unwrap() - 0.25).abs() < 1e-5);
        assert!(certify_tight(&trace.frame, 2, OPTIMIZED_TIGHT_TOL).unwrap().tight);
    }

    #[test]
    fn two_lines_cannot_form_a_design() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trace = minimize_ffp(&OptimizerConfig::new(2, 1, 2, 2), &mut rng).unwrap();
        assert!(!trace.success);
        assert!(trace.ffp_values.windows(2).all(|w| w[1] <= w[0]));
        // sweep over the angle between two lines: min of (1 + cos^4 θ)/2 is 1/2 > 3/8
        let sweep = (0..=1000)
            .map(|i| (1.0 + (i as f64 * std::f64::consts::FRAC_PI_2 / 1000.0).cos().powi(4)) / 2.0)
            .fold(f64::INFINITY, f64::min);
        assert!((trace.final_ffp - sweep).abs() < 1e-6);
    }

    #[test]
    fn iterates_respect_the_lower_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut cfg = OptimizerConfig::new(3, 1, 4, 2);
        cfg.restarts = 4;
        let trace = minimize_ffp(&cfg, &mut rng).unwrap();
        let floor = trace.target.value - 3.0 * trace.target.error;
        assert!(trace.ffp_values.iter().all(|v| *v >= floor - 1e-12));
        assert_eq!(trace.restart_values.len(), 4);
    }

    #[test]
    fn sphere_extrema_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (a, b) = sphere_extrema(&mercedes(), 2, SPHERE_RESTARTS, &mut rng);
        let t = tightness_constant(&mercedes(), 2);
        assert!((a - t).abs() < 1e-8 && (b - t).abs() < 1e-8);
        let single = WeightedFrame::uniform(vec![Subspace::line_at_angle(0.0)], 1.0).unwrap();
        let (a, b) = sphere_extrema(&single, 1, SPHERE_RESTARTS, &mut rng);
        assert!(a.abs() < 1e-10 && (b - 1.0).abs() < 1e-10);
        let (a, b) = sphere_extrema(&ortho_lines(2), 2, SPHERE_RESTARTS, &mut rng);
        assert!((a - 0.5).abs() < 1e-10 && (b - 1.0).abs() < 1e-10);
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::new(2, 2, 3, 2).validate().is_err());
        let mut c = OptimizerConfig::new(3, 1, 3, 2);
        c.restarts = 0;
        assert!(c.validate().is_err());
    }
}
