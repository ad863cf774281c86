use std::io::Write;
use std::path::Path;
use std::time::Instant;

use fusion_core::constructions::{catalog, close_group, extend, orbit_frame, realify};
use fusion_core::frame::{certify_tight, frame_operator, WeightedFrame, DEFAULT_TIGHT_TOL, OPTIMIZED_TIGHT_TOL};
use fusion_core::gram::{haar_random, Subspace};
use fusion_core::io::{complex_lines_from_json, frame_from_json_with_correction, frame_to_json, generators_from_json};
use fusion_core::moments::{certify_cubature, design_diagnostic, t_matrix, CubatureVerdict, MomentBudget};
use fusion_core::optimizer::{minimize_ffp, sphere_extrema, OptimizerConfig, SPHERE_RESTARTS};
use fusion_core::potential::{equiangularity, moment_report, simplex_equality, simplex_report, EQUIANGULAR_TOL};
use fusion_core::{FrameError, Result};
use nalgebra::SymmetricEigen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{CheckArgs, Cli, Command, GenCommand, Mode, MomentsArgs, OptimizeArgs};

/// Random unit vectors used by the per-degree diagnostic in `check --mode tight`.
const DIAGNOSTIC_PROBES: usize = 200;

/// Runs the command; `Ok(false)` means a negative verdict.
pub fn run(cli: &Cli) -> Result<bool> {
    let start = Instant::now();
    match &cli.command {
        Command::Check(args) => check(cli.seed, args, start),
        Command::Gen(cmd) => generate(cli.seed, cmd),
        Command::Moments(args) => moments(cli.seed, args),
        Command::Optimize(args) => optimize(cli.seed, args, start),
    }
}

fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn samples(budget: f64) -> Result<usize> {
    if !(budget >= 2.0 && budget.is_finite()) {
        return Err(FrameError::Parameter(format!("Monte-Carlo budget must be at least 2, got {budget}")));
    }
    Ok(budget.round() as usize)
}

/// Prints the report; keys come out sorted, so equal inputs give equal bytes
/// apart from the wall time.
fn emit(input_digest: Value, verdict: &str, tolerances: Value, result: Value, start: Instant) {
    let report = json!({
        "command": std::env::args().skip(1).collect::<Vec<_>>(),
        "input_digest": input_digest,
        "verdict": verdict,
        "tolerances": tolerances,
        "result": result,
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    print_stdout(&format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes")));
}

/// Writes to stdout; a reader that closed the pipe early is not an error.
fn print_stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn write_or_print(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print_stdout(&format!("{text}\n")),
    }
    Ok(())
}

fn check(seed: u64, args: &CheckArgs, start: Instant) -> Result<bool> {
    let bytes = std::fs::read(&args.frame)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| FrameError::Parameter(format!("{} is not UTF-8", args.frame.display())))?;
    let (frame, correction) = frame_from_json_with_correction(&text)?;
    if args.p == 0 {
        return Err(FrameError::Parameter("--p must be at least 1".into()));
    }
    let budget = MomentBudget { mc_samples: samples(args.mc_budget)?, seed, ..MomentBudget::default() };
    let input = json!(digest(&bytes));
    let p = args.p;

    let (ok, verdict, tolerances, mut result) = match args.mode {
        Mode::Tight => {
            let tol = args.tol.unwrap_or(DEFAULT_TIGHT_TOL);
            let cert = certify_tight(&frame, p, tol)?;
            let mut result = json!({ "certificate": cert });
            if frame.common_dim().is_some() && p <= 10 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                result["degree_residuals"] = json!(design_diagnostic(&frame, p, DIAGNOSTIC_PROBES, &mut rng)?);
            }
            let verdict = if cert.tight { "tight" } else { "not-tight" };
            (cert.tight, verdict, json!({ "coefficient_residual": tol }), result)
        }
        Mode::Cubature => {
            let tol = args.tol.unwrap_or(1e-9);
            let cert = certify_cubature(&frame, p, tol, &budget)?;
            let verdict = match cert.verdict {
                CubatureVerdict::Cubature => "cubature",
                CubatureVerdict::NotCubature => "not-cubature",
                CubatureVerdict::Inconclusive => "inconclusive",
            };
            let ok = cert.verdict == CubatureVerdict::Cubature;
            (ok, verdict, json!({ "margin": tol, "mc_samples": budget.mc_samples }), json!({ "certificate": cert }))
        }
        Mode::Equiangular => {
            let tol = args.tol.unwrap_or(EQUIANGULAR_TOL);
            let report = equiangularity(&frame, tol)?;
            let ok = report.equiangular_and_distinct() && report.gerzon_ok;
            let result = json!({
                "equiangularity": report,
                "simplex_equality": simplex_equality(&frame, tol)?,
            });
            (ok, if ok { "equiangular" } else { "not-equiangular" }, json!({ "spread": tol }), result)
        }
        Mode::Bounds => bounds(&frame, p, args.tol.unwrap_or(1e-9), &budget)?,
    };
    result["frame"] = json!({
        "ambient_dim": frame.ambient_dim(),
        "subspaces": frame.len(),
        "common_dim": frame.common_dim(),
        "basis_correction": correction,
    });
    emit(input, verdict, tolerances, result, start);
    Ok(ok)
}

type Outcome = (bool, &'static str, Value, Value);

fn bounds(frame: &WeightedFrame, p: usize, tol: f64, budget: &MomentBudget) -> Result<Outcome> {
    let mut ok = true;
    let mut result = json!({});
    if frame.len() >= 2 {
        let simplex = simplex_report(frame, p);
        ok &= simplex.gap >= -tol;
        result["simplex"] = json!(simplex);
    }
    let table = t_matrix(frame.ambient_dim(), p, budget)?;
    let moment = moment_report(frame, &table)?;
    let mixed = fusion_core::potential::ffp_lower_bound_mixed(frame, &table)?;
    ok &= moment.gap >= -(tol + 3.0 * mixed.error);
    result["moment"] = json!(moment);
    result["moment_error"] = json!(mixed.error);

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let (lower, upper) = sphere_extrema(frame, p, SPHERE_RESTARTS, &mut rng);
    result["frame_bounds_estimate"] = json!({ "lower": lower, "upper": upper, "restarts": SPHERE_RESTARTS });
    if p == 1 {
        let eig = SymmetricEigen::new(frame_operator(frame)).eigenvalues;
        result["frame_bounds_exact"] = json!({ "lower": eig.min(), "upper": eig.max() });
    }
    let verdict = if ok { "bounds-hold" } else { "bounds-violated" };
    Ok((ok, verdict, json!({ "bound": tol, "mc_samples": budget.mc_samples }), result))
}

fn generate(seed: u64, cmd: &GenCommand) -> Result<bool> {
    let (frame, output) = match cmd {
        GenCommand::Catalog { name, output } => (catalog(name)?.frame, output),
        GenCommand::Orbit { generators, seed_angle, seed_dim, max_order, output } => {
            let gens = generators_from_json(&std::fs::read_to_string(generators)?)?;
            let group = close_group(&gens, *max_order)?;
            let seed_space = match (seed_angle, seed_dim) {
                (Some(deg), _) if group.dim() == 2 => Subspace::line_at_angle(deg.to_radians()),
                (Some(_), _) => {
                    return Err(FrameError::Dimension(format!(
                        "--seed-angle needs a group acting on R^2, not R^{}",
                        group.dim()
                    )))
                }
                (None, Some(k)) => haar_random(group.dim(), *k, &mut ChaCha8Rng::seed_from_u64(seed))?,
                (None, None) => return Err(FrameError::Parameter("give --seed-angle or --seed-dim".into())),
            };
            (orbit_frame(&group, &seed_space)?, output)
        }
        GenCommand::Extend { inner, outer, output } => {
            let inner = fusion_core::io::read_frame(inner)?;
            let outer = fusion_core::io::read_frame(outer)?;
            (extend(&inner, &outer)?, output)
        }
        GenCommand::Realify { lines, output } => {
            let lines = complex_lines_from_json(&std::fs::read_to_string(lines)?)?;
            (realify(&lines)?, output)
        }
    };
    write_or_print(output.as_deref(), &frame_to_json(&frame))?;
    Ok(true)
}

fn moments(seed: u64, args: &MomentsArgs) -> Result<bool> {
    let budget = MomentBudget { mc_samples: samples(args.mc_budget)?, seed, nodes: args.nodes };
    let table = t_matrix(args.d, args.p, &budget)?;
    let csv = table.to_csv();
    match &args.output {
        Some(path) => std::fs::write(path, csv)?,
        None => print_stdout(&csv),
    }
    Ok(true)
}

fn optimize(seed: u64, args: &OptimizeArgs, start: Instant) -> Result<bool> {
    let cfg = OptimizerConfig {
        n: args.n,
        k: args.k,
        d: args.d,
        p: args.p,
        restarts: args.restarts,
        max_iters: args.max_iters,
        step: args.step,
        tol_grad: args.tol_grad,
        target_margin: args.margin,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trace = minimize_ffp(&cfg, &mut rng)?;
    if let Some(path) = &args.output {
        std::fs::write(path, frame_to_json(&trace.frame))?;
    }
    if let Some(path) = &args.trace {
        std::fs::write(path, trace.to_csv())?;
    }
    let mut result = json!({
        "final_ffp": trace.final_ffp,
        "target": trace.target,
        "margin": trace.margin,
        "success": trace.success,
        "best_restart": trace.best_restart,
        "restart_values": trace.restart_values,
        "iterations": trace.ffp_values.len() - 1,
    });
    if trace.success {
        result["tightness"] = json!(certify_tight(&trace.frame, cfg.p, OPTIMIZED_TIGHT_TOL)?);
    }
    let input = json!(digest(serde_json::to_string(&cfg).expect("config serializes").as_bytes()));
    let verdict = if trace.success { "success" } else { "failure" };
    emit(input, verdict, json!({ "target_margin": cfg.target_margin, "tol_grad": cfg.tol_grad }), result, start);
    Ok(trace.success)
}
