use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fusionframe"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn gen_catalog(dir: &Path, name: &str, file: &str) -> PathBuf {
    let path = dir.join(file);
    let out = run(&["gen", "catalog", name, "-o", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn check_modes_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let m = gen_catalog(dir.path(), "mercedes", "mercedes.json");
    let m = m.to_str().unwrap();

    let out = run(&["check", m, "--p", "2", "--mode", "tight"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], "tight");
    assert!(r["result"]["certificate"]["residual"].as_f64().unwrap() < 1e-12);

    let out = run(&["check", m, "--p", "2", "--mode", "cubature"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out)["result"]["certificate"]["margin"].as_f64().unwrap().abs() < 1e-9);

    let out = run(&["check", m, "--p", "1", "--mode", "equiangular"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!((r["result"]["equiangularity"]["common_value"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(r["result"]["simplex_equality"], true);

    let out = run(&["check", m, "--p", "2", "--mode", "bounds"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let est = &r["result"]["frame_bounds_estimate"];
    assert!((est["lower"].as_f64().unwrap() - 1.125).abs() < 1e-8);
    assert!((est["upper"].as_f64().unwrap() - 1.125).abs() < 1e-8);

    let ortho = gen_catalog(dir.path(), "cross-polytope-lines(2)", "ortho2.json");
    let out = run(&["check", ortho.to_str().unwrap(), "--p", "2", "--mode", "tight"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["verdict"], "not-tight");
}

#[test]
fn errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"ambient_dim\": 2}").unwrap();
    assert_eq!(run(&["check", bad.to_str().unwrap(), "--p", "1"]).status.code(), Some(2));
    assert_eq!(run(&["check", "/nonexistent.json", "--p", "1"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "catalog", "no-such-frame"]).status.code(), Some(2));
    assert_eq!(run(&["moments", "--d", "1", "--p", "1"]).status.code(), Some(2));
    assert_eq!(run(&["check"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_apart_from_wall_time() {
    let dir = TempDir::new().unwrap();
    let f = gen_catalog(dir.path(), "mub-planes-r4", "mub.json");
    let args = ["--seed", "7", "check", f.to_str().unwrap(), "--p", "2", "--mode", "bounds"];
    let mut a = report(&run(&args));
    let mut b = report(&run(&args));
    a["wall_time_s"] = Value::Null;
    b["wall_time_s"] = Value::Null;
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn generated_frames_round_trip() {
    let dir = TempDir::new().unwrap();
    for name in ["mercedes", "equispaced-lines(6)", "mub-planes-r4", "weyl-a2-orbit(10)"] {
        let path = gen_catalog(dir.path(), name, "f.json");
        let text = std::fs::read_to_string(&path).unwrap();
        let (_, correction) = fusion_core::io::frame_from_json_with_correction(&text).unwrap();
        assert!(correction <= 1e-10, "{name}: {correction}");
    }
}

#[test]
fn gen_orbit_extend_realify() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let gens = d.join("weyl_a2.json");
    std::fs::write(&gens, fusion_core::io::generators_to_json(&fusion_core::constructions::weyl_a2_generators()))
        .unwrap();
    let orbit = d.join("orbit.json");
    let out = run(&["gen", "orbit", "--generators", gens.to_str().unwrap(), "--seed-angle", "0", "-o", orbit.to_str().unwrap()]);
    assert!(out.status.success());
    let frame = fusion_core::io::read_frame(&orbit).unwrap();
    let mercedes = fusion_core::constructions::catalog("mercedes").unwrap().frame;
    assert_eq!(frame.len(), 3);
    for s in frame.subspaces() {
        assert!(mercedes.subspaces().any(|t| t.same_as(s)));
    }

    let lines = d.join("mub.json");
    std::fs::write(&lines, fusion_core::io::complex_lines_to_json(&fusion_core::constructions::mub_c2())).unwrap();
    let planes = d.join("planes.json");
    let out = run(&["gen", "realify", "--lines", lines.to_str().unwrap(), "-o", planes.to_str().unwrap()]);
    assert!(out.status.success());
    let inner = gen_catalog(d, "mercedes", "inner.json");
    let ext = d.join("ext.json");
    let out = run(&[
        "gen", "extend", "--inner", inner.to_str().unwrap(), "--outer", planes.to_str().unwrap(), "-o",
        ext.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let f = fusion_core::io::read_frame(&ext).unwrap();
    assert_eq!((f.len(), f.ambient_dim()), (18, 4));
    let out = run(&["check", ext.to_str().unwrap(), "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));

    // a 3-dimensional group cannot take a seed angle
    let b3 = d.join("b3.json");
    std::fs::write(&b3, fusion_core::io::generators_to_json(&fusion_core::constructions::hyperoctahedral_generators(3)))
        .unwrap();
    assert_eq!(run(&["gen", "orbit", "--generators", b3.to_str().unwrap(), "--seed-angle", "5"]).status.code(), Some(2));
    let out = run(&["gen", "orbit", "--generators", b3.to_str().unwrap(), "--seed-dim", "2"]);
    assert!(out.status.success());
}

#[test]
fn moments_tables() {
    let out = run(&["moments", "--d", "3", "--p", "1"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        let (k, l): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert!((r[3].parse::<f64>().unwrap() - k * l / 3.0).abs() < 1e-15);
    }

    let out = run(&["moments", "--d", "2", "--p", "4"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    // (1/2)_4 / (1)_4 = (105/16) / 24
    assert!((row[3].parse::<f64>().unwrap() - 105.0 / 384.0).abs() < 1e-16);
    assert_eq!(row[5], "closed-form");

    let out = run(&["moments", "--d", "6", "--p", "2", "--mc-budget", "2e4"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let mc: Vec<&str> = csv.lines().filter(|l| l.starts_with("3,3,")).collect();
    assert_eq!(mc.len(), 1);
    assert!(mc[0].ends_with("monte-carlo"));
    assert!(mc[0].split(',').nth(4).unwrap().parse::<f64>().unwrap() > 0.0);
}

#[test]
fn optimize_writes_frame_and_trace() {
    let dir = TempDir::new().unwrap();
    let frame = dir.path().join("opt.json");
    let trace = dir.path().join("trace.csv");
    let out = run(&[
        "--seed", "1", "optimize", "--d", "2", "--k", "1", "--n", "3", "--p", "2", "-o",
        frame.to_str().unwrap(), "--trace", trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], "success");
    assert_eq!(r["result"]["tightness"]["tight"], true);
    let f = std::fs::read_to_string(&frame).unwrap();
    let (_, correction) = fusion_core::io::frame_from_json_with_correction(&f).unwrap();
    assert!(correction <= 1e-10);
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("iteration,ffp\n"));
    let values: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] <= w[0]));

    let out = run(&["optimize", "--d", "2", "--k", "1", "--n", "2", "--p", "2", "--restarts", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["verdict"], "failure");
}
