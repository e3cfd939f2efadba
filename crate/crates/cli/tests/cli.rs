use std::path::Path;
use std::process::{Command, Output};

use cxell_cli::io::{from_json, to_json, BodySpec, EllipsoidRecord, PointCloud, Slab, SlabFile};
use num_complex::Complex64;
use serde_json::Value;

fn cxell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cxell")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

/// `±eⱼ`, `±i·eⱼ` in ℂⁿ.
fn basis_cloud(n: usize) -> PointCloud {
    let mut points = Vec::new();
    for j in 0..n {
        for w in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]] {
            let mut p = vec![[0.0, 0.0]; n];
            p[j] = w;
            points.push(p);
        }
    }
    PointCloud { dim: n, points }
}

#[test]
fn point_clouds_round_trip_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "g.json", "");
    let out = cxell(&["gen", "points", "--dim", "3", "--count", "15", "--seed", "4", "--output", &input]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&input).unwrap();
    let cloud: PointCloud = from_json(&text).unwrap();
    assert_eq!(to_json(&cloud).unwrap(), text);
    assert_eq!(cloud.points.len(), 15);
}

#[test]
fn records_round_trip_bit_exactly() {
    let e = EllipsoidRecord {
        center: vec![[0.1, -1.0 / 3.0], [f64::MIN_POSITIVE, 1e300]],
        shape: vec![[2.0, 0.0], [0.1, 0.7], [0.1, -0.7], [std::f64::consts::PI, 0.0]],
    };
    let text = to_json(&e).unwrap();
    assert_eq!(from_json::<EllipsoidRecord>(&text).unwrap(), e);
    assert_eq!(to_json(&from_json::<EllipsoidRecord>(&text).unwrap()).unwrap(), text);
    let slabs = SlabFile { slabs: vec![Slab { a: vec![[1.0, 2.0], [3.0, -4.0]], b: 0.1 + 0.2 }] };
    let text = to_json(&slabs).unwrap();
    assert_eq!(from_json::<SlabFile>(&text).unwrap(), slabs);
    let spec = BodySpec::LpBall { p: 4.0, dim: 2 };
    assert_eq!(from_json::<BodySpec>(&to_json(&spec).unwrap()).unwrap(), spec);
}

#[test]
fn basis_points_give_the_unit_ball() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "basis.json", &to_json(&basis_cloud(2)).unwrap());
    let out = cxell(&["mice", "--input", &input, "--eps", "1e-10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let rec: EllipsoidRecord = serde_json::from_value(v["ellipsoid"].clone()).unwrap();
    let identity = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]];
    for (got, want) in rec.shape.iter().zip(identity) {
        assert!((got[0] - want[0]).abs() < 1e-6 && (got[1] - want[1]).abs() < 1e-6, "{got:?}");
    }
    assert!(rec.center.iter().all(|z| z[0].abs() < 1e-6 && z[1].abs() < 1e-6));
    assert_eq!(v["report"]["converged"], Value::Bool(true));
}

#[test]
fn mice_output_ignores_row_order() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "a.json", "");
    cxell(&["gen", "points", "--dim", "2", "--count", "12", "--seed", "9", "--output", &input]);
    let mut cloud: PointCloud = from_json(&std::fs::read_to_string(&input).unwrap()).unwrap();
    let first = cxell(&["mice", "--input", &input, "--seed", "1"]);
    cloud.points.reverse();
    cloud.points.rotate_left(5);
    let shuffled = write(dir.path(), "b.json", &to_json(&cloud).unwrap());
    let second = cxell(&["mice", "--input", &shuffled, "--seed", "2"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn malformed_entries_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"dim\": 1,\n \"points\": [[[1.0, 0.0]],\n [[\"1.5e\", 0.0]]]}");
    let out = cxell(&["mice", "--input", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let msg = stderr(&out);
    assert!(msg.contains("points[1][0][0]") && msg.contains("1.5e") && msg.contains("line 3"), "{msg}");

    let short = write(dir.path(), "short.json", "{\"dim\": 2, \"points\": [[[1.0, 0.0]]]}");
    let out = cxell(&["mice", "--input", &short]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("points[0]"));

    let flat = write(dir.path(), "flat.json", "{\"dim\": 2, \"points\": [[[1.0, 0.0], [0.0, 0.0]], [[2.0, 0.0], [0.0, 0.0]], [[0.0, 3.0], [0.0, 0.0]]]}");
    assert_eq!(cxell(&["mice", "--input", &flat]).status.code(), Some(1));
    assert_eq!(cxell(&["mice"]).status.code(), Some(1));
    assert_eq!(cxell(&["mice", "--input", &flat, "--tol", "-1"]).status.code(), Some(1));
    assert_eq!(cxell(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn non_convergence_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", "");
    cxell(&["gen", "points", "--dim", "3", "--count", "30", "--output", &input]);
    let out = cxell(&["mice", "--input", &input, "--max-iter", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["report"]["converged"], Value::Bool(false));
}

#[test]
fn maie_of_coordinate_slabs() {
    let dir = tempfile::tempdir().unwrap();
    let slabs = SlabFile {
        slabs: vec![Slab { a: vec![[1.0, 0.0], [0.0, 0.0]], b: 2.0 }, Slab { a: vec![[0.0, 0.0], [0.0, 1.0]], b: 0.5 }],
    };
    let input = write(dir.path(), "s.json", &to_json(&slabs).unwrap());
    let out = cxell(&["maie", "--input", &input]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let rec: EllipsoidRecord = serde_json::from_value(json(&out)["ellipsoid"].clone()).unwrap();
    assert!((rec.shape[0][0] - 0.25).abs() < 1e-8 && (rec.shape[3][0] - 4.0).abs() < 1e-7);

    let open = SlabFile { slabs: vec![Slab { a: vec![[1.0, 0.0], [0.0, 0.0]], b: 1.0 }] };
    let input = write(dir.path(), "open.json", &to_json(&open).unwrap());
    let out = cxell(&["maie", "--input", &input]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unbounded"));
}

#[test]
fn bombon_verdicts_set_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let ell = write(dir.path(), "e.json", "");
    cxell(&["gen", "ellipsoid", "--dim", "3", "--seed", "5", "--output", &ell]);
    let out = cxell(&["bombon", "--input", &ell, "--lines", "200"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["witness"]["kind"], "line");

    let lp = write(dir.path(), "lp.json", "{\"kind\": \"lp_ball\", \"p\": 4, \"dim\": 2}");
    let out = cxell(&["bombon", "--input", &lp, "--lines", "200", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["verdict"], Value::Bool(false));
    assert_eq!(v["witness"]["kind"], "line");
    assert_eq!(v["seed"], 3);
    // the witness is reproducible
    assert_eq!(stdout(&out), stdout(&cxell(&["bombon", "--input", &lp, "--lines", "200", "--seed", "3"])));

    let bumpy = write(dir.path(), "b.json", "");
    cxell(&["gen", "perturbed", "--dim", "2", "--amount", "0.05", "--output", &bumpy]);
    assert_eq!(cxell(&["bombon", "--input", &bumpy, "--lines", "200"]).status.code(), Some(3));
}

#[test]
fn symmetry_reports_the_center() {
    let dir = tempfile::tempdir().unwrap();
    let ball = BodySpec::Ellipsoid {
        center: vec![[1.5, -0.5], [0.25, 2.0]],
        shape: vec![[4.0, 0.0], [0.0, 0.0], [0.0, 0.0], [4.0, 0.0]],
    };
    let input = write(dir.path(), "ball.json", &to_json(&ball).unwrap());
    let out = cxell(&["symmetry", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let center: Vec<[f64; 2]> = serde_json::from_value(json(&out)["center"].clone()).unwrap();
    let want = [Complex64::new(1.5, -0.5), Complex64::new(0.25, 2.0)];
    for (got, w) in center.iter().zip(want) {
        assert!((Complex64::new(got[0], got[1]) - w).norm() < 1e-9);
    }

    let nonj = write(dir.path(), "nonj.json", "");
    cxell(&["gen", "non-j", "--output", &nonj]);
    let out = cxell(&["symmetry", "--input", &nonj]);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&out).get("center").is_none());
}

#[test]
fn sweeps_run_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let ell = write(dir.path(), "e.json", "");
    cxell(&["gen", "ellipsoid", "--dim", "3", "--output", &ell]);
    assert_eq!(cxell(&["sections", "--input", &ell, "--planes", "4"]).status.code(), Some(0));
    assert_eq!(cxell(&["projections", "--input", &ell, "--planes", "4"]).status.code(), Some(0));
    let bumpy = write(dir.path(), "b.json", "");
    cxell(&["gen", "perturbed", "--dim", "3", "--amount", "0.2", "--output", &bumpy]);
    assert_eq!(cxell(&["sections", "--input", &bumpy, "--planes", "4"]).status.code(), Some(3));
    assert_eq!(cxell(&["projections", "--input", &bumpy, "--planes", "4"]).status.code(), Some(3));
    let small = write(dir.path(), "s.json", "");
    cxell(&["gen", "ellipsoid", "--dim", "2", "--output", &small]);
    assert_eq!(cxell(&["projections", "--input", &small]).status.code(), Some(1));
}

#[test]
fn generators_are_deterministic() {
    for kind in ["ellipsoid", "perturbed", "non-j", "lp-ball", "points"] {
        let a = cxell(&["gen", kind, "--seed", "11", "--dim", "3"]);
        assert_eq!(a.status.code(), Some(0), "{kind}");
        assert_eq!(stdout(&a), stdout(&cxell(&["gen", kind, "--seed", "11", "--dim", "3"])), "{kind}");
        let spec = from_json::<Value>(&stdout(&a)).unwrap();
        if kind != "points" {
            from_json::<BodySpec>(&spec.to_string()).unwrap().to_body().unwrap();
        }
    }
    assert_ne!(stdout(&cxell(&["gen", "ellipsoid", "--seed", "1"])), stdout(&cxell(&["gen", "ellipsoid", "--seed", "2"])));
}

#[test]
fn csv_flattens_scalars() {
    let dir = tempfile::tempdir().unwrap();
    let lp = write(dir.path(), "lp.json", "{\"kind\": \"lp_ball\", \"p\": 4, \"dim\": 2}");
    let out = cxell(&["symmetry", "--input", &lp, "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("command,seed,tol,verdict,witness.kind,worst_deviation,samples_used"));
    assert!(lines.next().unwrap().starts_with("symmetry,0,1e-6,true,direction,"));
}

#[test]
fn output_files_are_replaced_whole() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    std::fs::write(&target, "stale contents that are longer than the new output ".repeat(100)).unwrap();
    let out = cxell(&["gen", "lp-ball", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert_eq!(from_json::<BodySpec>(&text).unwrap(), BodySpec::LpBall { p: 4.0, dim: 2 });
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn scoreboard_is_reproducible_and_detects_injected_faults() {
    let small = ["verify-theorems", "--seed", "7", "--lines", "100", "--planes", "4", "--dirs", "32"];
    let a = cxell(&small);
    let b = cxell(&small);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let (mut va, mut vb) = (json(&a), json(&b));
    assert!(va["timings"].is_object());
    va.as_object_mut().unwrap().remove("timings");
    vb.as_object_mut().unwrap().remove("timings");
    assert_eq!(va, vb);
    assert_eq!(va["theorems"].as_array().unwrap().len(), cxell_cli::suite::CHECKS.len());

    let mut faulty = small.to_vec();
    faulty.extend(["--inject-fault", "affine-identity"]);
    let out = cxell(&faulty);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["witness"], "affine-identity");
    let failed: Vec<_> = v["theorems"].as_array().unwrap().iter().filter(|t| t["pass"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["name"], "affine-identity");

    let last = faulty.len() - 1;
    faulty[last] = "no-such-entry";
    assert_eq!(cxell(&faulty).status.code(), Some(1));
}
