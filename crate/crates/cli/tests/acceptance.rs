//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

#[path = "../../core/tests/common/oracles.rs"]
mod oracles;

use std::process::Command;
use std::time::{Duration, Instant};

use cxell::bodies::{ellipsoid_oracle, gen_non_j_invariant, gen_perturbed_ellipsoid, gen_random_ellipsoid, lp_ball_oracle, BodyOracle};
use cxell::characterize::{bombon_check, projections_ellipsoid_sweep, sections_symmetric_sweep, symmetry_center};
use cxell::ellipsoid::{midpoint_ellipsoid, midpoint_witness, mice_bound_ellipsoid};
use cxell::extremal::{maie_symmetric, mice, mice_with, shuffled_instance, slab_reach, symmetrize, MiceOptions};
use cxell::linalg::{det_product, lemma_affine_identity};
use cxell::random::{
    complex_gaussian, complex_gaussian_matrix, complex_gaussian_vector, random_unit_vector, random_unitary,
    rng_from_seed, SeededRng,
};
use cxell::{AxesVector, CMatrix, ComplexEllipsoid, ComplexVector, HermitianShape, C64};
use cxell_cli::io::{from_json, to_json, PointCloud};
use rand::Rng;
use serde_json::Value;

const MAX_ITER: usize = 100_000;
const TOL: f64 = 1e-6;
const LINES: usize = 1000;
const PLANES: usize = 20;
const DIRS: usize = 64;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn cloud(rng: &mut SeededRng, n: usize, m: usize) -> Vec<ComplexVector> {
    (0..m).map(|_| complex_gaussian_vector(rng, n)).collect()
}

fn relative_difference(a: &ComplexEllipsoid, b: &ComplexEllipsoid) -> f64 {
    let scale = b.center().norm().max(1.0);
    a.shape().relative_distance(b.shape()).max(a.center().distance(b.center()) / scale)
}

fn random_axes(rng: &mut SeededRng, n: usize) -> AxesVector {
    AxesVector::new((0..n).map(|_| rng.random_range(0.3..3.0)).collect()).unwrap()
}

fn unit_det_axes(rng: &mut SeededRng, n: usize) -> AxesVector {
    let logs: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    let mean = logs.iter().sum::<f64>() / n as f64;
    AxesVector::new(logs.iter().map(|l| (l - mean).exp()).collect()).unwrap()
}

fn mice_uniqueness() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_from_seed(1001);
    let mut worst = 0.0f64;
    for set in 0..10 {
        let m = rng.random_range(10..=40);
        let pts = cloud(&mut rng, 2 + set % 2, m);
        let (base, _) = mice(&pts, 1e-10, MAX_ITER).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let (shuffled, w) = shuffled_instance(&mut rng, &pts);
            let opts = MiceOptions { eps: 1e-10, max_iter: MAX_ITER, initial_weights: Some(w), ..MiceOptions::default() };
            let sol = mice_with(&shuffled, &opts).map_err(|e| e.to_string())?;
            worst = worst.max(relative_difference(&sol.ellipsoid, &base));
        }
    }
    let t = secs(start.elapsed());
    check(worst <= 1e-6 && t <= 5.0, format!("worst relative difference {worst:.2e} (limit 1e-6), {t:.2} s (limit 5 s)"))
}

fn mice_optimality() -> Outcome {
    let mut rng = rng_from_seed(1002);
    let (mut worst, mut gap) = (0.0f64, 0.0f64);
    for _ in 0..5 {
        let pts = cloud(&mut rng, 2, 5);
        let (e, rep) = mice(&pts, 1e-7, MAX_ITER).map_err(|e| e.to_string())?;
        gap = gap.max(if rep.converged { rep.duality_gap } else { f64::INFINITY });
        let raw: Vec<Vec<C64>> = pts.iter().map(|p| p.as_slice().to_vec()).collect();
        let (center, shape) = oracles::logdet_ascent(&raw, false, 20_000);
        for i in 0..2 {
            worst = worst.max((e.center()[i] - center[i]).norm());
            for j in 0..2 {
                worst = worst.max((e.shape().matrix()[(i, j)] - shape[(i, j)]).norm());
            }
        }
    }
    check(worst <= 1e-4 && gap <= 1e-7, format!("oracle entrywise difference {worst:.2e} (limit 1e-4), duality gap {gap:.2e} (limit 1e-7)"))
}

fn symmetric_sets_centered() -> Outcome {
    let mut rng = rng_from_seed(1003);
    let mut worst = 0.0f64;
    for set in 0..10 {
        let m = rng.random_range(3..=8);
        let pts = symmetrize(&cloud(&mut rng, 1 + set % 3, m), 64).map_err(|e| e.to_string())?;
        let (e, _) = mice(&pts, 1e-7, MAX_ITER).map_err(|e| e.to_string())?;
        worst = worst.max(e.center().norm());
    }
    check(worst <= 1e-4, format!("largest center norm {worst:.2e} (limit 1e-4)"))
}

fn maie_duality() -> Outcome {
    let mut rng = rng_from_seed(1004);
    let mut round_trip = 0.0f64;
    for i in 0..10 {
        let n = 1 + i % 3;
        let e = ComplexEllipsoid::from_axes(&random_axes(&mut rng, n), &random_unitary(&mut rng, n), ComplexVector::zeros(n))
            .map_err(|e| e.to_string())?;
        let (axes, frame) = e.to_axes();
        let slabs: Vec<_> = frame.columns().into_iter().zip(axes.as_slice().iter().copied()).collect();
        let got = maie_symmetric(&slabs).map_err(|e| e.to_string())?;
        round_trip = round_trip.max(got.shape().relative_distance(e.shape()));
    }
    let (mut gain, mut slowest, mut infeasible) = (f64::NEG_INFINITY, 0.0f64, false);
    for i in 0..5 {
        let start = Instant::now();
        let n = 2 + i % 2;
        let slabs: Vec<_> = (0..3 * n).map(|_| (complex_gaussian_vector(&mut rng, n), rng.random_range(0.5..2.0))).collect();
        let e = maie_symmetric(&slabs).map_err(|e| e.to_string())?;
        infeasible |= slabs.iter().any(|(a, b)| slab_reach(&e, a) > b * (1.0 + 1e-8));
        let cov = e.shape().inverse().into_matrix();
        let base = cov.det().re;
        for _ in 0..50 {
            let g = complex_gaussian_matrix(&mut rng, n, n);
            let h = (&g + &g.adjoint()).scale_real(0.5);
            let size = rng.random_range(1e-4..1e-2) * cov.frobenius_norm() / h.frobenius_norm();
            let Ok(shape) = HermitianShape::new((&cov + &h.scale_real(size)).hermitian_part()) else { continue };
            let reach = slabs.iter().map(|(a, b)| shape.quad_form(a).map(|q| q / (b * b))).try_fold(0.0f64, |m, q| q.map(|q| m.max(q)));
            let reach = reach.map_err(|e| e.to_string())?;
            gain = gain.max(shape.matrix().det().re / reach.powi(n as i32) / base - 1.0);
        }
        slowest = slowest.max(secs(start.elapsed()));
    }
    check(
        round_trip <= 1e-5 && gain <= 1e-12 && !infeasible && slowest <= 1.0,
        format!(
            "round trip {round_trip:.2e} (limit 1e-5), largest feasible det gain {gain:.2e}, feasible {}, slowest instance {slowest:.3} s (limit 1 s)",
            !infeasible
        ),
    )
}

fn midpoint_volume() -> Outcome {
    let mut rng = rng_from_seed(1005);
    let mut margin = f64::INFINITY;
    let mut samples = 0;
    while samples < 10_000 {
        let n = rng.random_range(2..=6);
        let lambda = unit_det_axes(&mut rng, n);
        if lambda.is_ones() {
            continue;
        }
        samples += 1;
        margin = margin.min(det_product(&lambda.midpoint_with_ones()) - 1.0);
    }
    check(margin > 0.0, format!("minimum observed margin {margin:.3e} over {samples} samples"))
}

fn affine_identity() -> Outcome {
    let mut rng = rng_from_seed(1006);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let lambda = 10f64.powf(rng.random_range(-3.0..3.0));
        let (x, c) = (complex_gaussian(&mut rng) * 5.0, complex_gaussian(&mut rng) * 5.0);
        let (l, r) = lemma_affine_identity(lambda, x, c).map_err(|e| e.to_string())?;
        worst = worst.max((l - r).abs() / l.abs().max(r.abs()).max(1.0));
    }
    check(worst <= 1e-12, format!("worst relative residual {worst:.2e} (limit 1e-12)"))
}

fn proof_constructions() -> Outcome {
    let mut rng = rng_from_seed(1007);
    let mut witness = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..=4);
        let lambda = random_axes(&mut rng, n);
        let c = complex_gaussian_vector(&mut rng, n);
        let mid = midpoint_ellipsoid(&lambda, &c).map_err(|e| e.to_string())?;
        let target = ComplexEllipsoid::from_axes(&lambda, &CMatrix::identity(n), c.clone()).map_err(|e| e.to_string())?;
        let u = random_unit_vector(&mut rng, n);
        let (x, y) = midpoint_witness(&lambda, &c, &u).map_err(|e| e.to_string())?;
        witness = witness
            .max((mid.form_value(&x) - 1.0).abs())
            .max(target.form_value(&y) - 1.0)
            .max(x.distance(&(&u + &y).scale_real(0.5)) / (1.0 + x.norm()));
    }
    let mut ratio = [0.0f64; 2];
    for i in 0..1000 {
        let n = rng.random_range(2..=4);
        let branch = i % 2;
        let (beta, c) = if branch == 0 {
            let lambda = unit_det_axes(&mut rng, n);
            (AxesVector::new(lambda.as_slice().iter().map(|l| l.powf(-0.5)).collect()).unwrap(), ComplexVector::zeros(n))
        } else {
            (AxesVector::ones(n), random_unit_vector(&mut rng, n).scale_real(rng.random_range(0.01..1.9)))
        };
        let bound = mice_bound_ellipsoid(&beta, &c).map_err(|e| e.to_string())?;
        ratio[branch] = ratio[branch].max(bound.volume() / ComplexEllipsoid::unit_ball(n).volume());
    }
    check(
        witness <= 1e-9 && ratio.iter().all(|r| *r < 1.0),
        format!(
            "midpoint witness residual {witness:.2e} (limit 1e-9), largest bound volume ratio {:.6} and {:.6} (must be below 1)",
            ratio[0], ratio[1]
        ),
    )
}

fn bombon_theorem() -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    for i in 0..50u64 {
        let e = gen_random_ellipsoid(2000 + i, 1 + i as usize % 3);
        let start = Instant::now();
        let rep = bombon_check(&ellipsoid_oracle(&e), LINES, TOL, 3000 + i).map_err(|e| e.to_string())?;
        slowest = slowest.max(secs(start.elapsed()));
        worst = worst.max(if rep.verdict { rep.worst_deviation } else { f64::INFINITY });
    }
    let mut bodies: Vec<Box<dyn BodyOracle>> = vec![Box::new(lp_ball_oracle(4.0, 2).map_err(|e| e.to_string())?)];
    for (i, eps) in [0.05, 0.05, 0.1, 0.2].into_iter().enumerate() {
        bodies.push(Box::new(gen_perturbed_ellipsoid(4000 + i as u64, 2 + i % 2, eps).map_err(|e| e.to_string())?));
    }
    let (mut least, mut reproducible) = (f64::INFINITY, true);
    for (i, body) in bodies.iter().enumerate() {
        let seed = 5000 + i as u64;
        let rep = bombon_check(body.as_ref(), LINES, TOL, seed).map_err(|e| e.to_string())?;
        reproducible &= rep == bombon_check(body.as_ref(), LINES, TOL, seed).map_err(|e| e.to_string())?;
        least = least.min(if rep.verdict { 0.0 } else { rep.worst_deviation });
    }
    check(
        worst <= TOL && slowest <= 2.0 && least > TOL && reproducible,
        format!(
            "ellipsoid worst deviation {worst:.2e}, slowest {slowest:.3} s (limit 2 s); non-ellipsoid least deviation {least:.2e}, witnesses reproducible {reproducible}"
        ),
    )
}

fn symmetry_detection() -> Outcome {
    let mut rng = rng_from_seed(1009);
    let mut center_err = 0.0f64;
    for i in 0..12u64 {
        let n = 1 + i as usize % 3;
        let e = if i % 2 == 0 {
            ComplexEllipsoid::ball(complex_gaussian_vector(&mut rng, n).scale_real(3.0), rng.random_range(0.1..3.0))
                .map_err(|e| e.to_string())?
        } else {
            gen_random_ellipsoid(6000 + i, n).translate(&complex_gaussian_vector(&mut rng, n))
        };
        let body = ellipsoid_oracle(&e);
        let (center, _) = symmetry_center(&body, DIRS, TOL, 6100 + i).map_err(|e| e.to_string())?;
        center_err = center_err.max(center.map_or(f64::INFINITY, |c| c.distance(e.center()) / body.outer_radius()));
    }
    let mut non_j_accepted = 0;
    for i in 0..10u64 {
        let body = gen_non_j_invariant(6200 + i, 1 + i as usize % 3);
        let (center, rep) = symmetry_center(&body, DIRS, TOL, 6300 + i).map_err(|e| e.to_string())?;
        non_j_accepted += usize::from(center.is_some() || rep.verdict);
    }
    let lp = lp_ball_oracle(4.0, 2).map_err(|e| e.to_string())?;
    let (lp_center, lp_sym) = symmetry_center(&lp, DIRS, TOL, 6400).map_err(|e| e.to_string())?;
    let lp_bombon = bombon_check(&lp, LINES, TOL, 6401).map_err(|e| e.to_string())?;
    let lp_ok = lp_center.is_some() && lp_sym.verdict && !lp_bombon.verdict;
    check(
        center_err <= 1e-7 && non_j_accepted == 0 && lp_ok,
        format!(
            "center error {center_err:.2e} of outer radius (limit 1e-7), non-J bodies accepted {non_j_accepted}/10, l4 ball symmetric {} and bombon {}",
            lp_sym.verdict, lp_bombon.verdict
        ),
    )
}

fn sweeps() -> Outcome {
    let mut slowest = 0.0f64;
    let mut deterministic = true;
    let mut timed = |f: &dyn Fn() -> cxell::Result<cxell::CharacterizationReport>| -> Result<bool, String> {
        let start = Instant::now();
        let rep = f().map_err(|e| e.to_string())?;
        slowest = slowest.max(secs(start.elapsed()));
        deterministic &= rep == f().map_err(|e| e.to_string())?;
        Ok(rep.verdict)
    };
    let (mut true_on_ellipsoids, mut false_on_perturbed) = (true, true);
    for i in 0..3u64 {
        let e = gen_random_ellipsoid(7000 + i, 2 + i as usize % 2);
        let body = ellipsoid_oracle(&e);
        true_on_ellipsoids &= timed(&|| sections_symmetric_sweep(&body, PLANES, TOL, 7100 + i, None))?;
        true_on_ellipsoids &= timed(&|| sections_symmetric_sweep(&body, PLANES, TOL, 7200 + i, Some(e.center())))?;
        let body3 = ellipsoid_oracle(&gen_random_ellipsoid(7300 + i, 3));
        true_on_ellipsoids &= timed(&|| projections_ellipsoid_sweep(&body3, 2, PLANES, DIRS, TOL, 7400 + i))?;
        let bumpy = gen_perturbed_ellipsoid(7500 + i, 2 + i as usize % 2, 0.1).map_err(|e| e.to_string())?;
        false_on_perturbed &= !timed(&|| sections_symmetric_sweep(&bumpy, PLANES, TOL, 7600 + i, None))?;
        let bumpy3 = gen_perturbed_ellipsoid(7700 + i, 3, 0.3).map_err(|e| e.to_string())?;
        false_on_perturbed &= !timed(&|| projections_ellipsoid_sweep(&bumpy3, 2, PLANES, DIRS, TOL, 7800 + i))?;
    }
    check(
        true_on_ellipsoids && false_on_perturbed && deterministic && slowest <= 10.0,
        format!(
            "true on ellipsoids {true_on_ellipsoids}, false on perturbed {false_on_perturbed}, deterministic {deterministic}, slowest sweep {slowest:.2} s (limit 10 s)"
        ),
    )
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cxell")).args(args).output().map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = rng_from_seed(1011);
    let mut cloud = PointCloud::from_points(&cloud(&mut rng, 3, 25));
    let mut outputs = Vec::new();
    for round in 0..3 {
        let path = dir.path().join(format!("p{round}.json"));
        std::fs::write(&path, to_json(&cloud).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        outputs.push(run_cli(&["mice", "--input", path.to_str().unwrap()])?);
        cloud.points.reverse();
        cloud.points.rotate_left(7);
    }
    let row_order = outputs[0].0 == 0 && outputs.iter().all(|o| *o == outputs[0]);
    let board = |text: &str| -> Result<Value, String> {
        let mut v: Value = from_json(text).map_err(|e| e.to_string())?;
        v.as_object_mut().ok_or("scoreboard is not an object")?.remove("timings");
        Ok(v)
    };
    let (code_a, a) = run_cli(&["verify-theorems"])?;
    let (code_b, b) = run_cli(&["verify-theorems"])?;
    let repeated = code_a == code_b && board(&a)? == board(&b)?;
    check(
        row_order && repeated,
        format!("mice output independent of row order {row_order}, repeated scoreboards identical {repeated} (exit {code_a})"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("mice uniqueness", mice_uniqueness),
        ("mice optimality against the log-det oracle", mice_optimality),
        ("symmetric sets give centered mice", symmetric_sets_centered),
        ("maie duality and local maximality", maie_duality),
        ("midpoint volume inequality", midpoint_volume),
        ("affine identity", affine_identity),
        ("proof constructions", proof_constructions),
        ("bombon characterization", bombon_theorem),
        ("symmetry detection", symmetry_detection),
        ("section and projection sweeps", sweeps),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let t = secs(start.elapsed());
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{t:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{t:.2} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
