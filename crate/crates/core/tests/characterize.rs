use cxell::bodies::{ellipsoid_oracle, gen_perturbed_ellipsoid, gen_random_ellipsoid, lp_ball_oracle, PlanarSampleSet};
use cxell::characterize::{
    bombon_check, disk_sections_through_point, fit_disk, projections_ellipsoid_sweep, sections_symmetric_sweep,
    symmetry_center, DEFAULT_TOL,
};
use cxell::random::rng_from_seed;
use cxell::{Witness, C64};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn random_ellipsoids_pass_every_test() {
    for seed in 0..12u64 {
        let n = 1 + seed as usize % 3;
        let e = gen_random_ellipsoid(seed, n);
        let body = ellipsoid_oracle(&e);
        assert!(bombon_check(&body, 100, DEFAULT_TOL, seed).unwrap().verdict, "seed {seed}");
        let (center, rep) = symmetry_center(&body, 4 * n, DEFAULT_TOL, seed).unwrap();
        assert!(rep.verdict, "seed {seed}");
        assert!(center.unwrap().distance(e.center()) <= 1e-7 * e.center().norm().max(1.0));
        assert!(disk_sections_through_point(&body, e.center(), 50, DEFAULT_TOL, seed).unwrap().verdict);
        if n > 1 {
            assert!(sections_symmetric_sweep(&body, 10, DEFAULT_TOL, seed, None).unwrap().verdict);
        }
        if n > 2 {
            assert!(projections_ellipsoid_sweep(&body, 2, 5, 20, DEFAULT_TOL, seed).unwrap().verdict);
        }
    }
}

#[test]
fn perturbed_ellipsoids_fail_reproducibly() {
    for seed in 0..5u64 {
        let body = gen_perturbed_ellipsoid(seed, 2, 0.05).unwrap();
        let a = bombon_check(&body, 200, DEFAULT_TOL, 9).unwrap();
        let b = bombon_check(&body, 200, DEFAULT_TOL, 9).unwrap();
        assert!(!a.verdict, "seed {seed}");
        assert!(matches!(a.worst_witness, Witness::Line { .. }));
        assert_eq!(a, b);
    }
}

#[test]
fn symmetric_is_weaker_than_ellipsoidal() {
    let lp = lp_ball_oracle(4.0, 2).unwrap();
    let (center, sym) = symmetry_center(&lp, 16, DEFAULT_TOL, 3).unwrap();
    assert!(sym.verdict && center.unwrap().norm() < 1e-7);
    assert!(!bombon_check(&lp, 200, DEFAULT_TOL, 3).unwrap().verdict);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let body = gen_perturbed_ellipsoid(7, 3, 0.2).unwrap();
    let run = || sections_symmetric_sweep(&body, 8, DEFAULT_TOL, 11, None).unwrap();
    let wide = run();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
    assert_eq!(wide, single);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn exact_circles_fit_exactly(
        r_log in -3.0f64..3.0,
        cr in -1e3f64..1e3,
        ci in -1e3f64..1e3,
        phase in 0.0f64..std::f64::consts::TAU,
        m in 8usize..64,
    ) {
        let r = 10f64.powf(r_log);
        let c = C64::new(cr, ci);
        let pts = (0..m)
            .map(|k| c + C64::from_polar(r, phase + std::f64::consts::TAU * k as f64 / m as f64))
            .collect();
        let fit = fit_disk(&PlanarSampleSet::new(pts).unwrap()).unwrap();
        // far from the origin the samples themselves are rounded at the
        // scale of ulp(|c|), which bounds any fit from below
        let floor = 8.0 * f64::EPSILON * c.norm() / r;
        prop_assert!(fit.max_rel_deviation <= 1e-12f64.max(floor), "{}", fit.max_rel_deviation);
    }

    #[test]
    fn random_arcs_are_still_circles(seed in any::<u64>()) {
        // uneven sampling of the full circle
        let mut rng = rng_from_seed(seed);
        let r = 10f64.powf(rng.random_range(-3.0..3.0));
        let pts = (0..20)
            .map(|_| C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        let fit = fit_disk(&PlanarSampleSet::new(pts).unwrap()).unwrap();
        prop_assert!(fit.max_rel_deviation <= 1e-12);
        prop_assert!((fit.radius - r).abs() <= 1e-12 * r);
    }
}
