//! Reference solvers for the extremal-ellipsoid problems, written without
//! the library's linear algebra or solvers.
//!
//! - `logdet_ascent`: projected-gradient ascent of `log det` of the weighted
//!   (centered or covariance) moment matrix over the probability simplex,
//!   with Armijo backtracking and nalgebra's complex Cholesky.
//! - `min_enclosing_circle`: brute force over pairs and triples in ℂ.

#![allow(dead_code)]

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

/// Euclidean projection onto the probability simplex (sort-based).
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, ui) in u.iter().enumerate() {
        cum += ui;
        let t = (cum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

fn to_columns(points: &[Vec<Complex64>]) -> Vec<DVector<Complex64>> {
    points.iter().map(|p| DVector::from_column_slice(p)).collect()
}

/// Weighted moment matrix and center: centered uses `Σ w x x†` about 0;
/// otherwise the covariance about `c = Σ w x`.
fn moment(xs: &[DVector<Complex64>], w: &[f64], centered: bool) -> (CMat, DVector<Complex64>) {
    let n = xs[0].len();
    let mut c = DVector::<Complex64>::zeros(n);
    if !centered {
        for (x, &wi) in xs.iter().zip(w) {
            c += x * Complex64::new(wi, 0.0);
        }
    }
    let mut m = CMat::zeros(n, n);
    for (x, &wi) in xs.iter().zip(w) {
        let d = x - &c;
        m += &d * d.adjoint() * Complex64::new(wi, 0.0);
    }
    (m, c)
}

fn objective(xs: &[DVector<Complex64>], w: &[f64], centered: bool) -> Option<f64> {
    let (m, _) = moment(xs, w, centered);
    let ch = Cholesky::new(m)?;
    let l = ch.l();
    Some((0..l.nrows()).map(|i| 2.0 * l[(i, i)].re.ln()).sum())
}

/// Quadratic forms `(xᵢ−c)†M⁻¹(xᵢ−c)`, the gradient of the objective.
fn forms(xs: &[DVector<Complex64>], w: &[f64], centered: bool) -> Vec<f64> {
    let (m, c) = moment(xs, w, centered);
    let inv = Cholesky::new(m).expect("positive definite").inverse();
    xs.iter()
        .map(|x| {
            let d = x - &c;
            (d.adjoint() * &inv * &d)[(0, 0)].re
        })
        .collect()
}

/// Returns `(center, shape)` of the minimal ellipsoid
/// `{x : (x−c)†S(x−c) ≤ 1}` through the design dual, scaled so that every
/// point is inside.
pub fn logdet_ascent(points: &[Vec<Complex64>], centered: bool, iters: usize) -> (Vec<Complex64>, CMat) {
    let xs = to_columns(points);
    let m = xs.len();
    let mut w = vec![1.0 / m as f64; m];
    let mut f = objective(&xs, &w, centered).expect("spanning points");
    let mut step = 1.0;
    for _ in 0..iters {
        let g = forms(&xs, &w, centered);
        let mut accepted = false;
        while step > 1e-18 {
            let trial: Vec<f64> = w.iter().zip(&g).map(|(wi, gi)| wi + step * gi).collect();
            let cand = project_simplex(&trial);
            let dir: Vec<f64> = cand.iter().zip(&w).map(|(a, b)| a - b).collect();
            let slope: f64 = dir.iter().zip(&g).map(|(d, gi)| d * gi).sum();
            if let Some(fc) = objective(&xs, &cand, centered) {
                if fc >= f + 1e-4 * slope {
                    let moved = dir.iter().map(|d| d.abs()).fold(0.0, f64::max);
                    w = cand;
                    f = fc;
                    accepted = moved > 0.0;
                    step *= 2.0;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let (mom, c) = moment(&xs, &w, centered);
    let inv = Cholesky::new(mom).expect("positive definite").inverse();
    let worst = forms(&xs, &w, centered).into_iter().fold(0.0, f64::max);
    let shape = inv / Complex64::new(worst, 0.0);
    (c.iter().copied().collect(), shape)
}

fn circle_through(a: Complex64, b: Complex64, c: Complex64) -> Option<(Complex64, f64)> {
    // solve |z−a|² = |z−b|² = |z−c|² as a 2×2 real system
    let (ab, ac) = (b - a, c - a);
    let det = 2.0 * (ab.re * ac.im - ab.im * ac.re);
    if det.abs() < 1e-14 {
        return None;
    }
    let (nb, nc) = (ab.norm_sqr(), ac.norm_sqr());
    let z = Complex64::new((nb * ac.im - nc * ab.im) / det, (ab.re * nc - ac.re * nb) / det);
    Some((a + z, z.norm()))
}

/// Smallest disk containing the points (O(m⁴) brute force).
pub fn min_enclosing_circle(points: &[Complex64]) -> (Complex64, f64) {
    let fits = |c: Complex64, r: f64| points.iter().all(|p| (p - c).norm() <= r * (1.0 + 1e-12) + 1e-15);
    let mut best: Option<(Complex64, f64)> = None;
    let mut consider = |c: Complex64, r: f64| {
        if fits(c, r) && best.is_none_or(|(_, br)| r < br) {
            best = Some((c, r));
        }
    };
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let c = (points[i] + points[j]) / 2.0;
            consider(c, (points[i] - c).norm());
            for k in j + 1..points.len() {
                if let Some((c, r)) = circle_through(points[i], points[j], points[k]) {
                    consider(c, r);
                }
            }
        }
    }
    best.expect("at least two points")
}
