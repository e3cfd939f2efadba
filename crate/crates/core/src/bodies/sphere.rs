//! Local maximisation of smooth functions on the unit sphere of ℝᴰ.
//!
//! Used where a body has no closed-form support function (sections of
//! general bodies) or no membership oracle (projections). Objectives there
//! are smooth near their maximiser, so a finite-difference Newton iteration
//! in tangent coordinates converges in a handful of steps; the value error is
//! quadratic in the position error.

use nalgebra::{DMatrix, DVector};

const FD_STEP: f64 = 1e-3;
const MAX_STEP: f64 = 0.5;
const STEP_TOL: f64 = 1e-9;
const MAX_ITER: usize = 40;

/// Orthonormal basis of the tangent space `v⊥` (columns).
fn tangent_basis(v: &DVector<f64>) -> DMatrix<f64> {
    let d = v.len();
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d - 1);
    let mut all = vec![v.clone()];
    for j in 0..d {
        if basis.len() == d - 1 {
            break;
        }
        let mut e = DVector::zeros(d);
        e[j] = 1.0;
        for _ in 0..2 {
            for q in &all {
                let p = q.dot(&e);
                e -= q * p;
            }
        }
        let n = e.norm();
        if n > 1e-6 {
            let e = e / n;
            all.push(e.clone());
            basis.push(e);
        }
    }
    DMatrix::from_columns(&basis)
}

fn retract(v: &DVector<f64>, basis: &DMatrix<f64>, s: &DVector<f64>) -> DVector<f64> {
    let p = v + basis * s;
    let n = p.norm();
    p / n
}

/// Maximises `f` over the unit sphere starting from `start` (need not be
/// normalised). Returns the maximiser and the maximum.
pub fn maximize_on_sphere<F>(start: &DVector<f64>, f: F) -> (DVector<f64>, f64)
where
    F: Fn(&DVector<f64>) -> f64,
{
    let mut v = start.normalize();
    let mut fv = f(&v);
    let dim = v.len();
    if dim < 2 {
        return (v, fv);
    }
    let m = dim - 1;
    let h = FD_STEP;

    for _ in 0..MAX_ITER {
        let basis = tangent_basis(&v);
        let eval = |s: &DVector<f64>| f(&retract(&v, &basis, s));
        let unit = |i: usize| {
            let mut e = DVector::zeros(m);
            e[i] = h;
            e
        };

        let mut grad = DVector::zeros(m);
        let mut hess = DMatrix::zeros(m, m);
        let mut plus = vec![0.0; m];
        let mut minus = vec![0.0; m];
        for i in 0..m {
            let ei = unit(i);
            plus[i] = eval(&ei);
            minus[i] = eval(&(-&ei));
            grad[i] = (plus[i] - minus[i]) / (2.0 * h);
            hess[(i, i)] = (plus[i] - 2.0 * fv + minus[i]) / (h * h);
        }
        for i in 0..m {
            for j in i + 1..m {
                let (ei, ej) = (unit(i), unit(j));
                let fpp = eval(&(&ei + &ej));
                let fpm = eval(&(&ei - &ej));
                let fmp = eval(&(&ej - &ei));
                let fmm = eval(&(-(&ei + &ej)));
                let hij = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
                hess[(i, j)] = hij;
                hess[(j, i)] = hij;
            }
        }

        // Newton direction when the model is concave, gradient otherwise.
        let newton = {
            let neg = -&hess;
            neg.clone().cholesky().map(|ch| ch.solve(&grad))
        };
        let mut step = match newton {
            Some(s) => s,
            None => {
                let curvature = hess.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
                &grad / curvature
            }
        };
        let len = step.norm();
        if len > MAX_STEP {
            step *= MAX_STEP / len;
        }
        if step.norm() < STEP_TOL {
            break;
        }

        let mut accepted = false;
        for _ in 0..30 {
            let cand = retract(&v, &basis, &step);
            let fc = f(&cand);
            if fc >= fv {
                v = cand;
                fv = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
            if step.norm() < STEP_TOL {
                break;
            }
        }
        if !accepted || step.norm() < STEP_TOL {
            break;
        }
    }
    (v, fv)
}
