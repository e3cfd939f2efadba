use nalgebra::{DMatrix, DVector};

use crate::bodies::PlanarSampleSet;
use crate::linalg::C64;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskFit {
    pub center: C64,
    pub radius: f64,
    /// `max | |p − center| − radius | / radius` over the samples.
    pub max_rel_deviation: f64,
}

fn least_squares(a: DMatrix<f64>, b: DVector<f64>) -> Option<DVector<f64>> {
    a.svd(true, true).solve(&b, 1e-14).ok()
}

/// Circle through boundary samples: algebraic fit `|p|² = 2Re(c̄p) + k`
/// about the centroid, one Gauss–Newton step on the geometric residuals,
/// then radius = mean distance to the center.
pub fn fit_disk(samples: &PlanarSampleSet) -> Result<DiskFit> {
    let pts = samples.points();
    let m = pts.len();
    let mean = pts.iter().sum::<C64>() / m as f64;
    let spread = pts.iter().map(|p| (p - mean).norm()).fold(0.0, f64::max);
    if !(spread > 1e-300) || spread <= 1e-14 * mean.norm() {
        return Err(Error::InvalidParameter("disk fit: samples coincide".into()));
    }
    // work in units of the spread about the centroid
    let q: Vec<C64> = pts.iter().map(|p| (p - mean) / spread).collect();

    let a = DMatrix::from_fn(m, 3, |i, j| match j {
        0 => 2.0 * q[i].re,
        1 => 2.0 * q[i].im,
        _ => 1.0,
    });
    let b = DVector::from_fn(m, |i, _| q[i].norm_sqr());
    let sol = least_squares(a, b).ok_or(Error::Singular)?;
    let mut c = C64::new(sol[0], sol[1]);
    let r = (sol[2] + c.norm_sqr()).max(0.0).sqrt();

    let jac = DMatrix::from_fn(m, 3, |i, j| {
        let d = q[i] - c;
        let dist = d.norm().max(f64::MIN_POSITIVE);
        match j {
            0 => -d.re / dist,
            1 => -d.im / dist,
            _ => -1.0,
        }
    });
    let res = DVector::from_fn(m, |i, _| (q[i] - c).norm() - r);
    if let Some(delta) = least_squares(jac, -res) {
        if delta.iter().all(|x| x.is_finite()) {
            c += C64::new(delta[0], delta[1]);
        }
    }

    let dists: Vec<f64> = q.iter().map(|p| (p - c).norm()).collect();
    let r = dists.iter().sum::<f64>() / m as f64;
    if !(r > 0.0) {
        return Err(Error::InvalidParameter("disk fit: zero radius".into()));
    }
    let dev = dists.iter().map(|d| (d - r).abs() / r).fold(0.0, f64::max);
    Ok(DiskFit { center: mean + c * spread, radius: r * spread, max_rel_deviation: dev })
}

/// Disk test on a planar support function sampled at `m` equally spaced
/// angles `θₖ = 2πk/m`. A disk with center `c` and radius `r` has
/// `h(θ) = Re(c̄e^{iθ}) + r`; the fit is the orthogonal projection of the
/// samples onto `{1, cos θ, sin θ}` and the deviation is relative to `r`.
pub fn fit_support_disk(values: &[f64]) -> Result<DiskFit> {
    let m = values.len();
    if m < crate::bodies::MIN_PLANAR_SAMPLES {
        return Err(Error::InvalidParameter(format!("need at least 8 support samples, got {m}")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let angle = |k: usize| std::f64::consts::TAU * k as f64 / m as f64;
    let r = values.iter().sum::<f64>() / m as f64;
    let a = 2.0 / m as f64 * values.iter().enumerate().map(|(k, h)| h * angle(k).cos()).sum::<f64>();
    let b = 2.0 / m as f64 * values.iter().enumerate().map(|(k, h)| h * angle(k).sin()).sum::<f64>();
    if !(r > 0.0) {
        return Err(Error::InvalidParameter("support samples have no positive width".into()));
    }
    let dev = values
        .iter()
        .enumerate()
        .map(|(k, h)| (h - (a * angle(k).cos() + b * angle(k).sin() + r)).abs() / r)
        .fold(0.0, f64::max);
    Ok(DiskFit { center: C64::new(a, b), radius: r, max_rel_deviation: dev })
}
