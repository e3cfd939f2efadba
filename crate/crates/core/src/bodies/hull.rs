use nalgebra::DMatrix;

use super::{estimate_inner_radius, BodyOracle};
use crate::linalg::ComplexVector;
use crate::{Error, Result};

/// Smallest singular value of the centred point matrix below which a point
/// set counts as flat.
pub const FLAT_TOL: f64 = 1e-9;

/// Phase-one residual (in normalised units) accepted as feasible.
const LP_FEAS_TOL: f64 = 1e-11;
const PIVOT_TOL: f64 = 1e-12;

/// Convex hull of finitely many points of ℂⁿ.
///
/// Membership solves the feasibility problem `x = Σλᵢpᵢ, Σλᵢ = 1, λ ≥ 0`
/// with a phase-one simplex method.
#[derive(Clone, Debug)]
pub struct HullBody {
    points: Vec<ComplexVector>,
    /// Real coordinates of the normalised points `(pᵢ − m)/s`, one per column.
    normalized: DMatrix<f64>,
    mean: ComplexVector,
    scale: f64,
    outer: f64,
    inner: f64,
}

pub fn hull_oracle(points: &[ComplexVector]) -> Result<HullBody> {
    let first = points.first().ok_or(Error::Empty)?;
    let n = first.dim();
    for p in points {
        first.check_dim(p)?;
        if p.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    let m = points.len();
    let mean = points
        .iter()
        .fold(ComplexVector::zeros(n), |acc, p| &acc + p)
        .scale_real(1.0 / m as f64);
    let scale = points.iter().map(|p| p.distance(&mean)).fold(0.0, f64::max);
    if m < 2 * n + 1 || scale == 0.0 {
        return Err(Error::Flat);
    }
    let normalized = DMatrix::from_columns(
        &points
            .iter()
            .map(|p| (p - &mean).scale_real(1.0 / scale).to_real())
            .collect::<Vec<_>>(),
    );
    let sv = normalized.clone().singular_values();
    if sv.min() <= FLAT_TOL {
        return Err(Error::Flat);
    }
    let outer = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let mut body = HullBody { points: points.to_vec(), normalized, mean, scale, outer, inner: 0.0 };
    body.inner = estimate_inner_radius(&body, &body.mean);
    Ok(body)
}

impl HullBody {
    pub fn points(&self) -> &[ComplexVector] {
        &self.points
    }
}

/// Optimal phase-one objective `min Σ artificials` for `A λ = b, λ ≥ 0`.
/// Dense tableau, Bland's rule.
fn phase_one(a: &DMatrix<f64>, b: &[f64]) -> f64 {
    let (rows, cols) = a.shape();
    let width = cols + rows + 1;
    let mut t = DMatrix::<f64>::zeros(rows + 1, width);
    for i in 0..rows {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..cols {
            t[(i, j)] = sign * a[(i, j)];
        }
        t[(i, cols + i)] = 1.0;
        t[(i, width - 1)] = sign * b[i];
    }
    for j in 0..cols {
        t[(rows, j)] = -(0..rows).map(|i| t[(i, j)]).sum::<f64>();
    }
    t[(rows, width - 1)] = -(0..rows).map(|i| t[(i, width - 1)]).sum::<f64>();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    for _ in 0..50 * (rows + cols) {
        let Some(enter) = (0..width - 1).find(|&j| t[(rows, j)] < -PIVOT_TOL) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            let piv = t[(i, enter)];
            if piv > PIVOT_TOL {
                let ratio = t[(i, width - 1)] / piv;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((l, r)) if ratio < r || (ratio == r && basis[i] < basis[l]) => Some((i, ratio)),
                    keep => keep,
                };
            }
        }
        let Some((r, _)) = leave else {
            break;
        };
        let piv = t[(r, enter)];
        for j in 0..width {
            t[(r, j)] /= piv;
        }
        for i in 0..=rows {
            if i != r {
                let f = t[(i, enter)];
                if f != 0.0 {
                    for j in 0..width {
                        let v = t[(r, j)];
                        t[(i, j)] -= f * v;
                    }
                }
            }
        }
        basis[r] = enter;
    }
    -t[(rows, width - 1)]
}

impl BodyOracle for HullBody {
    fn dim(&self) -> usize {
        self.mean.dim()
    }

    fn contains(&self, x: &ComplexVector) -> bool {
        if x.dim() != self.dim() {
            return false;
        }
        let y = (x - &self.mean).scale_real(1.0 / self.scale).to_real();
        if y.norm() > 1.0 + 1e-12 {
            return false;
        }
        let (d, m) = self.normalized.shape();
        let mut a = DMatrix::zeros(d + 1, m);
        a.view_mut((0, 0), (d, m)).copy_from(&self.normalized);
        a.row_mut(d).fill(1.0);
        let mut b: Vec<f64> = y.iter().copied().collect();
        b.push(1.0);
        phase_one(&a, &b) <= LP_FEAS_TOL
    }

    fn support_point(&self, u: &ComplexVector) -> ComplexVector {
        self.points
            .iter()
            .fold((f64::NEG_INFINITY, &self.points[0]), |best, p| {
                let v = p.real_dot(u);
                if v > best.0 {
                    (v, p)
                } else {
                    best
                }
            })
            .1
            .clone()
    }

    fn outer_radius(&self) -> f64 {
        self.outer
    }

    fn inner_radius(&self) -> f64 {
        self.inner
    }

    fn interior_point(&self) -> ComplexVector {
        self.mean.clone()
    }
}
