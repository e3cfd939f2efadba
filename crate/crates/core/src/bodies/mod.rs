//! Convex bodies in ℂⁿ given by oracles.
//!
//! A [`BodyOracle`] answers membership queries and support queries (value
//! and touching point). Real directions in ℝ²ⁿ are carried as
//! [`ComplexVector`]s paired through `Re⟨u, x⟩`.

mod generators;
mod hull;
mod restrict;
mod shapes;
pub mod sphere;

pub use generators::{gen_non_j_invariant, gen_perturbed_ellipsoid, gen_random_ellipsoid};
pub use hull::{hull_oracle, HullBody};
pub use restrict::{projection_oracle, section_oracle, AffinePlane, ProjectedBody, SectionBody};
pub use shapes::{
    ellipsoid_oracle, lp_ball_oracle, BallProduct, EllipsoidBody, LpBall, PerturbedEllipsoid,
    RealEllipsoidBody,
};

use crate::ellipsoid::ComplexLine;
use crate::linalg::{ComplexVector, C64};
use crate::{Error, Result};

/// Bisection stops once the bracket on the ray parameter is this narrow.
pub const BISECTION_TOL: f64 = 1e-10;
pub const BISECTION_MAX_ITER: usize = 60;

/// Minimum number of samples in a [`PlanarSampleSet`].
pub const MIN_PLANAR_SAMPLES: usize = 8;

/// A convex body with nonempty interior.
///
/// Implementors must guarantee `contains(x) ⇒ ‖x‖ ≤ outer_radius()` and that
/// the ball of radius `inner_radius()` about `interior_point()` lies in the
/// body (for bodies without a closed form the inner radius is an estimate).
pub trait BodyOracle: Send + Sync {
    fn dim(&self) -> usize;

    fn contains(&self, x: &ComplexVector) -> bool;

    /// A boundary point maximising `Re⟨u, x⟩`.
    fn support_point(&self, u: &ComplexVector) -> ComplexVector;

    /// `h(u) = sup_{x ∈ K} Re⟨u, x⟩`.
    fn support(&self, u: &ComplexVector) -> f64 {
        self.support_point(u).real_dot(u)
    }

    fn outer_radius(&self) -> f64;

    fn inner_radius(&self) -> f64;

    fn interior_point(&self) -> ComplexVector;

    /// Distance from the interior point `origin` to the boundary along the
    /// unit direction `v`.
    fn radial(&self, origin: &ComplexVector, v: &ComplexVector) -> f64 {
        bisect_radial(self, origin, v)
    }

    /// Closed-form section by an affine plane, in the plane's coordinates.
    fn exact_section(&self, _plane: &AffinePlane) -> Option<Box<dyn BodyOracle>> {
        None
    }

    /// Closed-form orthogonal projection onto the span of the orthonormal
    /// columns of `frame`, in frame coordinates.
    fn exact_projection(&self, _frame: &crate::linalg::CMatrix) -> Option<Box<dyn BodyOracle>> {
        None
    }
}

/// Boundary distance along a ray by bisection on the membership oracle.
pub fn bisect_radial<B: BodyOracle + ?Sized>(body: &B, origin: &ComplexVector, v: &ComplexVector) -> f64 {
    let mut lo = 0.0;
    let mut hi = origin.norm() + body.outer_radius() * (1.0 + 1e-9) + 1e-12;
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if body.contains(&origin.axpy(C64::new(mid, 0.0), v)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Average of the touching points in the `8n` directions `ω·eⱼ`, `ω` an
/// eighth root of unity. Interior for any body with nonempty interior whose
/// touching points are not all on one face.
pub fn touchpoint_center<B: BodyOracle + ?Sized>(body: &B) -> ComplexVector {
    let n = body.dim();
    let mut acc = ComplexVector::zeros(n);
    let mut count = 0.0;
    for j in 0..n {
        for k in 0..8 {
            let w = C64::from_polar(1.0, k as f64 * std::f64::consts::FRAC_PI_4);
            let u = ComplexVector::basis(n, j).scale(w);
            acc = &acc + &body.support_point(&u);
            count += 1.0;
        }
    }
    acc.scale_real(1.0 / count)
}

/// Smallest boundary distance from `origin` over `8n` axis directions and
/// `16n` pseudo-random ones; an upper estimate of the inradius at `origin`.
pub fn estimate_inner_radius<B: BodyOracle + ?Sized>(body: &B, origin: &ComplexVector) -> f64 {
    let n = body.dim();
    let mut dirs = Vec::new();
    for j in 0..n {
        for k in 0..8 {
            let w = C64::from_polar(1.0, k as f64 * std::f64::consts::FRAC_PI_4);
            dirs.push(ComplexVector::basis(n, j).scale(w));
        }
    }
    let mut rng = crate::random::rng_from_seed(0x5eed_1a7e);
    for _ in 0..16 * n {
        dirs.push(crate::random::random_unit_vector(&mut rng, n));
    }
    dirs.iter().map(|v| body.radial(origin, v)).fold(f64::INFINITY, f64::min)
}

/// Boundary samples of a planar convex set, as complex coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarSampleSet {
    points: Vec<C64>,
}

impl PlanarSampleSet {
    pub fn new(points: Vec<C64>) -> Result<Self> {
        if points.len() < MIN_PLANAR_SAMPLES {
            return Err(Error::InvalidParameter(format!(
                "need at least {MIN_PLANAR_SAMPLES} planar samples, got {}",
                points.len()
            )));
        }
        if points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_sample_count(m: usize) -> Result<()> {
    if m < MIN_PLANAR_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_PLANAR_SAMPLES} samples, got {m}"
        )));
    }
    Ok(())
}

/// Finds a parameter `t` with `p + t·d` strictly inside the body, trying the
/// base point, the point of the line closest to the body's interior point,
/// then a polar grid around it.
fn interior_parameter<B: BodyOracle + ?Sized>(body: &B, line: &ComplexLine) -> Option<C64> {
    let d = line.direction();
    let p = line.base();
    let is_inner = |t: C64| body.contains(&line.point_at(t));
    if is_inner(C64::new(0.0, 0.0)) {
        return Some(C64::new(0.0, 0.0));
    }
    let t_star = d.dot(&(&body.interior_point() - p));
    if is_inner(t_star) {
        return Some(t_star);
    }
    let r_max = body.outer_radius() + body.interior_point().norm();
    for ring in 1..=24 {
        let r = r_max * ring as f64 / 24.0;
        for k in 0..32 {
            let t = t_star + C64::from_polar(r, k as f64 * std::f64::consts::TAU / 32.0);
            if is_inner(t) {
                return Some(t);
            }
        }
    }
    None
}

/// `m` boundary samples of the section `L ∩ K` by ray shooting from an
/// interior point of the section, in the line's parameter. `None` when the
/// line misses the body (or only grazes it).
pub fn section_samples<B: BodyOracle + ?Sized>(
    body: &B,
    line: &ComplexLine,
    m: usize,
) -> Result<Option<PlanarSampleSet>> {
    check_sample_count(m)?;
    if line.dim() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), found: line.dim() });
    }
    let Some(t0) = interior_parameter(body, line) else {
        return Ok(None);
    };
    let origin = line.point_at(t0);
    let mut points = Vec::with_capacity(m);
    for k in 0..m {
        let w = C64::from_polar(1.0, k as f64 * std::f64::consts::TAU / m as f64);
        let v = line.direction().scale(w);
        let r = body.radial(&origin, &v);
        points.push(t0 + w * r);
    }
    if points.iter().all(|z| (z - t0).norm() <= BISECTION_TOL) {
        return Ok(None);
    }
    PlanarSampleSet::new(points).map(Some)
}

/// `m` boundary samples of the orthogonal projection of the body onto the
/// complex line `ℂ·d`, in the coordinate `z = ⟨d, x⟩`. The sample at phase
/// `w` is the projection of the touching point in direction `w·d`, whose
/// support value equals the projected support in direction `w`.
pub fn project_to_line<B: BodyOracle + ?Sized>(
    body: &B,
    d: &ComplexVector,
    m: usize,
) -> Result<PlanarSampleSet> {
    check_sample_count(m)?;
    if d.dim() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), found: d.dim() });
    }
    if (d.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter("projection direction must be a unit vector".into()));
    }
    let points = (0..m)
        .map(|k| {
            let w = C64::from_polar(1.0, k as f64 * std::f64::consts::TAU / m as f64);
            d.dot(&body.support_point(&d.scale(w)))
        })
        .collect();
    PlanarSampleSet::new(points)
}
