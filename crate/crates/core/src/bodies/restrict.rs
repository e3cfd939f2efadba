use nalgebra::DVector;

use super::sphere::maximize_on_sphere;
use super::{estimate_inner_radius, BodyOracle};
use crate::linalg::{CMatrix, ComplexVector, C64};
use crate::{Error, Result};

/// Orthonormal columns tolerance for frames.
const FRAME_TOL: f64 = 1e-10;

/// Chord-midpoint passes used to move a section's interior point away from
/// the boundary.
const CENTERING_PASSES: usize = 4;

fn check_frame(frame: &CMatrix, n: usize) -> Result<()> {
    if frame.rows() != n {
        return Err(Error::DimensionMismatch { expected: n, found: frame.rows() });
    }
    if frame.cols() == 0 || frame.cols() > n {
        return Err(Error::InvalidParameter(format!("frame must have 1..={n} columns")));
    }
    let dev = frame.unitary_deviation();
    if dev > FRAME_TOL {
        return Err(Error::NotUnitary { deviation: dev });
    }
    Ok(())
}

/// `{base + Q·w : w ∈ ℂᵏ}` with `Q` an n×k matrix of orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePlane {
    base: ComplexVector,
    frame: CMatrix,
}

impl AffinePlane {
    pub fn new(base: ComplexVector, frame: CMatrix) -> Result<Self> {
        check_frame(&frame, base.dim())?;
        Ok(Self { base, frame })
    }

    pub fn base(&self) -> &ComplexVector {
        &self.base
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn dim(&self) -> usize {
        self.frame.cols()
    }

    pub fn lift(&self, w: &ComplexVector) -> ComplexVector {
        &self.base + &self.frame.mul_vec(w)
    }

    /// Plane coordinates of the orthogonal projection of `x`.
    pub fn coordinates(&self, x: &ComplexVector) -> ComplexVector {
        self.frame.adjoint().mul_vec(&(x - &self.base))
    }
}

/// A body restricted to an affine plane, in plane coordinates.
///
/// Membership and ray queries are delegated to the parent. The support
/// function has no closed form: it is found by maximising
/// `v ↦ Re⟨u, w₀ + ρ(v)·v⟩` over unit `v`, with `ρ` the boundary distance from
/// the interior point `w₀`.
pub struct SectionBody<'a> {
    parent: &'a dyn BodyOracle,
    plane: AffinePlane,
    interior: ComplexVector,
    outer: f64,
    inner: f64,
}

impl<'a> SectionBody<'a> {
    pub fn plane(&self) -> &AffinePlane {
        &self.plane
    }
}

/// The section of `body` by `plane`, or `None` when the plane misses the
/// interior. Uses the body's closed form when it has one.
pub fn section_oracle<'a>(
    body: &'a dyn BodyOracle,
    plane: &AffinePlane,
) -> Result<Option<Box<dyn BodyOracle + 'a>>> {
    if plane.ambient_dim() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), found: plane.ambient_dim() });
    }
    if let Some(exact) = body.exact_section(plane) {
        return Ok(Some(exact));
    }
    let k = plane.dim();
    let candidates = [ComplexVector::zeros(k), plane.coordinates(&body.interior_point())];
    let Some(start) = candidates.into_iter().find(|w| body.contains(&plane.lift(w))) else {
        return Ok(None);
    };
    let mut section = SectionBody {
        parent: body,
        plane: plane.clone(),
        interior: start,
        outer: body.outer_radius() + plane.base().norm(),
        inner: 0.0,
    };
    // Move to chord midpoints along the frame axes.
    for _ in 0..CENTERING_PASSES {
        for j in 0..k {
            let e = ComplexVector::basis(k, j);
            for phase in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                let v = e.scale(phase);
                let fwd = section.radial(&section.interior, &v);
                let back = section.radial(&section.interior, &(-&v));
                section.interior = section.interior.axpy(C64::new(0.5 * (fwd - back), 0.0), &v);
            }
        }
    }
    section.inner = estimate_inner_radius(&section, &section.interior);
    if !(section.inner > 0.0) {
        return Ok(None);
    }
    Ok(Some(Box::new(section)))
}

impl BodyOracle for SectionBody<'_> {
    fn dim(&self) -> usize {
        self.plane.dim()
    }

    fn contains(&self, w: &ComplexVector) -> bool {
        self.parent.contains(&self.plane.lift(w))
    }

    fn support_point(&self, u: &ComplexVector) -> ComplexVector {
        let w0 = &self.interior;
        let boundary = |v: &ComplexVector| w0.axpy(C64::new(self.radial(w0, v), 0.0), v);
        let guess = self.plane.coordinates(&self.parent.support_point(&self.plane.frame().mul_vec(u)));
        let start = (&guess - w0).normalized().or_else(|| u.normalized());
        let Some(start) = start else {
            return w0.clone();
        };
        let (v, _) = maximize_on_sphere(&start.to_real(), |x: &DVector<f64>| {
            boundary(&ComplexVector::from_real(x)).real_dot(u)
        });
        boundary(&ComplexVector::from_real(&v))
    }

    fn outer_radius(&self) -> f64 {
        self.outer
    }

    fn inner_radius(&self) -> f64 {
        self.inner
    }

    fn interior_point(&self) -> ComplexVector {
        self.interior.clone()
    }

    fn radial(&self, origin: &ComplexVector, v: &ComplexVector) -> f64 {
        self.parent.radial(&self.plane.lift(origin), &self.plane.frame().mul_vec(v))
    }
}

/// Orthogonal projection of a body onto the span of an orthonormal frame, in
/// frame coordinates.
///
/// Support queries are exact (`h_P(u) = h_K(Qu)`). Membership goes through
/// the gauge `g(v) = max_u Re⟨u, v⟩ / (h_P(u) − Re⟨u, y₀⟩)` of the projection
/// about an interior point `y₀`, maximised over the unit sphere.
pub struct ProjectedBody<'a> {
    parent: &'a dyn BodyOracle,
    frame: CMatrix,
    interior: ComplexVector,
    inner: f64,
}

/// The projection of `body` onto the span of `frame`. Uses the body's closed
/// form when it has one.
pub fn projection_oracle<'a>(body: &'a dyn BodyOracle, frame: &CMatrix) -> Result<Box<dyn BodyOracle + 'a>> {
    check_frame(frame, body.dim())?;
    if let Some(exact) = body.exact_projection(frame) {
        return Ok(exact);
    }
    let mut p = ProjectedBody {
        parent: body,
        frame: frame.clone(),
        interior: frame.adjoint().mul_vec(&body.interior_point()),
        inner: 0.0,
    };
    p.inner = estimate_inner_radius(&p, &p.interior);
    Ok(Box::new(p))
}

impl ProjectedBody<'_> {
    fn gauge(&self, origin: &ComplexVector, v: &ComplexVector) -> f64 {
        let ratio = |u: &ComplexVector| {
            let slack = self.support(u) - origin.real_dot(u);
            if slack <= 0.0 {
                f64::INFINITY
            } else {
                v.real_dot(u) / slack
            }
        };
        let (_, g) = maximize_on_sphere(&v.to_real(), |x: &DVector<f64>| ratio(&ComplexVector::from_real(x)));
        g
    }
}

impl BodyOracle for ProjectedBody<'_> {
    fn dim(&self) -> usize {
        self.frame.cols()
    }

    fn contains(&self, y: &ComplexVector) -> bool {
        let d = y - &self.interior;
        let r = d.norm();
        if r == 0.0 {
            return true;
        }
        let v = d.scale_real(1.0 / r);
        r <= self.radial(&self.interior, &v)
    }

    fn support_point(&self, u: &ComplexVector) -> ComplexVector {
        self.frame.adjoint().mul_vec(&self.parent.support_point(&self.frame.mul_vec(u)))
    }

    fn support(&self, u: &ComplexVector) -> f64 {
        self.parent.support(&self.frame.mul_vec(u))
    }

    fn outer_radius(&self) -> f64 {
        self.parent.outer_radius()
    }

    fn inner_radius(&self) -> f64 {
        self.inner
    }

    fn interior_point(&self) -> ComplexVector {
        self.interior.clone()
    }

    fn radial(&self, origin: &ComplexVector, v: &ComplexVector) -> f64 {
        1.0 / self.gauge(origin, v)
    }
}
