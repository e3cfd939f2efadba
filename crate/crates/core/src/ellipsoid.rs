//! Complex ellipsoids `{x : (x−c)†S(x−c) ≤ 1}` and their closed-form geometry.
//!
//! Volumes are Lebesgue measure on ℝ²ⁿ: `vol = πⁿ/n! · det(S)⁻¹`, which in
//! axes form is `(Πλᵢ)² · vol(𝔅)`. Conventions that measure a complex
//! ellipsoid by `Πλᵢ` instead differ by the exponent [`VOLUME_EXPONENT`]; both
//! are monotone in `Πλᵢ`, so every comparison of volumes agrees.

use crate::linalg::{
    det_hermitian, AxesVector, CMatrix, ComplexVector, HermitianShape, C64,
};
use crate::{Error, Result};

/// Exponent relating Lebesgue volume to the product of semi-axes:
/// `vol(El(λ)) = (Πλᵢ)^VOLUME_EXPONENT · vol(𝔅)`.
pub const VOLUME_EXPONENT: i32 = 2;

/// Sections with `|ρ|` at most this are reported as a single point.
pub const TANGENCY_TOL: f64 = 1e-12;

/// Default relative tolerance of [`ComplexEllipsoid::approx_eq`].
pub const DEFAULT_EQ_TOL: f64 = 1e-7;

/// Lebesgue volume of the unit ball of ℂⁿ = ℝ²ⁿ.
pub fn unit_ball_volume(n: usize) -> f64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    std::f64::consts::PI.powi(n as i32) / fact
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexEllipsoid {
    center: ComplexVector,
    shape: HermitianShape,
}

impl ComplexEllipsoid {
    pub fn new(center: ComplexVector, shape: HermitianShape) -> Result<Self> {
        if center.dim() != shape.dim() {
            return Err(Error::DimensionMismatch { expected: shape.dim(), found: center.dim() });
        }
        Ok(Self { center, shape })
    }

    pub fn unit_ball(n: usize) -> Self {
        Self { center: ComplexVector::zeros(n), shape: HermitianShape::identity(n) }
    }

    pub fn ball(center: ComplexVector, radius: f64) -> Result<Self> {
        let n = center.dim();
        let shape = HermitianShape::from_diag(&vec![radius.powi(-2); n])?;
        Self::new(center, shape)
    }

    /// `c + U·El(λ)`: shape `U diag(λᵢ⁻²) U†`.
    pub fn from_axes(lambda: &AxesVector, frame: &CMatrix, center: ComplexVector) -> Result<Self> {
        let n = lambda.dim();
        if frame.rows() != n || frame.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: frame.rows() });
        }
        let dev = frame.unitary_deviation();
        if dev > 1e-10 {
            return Err(Error::NotUnitary { deviation: dev });
        }
        let inv_sq: Vec<f64> = lambda.as_slice().iter().map(|l| l.powi(-2)).collect();
        let m = &(frame * &CMatrix::from_diag(&inv_sq)) * &frame.adjoint();
        Self::new(center, HermitianShape::from_hermitian(m)?)
    }

    /// Semi-axes and the unitary frame of principal directions. Axes come out
    /// in descending order (ascending eigenvalues of the shape).
    pub fn to_axes(&self) -> (AxesVector, CMatrix) {
        let eig = self.shape.eig();
        let lambda = eig.values.iter().map(|mu| mu.powf(-0.5)).collect();
        (AxesVector::new(lambda).expect("positive-definite shape"), eig.vectors)
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn center(&self) -> &ComplexVector {
        &self.center
    }

    pub fn shape(&self) -> &HermitianShape {
        &self.shape
    }

    /// `(x−c)†S(x−c)`; panics on dimension mismatch.
    pub fn form_value(&self, x: &ComplexVector) -> f64 {
        self.shape.form(&(x - &self.center))
    }

    pub fn contains(&self, x: &ComplexVector, tol: f64) -> bool {
        x.dim() == self.dim() && self.form_value(x) <= 1.0 + tol
    }

    pub fn volume(&self) -> f64 {
        let det = det_hermitian(&self.shape).expect("positive-definite shape");
        unit_ball_volume(self.dim()) / det
    }

    /// Image under `x ↦ Ax + t`.
    pub fn affine_image(&self, a: &CMatrix, t: &ComplexVector) -> Result<Self> {
        let n = self.dim();
        if a.rows() != n || a.cols() != n || t.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: a.rows() });
        }
        let a_inv = a.inverse()?;
        let shape = &(&a_inv.adjoint() * self.shape.matrix()) * &a_inv;
        let center = &a.mul_vec(&self.center) + t;
        Self::new(center, HermitianShape::from_hermitian(shape)?)
    }

    pub fn translate(&self, t: &ComplexVector) -> Self {
        Self { center: &self.center + t, shape: self.shape.clone() }
    }

    /// Absolute polar `{y : sup_{x∈E} |⟨y,x⟩| ≤ 1}` of a centered ellipsoid;
    /// its shape is `S⁻¹`.
    pub fn polar(&self) -> Result<Self> {
        if self.center.norm() > 0.0 {
            return Err(Error::NotCentered);
        }
        Ok(Self { center: self.center.clone(), shape: self.shape.inverse() })
    }

    /// `sup_{x∈E} Re⟨u, x⟩ = Re⟨u, c⟩ + √(u†S⁻¹u)`.
    pub fn support(&self, u: &ComplexVector) -> f64 {
        self.center.real_dot(u) + self.shape.inverse().form(u).sqrt()
    }

    /// Complex-line section, in the line's own parameter `t` (`x = p + t·d`).
    pub fn line_section(&self, line: &ComplexLine) -> Disk {
        let s = &self.shape;
        let d = line.direction();
        let w = line.base() - &self.center;
        let sd = s.matrix().mul_vec(d);
        let alpha = d.dot(&sd).re;
        // d†Sw = conj(w†Sd)
        let beta = w.dot(&sd).conj();
        let gamma = s.form(&w);
        let t0 = -beta / alpha;
        let rho = 1.0 - gamma + beta.norm_sqr() / alpha;
        if rho.abs() <= TANGENCY_TOL {
            Disk::Point { center: t0 }
        } else if rho < 0.0 {
            Disk::Empty
        } else {
            Disk::Disk { center: t0, radius: (rho / alpha).sqrt() }
        }
    }

    /// Relative equality of shapes and centers at tolerance `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let shape_ok = self.shape.relative_distance(&other.shape) <= tol;
        let cscale = self.center.norm().max(other.center.norm()).max(1.0);
        shape_ok && self.center.distance(&other.center) <= tol * cscale
    }

    /// Boundary point `c + S^{-1/2}u` for a unit vector `u`.
    pub fn boundary_point(&self, u: &ComplexVector) -> ComplexVector {
        let root = self.shape.eig().map(|mu| mu.powf(-0.5));
        &self.center + &root.mul_vec(u)
    }
}

/// Result of intersecting a convex body with a complex line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Disk {
    Empty,
    Point { center: C64 },
    Disk { center: C64, radius: f64 },
}

impl Disk {
    pub fn center(&self) -> Option<C64> {
        match *self {
            Disk::Empty => None,
            Disk::Point { center } | Disk::Disk { center, .. } => Some(center),
        }
    }

    pub fn radius(&self) -> f64 {
        match *self {
            Disk::Disk { radius, .. } => radius,
            _ => 0.0,
        }
    }
}

/// Affine complex line `{p + t·d : t ∈ ℂ}` with `‖d‖ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexLine {
    base: ComplexVector,
    direction: ComplexVector,
}

impl ComplexLine {
    /// Normalises `direction`; errors on a zero direction.
    pub fn new(base: ComplexVector, direction: ComplexVector) -> Result<Self> {
        base.check_dim(&direction)?;
        let direction = direction
            .normalized()
            .ok_or_else(|| Error::InvalidParameter("zero line direction".into()))?;
        Ok(Self { base, direction })
    }

    pub fn base(&self) -> &ComplexVector {
        &self.base
    }

    pub fn direction(&self) -> &ComplexVector {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn point_at(&self, t: C64) -> ComplexVector {
        self.base.axpy(t, &self.direction)
    }
}

/// The midpoint ellipsoid `El((λ+𝟏)/2) + c/2` of the unit ball and
/// `El(λ) + c`. It lies in the convex hull of the two: see
/// [`midpoint_witness`].
pub fn midpoint_ellipsoid(lambda: &AxesVector, c: &ComplexVector) -> Result<ComplexEllipsoid> {
    let n = lambda.dim();
    if c.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
    }
    ComplexEllipsoid::from_axes(&lambda.midpoint_with_ones(), &CMatrix::identity(n), c.scale_real(0.5))
}

/// For `u` in the unit ball, returns `(x, y)` with `x = (λ+𝟏)/2 ⊙ u + c/2` in
/// the midpoint ellipsoid and `y = λ⊙u + c` in `El(λ) + c`; `x` is the
/// midpoint of the segment from `u` to `y`.
pub fn midpoint_witness(
    lambda: &AxesVector,
    c: &ComplexVector,
    u: &ComplexVector,
) -> Result<(ComplexVector, ComplexVector)> {
    let lam = ComplexVector::from_reals(lambda.as_slice());
    let mid = ComplexVector::from_reals(lambda.midpoint_with_ones().as_slice());
    let x = &mid.hadamard(u)? + &c.scale_real(0.5);
    let y = &lam.hadamard(u)? + c;
    Ok((x, y))
}

/// Given `𝔈₁ = {Σλᵢ|xᵢ|² ≤ 1} = El(β)` with `λ = β⁻²` and `𝔈₂ = 𝔅 + c`,
/// returns
///
/// ```text
/// 𝔈₄ = { x : Σ(λᵢ+1)|xᵢ − cᵢ/(λᵢ+1)|² ≤ 2 − Σ λᵢ/(λᵢ+1)·|cᵢ|² }
/// ```
///
/// which contains `𝔈₁ ∩ 𝔈₂` (sum the two defining inequalities and complete
/// the square coordinatewise). Dropping the `|c|²` term on the right gives a
/// looser ellipsoid with the same center.
pub fn mice_bound_ellipsoid(beta: &AxesVector, c: &ComplexVector) -> Result<ComplexEllipsoid> {
    let n = beta.dim();
    if c.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
    }
    let lambda: Vec<f64> = beta.as_slice().iter().map(|b| b.powi(-2)).collect();
    let rhs = 2.0
        - lambda
            .iter()
            .zip(c.iter())
            .map(|(l, ci)| l / (l + 1.0) * ci.norm_sqr())
            .sum::<f64>();
    if rhs <= 0.0 {
        return Err(Error::EmptyIntersection);
    }
    let center = ComplexVector::from(
        lambda.iter().zip(c.iter()).map(|(l, ci)| ci / (l + 1.0)).collect::<Vec<_>>(),
    );
    let diag: Vec<f64> = lambda.iter().map(|l| (l + 1.0) / rhs).collect();
    ComplexEllipsoid::new(center, HermitianShape::from_diag(&diag)?)
}
