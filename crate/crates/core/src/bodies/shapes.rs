use nalgebra::{DMatrix, DVector};

use super::{bisect_radial, AffinePlane, BodyOracle};
use crate::ellipsoid::ComplexEllipsoid;
use crate::linalg::{realify, CMatrix, ComplexVector, HermitianShape, C64};
use crate::{Error, Result};

/// Positive root `r` of `(w + r·v)†S(w + r·v) = 1` given the form pieces
/// `a = v†Sv`, `b = Re(v†Sw)`, `g = w†Sw`.
fn quadratic_exit(a: f64, b: f64, g: f64) -> f64 {
    let disc = (b * b - a * (g - 1.0)).max(0.0);
    (-b + disc.sqrt()) / a
}

/// Root of `g(r) = 0` on `r > 0` for `g` convex with `g(0) < 0`, by Newton
/// iteration from a point `hi` with `g(hi) ≥ 0`; the iterates decrease
/// monotonically to the root.
fn convex_exit(g: impl Fn(f64) -> (f64, f64), mut hi: f64) -> f64 {
    while g(hi).0 < 0.0 {
        hi *= 2.0;
    }
    let mut r = hi;
    for _ in 0..100 {
        let (v, dv) = g(r);
        if v <= 0.0 || dv <= 0.0 {
            break;
        }
        let next = r - v / dv;
        if !(next < r) {
            break;
        }
        r = next;
        if v / dv <= 1e-15 * r {
            break;
        }
    }
    r
}

/// Membership/support oracle of a complex ellipsoid.
#[derive(Clone, Debug)]
pub struct EllipsoidBody {
    ellipsoid: ComplexEllipsoid,
    inv_shape: CMatrix,
    inner: f64,
    outer: f64,
}

pub fn ellipsoid_oracle(e: &ComplexEllipsoid) -> EllipsoidBody {
    let (axes, _) = e.to_axes();
    let ax = axes.as_slice();
    let (min, max) = ax.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &l| (lo.min(l), hi.max(l)));
    EllipsoidBody {
        ellipsoid: e.clone(),
        inv_shape: e.shape().inverse().into_matrix(),
        inner: min,
        outer: e.center().norm() + max,
    }
}

impl EllipsoidBody {
    pub fn ellipsoid(&self) -> &ComplexEllipsoid {
        &self.ellipsoid
    }
}

impl BodyOracle for EllipsoidBody {
    fn dim(&self) -> usize {
        self.ellipsoid.dim()
    }

    fn contains(&self, x: &ComplexVector) -> bool {
        self.ellipsoid.form_value(x) <= 1.0
    }

    fn support_point(&self, u: &ComplexVector) -> ComplexVector {
        let s = self.inv_shape.mul_vec(u);
        let q = u.dot(&s).re;
        if q <= 0.0 {
            return self.ellipsoid.center().clone();
        }
        self.ellipsoid.center().axpy(C64::new(1.0 / q.sqrt(), 0.0), &s)
    }

    fn support(&self, u: &ComplexVector) -> f64 {
        let q = u.dot(&self.inv_shape.mul_vec(u)).re.max(0.0);
        self.ellipsoid.center().real_dot(u) + q.sqrt()
    }

    fn outer_radius(&self) -> f64 {
        self.outer
    }

    fn inner_radius(&self) -> f64 {
        self.inner
    }

    fn interior_point(&self) -> ComplexVector {
        self.ellipsoid.center().clone()
    }

    fn radial(&self, origin: &ComplexVector, v: &ComplexVector) -> f64 {
        let s = self.ellipsoid.shape();
        let w = origin - self.ellipsoid.center();
        let sv = s.matrix().mul_vec(v);
        quadratic_exit(v.dot(&sv).re, w.dot(&sv).re, s.form(&w))
    }

    fn exact_section(&self, plane: &AffinePlane) -> Option<Box<dyn BodyOracle>> {
        let q = plane.frame();
        let s = self.ellipsoid.shape().matrix();
        let w = plane.base() - self.ellipsoid.center();
        let a = &(&q.adjoint() * s) * q;
        let b = q.adjoint().mul_vec(&s.mul_vec(&w));
        let gamma = self.ellipsoid.shape().form(&w);
        let a_inv_b = a.solve_vec(&b).ok()?;
        let rho = 1.0 - gamma + b.dot(&a_inv_b).re;
        if rho <= 0.0 {
            return None;
        }
        let shape = HermitianShape::from_hermitian(a.scale_real(1.0 / rho)).ok()?;
        let e = ComplexEllipsoid::new(-&a_inv_b, shape).ok()?;
        Some(Box::new(ellipsoid_oracle(&e)))
    }

    fn exact_projection(&self, frame: &CMatrix) -> Option<Box<dyn BodyOracle>> {
        let inv = &(&frame.adjoint() * &self.inv_shape) * frame;
        let shape = HermitianShape::from_hermitian(inv).ok()?.inverse();
        let center = frame.adjoint().mul_vec(self.ellipsoid.center());
        let e = ComplexEllipsoid::new(center, shape).ok()?;
        Some(Box::new(ellipsoid_oracle(&e)))
    }
}

/// `{z : Σ|zᵢ|ᵖ ≤ 1}`, invariant under `z ↦ ξz` for every unit `ξ`.
#[derive(Clone, Debug)]
pub struct LpBall {
    p: f64,
    n: usize,
}

pub fn lp_ball_oracle(p: f64, n: usize) -> Result<LpBall> {
    if !(p >= 1.0) || p.is_nan() {
        return Err(Error::InvalidParameter(format!("p must be at least 1, got {p}")));
    }
    if n == 0 {
        return Err(Error::Empty);
    }
    Ok(LpBall { p, n })
}

impl LpBall {
    pub fn p(&self) -> f64 {
        self.p
    }

    fn norm(&self, z: &ComplexVector) -> f64 {
        if self.p.is_infinite() {
            return z.iter().map(|c| c.norm()).fold(0.0, f64::max);
        }
        z.iter().map(|c| c.norm().powf(self.p)).sum::<f64>().powf(1.0 / self.p)
    }
}

impl BodyOracle for LpBall {
    fn dim(&self) -> usize {
        self.n
    }

    fn contains(&self, x: &ComplexVector) -> bool {
        if self.p.is_infinite() {
            return x.iter().all(|c| c.norm() <= 1.0);
        }
        x.iter().map(|c| c.norm().powf(self.p)).sum::<f64>() <= 1.0
    }

    fn support_point(&self, u: &ComplexVector) -> ComplexVector {
        let n = self.n;
        if u.norm() == 0.0 {
            return ComplexVector::zeros(n);
        }
        if self.p == 1.0 {
            let (j, _) = u
                .iter()
                .enumerate()
                .fold((0, -1.0), |best, (i, c)| if c.norm() > best.1 { (i, c.norm()) } else { best });
            let mut z = ComplexVector::zeros(n);
            z[j] = u[j] / u[j].norm();
            return z;
        }
        if self.p.is_infinite() {
            return ComplexVector::from(
                u.iter().map(|c| if c.norm() == 0.0 { C64::new(0.0, 0.0) } else { c / c.norm() }).collect::<Vec<_>>(),
            );
        }
        // Hölder equality case with the dual exponent q.
        let q = self.p / (self.p - 1.0);
        let qnorm = u.iter().map(|c| c.norm().powf(q)).sum::<f64>().powf(1.0 / q);
        ComplexVector::from(
            u.iter()
                .map(|c| {
                    let r = c.norm();
                    if r == 0.0 {
                        C64::new(0.0, 0.0)
                    } else {
                        (c / r) * (r / qnorm).powf(q - 1.0)
                    }
                })
                .collect::<Vec<_>>(),
        )
    }

    fn outer_radius(&self) -> f64 {
        // ‖z‖₂ ≤ n^{1/2 − 1/p}‖z‖_p for p ≥ 2, ‖z‖₂ ≤ ‖z‖_p otherwise
        if self.p >= 2.0 {
            (self.n as f64).powf(0.5 - 1.0 / self.p)
        } else {
            1.0
        }
    }

    fn inner_radius(&self) -> f64 {
        if self.p >= 2.0 {
            1.0
        } else {
            (self.n as f64).powf(0.5 - 1.0 / self.p)
        }
    }

    fn interior_point(&self) -> ComplexVector {
        ComplexVector::zeros(self.n)
    }

    fn radial(&self, origin: &ComplexVector, v: &ComplexVector) -> f64 {
        if origin.norm() == 0.0 {
            return 1.0 / self.norm(v);
        }
        if self.p.is_infinite() {
            return bisect_radial(self, origin, v);
        }
        let p = self.p;
        let g = |r: f64| {
            let mut val = -1.0;
            let mut der = 0.0;
            for (o, d) in origin.iter().zip(v.iter()) {
                let z = o + d * r;
                let a = z.norm();
                if a > 0.0 {
                    val += a.powf(p);
                    der += p * a.powf(p - 2.0) * (z.conj() * d).re;
                }
            }
            (val, der)
        };
        convex_exit(g, self.outer_radius() + origin.norm())
    }
}

/// Solves `s + k·s³ = rhs` for `k ≥ 0` (strictly increasing in `s`).
fn solve_monotone_cubic(k: f64, rhs: f64) -> f64 {
    if k == 0.0 || rhs == 0.0 {
        return rhs;
    }
    // |s| ≤ |rhs| and |s| ≤ cbrt(|rhs|/k)
    let bound = rhs.abs().min((rhs.abs() / k).cbrt());
    let (mut lo, mut hi) = if rhs > 0.0 { (0.0, bound) } else { (-bound, 0.0) };
    let mut s = 0.5 * (lo + hi);
    for _ in 0..200 {
        let g = s + k * s * s * s - rhs;
        if g == 0.0 {
            return s;
        }
        if g > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let newton = s - g / (1.0 + 3.0 * k * s * s);
        let next = if newton >= lo && newton <= hi { newton } else { 0.5 * (lo + hi) };
        if (next - s).abs() <= 1e-15 * s.abs() || hi - lo <= 1e-15 * lo.abs().max(hi.abs()) {
            return next;
        }
        s = next;
    }
    s
}

/// Smooth convex non-ellipsoid: `{x : y†Sy + ε·(Re a†y)⁴ ≤ 1, y = x − c}`.
///
/// The quartic term is a convex function of a real-linear functional, so the
/// body is convex for every `ε ≥ 0`; it is not invariant under `y ↦ ξy`, and
/// for `ε > 0` its complex-line sections are not disks in general. `a` is
/// scaled so the term is at most `ε` on the base ellipsoid.
#[derive(Clone, Debug)]
pub struct PerturbedEllipsoid {
    base: ComplexEllipsoid,
    inv_shape: CMatrix,
    a: ComplexVector,
    eps: f64,
    inner: f64,
    outer: f64,
}

impl PerturbedEllipsoid {
    pub fn new(base: ComplexEllipsoid, a: &ComplexVector, eps: f64) -> Result<Self> {
        if !(eps >= 0.0) {
            return Err(Error::InvalidParameter(format!("eps must be nonnegative, got {eps}")));
        }
        base.center().check_dim(a)?;
        let inv_shape = base.shape().inverse().into_matrix();
        let scale = a.dot(&inv_shape.mul_vec(a)).re.sqrt();
        if !(scale > 0.0) {
            return Err(Error::InvalidParameter("perturbation direction is zero".into()));
        }
        let a = a.scale_real(1.0 / scale);
        let eig = base.shape().eig();
        let mu_max = *eig.values.last().expect("nonempty");
        let mu_min = eig.values[0];
        let a4 = a.norm_sqr().powi(2);
        let inner = if eps > 0.0 {
            ((-mu_max + (mu_max * mu_max + 4.0 * eps * a4).sqrt()) / (2.0 * eps * a4)).sqrt()
        } else {
            mu_max.powf(-0.5)
        };
        let outer = base.center().norm() + mu_min.powf(-0.5);
        Ok(Self { base, inv_shape, a, eps, inner, outer })
    }

    pub fn base(&self) -> &ComplexEllipsoid {
        &self.base
    }

    /// The perturbation direction, normalised so that `a†S⁻¹a = 1`.
    pub fn direction(&self) -> &ComplexVector {
        &self.a
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    fn gauge_form(&self, y: &ComplexVector) -> f64 {
        let s = self.a.real_dot(y);
        self.base.shape().form(y) + self.eps * s.powi(4)
    }

    /// Touching point relative to the center, from the stationarity condition
    /// `2Sy + 4ε s³ a = μ u`, `s = Re a†y`, with `μ` fixed by `F(y) = 1`.
    fn touch_offset(&self, u: &ComplexVector) -> ComplexVector {
        let v = self.inv_shape.mul_vec(u).scale_real(0.5);
        let w = self.inv_shape.mul_vec(&self.a).scale_real(0.5);
        let alpha = self.a.real_dot(&v);
        let beta = self.a.real_dot(&w);
        let k = 4.0 * self.eps * beta;
        let y_of = |mu: f64| {
            let s = solve_monotone_cubic(k, mu * alpha);
            v.scale_real(mu).axpy(C64::new(-4.0 * self.eps * s.powi(3), 0.0), &w)
        };
        let mut hi = 1.0;
        while self.gauge_form(&y_of(hi)) < 1.0 {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.gauge_form(&y_of(mid)) < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        y_of(0.5 * (lo + hi))
    }
}

impl BodyOracle for PerturbedEllipsoid {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn contains(&self, x: &ComplexVector) -> bool {
        self.gauge_form(&(x - self.base.center())) <= 1.0
    }

    fn support_point(&self, u: &ComplexVector) -> ComplexVector {
        if u.norm() == 0.0 {
            return self.base.center().clone();
        }
        self.base.center() + &self.touch_offset(u)
    }

    fn outer_radius(&self) -> f64 {
        self.outer
    }

    fn inner_radius(&self) -> f64 {
        self.inner
    }

    fn interior_point(&self) -> ComplexVector {
        self.base.center().clone()
    }

    fn radial(&self, origin: &ComplexVector, v: &ComplexVector) -> f64 {
        let w = origin - self.base.center();
        let s = self.base.shape();
        let sv = s.matrix().mul_vec(v);
        let (a, b, c) = (v.dot(&sv).re, w.dot(&sv).re, s.form(&w));
        let (s0, s1) = (self.a.real_dot(&w), self.a.real_dot(v));
        let eps = self.eps;
        let g = |r: f64| {
            let t = s0 + r * s1;
            (a * r * r + 2.0 * b * r + c + eps * t.powi(4) - 1.0, 2.0 * a * r + 2.0 * b + 4.0 * eps * s1 * t.powi(3))
        };
        convex_exit(g, quadratic_exit(a, b, c).max(1e-300))
    }
}

/// A real ellipsoid `{x : (x−c)ᵣᵀ R (x−c)ᵣ ≤ 1}` in interleaved coordinates;
/// a complex ellipsoid only when `R` commutes with the complex structure.
#[derive(Clone, Debug)]
pub struct RealEllipsoidBody {
    center: ComplexVector,
    shape: DMatrix<f64>,
    inv_shape: DMatrix<f64>,
    inner: f64,
    outer: f64,
}

impl RealEllipsoidBody {
    pub fn new(center: ComplexVector, shape: DMatrix<f64>) -> Result<Self> {
        let d = 2 * center.dim();
        if shape.nrows() != d || shape.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: shape.nrows() });
        }
        if (&shape - shape.transpose()).amax() > 1e-12 * shape.amax().max(1.0) {
            return Err(Error::InvalidParameter("real shape must be symmetric".into()));
        }
        let eig = shape.clone().symmetric_eigen();
        let min = eig.eigenvalues.min();
        let max = eig.eigenvalues.max();
        if !(min > 1e-12 * max) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
        let inv_shape = shape.clone().try_inverse().ok_or(Error::Singular)?;
        let outer = center.norm() + min.powf(-0.5);
        Ok(Self { center, shape, inv_shape, inner: max.powf(-0.5), outer })
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    pub fn center(&self) -> &ComplexVector {
        &self.center
    }

    fn form(&self, y: &DVector<f64>) -> f64 {
        (y.transpose() * &self.shape * y)[(0, 0)]
    }
}

impl BodyOracle for RealEllipsoidBody {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    fn contains(&self, x: &ComplexVector) -> bool {
        self.form(&(x - &self.center).to_real()) <= 1.0
    }

    fn support_point(&self, u: &ComplexVector) -> ComplexVector {
        let ur = u.to_real();
        let s = &self.inv_shape * &ur;
        let q = ur.dot(&s);
        if q <= 0.0 {
            return self.center.clone();
        }
        &self.center + &ComplexVector::from_real(&(s / q.sqrt()))
    }

    fn outer_radius(&self) -> f64 {
        self.outer
    }

    fn inner_radius(&self) -> f64 {
        self.inner
    }

    fn interior_point(&self) -> ComplexVector {
        self.center.clone()
    }

    fn radial(&self, origin: &ComplexVector, v: &ComplexVector) -> f64 {
        let w = (origin - &self.center).to_real();
        let vr = v.to_real();
        let sv = &self.shape * &vr;
        quadratic_exit(vr.dot(&sv), w.dot(&sv), self.form(&w))
    }

    fn exact_section(&self, plane: &AffinePlane) -> Option<Box<dyn BodyOracle>> {
        let q = realify(plane.frame());
        let w = (plane.base() - &self.center).to_real();
        let a = q.transpose() * &self.shape * &q;
        let b = q.transpose() * (&self.shape * &w);
        let a_inv = a.clone().try_inverse()?;
        let a_inv_b = &a_inv * &b;
        let rho = 1.0 - self.form(&w) + b.dot(&a_inv_b);
        if rho <= 0.0 {
            return None;
        }
        let a = (&a + a.transpose()) * (0.5 / rho);
        let center = ComplexVector::from_real(&(-a_inv_b));
        Some(Box::new(RealEllipsoidBody::new(center, a).ok()?))
    }

    fn exact_projection(&self, frame: &CMatrix) -> Option<Box<dyn BodyOracle>> {
        let q = realify(frame);
        let inv = q.transpose() * &self.inv_shape * &q;
        let inv = (&inv + inv.transpose()) * 0.5;
        let shape = inv.try_inverse()?;
        let shape = (&shape + shape.transpose()) * 0.5;
        let center = frame.adjoint().mul_vec(&self.center);
        Some(Box::new(RealEllipsoidBody::new(center, shape).ok()?))
    }
}

/// Product of unit balls `𝔅^{k₁} × 𝔅^{k₂} × …` in ℂ^{Σkᵢ}; complex
/// symmetric about 0, an ellipsoid only with a single block.
#[derive(Clone, Debug)]
pub struct BallProduct {
    blocks: Vec<usize>,
}

impl BallProduct {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::InvalidParameter("blocks must be nonempty and positive".into()));
        }
        Ok(Self { blocks })
    }

    fn ranges(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        self.blocks.iter().scan(0, |start, &k| {
            let r = *start..*start + k;
            *start += k;
            Some(r)
        })
    }

    fn block_norm(x: &ComplexVector, r: std::ops::Range<usize>) -> f64 {
        x.as_slice()[r].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl BodyOracle for BallProduct {
    fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    fn contains(&self, x: &ComplexVector) -> bool {
        self.ranges().all(|r| Self::block_norm(x, r) <= 1.0)
    }

    fn support_point(&self, u: &ComplexVector) -> ComplexVector {
        let mut z = ComplexVector::zeros(self.dim());
        for r in self.ranges() {
            let nb = Self::block_norm(u, r.clone());
            if nb > 0.0 {
                for i in r {
                    z[i] = u[i] / nb;
                }
            }
        }
        z
    }

    fn outer_radius(&self) -> f64 {
        (self.blocks.len() as f64).sqrt()
    }

    fn inner_radius(&self) -> f64 {
        1.0
    }

    fn interior_point(&self) -> ComplexVector {
        ComplexVector::zeros(self.dim())
    }

    fn radial(&self, origin: &ComplexVector, v: &ComplexVector) -> f64 {
        if origin.norm() == 0.0 {
            self.ranges().map(|r| 1.0 / Self::block_norm(v, r)).fold(f64::INFINITY, f64::min)
        } else {
            bisect_radial(self, origin, v)
        }
    }
}
