use std::ops::{Add, Index, IndexMut, Neg, Sub};

use nalgebra::DVector;
use super::C64;
use crate::{Error, Result};

/// A point of ℂⁿ.
///
/// The inner product is conjugate-linear in the left argument:
/// `⟨x, y⟩ = Σ conj(xᵢ)·yᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector(Vec<C64>);

impl ComplexVector {
    /// Validating constructor: at least one coordinate, all finite.
    pub fn new(coords: Vec<C64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty);
        }
        if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(coords))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![C64::new(0.0, 0.0); n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![C64::new(1.0, 0.0); n])
    }

    /// The standard basis vector `e_j` of ℂⁿ.
    pub fn basis(n: usize, j: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[j] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_reals(re: &[f64]) -> Self {
        Self(re.iter().map(|&r| C64::new(r, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, C64> {
        self.0.iter()
    }

    pub fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    /// Hermitian inner product `⟨self, other⟩`. Panics on mismatched lengths.
    pub fn dot(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim(), "dot: dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    /// Real pairing on ℂⁿ ≅ ℝ²ⁿ.
    pub fn real_dot(&self, other: &Self) -> f64 {
        self.dot(other).re
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|z| z.conj()).collect())
    }

    /// `self + s·other`
    pub fn axpy(&self, s: C64, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    /// Unit vector in the direction of `self`; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale_real(1.0 / n))
    }

    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        hadamard(self, other)
    }

    /// Interleaved real coordinates `(Re x₁, Im x₁, Re x₂, …)`.
    pub fn to_real(&self) -> DVector<f64> {
        DVector::from_iterator(2 * self.dim(), self.0.iter().flat_map(|z| [z.re, z.im]))
    }

    pub fn from_real(v: &DVector<f64>) -> Self {
        assert!(v.len() % 2 == 0, "odd real dimension");
        Self((0..v.len() / 2).map(|i| C64::new(v[2 * i], v[2 * i + 1])).collect())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

/// Coordinatewise product `x ⊙ y`.
pub fn hadamard(x: &ComplexVector, y: &ComplexVector) -> Result<ComplexVector> {
    x.check_dim(y)?;
    Ok(ComplexVector(x.0.iter().zip(&y.0).map(|(a, b)| a * b).collect()))
}

impl From<Vec<C64>> for ComplexVector {
    /// Unchecked conversion; prefer [`ComplexVector::new`] for external data.
    fn from(v: Vec<C64>) -> Self {
        Self(v)
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

impl<'a> Add<&'a ComplexVector> for &'a ComplexVector {
    type Output = ComplexVector;
    fn add(self, rhs: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), rhs.dim(), "add: dimension mismatch");
        ComplexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a ComplexVector> for &'a ComplexVector {
    type Output = ComplexVector;
    fn sub(self, rhs: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), rhs.dim(), "sub: dimension mismatch");
        ComplexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ComplexVector {
    type Output = ComplexVector;
    fn neg(self) -> ComplexVector {
        ComplexVector(self.0.iter().map(|a| -a).collect())
    }
}
