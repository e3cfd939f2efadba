use nalgebra::{DMatrix, DVector};

use crate::bodies::BodyOracle;
use crate::linalg::ComplexVector;
use crate::{Error, Result};

/// `r` within this of 1 counts as a pure translation.
pub const TRANSLATE_TOL: f64 = 1e-6;

/// Support values of a body over a fixed list of directions.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportTable {
    directions: Vec<ComplexVector>,
    values: Vec<f64>,
}

impl SupportTable {
    pub fn new(directions: Vec<ComplexVector>, values: Vec<f64>) -> Result<Self> {
        if directions.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: directions.len(), found: values.len() });
        }
        let first = directions.first().ok_or(Error::Empty)?;
        for d in &directions {
            first.check_dim(d)?;
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { directions, values })
    }

    pub fn from_body(body: &dyn BodyOracle, directions: &[ComplexVector]) -> Result<Self> {
        let values = directions.iter().map(|u| body.support(u)).collect();
        Self::new(directions.to_vec(), values)
    }

    pub fn directions(&self) -> &[ComplexVector] {
        &self.directions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.directions[0].dim()
    }
}

/// `A = r·B + t` with `r > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Homothety {
    pub ratio: f64,
    pub translation: ComplexVector,
}

impl Homothety {
    pub fn is_translate(&self) -> bool {
        (self.ratio - 1.0).abs() <= TRANSLATE_TOL
    }
}

/// Finds `(r, t)` with `h_A(u) = r·h_B(u) + Re⟨t, u⟩` on the common
/// directions by real least squares; accepts when `r > 0` and the largest
/// residual is at most `tol` times the largest `|h_A|`. Needs at least `4n`
/// directions over the same list.
pub fn homothety_detect(a: &SupportTable, b: &SupportTable, tol: f64) -> Option<Homothety> {
    if a.directions != b.directions {
        return None;
    }
    let n = a.dim();
    let m = a.values.len();
    if m < 4 * n {
        return None;
    }
    // unknowns (r, Re t₁, Im t₁, …); Re⟨t, u⟩ = Σ Re tᵢ Re uᵢ + Im tᵢ Im uᵢ
    let mat = DMatrix::from_fn(m, 2 * n + 1, |i, j| {
        if j == 0 {
            b.values[i]
        } else {
            let z = a.directions[i][(j - 1) / 2];
            if (j - 1) % 2 == 0 {
                z.re
            } else {
                z.im
            }
        }
    });
    let rhs = DVector::from_column_slice(&a.values);
    let svd = mat.clone().svd(true, true);
    if svd.singular_values.min() <= 1e-12 * svd.singular_values.max() {
        return None;
    }
    let sol = svd.solve(&rhs, 1e-14).ok()?;
    let ratio = sol[0];
    if !(ratio > 0.0) {
        return None;
    }
    let residual = (&mat * &sol - &rhs).amax();
    let scale = a.values.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    if residual > tol * scale {
        return None;
    }
    let translation = ComplexVector::from_real(&DVector::from_iterator(2 * n, sol.iter().skip(1).copied()));
    Some(Homothety { ratio, translation })
}
