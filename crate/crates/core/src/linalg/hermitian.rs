//! Hermitian positive-definite forms.
//!
//! Form convention: a [`HermitianShape`] `S` evaluates `x ↦ x†Sx`. The
//! transposed convention `xᵀMx̄` is the same form with `M = S̄ = Sᵀ`, so both
//! describe the same family of ellipsoids.

use nalgebra::DMatrix;

use super::{CMatrix, ComplexVector, C64};
use crate::{Error, Result};

/// Absolute entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Relative threshold on the smallest eigenvalue for positive-definiteness.
const PD_REL_TOL: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius mass is below this fraction
/// of the Frobenius norm of the input.
const JACOBI_REL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// `M = U diag(values) U†` with eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    /// `U diag(f(μ)) U†`, Hermitian by construction.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let u = &self.vectors;
        let mut out = CMatrix::zeros(n, n);
        for k in 0..n {
            let w = f(self.values[k]);
            for i in 0..n {
                let uik = u[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += uik * u[(j, k)].conj();
                }
            }
        }
        out.hermitian_part()
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(m: &CMatrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::Empty);
    }
    let scale = m.max_abs();
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let target = JACOBI_REL_TOL * a.frobenius_norm();

    let off = |a: &CMatrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NonConvergence { iterations: sweeps, gap: off(&a) });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                // Phase e^{-iφ} on column q makes the (p,q) entry real, then a
                // real rotation annihilates it: G = diag(1, e^{-iφ})·R.
                let phase = apq.conj() / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = phase * (-s);
                let g_qq = phase * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors })
}

/// A Hermitian positive-definite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianShape(CMatrix);

impl HermitianShape {
    /// Rejects inputs that deviate from Hermitian symmetry by more than
    /// [`HERMITIAN_TOL`] in any entry, or that are not positive-definite.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
        }
        if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let dev = m.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Self::from_hermitian(m.hermitian_part())
    }

    /// For matrices that are Hermitian by construction (products `U D U†`,
    /// inverses of Hermitian matrices): projects onto the Hermitian part and
    /// checks positive-definiteness only.
    pub(crate) fn from_hermitian(m: CMatrix) -> Result<Self> {
        let m = m.hermitian_part();
        let eig = eig_hermitian(&m)?;
        check_pd(&eig)?;
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n))
    }

    pub fn from_diag(d: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_diag(d))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn eig(&self) -> EigenDecomposition {
        eig_hermitian(&self.0).expect("HermitianShape holds a Hermitian matrix")
    }

    pub fn quad_form(&self, x: &ComplexVector) -> Result<f64> {
        quad_form(self, x)
    }

    /// Form value without the dimension check.
    pub(crate) fn form(&self, x: &ComplexVector) -> f64 {
        let m = &self.0;
        let n = m.rows();
        let mut s = 0.0;
        for i in 0..n {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..n {
                row += m[(i, j)] * x[j];
            }
            s += (x[i].conj() * row).re;
        }
        s
    }

    pub fn inverse(&self) -> HermitianShape {
        inv_hermitian(self).expect("inverse of a positive-definite matrix")
    }

    pub fn scale(&self, s: f64) -> Result<HermitianShape> {
        if !(s > 0.0) {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {s}")));
        }
        Ok(Self(self.0.scale_real(s)))
    }

    /// Relative distance `‖A − B‖_F / max(‖A‖_F, ‖B‖_F)`.
    pub fn relative_distance(&self, other: &HermitianShape) -> f64 {
        let d = (&self.0 - &other.0).frobenius_norm();
        d / self.0.frobenius_norm().max(other.0.frobenius_norm())
    }
}

fn check_pd(eig: &EigenDecomposition) -> Result<()> {
    let min = eig.values[0];
    let max = eig.values[eig.values.len() - 1];
    if !(min > PD_REL_TOL * max.abs()) || max <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    Ok(())
}

/// `x†Sx`, real and positive for `x ≠ 0`.
pub fn quad_form(m: &HermitianShape, x: &ComplexVector) -> Result<f64> {
    if m.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: x.dim() });
    }
    Ok(m.form(x))
}

/// Principal square root.
pub fn sqrt_hermitian(m: &HermitianShape) -> Result<HermitianShape> {
    let eig = m.eig();
    check_pd(&eig)?;
    HermitianShape::from_hermitian(eig.map(f64::sqrt))
}

pub fn inv_hermitian(m: &HermitianShape) -> Result<HermitianShape> {
    let eig = m.eig();
    check_pd(&eig)?;
    HermitianShape::from_hermitian(eig.map(|x| 1.0 / x))
}

/// Product of the eigenvalues.
pub fn det_hermitian(m: &HermitianShape) -> Result<f64> {
    let eig = m.eig();
    check_pd(&eig)?;
    Ok(eig.values.iter().product())
}

/// Semi-axis lengths of an ellipsoid in its eigenframe.
#[derive(Clone, Debug, PartialEq)]
pub struct AxesVector(Vec<f64>);

impl AxesVector {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(&bad) = lambda.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidParameter(format!("semi-axis must be positive, got {bad}")));
        }
        Ok(Self(lambda))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn det(&self) -> f64 {
        det_product(self)
    }

    /// `(λ + 𝟏)/2`
    pub fn midpoint_with_ones(&self) -> AxesVector {
        Self(self.0.iter().map(|l| 0.5 * (l + 1.0)).collect())
    }

    pub fn is_ones(&self) -> bool {
        self.0.iter().all(|&l| l == 1.0)
    }
}

/// `Πλᵢ`
pub fn det_product(lambda: &AxesVector) -> f64 {
    lambda.0.iter().product()
}

/// The 2n×2n real symmetric matrix of the form `x†Sx` in interleaved
/// coordinates `(Re x₁, Im x₁, …)`. Works for any complex matrix: block
/// `(i, j)` is `[[Re aᵢⱼ, −Im aᵢⱼ], [Im aᵢⱼ, Re aᵢⱼ]]`.
pub fn realify(m: &CMatrix) -> DMatrix<f64> {
    let (r, c) = (m.rows(), m.cols());
    let mut out = DMatrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            out[(2 * i, 2 * j)] = z.re;
            out[(2 * i, 2 * j + 1)] = -z.im;
            out[(2 * i + 1, 2 * j)] = z.im;
            out[(2 * i + 1, 2 * j + 1)] = z.re;
        }
    }
    out
}

/// Multiplication by `i` on ℝ²ⁿ in interleaved coordinates.
pub fn complex_structure(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(2 * k, 2 * k + 1)] = -1.0;
        j[(2 * k + 1, 2 * k)] = 1.0;
    }
    j
}

/// True iff `S` commutes with the complex structure: `‖SJ − JS‖_F ≤ tol·‖S‖_F`.
/// Exactly then is the real ellipsoid `{s : sᵀSs ≤ 1}` a complex ellipsoid.
pub fn is_complex_structured(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    if s.nrows() != s.ncols() {
        return Err(Error::DimensionMismatch { expected: s.nrows(), found: s.ncols() });
    }
    if s.nrows() % 2 != 0 {
        return Err(Error::InvalidParameter(format!("odd real dimension {}", s.nrows())));
    }
    let j = complex_structure(s.nrows() / 2);
    let comm = s * &j - &j * s;
    Ok(comm.norm() <= tol * s.norm())
}

/// Both sides of `λ|x|² + |x−c|² = (λ+1)|x − c/(λ+1)|² + λ/(λ+1)·|c|²`.
pub fn lemma_affine_identity(lambda: f64, x: C64, c: C64) -> Result<(f64, f64)> {
    if lambda == -1.0 {
        return Err(Error::InvalidParameter("λ = −1".into()));
    }
    let lhs = lambda * x.norm_sqr() + (x - c).norm_sqr();
    let l1 = lambda + 1.0;
    let rhs = l1 * (x - c / l1).norm_sqr() + (lambda / l1) * c.norm_sqr();
    Ok((lhs, rhs))
}
