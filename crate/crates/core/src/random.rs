//! Seeded random sampling. Every generator takes an explicit RNG; nothing
//! here touches a global or thread-local source.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, ComplexVector, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal: real and imaginary parts i.i.d. N(0, ½).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexVector {
    ComplexVector::from((0..n).map(|_| complex_gaussian(rng)).collect::<Vec<_>>())
}

pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Uniform on the unit sphere of ℂⁿ.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexVector {
    loop {
        if let Some(v) = complex_gaussian_vector(rng, n).normalized() {
            return v;
        }
    }
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Orthonormalises the columns of `a` (modified Gram–Schmidt, two passes).
/// Returns `None` if the columns are numerically dependent.
pub fn orthonormalize(a: &CMatrix) -> Option<CMatrix> {
    let mut cols: Vec<ComplexVector> = Vec::with_capacity(a.cols());
    for j in 0..a.cols() {
        let mut v = a.column(j);
        let orig = v.norm();
        for _ in 0..2 {
            for q in &cols {
                let p = q.dot(&v);
                v = v.axpy(-p, q);
            }
        }
        if v.norm() <= 1e-10 * orig.max(f64::MIN_POSITIVE) {
            return None;
        }
        cols.push(v.normalized()?);
    }
    Some(CMatrix::from_columns(&cols))
}

/// n×k matrix with orthonormal columns, Haar-distributed (QR of a complex
/// Gaussian frame).
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> CMatrix {
    loop {
        if let Some(q) = orthonormalize(&complex_gaussian_matrix(rng, n, k)) {
            return q;
        }
    }
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    random_frame(rng, n, n)
}

/// Orthonormal basis of the orthogonal complement of the unit vector `v`.
pub fn complement_frame(v: &ComplexVector) -> CMatrix {
    let n = v.dim();
    let mut cols = vec![v.clone()];
    for j in 0..n {
        if cols.len() == n {
            break;
        }
        let mut e = ComplexVector::basis(n, j);
        for _ in 0..2 {
            for q in &cols {
                let p = q.dot(&e);
                e = e.axpy(-p, q);
            }
        }
        if e.norm() > 1e-6 {
            cols.push(e.normalized().expect("nonzero"));
        }
    }
    CMatrix::from_columns(&cols[1..])
}
