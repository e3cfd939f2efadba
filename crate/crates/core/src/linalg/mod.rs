//! Complex and Hermitian linear algebra.

mod hermitian;
mod matrix;
mod vector;

pub use hermitian::{
    complex_structure, det_hermitian, det_product, eig_hermitian, inv_hermitian,
    is_complex_structured, lemma_affine_identity, quad_form, realify, sqrt_hermitian,
    AxesVector, EigenDecomposition, HermitianShape, HERMITIAN_TOL,
};
pub use matrix::CMatrix;
pub use vector::{hadamard, ComplexVector};

pub use num_complex::Complex64 as C64;
