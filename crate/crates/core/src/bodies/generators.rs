use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use super::shapes::{PerturbedEllipsoid, RealEllipsoidBody};
use crate::ellipsoid::ComplexEllipsoid;
use crate::linalg::{is_complex_structured, CMatrix, HermitianShape};
use crate::random::{complex_gaussian_matrix, complex_gaussian_vector, rng_from_seed};
use crate::Result;

/// Real shapes closer than this (relative commutator norm) to a complex
/// shape are redrawn.
const J_SEPARATION: f64 = 1e-3;

/// `{x : (x−c)†(A†A + 0.1·I)(x−c) ≤ 1}` with `A` and `c` standard complex
/// Gaussian.
pub fn gen_random_ellipsoid(seed: u64, n: usize) -> ComplexEllipsoid {
    let mut rng = rng_from_seed(seed);
    let a = complex_gaussian_matrix(&mut rng, n, n);
    let m = &(&a.adjoint() * &a) + &CMatrix::identity(n).scale_real(0.1);
    let center = complex_gaussian_vector(&mut rng, n);
    let shape = HermitianShape::from_hermitian(m).expect("A†A + 0.1 I is positive definite");
    ComplexEllipsoid::new(center, shape).expect("dimensions agree")
}

/// The ellipsoid of [`gen_random_ellipsoid`] for the same seed, with the
/// quartic perturbation of strength `eps` along a random direction.
pub fn gen_perturbed_ellipsoid(seed: u64, n: usize, eps: f64) -> Result<PerturbedEllipsoid> {
    let base = gen_random_ellipsoid(seed, n);
    let mut rng = rng_from_seed(seed ^ 0x9e37_79b9_7f4a_7c15);
    let a = complex_gaussian_vector(&mut rng, n);
    PerturbedEllipsoid::new(base, &a, eps)
}

/// A real ellipsoid `BᵀB + 0.1·I` (B real Gaussian 2n×2n), centred at a
/// complex Gaussian point, whose shape does not commute with the complex
/// structure.
pub fn gen_non_j_invariant(seed: u64, n: usize) -> RealEllipsoidBody {
    let mut rng = rng_from_seed(seed);
    let d = 2 * n;
    loop {
        let b = DMatrix::<f64>::from_fn(d, d, |_, _| StandardNormal.sample(&mut rng));
        let r = b.transpose() * &b + DMatrix::identity(d, d) * 0.1;
        let r = (&r + r.transpose()) * 0.5;
        if !is_complex_structured(&r, J_SEPARATION).expect("even dimension") {
            let center = complex_gaussian_vector(&mut rng, n);
            return RealEllipsoidBody::new(center, r).expect("positive definite");
        }
    }
}
