//! Numerical geometry of complex ellipsoids in ℂⁿ.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: complex vectors, dense complex matrices, Hermitian forms and
//!   a cyclic Jacobi eigensolver.
//! - [`ellipsoid`]: the [`ComplexEllipsoid`] value type with its closed-form
//!   geometry (volume, affine images, polars, complex-line sections).
//! - [`bodies`]: convex bodies given by membership and support oracles, plus
//!   seeded generators of test bodies.
//! - [`extremal`]: minimal circumscribed (Frank–Wolfe D-optimal design) and
//!   maximal inscribed (polar duality) complex ellipsoids.
//! - [`characterize`]: sampling-based decision procedures (disk sections,
//!   complex symmetry, homothety) that produce [`CharacterizationReport`]s.
//!
//! Conventions: a Hermitian shape `S` describes the form `x ↦ x†Sx`, and the
//! real pairing on ℂⁿ ≅ ℝ²ⁿ is `Re⟨u, x⟩ = Re(u†x)`. Real directions are
//! therefore carried as [`ComplexVector`]s.

pub mod bodies;
pub mod characterize;
pub mod ellipsoid;
mod error;
pub mod extremal;
pub mod linalg;
pub mod random;

pub use bodies::BodyOracle;
pub use characterize::{CharacterizationReport, DiskFit, Witness};
pub use ellipsoid::{ComplexEllipsoid, ComplexLine, Disk};
pub use error::{Error, Result};
pub use extremal::{DesignWeights, SolverReport};
pub use linalg::{AxesVector, CMatrix, ComplexVector, HermitianShape, C64};
