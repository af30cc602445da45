//! Harmonic interpolation over spherical interiors, exteriors, and the
//! half-space by linear combinations of fundamental-solution point
//! sources, fit through exact closed-form weighted-Dirichlet inner
//! products.
//!
//! The normal equations of the least-squares problem assemble entirely
//! from closed forms: the Gram entry of two point-source bases and the
//! data entry of a basis against a harmonic field both reduce to point
//! evaluations, because each source pairs with an interpolation point in
//! the complementary domain (inversion through the unit sphere, or
//! mirroring for the half-space). A solved fit reproduces the field
//! values at every interpolation point and is the minimum-norm
//! interpolant among all admissible fields matching those values.
//!
//! Modules:
//!
//! * [`geometry`] - point algebra, the inversion map, and the ring
//!   gridding of a sphere with separation statistics.
//! * [`kernel`] - closed-form Gram/right-hand-side entries for constant,
//!   monopole, and dipole-component bases.
//! * [`linalg`] - precision-generic Householder solve, Jacobi
//!   eigenvalues, and condition numbers, over `f64` or double-double.
//! * [`fit`] - normal-equation assembly, solving, evaluation, and error
//!   statistics.
//! * [`oracle`] - independent quadrature verification of every
//!   closed-form identity, plus the registry of test fields.

pub mod dual;
pub mod fit;
pub mod geometry;
pub mod kernel;
pub mod linalg;
pub mod oracle;
