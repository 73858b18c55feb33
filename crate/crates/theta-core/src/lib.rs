//! Finite theta groups, Weil-function normalization and genus-2 theta pipelines.
//!
//! The crate has three layers:
//!
//! * exact finite algebra: the theta group over `L = (Z/N)^g x mu_N^g`
//!   ([`heisenberg`]), an exterior-algebra model of `H*` of abelian varieties
//!   and of products of curves ([`cohomology`]), and quadratic spaces with
//!   Pfaffians and isotropic frames ([`spinor`]);
//! * numerics: Riemann theta functions with rational characteristics
//!   ([`theta`]) and a genus-2 hyperelliptic curve backend with periods,
//!   Abel-Jacobi, Riemann-Roch bases and determinantal Weil functions
//!   ([`curve`]);
//! * the backend-agnostic normalization engine ([`normalize`]) that turns a
//!   family of Weil functions into a normal one and extracts moduli vectors.
//!
//! Data-parallel inner loops (lattice sums, per-torsion-point work, sampling
//! sweeps) run on rayon when the default `parallel` feature is enabled and
//! fall back to equivalent sequential code otherwise; results are bitwise
//! identical either way because reductions keep a fixed summation order.

pub mod cohomology;
pub mod curve;
pub mod error;
pub mod heisenberg;
pub mod linalg;
pub mod normalize;
pub mod par;
pub mod poly;
pub mod spinor;
pub mod theta;

pub use error::CoreError;

/// Convenience alias used throughout the crate.
pub type Complex = num_complex::Complex64;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, CoreError>;
