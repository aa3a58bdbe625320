//! Exact-arithmetic quasi-Trefftz polynomial spaces for the second-order
//! Maxwell operator `∇×∇× − ε` with a smooth scalar coefficient `ε`.
//!
//! Everything in this crate works on homogeneous polynomial blocks with
//! arbitrary-precision rational coefficients: no floating point is used
//! anywhere, so every rank, kernel dimension and residual is certified
//! rather than estimated.
//!
//! The layers, bottom up:
//!
//! * [`rational`] / [`multiindex`] / [`poly`] — exact scalars, the canonical
//!   monomial enumeration and dense homogeneous polynomial algebra.
//! * [`linalg`] — dense rational matrices with deterministic Gaussian
//!   elimination (rank, nullspace, consistent solves).
//! * [`diffops`] — the graded gradient / divergence / curl / Laplacian
//!   operators between homogeneous blocks and their canonical matrices.
//! * [`bases`] — closed-form bases of the solenoidal, irrotational and
//!   harmonic subspaces and deterministic complements.
//! * [`helmholtz`] — the unique three-way Helmholtz decomposition of a
//!   homogeneous polynomial vector field.
//! * [`solvers`] — exact right inverses of the restricted divergence and
//!   vector-Laplacian operators, with their kernel bases.
//! * [`qtspace`] — the quasi-Trefftz space itself: degree-by-degree
//!   construction, basis enumeration, residual verification and an
//!   independent brute-force dimension oracle.
//! * [`selfcheck`] — the invariant suites wired into the CLI.
//!
//! ```
//! use qtmaxwell::{qtspace, CoefficientJet, Rational};
//!
//! // ε ≡ 1, degree-3 space: 39 certified basis functions
//! let eps = CoefficientJet::constant(Rational::one())?;
//! let basis = qtspace::enumerate_basis(&eps, 3)?;
//! assert_eq!(basis.len(), qtspace::dimension_formula(3));
//! assert!(basis.iter().all(|e| e.certified));
//!
//! // the brute-force constraint system agrees
//! assert_eq!(qtspace::oracle_dimension(&eps, 3)?, 39);
//! # Ok::<(), qtmaxwell::Error>(())
//! ```

pub mod bases;
pub mod diffops;
pub mod helmholtz;
pub mod linalg;
pub mod multiindex;
pub mod poly;
pub mod qtspace;
pub mod rational;
pub mod selfcheck;
pub mod solvers;

mod cache;

pub use bases::{PsiLabel, SpaceBasis, SpaceTag};
pub use diffops::{OpKind, OperatorMatrix};
pub use helmholtz::HelmholtzTriple;
pub use multiindex::{mono_count, MultiIndex};
pub use poly::{CoefficientJet, GradedVecPoly, HomScalarPoly, HomVecPoly};
pub use qtspace::{FreeParameters, QTBasisElement, SignConvention, VerifyOutcome};
pub use rational::Rational;

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// The constant Taylor component of the coefficient vanishes, so the
    /// quasi-Trefftz construction (which divides by it) is undefined.
    #[error("degenerate coefficient: constant Taylor component is zero")]
    DegenerateCoefficient,

    /// Quasi-Trefftz spaces are only defined for polynomial degree p > 2.
    #[error("p must exceed 2 (got {0})")]
    DegreeTooSmall(usize),

    /// The right-hand side handed to the restricted vector-Laplacian solver
    /// is not divergence free, so it lies outside the operator's codomain.
    #[error("divergence obstruction: right-hand side is not solenoidal")]
    DivergenceObstruction,

    /// A divergence-free generator label violates its family constraint.
    #[error("inadmissible generator label: {0}")]
    InadmissibleLabel(String),

    /// Structural mismatch in user-supplied data (degrees, lengths, shapes).
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Input data failed validation while parsing.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A constructed element failed its own residual certification.
    /// This indicates a bug and is never expected on valid inputs.
    #[error("certification failure: {0}")]
    CertificationFailure(String),
}

/// Shorthand result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
