//! Exact arithmetic for the Galois action on the mod-p homology of the
//! degree-p Fermat curve.
//!
//! The library is organised around the pipeline that turns a Galois element,
//! given by its Kummer coordinates, into the unit of the group ring
//! `F_p[e0, e1]/(e0^p - 1, e1^p - 1)` by which it acts on relative homology:
//!
//! * [`context`] — the prime `p` and its derived arithmetic tables;
//! * [`scalar`] — the scalar rings: `F_p`, the Artin-Schreier extension
//!   `F_p[t]/(t^p - t + c)`, and their mod-p^2 lifts;
//! * [`matrix`] — dense exact linear algebra over `F_p`;
//! * [`group_ring`] — truncated polynomial arithmetic in one and two cyclic
//!   variables, truncated exponentials, logarithmic derivatives, norms;
//! * [`galois`] — the closed-form action units, their inverses, norms and
//!   low-degree coefficients;
//! * [`invariants`] — the homology module, its invariant subspaces and
//!   kernel comparisons;
//! * [`cohomology`] — the tensor cochain complex, H^1 dimensions and the
//!   transgression-kernel decision procedure;
//! * [`zeta`] — point counts, Jacobi sums and mod-p zeta checks over finite
//!   fields;
//! * [`verify`] — the end-to-end verification suite driven by the CLI.

pub mod cohomology;
pub mod context;
pub mod galois;
pub mod group_ring;
pub mod invariants;
pub mod matrix;
pub mod scalar;
pub mod verify;
pub mod zeta;

use thiserror::Error;

/// Errors surfaced by fallible public operations.
///
/// Internal invariants proved by the underlying theory (descent of an action
/// unit to `F_p`, `D1 * D0 = 0`, divisibility inside the lifted exponential)
/// are enforced with assertions instead: their failure is a bug, not an
/// input condition.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("nonzero constant term in exponential argument")]
    NonzeroConstantTerm,
    #[error("twist scalar must be nonzero mod p")]
    ZeroTwist,
    #[error("operation requires p >= 5, got p = {0}")]
    RequiresLargerPrime(u64),
    #[error("mixed primes: {0} vs {1}")]
    MixedPrimes(u64, u64),
    #[error("subspace is not contained in the claimed ambient space")]
    NotASubspace,
    #[error("kernel transport is not defined for the generator index 0")]
    TransportAtZero,
    #[error("point-count size {0} exceeds the configured cap {1}")]
    CapExceeded(u64, u64),
    #[error("character pair ({0}, {1}) is outside the admissible index set")]
    BadCharacterPair(u64, u64),
    #[error("field must satisfy q = 1 mod p for character constructions")]
    NoCharactersOfOrderP,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("missing bar-cocycle table entry for {0}")]
    MissingTableEntry(String),
    #[error("section is not normalized: {0}")]
    BadSection(String),
    #[error("invalid c-vector: expected {expected} coordinates, got {got}")]
    BadCVector { expected: usize, got: usize },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
