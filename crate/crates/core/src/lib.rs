//! Exact-arithmetic engine for decomposing a pseudo-Euclidean space under a
//! form-preserving matrix group into indecomposable invariant summands.
//!
//! Everything is computed over the rationals with arbitrary precision; every
//! verdict (isotropy, invariance, orthogonality, idempotency) is an exact
//! equality test. The pipeline:
//!
//! 1. [`holonomy_action`] — representations given by group and/or
//!    infinitesimal generators, fixed spaces, moved spans, commutants.
//! 2. [`derham_decompose`] — trivial-part extraction and recursive orthogonal
//!    splitting into classified summands.
//! 3. [`phi_analysis`] — module-level (not necessarily orthogonal)
//!    decomposability of summands with nonzero fixed space.
//! 4. [`uniqueness`] — comparison of rival decompositions, exact isometry
//!    construction, factor extraction, and uniqueness verdicts.
//! 5. [`oracle`] — independent finite-field brute-force evidence.

#![allow(clippy::needless_range_loop)]

pub mod corpus;
pub mod exact_linalg;
pub mod quadratic_space;
pub mod holonomy_action;
pub mod derham_decompose;
pub mod oracle;
pub mod phi_analysis;
pub mod rng;
mod splitting;
pub mod uniqueness;

pub use exact_linalg::{Polynomial, RatMatrix, Rational};
pub use quadratic_space::{QuadraticSpace, Subspace};
pub use holonomy_action::{FactorDecomposition, Generator, GeneratorKind, Representation};
pub use derham_decompose::{DecompositionReport, Summand, SummandKind, ValidityReport};
pub use phi_analysis::{ModuleVerdict, PhiStatus, PhiVerdict};
pub use uniqueness::{ComparisonReport, IsometryMap, UniquenessVerdict, Verdict};
