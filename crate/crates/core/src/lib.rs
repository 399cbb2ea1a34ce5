//! A computational-algebra workbench for generalized rings (commutative
//! algebraic monads on sets) at desk scale.
//!
//! The crate provides exact arithmetic over ℚ with the full place structure,
//! the classical coefficient monads (ℤ, ℕ, B_N, ℤ_(∞), A_N, 𝔽_1, 𝔽_{1²})
//! together with their cyclotomic and residue relatives, finitely presented
//! monads with a text grammar, bounded equational proving and finite-model
//! refutation, prime spectra and the compactified spectrum of ℤ, the graded
//! Proj construction, Picard groups, and archimedean lattice computations.
//!
//! Every computation is exact; randomized suites are seeded and
//! reproducible. The `genring` binary exposes the analyses as deterministic
//! CLI commands with table and JSON output.

pub mod error;
pub mod exactnum;

pub mod coeffmonads;
pub mod torsionmonads;

pub mod monad;
pub mod presentations;

pub mod classify;
pub mod spectra;

pub mod projgraded;

pub mod picard_arakelov;

pub mod cli;

pub use error::{Error, Result};
pub use exactnum::Rat;
