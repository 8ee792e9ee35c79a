//! Positivity analysis for symmetric band matrices.
//!
//! The crate decides positive (semi)definiteness of tridiagonal and
//! pentadiagonal matrices through chain sequences, computes the Hadamard
//! powers that preserve positivity for these families, characterizes
//! infinite divisibility, and evaluates critical exponents of chordal
//! graph patterns. Every algebraic criterion is paired with the numerical
//! eigenvalue oracle in [`positivity`].

pub mod bandmat;
pub mod chainseq;
pub mod cli;
pub mod error;
pub mod exact;
pub mod format;
pub mod graphs;
pub mod io;
pub mod positivity;
pub mod preservers;

pub use bandmat::{BandSymMatrix, DenseSymMatrix, PermutationSpec, SymMatrix};
pub use chainseq::ChainReport;
pub use error::{Error, Result};
pub use graphs::SimpleGraph;
pub use positivity::{PositivityClass, PositivityVerdict};
pub use preservers::{PowerSet, ProbeReport};

/// Default positivity tolerance, relative to `max(1, max-norm)`.
pub const DEFAULT_TOL: f64 = 1e-10;
