//! Exact arithmetic for the Kuga-Satake construction of K3-type periods:
//! integral lattices, even Clifford algebras, polarized complex tori,
//! Picard recovery and Galois-module bookkeeping for Brauer group bounds.

pub mod bigfloat;
pub mod clifford;
pub mod correspondence;
pub mod effective;
pub mod error;
pub mod fixtures;
pub mod galois;
pub mod howell;
pub mod intlin;
pub mod kuga_satake;
pub mod lattice;
pub mod lll;
pub mod matrix;
pub mod modular;
pub mod numtheory;
pub mod scalar;

pub use error::{Error, ErrorKind, Result};
pub use lattice::{FiniteAbelianGroup, QuadLattice, SubLattice};
pub use matrix::{IntMatrix, Matrix, ScalarMatrix};
pub use scalar::{Scalar, ScalarMode};
