//! Executable theory of maps of involutive quantales.
//!
//! The crate builds finite sup-lattices and involutive quantales, quantic
//! nuclei presented by relations, tensor products of sup-lattices and a
//! graded truncation of the free product `Y*Q`, and checks the one- and
//! two-sided Frobenius reciprocity conditions (FR1/FR2) on concrete maps.
//! Everything is exact: finite tables, or subspace lattices of
//! finite-dimensional algebras over the rationals.

pub mod quantale;
pub mod suplattice;
pub mod catalog;
pub mod openness;
pub mod nucleus;
pub mod tensor;
pub mod freeprod;
pub mod format;
pub mod cli;
