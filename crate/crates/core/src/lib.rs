//! Groupoid-graded linear algebra and restricted solid-on-solid models.
//!
//! The crate builds graded vector spaces over action groupoids of the weight
//! lattice, the elliptic dynamical R-matrix acting on them, and the transfer
//! matrices, characters and fusion rings derived from it. Every structural
//! identity comes with a numerical or exact check.

pub mod cli;
pub mod convolution;
pub mod elliptic;
pub mod error;
pub mod fusion;
pub mod graded;
pub mod groupoid;
pub mod rsos;
pub mod transfer;

pub use error::{Error, Result};
