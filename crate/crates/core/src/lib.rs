//! Exact verification kernel for vertex algebras without vacuum and chiral
//! algebras on the affine line.

pub mod error;
pub mod exact;
pub mod formal;
pub mod linear;
pub mod report;

pub use error::{Error, Result};
pub mod corpus;
pub mod vertex;
pub mod chiral;
pub mod equivalence;
pub mod format;
