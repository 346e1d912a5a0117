//! Discrete Deligne–Beilinson calculus on triangulated closed oriented
//! manifolds, with exact rational arithmetic.

pub mod builtins;
pub mod complex;
pub mod cover;
pub mod currents;
pub mod cycles;
pub mod db;
pub mod error;
pub mod gauge;
pub mod homology;
pub mod json;
pub mod linalg;
pub mod manifold;
pub mod random;
pub mod rmodz;
pub mod suites;

pub use error::{Error, Result};
