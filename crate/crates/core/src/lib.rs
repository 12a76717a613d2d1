//! Exact lattice arithmetic, root enumeration and cycle classification for
//! period domains of K3 and IHS type.

pub mod arith;
pub mod cli;
pub mod conic;
pub mod cycle;
pub mod error;
pub mod hnf;
pub mod json;
pub mod matrix;
pub mod quadspace;
pub mod roots;
pub mod weyl;

pub use error::{Error, Result};
