//! Exact computations for regular Hessenberg varieties in type A.

pub mod dotchar;
pub mod error;
pub mod gkm;
pub mod hessenberg;
pub mod linalg;
pub mod partitions;
pub mod springer;
pub mod symfunc;

pub use error::{Error, Result};
