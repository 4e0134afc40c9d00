//! Exact arithmetic for counting ordinary irreducible characters in
//! principal p-blocks of finite simple groups, and for verifying the
//! 2*sqrt(p-1) lower bound with equality detection.

pub mod arith;
pub mod blocks;
pub mod error;
pub mod orders;
pub mod partition;
pub mod reflection;

pub use error::{Error, Result};
