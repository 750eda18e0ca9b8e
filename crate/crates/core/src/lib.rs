//! Random sets, selections and their hull operators over finite probability
//! spaces, with the Minkowski calculus needed to compute Aumann integrals,
//! selection expectations, barycenters and transition-kernel barycenters at
//! desk scale.
//!
//! Everything is pure and deterministic: set equality is decided by support
//! sampling on seeded direction sets, membership by a conditional-gradient
//! projection, and all enumerations carry explicit combinatorial guards.

pub mod barycenters;
pub mod error;
pub mod expectation;
pub mod geometry;
pub mod hulls;
pub mod prob;
pub mod randomset;

pub use error::{Error, Result};
