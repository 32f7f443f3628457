//! Exact arithmetic over the rational function field Q(t) and the geometry
//! it induces: the degree valuation at infinity, the building of lattice
//! classes for GL(3), chamber flags in vertex links, the reduced Burau
//! representation of the four-strand braid group, and a ping-pong
//! certificate that a pair of matrices generates a free group.
//!
//! Everything is computed exactly — arbitrary-precision rationals, no
//! floating point, no truncation — so a `CERTIFIED_FREE` verdict is a
//! proof, not an estimate. An independent word-enumeration scan
//! ([`words::freeness_scan`]) provides a refutation oracle for the same
//! question from the opposite direction.

pub mod building;
pub mod burau;
pub mod certify;
mod error;
pub mod extint;
pub mod link;
pub mod matk;
pub mod parse;
pub mod poly;
pub mod qmat;
pub mod ratfn;
pub mod report;
pub mod words;

pub use error::{Error, Result};
pub use extint::ExtInt;
pub use matk::MatK;
pub use qmat::QMat;
pub use ratfn::RatFn;
