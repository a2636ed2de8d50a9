//! Finite category presentations with degree functions, and everything the
//! Reedy-style stratification theory says about them at desk scale:
//! factorizations, basic morphisms, boundary homs, structure-class decision
//! procedures (inverse, bistratified, almost-Reedy, Reedy, g-Reedy, c-Reedy,
//! fs-Reedy), profunctor collages, latching/matching objects, and the induced
//! weak factorization structure on finite-set diagram categories.
//!
//! Every construction here is exhaustive and deterministic: values are
//! immutable after validation, all traversals follow the canonical
//! `(src, tgt, id)` morphism order, and quotients pick least representatives,
//! so outputs are reproducible bit for bit.

pub mod classify;
pub mod cli;
pub mod corpus;
pub mod diagrams;
pub mod factorization;
pub mod fincat;
pub mod profunctor;
pub mod wfs;

mod dset;
mod error;

pub use error::Error;
pub use fincat::{DegreedCategory, FinCategory, Mor, Obj};
