//! Fiber bundles over finite Alexandroff spaces.
//!
//! Finite spaces are preorders ([`finspace::FinSpace`]). Functors from a base
//! into spaces ([`functorcat::TopFunctor`]) glue into a total space by the
//! Grothendieck construction ([`grothendieck::groth`]), and [`bundles`]
//! decides, represents and classifies fiber bundles.

pub mod bundles;
pub mod catalog;
pub mod cli;
pub mod doc;
pub mod error;
pub mod finspace;
pub mod functorcat;
pub mod grothendieck;

pub use error::{Error, Result};
