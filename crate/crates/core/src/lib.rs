//! Arithmetic in finite 3-groups given by power-commutator presentations,
//! Artin patterns, and decision criteria for the length of 3-class field towers.

pub mod artin;
pub mod classify;
pub mod error;
pub mod families;
pub mod ingest;
pub mod invariants;
pub mod pc;
pub mod pq;
pub mod sigma;
pub mod snf;

pub use error::{ParseError, PcError, QuotientError};
pub use invariants::TypeInvariants;
pub use pc::{NormalWord, PcPresentation, SubgroupCgs};
