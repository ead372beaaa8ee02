//! Involutory automorphisms acting as inversion on the Frattini quotient and
//! on the p-multiplicator, Schur status, and the Shafarevich bound.

mod search;
mod shafarevich;

pub use search::{find_sigma, find_sigma_with, schur_status, SchurClass, SchurStatus, SigmaOptions, SigmaWitness};
pub use shafarevich::{shafarevich_admissible, FieldSignature, ShafarevichVerdict};

use thiserror::Error;

use crate::error::{PcError, QuotientError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SigmaError {
    #[error("group of order p^{log_order} exceeds the search ceiling p^{ceiling}")]
    Capacity { log_order: usize, ceiling: usize },
    #[error(transparent)]
    Pc(#[from] PcError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}
