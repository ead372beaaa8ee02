//! Decision procedures for the length of the 3-class field tower of a
//! quadratic field from its Artin pattern.

mod criteria;
mod screen;
mod state;

pub use criteria::{
    classify, classify_complex, classify_simple, complex_pattern, simple_pattern, Length,
    LengthVerdict, Signature, Stages, TypeFamily,
};
pub use screen::{screen_ipad, Ipad, Screen};
pub use state::{detect_state, polarization_state, Family, StateReading};

use thiserror::Error;

use crate::artin::Tkt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("transfer kernel type {0} is not a simple type")]
    NotSimple(Tkt),
    #[error("transfer kernel type {0} is not a complex type")]
    NotComplex(Tkt),
    #[error("transfer kernel type {0} is neither simple nor complex")]
    UnsupportedType(Tkt),
    #[error("IPAD needs 5 components, found {0}")]
    IpadArity(usize),
    #[error("IPAD base component must be 11, found {0}")]
    IpadBase(String),
    #[error("soluble length formula needs m >= 2, got {0}")]
    SolubleLengthDomain(u64),
}

/// Soluble length `floor(log2(3m+3))` of the groups `G_m` of logarithmic order `3m+2`.
pub fn babu_soluble_length(m: u64) -> Result<u32, ClassifyError> {
    if m < 2 {
        return Err(ClassifyError::SolubleLengthDomain(m));
    }
    Ok((3 * m + 3).ilog2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soluble_length_samples() {
        assert_eq!(babu_soluble_length(2), Ok(3));
        assert_eq!(babu_soluble_length(5), Ok(4));
        assert_eq!(babu_soluble_length(21), Ok(6));
        assert!(babu_soluble_length(1).is_err());
    }
}
