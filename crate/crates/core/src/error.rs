use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcError {
    #[error("generator index {index} out of range for {ngens} generators")]
    GeneratorOutOfRange { index: usize, ngens: usize },
    #[error("right-hand side of {relation} involves generator g{found}, must be above g{bound}")]
    NotAboveIndex {
        relation: String,
        found: usize,
        bound: usize,
    },
    #[error("exponent {exponent} not reduced modulo {prime}")]
    ExponentRange { exponent: u32, prime: u8 },
    #[error("subgroup is not normal: conjugate of {element} by g{generator} escapes it")]
    NotNormal { element: String, generator: usize },
    #[error("subgroup is not of index p")]
    NotMaximal,
    #[error("group is {0}-generated, expected 2 generators")]
    GeneratorRank(usize),
    #[error("transfer kernel matches no maximal subgroup")]
    KernelUnmatched,
    #[error("element is not contained in the subgroup")]
    NotInSubgroup,
    #[error("transversal does not pick one element from each coset")]
    NotTransversal,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("inconsistent tail system at class {class}")]
    InconsistentTails { class: usize },
    #[error("relator {0} references an unknown generator")]
    BadRelator(usize),
    #[error("class bound must be at least 1")]
    ZeroClass,
    #[error(transparent)]
    Pc(#[from] PcError),
}
