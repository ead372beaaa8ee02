//! Class-bounded p-quotients of finitely presented groups and p-covering groups.

mod fp;
mod linalg;
mod quotient;

pub use fp::{Expr, FpPresentation, FreeWord, GroupOps};
pub use linalg::Echelon;
pub use quotient::{
    fp_from_pc, metabelianization, p_cover, p_quotient, p_quotient_with, rank_report,
    with_definitions, PCover, PQuotient, PqOptions, RankReport,
};
