//! Artin transfers to maximal subgroups, transfer kernel types, and abelian
//! type invariants of first and second order.

mod pattern;
mod tkt;
mod transfer;

pub use pattern::{
    artin_pattern, ati1, ati2, parse_quadruple, ArtinPattern, Ati, Ati2, Ati2Entry,
};
pub use tkt::{named, tkt, tkt_canonical, Tkt, NAMED_TYPES};
pub use transfer::{coset_representatives, Transfer};
