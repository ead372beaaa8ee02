//! Power-commutator presentations of finite p-groups.

mod presentation;
mod structure;
mod subgroup;
mod text;
mod word;

pub use presentation::{Definition, OverlapKind, PcPresentation, Violation};
pub use structure::SeriesReport;
pub use subgroup::{normalized_vectors, SubgroupBuilder, SubgroupCgs};
pub use word::{NormalWord, Syllable};
