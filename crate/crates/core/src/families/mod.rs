//! Explicitly presented groups of the coclass-2 trees and their identifiers.

mod build;
mod identifier;

pub use build::{build, build_uncached, fp_presentation, BuildError, GroupDescriptor, Kind, Tree, Variant};
pub use identifier::{
    resolve_identifier, resolve_str, GroupKind, IdentifierError, RelativeIdentifier, Resolved, Segment, Step,
    Unconstructible,
};
