//! Exact computations for forbidden-subposet and trace problems on the
//! Boolean lattice `2^[n]`.
//!
//! Subsets are bit masks ([`SubsetMask`]), families are sorted mask lists
//! ([`Family`]). Every solver returns a witness that the predicates in
//! [`embed`] can re-check without trusting the solver.

pub mod certificate;
pub mod chains;
pub mod constructions;
pub mod embed;
mod error;
pub mod params;
pub mod poset;
pub mod probe;
pub mod search;
pub mod sets;

pub use error::{Error, Result};
pub use poset::{NamedPoset, Poset, PosetJson};
pub use search::{ExtremalResult, Kind, SearchBudget, Status, SymmetryMode};
pub use sets::{Family, GroundSet, SubsetMask};
