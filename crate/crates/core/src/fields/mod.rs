//! Abelian extensions of Q, presented dually by their Dirichlet character
//! groups.
//!
//! A field with unit-group presentation (m, H) corresponds to the group of
//! characters of (Z/m)^* trivial on H. Characters are stored by their values
//! on fixed generators of the local unit groups, which makes them independent
//! of m; composita, intersections and fixed fields become subgroup
//! operations, and the conductor–discriminant formula reads off |Δ| directly.

mod character;
mod factored;
mod field;
mod frac;
mod snf;

pub use character::{Character, CharacterEvaluator, Place};
pub use factored::FactoredInt;
pub use field::{norm_relative_discriminant, quadratic_character, AbelianField, FieldPresentation, SplittingData};
pub use frac::Frac;
pub use snf::dual_of_quotient;
