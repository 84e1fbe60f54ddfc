//! Abelian number fields presented through their Dirichlet character groups,
//! the Bombieri–Zannier local sums attached to them, explicit split-cyclic
//! constructions with discriminant certificates, and a Weil-height engine.
//!
//! Everything is exact where it can be: conductors and discriminants are kept
//! in factored form, splitting data is computed from characters, and real
//! valued sums carry their full term lists so they can be replayed.

pub mod arithmetic;
pub mod caps;
pub mod certificate;
pub mod constructions;
mod dec;
mod error;
pub mod fields;
pub mod heights;
pub mod linalg;
pub mod metrics;
pub mod parallel;

pub use caps::Caps;
pub use error::{Error, Result};
pub use fields::{AbelianField, SplittingData};
pub use parallel::Exec;
