//! Weil heights of algebraic numbers given by integer minimal polynomials:
//! certified Mahler measures, Kronecker's theorem as an exact test, powers,
//! and the finite enumeration of numbers of bounded degree and height.

mod enumerate;
mod irreducible;
mod mahler;
mod poly;

pub use enumerate::{
    coefficient_bounds, kronecker_test, min_height_scan, northcott_enumerate, power_minimal_polynomial, weil_height,
    HeightRecord, KroneckerClass, ScanReport,
};
pub use irreducible::{is_irreducible, rational_root, squarefree_decomposition};
pub use mahler::{mahler_measure, Mahler};
pub use poly::IntPolynomial;

/// Tolerance for height computations when none is given.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
