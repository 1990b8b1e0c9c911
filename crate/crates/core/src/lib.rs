//! Parallelepiped cell calculus.
//!
//! - [`permcalc`]: signs of permutations, deletions, insertions and splits
//! - [`exterior`]: multivectors, wedge/cross products, boundary maps, Hodge star
//! - [`cubical`]: oriented cubical complexes, Smith normal form, homology
//! - [`forms`]: differential forms, discrete integration and Stokes checks
//! - [`frameworks`]: elementary frameworks, connected sums, π₁ triviality
//! - [`flows`]: grid diagnostics for potential flows and level sets

pub mod cubical;
pub mod error;
pub mod exterior;
pub mod forms;
pub mod flows;
pub mod frameworks;
pub mod permcalc;

pub use error::{Error, Result};
pub use exterior::{Multivector, Scalar, VectorSystem};
pub use permcalc::{OrderedSubset, Permutation, Sign};
