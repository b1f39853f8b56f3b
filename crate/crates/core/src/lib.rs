//! Numerical toolkit for linear relations (multivalued linear operators):
//! graph-subspace arithmetic, semi-Fredholm quantities, essential-spectrum
//! region classification for banded Laurent/Toeplitz symbol models, and
//! seeded property-verification suites.

pub mod banded;
pub mod error;
pub mod fredholm;
pub(crate) mod la;
pub mod poly;
pub mod relation;
pub mod schema;
pub mod spectra;
pub mod subspace;
pub mod verify;

pub use error::{Error, Result};
pub use fredholm::{Card, FredholmClass, FredholmData, IndexValue};
pub use relation::{OperatorPart, Parts, Relation};
pub use subspace::{Subspace, DEFAULT_TOL};
