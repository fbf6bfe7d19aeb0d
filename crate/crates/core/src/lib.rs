//! Spectral sequences of N-multicomplexes over exact fields.
//!
//! The crate computes both spectral sequences of a multicomplex page by page
//! from witness cycles, decides the weak equivalences and fibrations of the
//! associated model structures, and implements the bicomplex adjunction
//! `q ⊣ j` for `N = 4`.

pub mod adjunction;
pub mod algebra;
pub mod bidegree;
pub mod document;
pub mod error;
pub mod field;
pub mod graded;
pub mod linalg;
pub mod model;
pub mod morphism;
pub mod multicomplex;
pub mod parallel;
pub mod quotient;
pub mod random;
pub mod representables;
pub mod spectral;
pub mod suite;

pub use bidegree::{Bidegree, Window};
pub use error::{Error, Result};
pub use field::{Field, Rat, Scalar};
pub use graded::{Extent, Graded, GradedMap};
pub use linalg::{Matrix, QuotientPresentation, Subspace, Vector};
pub use morphism::Morphism;
pub use multicomplex::Multicomplex;
