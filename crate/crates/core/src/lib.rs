//! Exact computational toolkit for vector bundles on projective space given by monads and
//! by block-matrix (KPR) constructions: homogeneous forms over Q and F_p, graded matrices,
//! pfaffians, weight ledgers, symplectic forms, zero-locus certificates and Chern calculus.

pub mod chern;
pub mod error;
pub mod field;
pub mod form;
pub mod graded;
pub mod json;
pub mod kpr;
pub mod monad;
pub mod pfaffian;
pub mod symplectic;
pub mod weights;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use form::Form;
pub use graded::GradedMatrix;
pub use pfaffian::AntisymMatrix;
