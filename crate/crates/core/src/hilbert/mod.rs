//! Finite-dimensional complex linear algebra for the Hilbert space model.

mod eigen;
mod matrix;
mod operators;

pub use eigen::{hermitian_sqrt, HermitianEigen};
pub use matrix::ComplexMatrix;
pub use operators::{
    born, pure_density, validate_operator, DensityOperator, OperatorKind, PureState, QEffect,
    ValidationReport,
};
