//! Generalized transition probabilities between effects and between states,
//! relative to operations and instruments.
//!
//! The constructions in [`transition`] are written once against the [`Model`]
//! trait and instantiated on two concrete models:
//!
//! * [`classical`]: a finite classical effect algebra. Effects are `[0,1]`-valued
//!   vectors, substates are subprobability vectors and operations are
//!   column-substochastic matrices.
//! * [`quantum`]: finite-dimensional Hilbert space quantum mechanics. Effects are
//!   operators `0 <= A <= I`, states are density operators and operations are
//!   given in Kraus, Lüders or Holevo form. The linear algebra lives in
//!   [`hilbert`].
//!
//! [`oracle`] holds sampling and enumeration checks that reproduce the closed
//! forms without going through them, and [`random`] generates random valid
//! instances of every object for property tests and benchmarks.

pub mod classical;
pub mod error;
pub mod hilbert;
pub mod model;
pub mod oracle;
pub mod quantum;
pub mod random;
pub mod table;
pub mod transition;

pub use classical::{Classical, ClassicalEffect, ClassicalOperation, ClassicalSubstate};
pub use error::{Error, Result};
pub use hilbert::{
    born, hermitian_sqrt, pure_density, validate_operator, ComplexMatrix, DensityOperator,
    HermitianEigen, OperatorKind, PureState, QEffect, ValidationReport,
};
pub use model::{Instrument, Model, Observable};
pub use quantum::{
    KrausOperation, LudersOperation, QHolevoOperation, QOperation, Quantum, TransitionPath,
};
pub use table::{Axis, DistributionTable};

/// Default tolerance used when validating objects at construction time.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest Hilbert space dimension accepted by the validators.
pub const MAX_DIM: usize = 16;
