//! Rényi-entropy uncertainty relations for general quantum measurements.
//!
//! The crate evaluates the state-dependent and state-independent bound
//! functionals for pairs of POVMs, checks the resulting entropic
//! inequalities with explicit slack, builds Naimark dilations, and runs
//! seeded Monte-Carlo campaigns over random ensembles.

pub mod bounds;
pub mod discrimination;
pub mod entropy;
pub mod error;
pub mod harness;
pub mod interpolation;
pub mod linalg;
pub mod measurement;
pub mod naimark;

pub use entropy::RenyiOrder;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianOperator, C64};
pub use measurement::{DensityMatrix, Measurement, MeasurementKind, PureState};
