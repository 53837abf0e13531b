//! Built-in differentially flat models.
//!
//! Each model exposes its flat parameterization: maps taking flat-output
//! reference curves (symbolic or numeric) to input/state reference curves
//! or sampled series, plus the bound propagation needed by the constraint
//! compiler.

pub mod quad;
pub mod sigmoid;
pub mod vehicle;

pub use quad::{QuadParams, QuadError};
pub use sigmoid::{Sigmoid, SigmoidError};
pub use vehicle::VehicleParams;
