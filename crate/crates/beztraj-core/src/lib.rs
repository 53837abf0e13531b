//! Core algebra for constrained feedforward trajectory design over
//! differentially flat systems.
//!
//! The crate turns bound requirements on the states and inputs of a flat
//! system into a semialgebraic system over the control points of Bezier
//! reference trajectories, computes certified inner approximations of the
//! feasible control-point region by interval branch-and-prune, and verifies
//! chosen trajectories by envelope bounds and open/closed-loop simulation.
//!
//! The crate is `no_std` (alloc required); everything that touches the file
//! system or a terminal lives in the companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bezier;
pub mod coeff;
pub mod constraint;
pub mod envelope;
pub mod fixture;
pub mod flat;
pub mod interval;
pub mod region;
pub mod rng;
pub mod sim;
pub mod sympoly;

pub use bezier::BezierCurve;
pub use coeff::{Coeff, Rat};
pub use constraint::{ConstraintSystem, RelOp, Relation};
pub use envelope::{ControlPolygon, Envelope};
pub use region::{ParamBox, RegionApprox};
pub use sympoly::PolyExpr;
