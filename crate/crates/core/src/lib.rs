//! Energy-space finite elements for elliptic Dirichlet boundary control.
//!
//! The control is the Dirichlet trace of the state, and the cost penalizes
//! the full `H^1(Ω)` norm of the (discrete harmonic) state. Discretely this
//! leads to a symmetric saddle-point system in which a multiplier from the
//! zero-trace space enforces discrete harmonicity. Box constraints on the
//! control are handled by a primal-dual active set iteration.
//!
//! Everything here is pure computation on `alloc` collections; file formats,
//! experiment drivers and the command line live in the `dbc` crate.
#![no_std]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod assembly;
pub mod control;
pub mod convergence;
mod error;
pub mod harmonic;
pub mod linalg;
pub mod mesh;
pub mod pdas;

pub use assembly::{FeFunction, QuadratureRule};
pub use control::{ControlProblem, ControlSolution};
pub use convergence::{ConvergenceRecord, ErrorNorms, RateField};
pub use error::{Error, Result};
pub use harmonic::TraceVector;
pub use linalg::{SparseMatrix, TripletBuffer};
pub use mesh::Mesh;
pub use pdas::{ActiveSetState, KktResidual, NodeStatus};
