//! Non-additive measures (capacities), the Choquet integral and its ordinal
//! special cases, and linear-programming based learning of capacities and
//! value functions from preference data.
//!
//! The set-function algebra ([`capacity`], [`mobius`], [`indices`],
//! [`choquet`]) and the [`lp`] solver are generic over the scalar type
//! (`f32` or `f64`); the concrete `f64` aliases below are what the learning
//! and axiom-checking layers use.

pub mod axioms;
pub mod capacity;
pub mod choquet;
pub mod error;
pub mod indices;
pub mod joint;
pub mod lattice;
pub mod learn;
pub mod lp;
pub mod mobius;
pub mod scalar;
pub mod subset;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Capacity over `f64` values.
pub type Capacity = capacity::Capacity<f64>;
/// Möbius representation over `f64` coefficients.
pub type MobiusRepresentation = mobius::MobiusRepresentation<f64>;
/// Behavioral indices over `f64`.
pub type IndexReport = indices::IndexReport<f64>;
/// Dense linear program over `f64`.
pub type LinearProgram = lp::LinearProgram<f64>;
/// Solver outcome over `f64`.
pub type LpSolution = lp::LpSolution<f64>;

/// Single-precision variants.
pub mod f32 {
    pub type Capacity = crate::capacity::Capacity<f32>;
    pub type MobiusRepresentation = crate::mobius::MobiusRepresentation<f32>;
    pub type IndexReport = crate::indices::IndexReport<f32>;
    pub type LinearProgram = crate::lp::LinearProgram<f32>;
}
