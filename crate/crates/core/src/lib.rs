//! Computation with finite bi-invariant metric groups.
//!
//! The crate evaluates approximate-embedding defects, searches for witnesses
//! in symmetric and diagonal-unitary targets, certifies lower bounds on the
//! achievable defect for the Lee metric on ℤ(p), runs the metric shift
//! constructions on explicit permutation and matrix witnesses, and
//! evaluates continuous-logic formulas over finite metric groups.

pub mod amplifier;
pub mod certifier;
pub mod constructions;
pub mod error;
pub mod groups;
pub mod logic;
pub mod parallel;
pub mod report;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use groups::{FiniteMetricGroup, GroupSpec, GroupStructure, LengthFunction, Permutation};
pub use scalar::{Rational, Scalar};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
