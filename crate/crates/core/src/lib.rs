//! Exact solver for Euler-operator equations `P(θ) U = T` on tempered
//! distributions built from monomial, logarithmic, Heaviside and delta
//! factors, with numerical oracles for the pairing convention and for the
//! Malgrange–Ehrenpreis fundamental-solution construction.

pub mod cli;
pub mod dist;
pub mod error;
mod linsolve;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod solver;
pub mod theta;
pub mod wagner;

pub type Rat = num_rational::BigRational;

pub use dist::{Atom1D, DistExpr, Sign, TensorTerm};
pub use error::{Error, ParseError, Result};
pub use poly::{EigenValue, MultiIndex, Polynomial};
pub use solver::{solve, verify, SolveReport, TraceStep};
