//! Exact integer linear optimization over UTVPI constraint systems.
//!
//! A UTVPI (unit-two-variable-per-inequality) system constrains integer
//! variables by rows of the form `±x_i >= b` or `±x_i ± x_j >= b` with
//! integer bounds and a rational objective. This crate solves such systems
//! exactly:
//!
//! * [`lp`] solves the linear relaxation via a doubled difference-constraint
//!   graph ([`dcs`]) and an exact min-cost transshipment, producing a
//!   half-integral optimum with a verifiable dual certificate;
//! * [`persistency`] rounds a relaxation optimum to an integer optimum: some
//!   integer optimum always lies within the unit neighborhood of a relaxation
//!   optimum, so fixing integral coordinates leaves a binary problem that
//!   [`binary`] finishes exactly;
//! * [`oracle`] provides independent brute-force references and the bundled
//!   worked fixtures; [`lconvex`] checks the discrete midpoint convexity
//!   property underlying the neighborhood rounding.
//!
//! All arithmetic on values and multipliers is arbitrary-precision rational;
//! solutions are half-integers represented exactly by their doubles.

pub mod binary;
pub mod oracle;
pub mod persistency;
pub mod dcs;
mod flow;
pub mod lp;
pub mod model;
pub mod parser;

pub use model::{
    DualCertificate, HalfInt, IlpOptimum, IlpSolution, LpOptimum, LpSolution, ModelError,
    Rational, Sign, UtvpiConstraint, UtvpiInstance,
};
pub use parser::{parse_instance, ExtendedInstance, ParseError, ParsedInstance};
