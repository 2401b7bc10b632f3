//! A small celestial-mechanics laboratory for a quantized-space correction to
//! Newtonian gravity.
//!
//! The force between two bodies separated by `L` is taken as
//! `G m1 m2 / (L (L - q_l))` for a space quantum `q_l`. To first order this
//! turns the Kepler ellipse into a precessing conic, giving a perihelion
//! advance that can be compared with the observed planetary values.
//!
//! - [`bodies`]: constants, units, planetary elements.
//! - [`gravity`]: force laws and the relativistic baseline.
//! - [`analytic`]: the first-order precessing orbit and centurial advance.
//! - [`numeric`]: integration of the exact orbit equation as a cross-check.
//! - [`calibration`]: inversion, weighted fitting and sweeps of the error.
//! - [`report`]: the comparison table.

// negated comparisons reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bodies;
pub mod calibration;
mod error;
pub mod exec;
pub mod gravity;
pub mod numeric;
pub mod report;

pub use analytic::{planet_precession, PrecessionResult, Provenance, QuantumRule};
pub use bodies::{Constants, DerivedOrbit, PlanetElements};
pub use error::{Error, Result};
pub use exec::Execution;
pub use numeric::measured_precession;
