//! The orbit equation in Binet form, `u = 1/r` as a function of the polar
//! angle, for the corrected force law without any expansion in `q_l`.

use std::f64::consts::PI;

use serde::Serialize;

use super::ode::{self, StepControl};
use crate::error::{Error, Result};
use crate::gravity::QuantizedModel;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MIN_TOL: f64 = 1e-14;
pub const MAX_TOL: f64 = 1e-6;

const INITIAL_STEP: f64 = PI / 256.0;
// keeps consecutive samples closer than pi/8
const MAX_STEP: f64 = PI / 16.0;
// sample spacing across perihelion passages; the three-point vertex fit has
// error of order spacing^3
const PERIHELION_SPACING: f64 = PI / 4096.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinetState {
    pub theta: f64,
    /// Inverse radius, m^-1.
    pub u: f64,
    /// `du/dtheta`, m^-1.
    pub du: f64,
}

impl BinetState {
    pub fn radius(&self) -> f64 {
        1.0 / self.u
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<BinetState>,
    pub tol: f64,
    pub steps: usize,
    pub rejected_steps: usize,
}

/// `d^2u/dtheta^2 = -u + (k^2/h^2) / (1 - q_l u)`.
pub fn binet_rhs(model: &QuantizedModel, u: f64) -> Result<f64> {
    let k = model.inverse_latus()?;
    let qu = model.q_l * u;
    if !(u > 0.0) {
        return Err(Error::domain(format!("inverse radius must be positive, got {u}")));
    }
    if qu >= 1.0 {
        return Err(Error::Singularity { separation: 1.0 / u, q_l: model.q_l });
    }
    Ok(-u + k / (1.0 - qu))
}

/// Adaptive integration of the Binet system from `theta = 0` to `theta_max`.
///
/// Steps that contain a perihelion passage are re-sampled at a fine fixed
/// spacing so that passages can be located from the samples alone.
pub fn integrate(
    model: &QuantizedModel,
    u0: f64,
    du0: f64,
    theta_max: f64,
    tol: f64,
) -> Result<Trajectory> {
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        return Err(Error::domain(format!(
            "tolerance must lie in [{MIN_TOL:e}, {MAX_TOL:e}], got {tol:e}"
        )));
    }
    if !(theta_max > 0.0 && theta_max.is_finite()) {
        return Err(Error::domain(format!("theta_max must be positive, got {theta_max}")));
    }
    if !(u0 > 0.0 && u0.is_finite() && du0.is_finite()) {
        return Err(Error::domain(format!("invalid initial state u={u0}, du={du0}")));
    }
    // reject an invalid model or a start inside the quantum before stepping
    binet_rhs(model, u0)?;

    let mut samples = Vec::new();
    let ctrl = StepControl {
        tol,
        initial_step: INITIAL_STEP,
        max_step: MAX_STEP,
        dense_step: PERIHELION_SPACING,
    };
    let stats = ode::integrate(
        |_, y: &[f64; 2]| Ok([y[1], binet_rhs(model, y[0])?]),
        0.0,
        [u0, du0],
        theta_max,
        ctrl,
        // du turning from + to - marks a maximum of u, i.e. a perihelion;
        // also cover the first step after a start exactly at perihelion
        |a, b| (a[1] > 0.0 || (a[1] == 0.0 && b[1] < 0.0)) && b[1] <= 0.0,
        |theta, y| samples.push(BinetState { theta, u: y[0], du: y[1] }),
    )?;
    Ok(Trajectory {
        samples,
        tol,
        steps: stats.accepted,
        rejected_steps: stats.rejected,
    })
}
