//! Numerical cross-check of the analytic model: integrate the exact corrected
//! orbit equation, find perihelion passages and measure their advance.

mod binet;
pub mod ode;
mod perihelion;

use std::f64::consts::PI;

use serde::Serialize;

pub use binet::{binet_rhs, integrate, BinetState, Trajectory, DEFAULT_TOL, MAX_TOL, MIN_TOL};
pub use perihelion::{detect_perihelia, PerihelionSeries};

use crate::analytic::{quantum_from_error, AnalyticOrbit, PrecessionResult, Provenance, QuantumRule};
use crate::bodies::{derive_orbit, Constants, DerivedOrbit, PlanetElements};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gravity::QuantizedModel;

/// A numerically integrated orbit with its detected perihelia.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRun {
    pub orbit: DerivedOrbit,
    pub q_l: f64,
    /// First-order closed-form counterpart of the integrated orbit.
    pub analytic: AnalyticOrbit,
    pub trajectory: Trajectory,
    /// Reference passage at `theta = 0` plus one per completed revolution.
    pub perihelia: PerihelionSeries,
    pub result: PrecessionResult,
}

/// Integrates `n_orbits` revolutions of the exact equation starting at
/// perihelion (`du = 0`, `r = p / (1 + A p)`).
pub fn run_orbit(
    consts: &Constants,
    el: &PlanetElements,
    delta_arcsec: f64,
    rule: QuantumRule,
    n_orbits: usize,
    tol: f64,
) -> Result<OrbitRun> {
    if n_orbits == 0 {
        return Err(Error::domain("need at least one revolution"));
    }
    let orbit = derive_orbit(el, consts.gm_sun)?;
    let q_l = quantum_from_error(delta_arcsec, &orbit, rule)?;
    let analytic = AnalyticOrbit::for_planet(&orbit, q_l)?;
    let model = QuantizedModel::for_orbit(q_l, &orbit)?;
    // half a revolution of margin past the last expected passage
    let theta_max = n_orbits as f64 * analytic.radial_period() + PI;
    let trajectory = integrate(&model, 1.0 / analytic.perihelion_radius(), 0.0, theta_max, tol)?;
    let mut perihelia = detect_perihelia(&trajectory)?;
    if perihelia.angles.len() < n_orbits + 1 {
        return Err(Error::InsufficientSpan { found: perihelia.angles.len() });
    }
    perihelia.truncate(n_orbits + 1);
    let per_orbit = perihelia
        .mean_advance()
        .ok_or(Error::InsufficientSpan { found: perihelia.angles.len() })?;
    let result = PrecessionResult::from_per_orbit(per_orbit, &orbit, consts, Provenance::Numeric);
    Ok(OrbitRun { orbit, q_l, analytic, trajectory, perihelia, result })
}

/// Mean per-revolution advance of the exact orbit over `n_orbits >= 2`
/// revolutions, extrapolated to a century.
pub fn measured_precession(
    consts: &Constants,
    el: &PlanetElements,
    delta_arcsec: f64,
    rule: QuantumRule,
    n_orbits: usize,
    tol: f64,
) -> Result<PrecessionResult> {
    if n_orbits < 2 {
        return Err(Error::domain(format!("need at least 2 revolutions, got {n_orbits}")));
    }
    Ok(run_orbit(consts, el, delta_arcsec, rule, n_orbits, tol)?.result)
}

/// [`measured_precession`] for several planets; trajectories are independent
/// and run concurrently under [`Execution::Parallel`].
pub fn measure_batch(
    consts: &Constants,
    planets: &[PlanetElements],
    delta_arcsec: f64,
    rule: QuantumRule,
    n_orbits: usize,
    tol: f64,
    exec: Execution,
) -> Result<Vec<PrecessionResult>> {
    exec.try_map(planets, |el| measured_precession(consts, el, delta_arcsec, rule, n_orbits, tol))
}
