//! First-order analytic treatment of the corrected force law.
//!
//! With the corrected law expanded to first order in the space quantum the
//! Binet equation becomes `u'' + (1 - eps) u = k^2/h^2` with
//! `eps = q_l k^2 / h^2`, solved by the precessing conic
//! `r = p / (1 + A p cos(x theta))` where `p = (h^2 - q_l k^2)/k^2` and
//! `x = sqrt(1 - eps)`. Perihelia fall at `theta = 2 n pi / x`, so each
//! revolution advances the apsis by `2 pi (1/x - 1)`.
//!
//! `1/x - 1` is of order `eps ~ 1e-7` for the inner planets. Evaluating it as
//! written loses half the significant digits, so the pipeline works from `eps`
//! directly via `1/x - 1 = eps / (x (1 + x))`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bodies::{arcsec_to_rad, derive_orbit, Constants, DerivedOrbit, PlanetElements};
use crate::error::{Error, Result};
use crate::gravity::QuantizedModel;

/// How an angular observation error becomes a length quantum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantumRule {
    /// `q_l = delta * a (1 - e)`.
    #[default]
    PerihelionDistance,
    /// `q_l = delta * b`.
    SemiMinorAxis,
}

impl QuantumRule {
    pub fn lever_arm(self, orbit: &DerivedOrbit) -> f64 {
        match self {
            QuantumRule::PerihelionDistance => orbit.r_p,
            QuantumRule::SemiMinorAxis => orbit.b,
        }
    }
}

impl fmt::Display for QuantumRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuantumRule::PerihelionDistance => "perihelion",
            QuantumRule::SemiMinorAxis => "semiminor",
        })
    }
}

impl FromStr for QuantumRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "perihelion" | "perihelion-distance" => Ok(QuantumRule::PerihelionDistance),
            "semiminor" | "semi-minor-axis" | "semi-minor" => Ok(QuantumRule::SemiMinorAxis),
            other => Err(Error::domain(format!("unknown quantum rule '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Analytic,
    Numeric,
    GrBaseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrecessionResult {
    /// Apsidal advance per revolution, rad.
    pub per_orbit: f64,
    /// Advance per Julian century, arcsec.
    pub per_century: f64,
    pub provenance: Provenance,
}

impl PrecessionResult {
    pub(crate) fn from_per_orbit(
        per_orbit: f64,
        orbit: &DerivedOrbit,
        consts: &Constants,
        provenance: Provenance,
    ) -> Self {
        PrecessionResult {
            per_orbit,
            per_century: precession_per_century_with(per_orbit, orbit, consts),
            provenance,
        }
    }
}

/// Coefficients of the first-order perturbed orbit equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitParams {
    /// Semi-latus rectum, m.
    pub p: f64,
    /// Angular frequency ratio.
    pub x: f64,
    /// `q_l k^2 / h^2`; kept alongside `x` because `1 - x` is ill-conditioned.
    pub epsilon: f64,
}

/// Closed-form precessing orbit `r = p / (1 + A p cos(x theta))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticOrbit {
    pub p: f64,
    pub x: f64,
    /// Integration constant, m^-1.
    pub amplitude: f64,
    pub epsilon: f64,
}

impl AnalyticOrbit {
    /// Orbit with its reference perihelion at `theta = 0` and distance `r_p`.
    pub fn with_perihelion(params: OrbitParams, r_p: f64) -> Result<Self> {
        Ok(AnalyticOrbit {
            p: params.p,
            x: params.x,
            amplitude: amplitude_from_perihelion(params.p, r_p)?,
            epsilon: params.epsilon,
        })
    }

    pub fn for_planet(orbit: &DerivedOrbit, q_l: f64) -> Result<Self> {
        Self::with_perihelion(orbit_params(q_l, orbit)?, orbit.r_p)
    }

    pub fn is_bound(&self) -> bool {
        (self.amplitude * self.p).abs() < 1.0
    }

    /// Radius at the reference perihelion, `p / (1 + A p)`.
    pub fn perihelion_radius(&self) -> f64 {
        self.p / (1.0 + self.amplitude * self.p)
    }

    /// Angular period of the radius, `2 pi / x`.
    pub fn radial_period(&self) -> f64 {
        2.0 * PI / self.x
    }

    pub fn radius(&self, theta: f64) -> Result<f64> {
        closed_form_radius(self, theta)
    }
}

/// `q_l = delta [rad] * R`, with `R` chosen by `rule`.
pub fn quantum_from_error(delta_arcsec: f64, orbit: &DerivedOrbit, rule: QuantumRule) -> Result<f64> {
    if !(delta_arcsec >= 0.0) {
        return Err(Error::domain(format!(
            "observation error must be >= 0 arcsec, got {delta_arcsec}"
        )));
    }
    Ok(arcsec_to_rad(delta_arcsec)? * rule.lever_arm(orbit))
}

pub fn orbit_params(q_l: f64, orbit: &DerivedOrbit) -> Result<OrbitParams> {
    let model = QuantizedModel::for_orbit(q_l, orbit)?;
    let epsilon = model.epsilon()?;
    let h2 = orbit.h * orbit.h;
    Ok(OrbitParams {
        p: (h2 - q_l * orbit.k2) / orbit.k2,
        x: (1.0 - epsilon).sqrt(),
        epsilon,
    })
}

/// Integration constant placing a perihelion of distance `r_p` at `theta = 0`.
pub fn amplitude_from_perihelion(p: f64, r_p: f64) -> Result<f64> {
    if !(p > 0.0 && r_p > 0.0) {
        return Err(Error::domain(format!(
            "semi-latus and perihelion distance must be positive, got p={p}, r_p={r_p}"
        )));
    }
    Ok(1.0 / r_p - 1.0 / p)
}

pub fn closed_form_radius(orbit: &AnalyticOrbit, theta: f64) -> Result<f64> {
    if !orbit.is_bound() {
        return Err(Error::domain(format!(
            "unbound orbit: |A| p = {}",
            (orbit.amplitude * orbit.p).abs()
        )));
    }
    Ok(orbit.p / (1.0 + orbit.amplitude * orbit.p * (orbit.x * theta).cos()))
}

/// `2 pi (1/x - 1)`.
pub fn precession_per_orbit(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::domain(format!("frequency ratio must lie in (0, 1], got {x}")));
    }
    Ok(2.0 * PI * (1.0 - x) / x)
}

/// Same quantity as [`precession_per_orbit`], computed from
/// `eps = 1 - x^2` without cancellation.
pub fn precession_per_orbit_from_epsilon(epsilon: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::ModelBreakdown { epsilon });
    }
    let x = (1.0 - epsilon).sqrt();
    Ok(2.0 * PI * epsilon / (x * (1.0 + x)))
}

pub fn precession_per_century(per_orbit: f64, orbit: &DerivedOrbit) -> f64 {
    precession_per_century_with(per_orbit, orbit, &Constants::default())
}

pub(crate) fn precession_per_century_with(per_orbit: f64, orbit: &DerivedOrbit, consts: &Constants) -> f64 {
    per_orbit * orbit.orbits_per_century * consts.arcsec_per_rad
}

/// Centurial perihelion advance predicted by the first-order model.
pub fn planet_precession(
    consts: &Constants,
    el: &PlanetElements,
    delta_arcsec: f64,
    rule: QuantumRule,
) -> Result<PrecessionResult> {
    let orbit = derive_orbit(el, consts.gm_sun)?;
    let q_l = quantum_from_error(delta_arcsec, &orbit, rule)?;
    let params = orbit_params(q_l, &orbit)?;
    let per_orbit = precession_per_orbit_from_epsilon(params.epsilon)?;
    Ok(PrecessionResult::from_per_orbit(
        per_orbit,
        &orbit,
        consts,
        Provenance::Analytic,
    ))
}
