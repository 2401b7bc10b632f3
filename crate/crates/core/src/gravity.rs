//! Force laws: the statistical-weight increment between neighbouring
//! separation states, the corrected inverse-square law it leads to, and the
//! standard relativistic perihelion advance used as a comparison baseline.

use std::f64::consts::PI;

use serde::Serialize;

use crate::analytic::{PrecessionResult, Provenance};
use crate::bodies::{derive_orbit, Constants, DerivedOrbit, PlanetElements};
use crate::error::{Error, Result};

/// Newtonian constant of gravitation (CODATA 2018), m^3 kg^-1 s^-2.
pub const NEWTON_G: f64 = 6.674_30e-11;

/// A force/orbit model: a space quantum paired with the central body and,
/// for orbit work, the specific angular momentum of the orbiter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantizedModel {
    /// Space quantum, m.
    pub q_l: f64,
    pub k2: f64,
    pub h: Option<f64>,
    /// Taken as the ordinary Newton constant, independent of `q_l`.
    pub g: f64,
}

impl QuantizedModel {
    pub fn new(q_l: f64, k2: f64, h: Option<f64>) -> Result<Self> {
        if !(q_l.is_finite() && q_l >= 0.0) {
            return Err(Error::domain(format!("space quantum must be >= 0, got {q_l}")));
        }
        if !(k2.is_finite() && k2 > 0.0) {
            return Err(Error::domain(format!("k2 must be positive, got {k2}")));
        }
        if let Some(h) = h {
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::domain(format!("h must be positive, got {h}")));
            }
        }
        Ok(QuantizedModel { q_l, k2, h, g: NEWTON_G })
    }

    /// Orbit model for `orbit`; fails if the quantum is too large for a bound
    /// first-order solution.
    pub fn for_orbit(q_l: f64, orbit: &DerivedOrbit) -> Result<Self> {
        let m = Self::new(q_l, orbit.k2, Some(orbit.h))?;
        m.epsilon()?;
        Ok(m)
    }

    /// `q_l k^2 / h^2`, required to lie in `[0, 1)`.
    pub fn epsilon(&self) -> Result<f64> {
        let h = self
            .h
            .ok_or_else(|| Error::domain("model has no angular momentum"))?;
        let eps = self.q_l * self.k2 / (h * h);
        if eps >= 1.0 {
            return Err(Error::ModelBreakdown { epsilon: eps });
        }
        Ok(eps)
    }

    /// `k^2 / h^2`, the inverse semi-latus rectum of the Newtonian conic.
    pub fn inverse_latus(&self) -> Result<f64> {
        let h = self
            .h
            .ok_or_else(|| Error::domain("model has no angular momentum"))?;
        Ok(self.k2 / (h * h))
    }
}

/// Weight of each of the `L` equally likely states: `1/L`.
pub fn state_weight(states: i64) -> Result<f64> {
    if states < 1 {
        return Err(Error::domain(format!("state count must be >= 1, got {states}")));
    }
    Ok(1.0 / states as f64)
}

/// `1/(L-1) - 1/L`, evaluated as `1/(L(L-1))` to avoid cancellation.
pub fn weight_increment(states: i64) -> Result<f64> {
    if states < 2 {
        return Err(Error::domain(format!(
            "weight increment needs a predecessor state, got L = {states}"
        )));
    }
    let l = states as f64;
    Ok(1.0 / (l * (l - 1.0)))
}

/// `G m1 m2 / (L (L - q_l))`.
pub fn corrected_force(g: f64, m1: f64, m2: f64, separation: f64, q_l: f64) -> Result<f64> {
    if !(g > 0.0) || !(m1 >= 0.0) || !(m2 >= 0.0) || !(q_l >= 0.0) {
        return Err(Error::domain(format!(
            "invalid force parameters G={g}, m1={m1}, m2={m2}, q_l={q_l}"
        )));
    }
    if !(separation > q_l) {
        return Err(Error::Singularity { separation, q_l });
    }
    Ok(g * m1 * m2 / (separation * (separation - q_l)))
}

pub fn newtonian_force(g: f64, m1: f64, m2: f64, separation: f64) -> Result<f64> {
    if !(separation > 0.0) {
        return Err(Error::domain(format!("separation must be positive, got {separation}")));
    }
    corrected_force(g, m1, m2, separation, 0.0)
}

/// Per-orbit relativistic advance `6 pi k^2 / (c^2 a (1 - e^2))`, scaled to a
/// century. Not part of the quantized model; it reproduces the usual
/// comparison column.
pub fn gr_precession_baseline(el: &PlanetElements, k2: f64, c: f64) -> Result<PrecessionResult> {
    if !(c > 0.0) {
        return Err(Error::domain(format!("speed of light must be positive, got {c}")));
    }
    let orbit = derive_orbit(el, k2)?;
    let per_orbit = 6.0 * PI * k2 / (c * c * el.a * (1.0 - el.e * el.e));
    Ok(PrecessionResult::from_per_orbit(
        per_orbit,
        &orbit,
        &Constants::default(),
        Provenance::GrBaseline,
    ))
}
