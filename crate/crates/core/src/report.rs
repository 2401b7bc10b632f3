//! Comparison table: observation, relativistic baseline and model
//! predictions for each planet at a list of observation errors.

use serde::Serialize;

use crate::analytic::{planet_precession, QuantumRule};
use crate::bodies::{Constants, PlanetElements};
use crate::calibration::Observation;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gravity::gr_precession_baseline;

/// Default observation errors for the comparison table.
pub const TABLE_DELTAS: [f64; 3] = [0.01, 0.05, 0.0398];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelColumn {
    pub delta: f64,
    /// arcsec per century.
    pub precession: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub planet: String,
    pub observation: Option<Observation>,
    pub gr_baseline: f64,
    /// Sorted by ascending `delta`.
    pub model: Vec<ModelColumn>,
}

/// Sorted, de-duplicated copy of `deltas`.
pub fn normalize_deltas(deltas: &[f64]) -> Result<Vec<f64>> {
    if deltas.is_empty() {
        return Err(Error::domain("at least one delta is required"));
    }
    if let Some(bad) = deltas.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
        return Err(Error::domain(format!("delta must be a finite value >= 0, got {bad}")));
    }
    let mut v = deltas.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

pub fn build_table(
    consts: &Constants,
    planets: &[PlanetElements],
    observations: &[Observation],
    deltas: &[f64],
    rule: QuantumRule,
    exec: Execution,
) -> Result<Vec<ReportRow>> {
    let deltas = normalize_deltas(deltas)?;
    exec.try_map(planets, |el| {
        let model = deltas
            .iter()
            .map(|&delta| {
                planet_precession(consts, el, delta, rule)
                    .map(|r| ModelColumn { delta, precession: r.per_century })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReportRow {
            planet: el.name.clone(),
            observation: observations
                .iter()
                .find(|o| o.planet.eq_ignore_ascii_case(&el.name))
                .cloned(),
            gr_baseline: gr_precession_baseline(el, consts.gm_sun, consts.c)?.per_century,
            model,
        })
    })
}
