//! Physical constants, unit conversions, planetary elements and the orbital
//! quantities derived from them.
//!
//! All internal computation is in SI units (m, s, rad). Periods are stored in
//! days because that is how almanacs publish them; angles are presented in
//! arcseconds only at the edges.

use std::f64::consts::PI;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arcseconds in one radian.
pub const ARCSEC_PER_RAD: f64 = 648_000.0 / PI;

pub const SECONDS_PER_DAY: f64 = 86_400.0;

/// Environment variable that overrides the directory holding `planets.json`
/// and `observations.csv`.
pub const DATA_DIR_ENV: &str = "QGRAV_DATA_DIR";

pub const PLANETS_FILE: &str = "planets.json";

const BUNDLED_PLANETS: &str = include_str!("../data/planets.json");

/// Physical constants used throughout the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Heliocentric gravitational parameter `k^2 = GM_sun`, m^3 s^-2.
    pub gm_sun: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Astronomical unit, m.
    pub au: f64,
    /// Julian year, days.
    pub julian_year_days: f64,
    /// Julian century, days.
    pub century_days: f64,
    pub arcsec_per_rad: f64,
}

impl Constants {
    /// Identifier for the constant set, carried in machine-readable reports.
    pub const VERSION: &'static str = "iau2015-codata2018/1";
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            gm_sun: 1.327_124_400_18e20,
            c: 299_792_458.0,
            au: 1.495_978_707e11,
            julian_year_days: 365.25,
            century_days: 36_525.0,
            arcsec_per_rad: ARCSEC_PER_RAD,
        }
    }
}

fn check_finite(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::domain(format!("non-finite angle {x}")))
    }
}

pub fn arcsec_to_rad(arcsec: f64) -> Result<f64> {
    Ok(check_finite(arcsec)? * PI / 648_000.0)
}

pub fn rad_to_arcsec(rad: f64) -> Result<f64> {
    Ok(check_finite(rad)? * 648_000.0 / PI)
}

/// Osculating elements of a planet around the Sun.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanetElements {
    pub name: String,
    /// Semi-major axis, m.
    #[serde(rename = "a_m")]
    pub a: f64,
    /// Eccentricity.
    pub e: f64,
    /// Sidereal period, days.
    pub tau_days: f64,
}

impl PlanetElements {
    pub fn new(name: impl Into<String>, a: f64, e: f64, tau_days: f64) -> Result<Self> {
        let el = PlanetElements {
            name: name.into(),
            a,
            e,
            tau_days,
        };
        el.validate()?;
        Ok(el)
    }

    pub fn validate(&self) -> Result<()> {
        let reject = |reason: String| Error::Ingest {
            record: self.name.clone(),
            reason,
        };
        if self.name.trim().is_empty() {
            return Err(reject("empty name".into()));
        }
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(reject(format!("semi-major axis must be positive, got {}", self.a)));
        }
        if !(self.e.is_finite() && (0.0..1.0).contains(&self.e)) {
            return Err(reject(format!("eccentricity must lie in [0, 1), got {}", self.e)));
        }
        if !(self.tau_days.is_finite() && self.tau_days > 0.0) {
            return Err(reject(format!("period must be positive, got {}", self.tau_days)));
        }
        Ok(())
    }
}

/// Quantities derived from [`PlanetElements`] that the orbit equations consume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedOrbit {
    /// Semi-major axis, m.
    pub a: f64,
    pub e: f64,
    /// Semi-minor axis, m.
    pub b: f64,
    /// Perihelion distance, m.
    pub r_p: f64,
    /// Specific angular momentum `2 pi a b / tau`, m^2/s.
    pub h: f64,
    /// Gravitational parameter, m^3/s^2.
    pub k2: f64,
    pub orbits_per_century: f64,
}

pub fn derive_orbit(el: &PlanetElements, k2: f64) -> Result<DerivedOrbit> {
    el.validate()?;
    if !(k2.is_finite() && k2 > 0.0) {
        return Err(Error::domain(format!("k2 must be positive, got {k2}")));
    }
    let b = el.a * (1.0 - el.e * el.e).sqrt();
    let r_p = el.a * (1.0 - el.e);
    let h = 2.0 * PI * el.a * b / (el.tau_days * SECONDS_PER_DAY);
    Ok(DerivedOrbit {
        a: el.a,
        e: el.e,
        b,
        r_p,
        h,
        k2,
        orbits_per_century: 36_525.0 / el.tau_days,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanetsFile {
    schema_version: u32,
    planets: Vec<PlanetElements>,
}

/// Parses a planets document (`{"schema_version": 1, "planets": [...]}`) and
/// validates every record.
pub fn load_planets<R: Read>(reader: R) -> Result<Vec<PlanetElements>> {
    let doc: PlanetsFile = serde_json::from_reader(reader).map_err(|e| Error::Ingest {
        record: "<document>".into(),
        reason: e.to_string(),
    })?;
    if doc.schema_version != 1 {
        return Err(Error::Ingest {
            record: "<document>".into(),
            reason: format!("unsupported schema_version {}", doc.schema_version),
        });
    }
    for (i, el) in doc.planets.iter().enumerate() {
        el.validate().map_err(|e| match e {
            Error::Ingest { record, reason } => Error::Ingest {
                record: format!("#{i} ({record})"),
                reason,
            },
            other => other,
        })?;
    }
    Ok(doc.planets)
}

pub fn bundled_planets() -> Vec<PlanetElements> {
    load_planets(BUNDLED_PLANETS.as_bytes()).expect("bundled planets file is valid")
}

/// Resolves where planets come from: an explicit path, then
/// `$QGRAV_DATA_DIR/planets.json`, then the bundled set.
pub fn planets_from(path: Option<&Path>) -> Result<Vec<PlanetElements>> {
    match resolve_data_file(path, PLANETS_FILE) {
        Some(p) => load_planets(open(&p)?),
        None => Ok(bundled_planets()),
    }
}

pub(crate) fn resolve_data_file(explicit: Option<&Path>, file_name: &str) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    std::env::var_os(DATA_DIR_ENV)
        .filter(|d| !d.is_empty())
        .map(|d| PathBuf::from(d).join(file_name))
}

pub(crate) fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Case-insensitive lookup by name.
pub fn find_planet<'a>(planets: &'a [PlanetElements], name: &str) -> Result<&'a PlanetElements> {
    planets
        .iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownPlanet(name.to_string()))
}
