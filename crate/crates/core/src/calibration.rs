//! Inverting and fitting the model: the observation error that reproduces a
//! given precession, a weighted least-squares estimate of a single error
//! shared by several planets, and sweeps over the error.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytic::{planet_precession, QuantumRule};
use crate::bodies::{
    derive_orbit, find_planet, open, rad_to_arcsec, resolve_data_file, Constants, PlanetElements,
};
use crate::error::{Error, Result};
use crate::exec::Execution;

pub const OBSERVATIONS_FILE: &str = "observations.csv";

/// Error at which fit slopes are evaluated. The pipeline is linear in the
/// error up to relative terms of order `q_l k^2 / h^2 ~ 1e-7`.
pub const SLOPE_REFERENCE_DELTA: f64 = 0.01;

const BUNDLED_OBSERVATIONS: &str = include_str!("../data/observations.csv");

/// Observed centurial precession with its one-sigma uncertainty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Observation {
    pub planet: String,
    #[serde(rename = "value_arcsec")]
    pub value: f64,
    #[serde(rename = "sigma_arcsec")]
    pub sigma: f64,
}

/// Reads a `planet,value_arcsec,sigma_arcsec` table.
pub fn load_observations<R: Read>(reader: R) -> Result<Vec<Observation>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<Observation>().enumerate() {
        let obs = rec.map_err(|e| Error::Ingest {
            record: format!("#{i}"),
            reason: e.to_string(),
        })?;
        if !(obs.sigma > 0.0) || !obs.value.is_finite() {
            return Err(Error::Ingest {
                record: format!("#{i} ({})", obs.planet),
                reason: format!("need finite value and sigma > 0, got {} +/- {}", obs.value, obs.sigma),
            });
        }
        out.push(obs);
    }
    Ok(out)
}

pub fn bundled_observations() -> Vec<Observation> {
    load_observations(BUNDLED_OBSERVATIONS.as_bytes()).expect("bundled observations are valid")
}

/// Explicit path, then `$QGRAV_DATA_DIR/observations.csv`, then bundled.
pub fn observations_from(path: Option<&Path>) -> Result<Vec<Observation>> {
    match resolve_data_file(path, OBSERVATIONS_FILE) {
        Some(p) => load_observations(open(&p)?),
        None => Ok(bundled_observations()),
    }
}

/// Observation error that makes the analytic model predict `target`
/// arcseconds per century. Exact inverse of [`planet_precession`].
pub fn invert_delta(
    consts: &Constants,
    el: &PlanetElements,
    target: f64,
    rule: QuantumRule,
) -> Result<f64> {
    if !(target >= 0.0) {
        return Err(Error::domain(format!("target precession must be >= 0, got {target}")));
    }
    let orbit = derive_orbit(el, consts.gm_sun)?;
    let per_orbit = target / (orbit.orbits_per_century * consts.arcsec_per_rad);
    // 2 pi (1/x - 1) = per_orbit  =>  x = 2 pi / (2 pi + per_orbit)
    let x = 2.0 * PI / (2.0 * PI + per_orbit);
    let one_minus_x = per_orbit / (2.0 * PI + per_orbit);
    let epsilon = one_minus_x * (1.0 + x);
    if !(epsilon < 1.0) {
        return Err(Error::ModelBreakdown { epsilon });
    }
    let q_l = epsilon * orbit.h * orbit.h / orbit.k2;
    rad_to_arcsec(q_l / rule.lever_arm(&orbit))
}

/// d(precession)/d(delta) for `el`, arcsec per century per arcsec.
pub fn slope(consts: &Constants, el: &PlanetElements, rule: QuantumRule) -> Result<f64> {
    Ok(planet_precession(consts, el, SLOPE_REFERENCE_DELTA, rule)?.per_century / SLOPE_REFERENCE_DELTA)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub planet: String,
    pub observed: f64,
    pub sigma: f64,
    pub predicted: f64,
    /// `observed - predicted`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub rule: QuantumRule,
    pub delta_star: f64,
    pub delta_sigma: f64,
    pub residuals: Vec<Residual>,
    pub chi2: f64,
}

/// Weighted least-squares fit of one observation error across planets, using
/// the through-origin linear model `predicted_i = s_i delta`.
///
/// The estimate is clamped at zero; a negative optimum means the data favour
/// no correction at all.
pub fn fit_delta(
    consts: &Constants,
    planets: &[PlanetElements],
    observations: &[Observation],
    rule: QuantumRule,
) -> Result<FitResult> {
    if observations.is_empty() {
        return Err(Error::domain("no observations to fit"));
    }
    let slopes = observations
        .iter()
        .map(|o| slope(consts, find_planet(planets, &o.planet)?, rule))
        .collect::<Result<Vec<_>>>()?;

    let (mut num, mut den) = (0.0, 0.0);
    for (o, s) in observations.iter().zip(&slopes) {
        let w = 1.0 / (o.sigma * o.sigma);
        num += w * s * o.value;
        den += w * s * s;
    }
    if !(den > 0.0) {
        return Err(Error::domain("observations carry no weight"));
    }
    let delta_star = (num / den).max(0.0);
    let delta_sigma = den.sqrt().recip();

    let residuals: Vec<Residual> = observations
        .iter()
        .zip(&slopes)
        .map(|(o, s)| {
            let predicted = s * delta_star;
            Residual {
                planet: o.planet.clone(),
                observed: o.value,
                sigma: o.sigma,
                predicted,
                residual: o.value - predicted,
            }
        })
        .collect();
    let chi2 = residuals.iter().map(|r| (r.residual / r.sigma).powi(2)).sum();
    Ok(FitResult { rule, delta_star, delta_sigma, residuals, chi2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub delta: f64,
    /// arcsec per century.
    pub precession: f64,
}

/// `steps` evenly spaced errors from `delta_min` to `delta_max` inclusive.
pub fn sweep_delta(
    consts: &Constants,
    el: &PlanetElements,
    delta_min: f64,
    delta_max: f64,
    steps: usize,
    rule: QuantumRule,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    if !(delta_min >= 0.0 && delta_max > delta_min && delta_max.is_finite()) {
        return Err(Error::domain(format!(
            "need 0 <= delta_min < delta_max, got [{delta_min}, {delta_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::domain(format!("need at least 2 steps, got {steps}")));
    }
    let span = delta_max - delta_min;
    let last = steps - 1;
    let deltas: Vec<f64> = (0..steps)
        .map(|i| if i == last { delta_max } else { delta_min + span * i as f64 / last as f64 })
        .collect();
    exec.try_map(&deltas, |&delta| {
        planet_precession(consts, el, delta, rule).map(|r| SweepRow { delta, precession: r.per_century })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::bundled_planets;
    use proptest::prelude::*;

    fn c() -> Constants {
        Constants::default()
    }

    fn planet(name: &str) -> PlanetElements {
        find_planet(&bundled_planets(), name).unwrap().clone()
    }

    fn obs(planet: &str, value: f64, sigma: f64) -> Observation {
        Observation { planet: planet.into(), value, sigma }
    }

    #[test]
    fn bundled_observation_column() {
        let o = bundled_observations();
        assert_eq!(o, vec![obs("Mercury", 43.11, 0.45), obs("Venus", 8.4, 4.8), obs("Earth", 5.0, 1.2)]);
    }

    #[test]
    fn observation_ingestion_errors() {
        for doc in [
            "planet,value_arcsec,sigma_arcsec\nMercury,43,0\n",
            "planet,value_arcsec,sigma_arcsec\nMercury,43,-1\n",
            "planet,value_arcsec,sigma_arcsec\nMercury,abc,1\n",
            "planet,value_arcsec\nMercury,43\n",
            "planet,value_arcsec,sigma_arcsec,extra\nMercury,43,1,2\n",
        ] {
            assert!(matches!(load_observations(doc.as_bytes()), Err(Error::Ingest { .. })), "{doc}");
        }
        assert!(load_observations("planet,value_arcsec,sigma_arcsec\n".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn invert_examples() {
        let rule = QuantumRule::PerihelionDistance;
        let m = planet("Mercury");
        assert_eq!(invert_delta(&c(), &m, 0.0, rule).unwrap(), 0.0);
        let exact = planet_precession(&c(), &m, 0.0398, rule).unwrap().per_century;
        assert!((exact - 43.06).abs() < 0.005);
        let d = invert_delta(&c(), &m, exact, rule).unwrap();
        assert!(((d - 0.0398) / 0.0398).abs() < 1e-6);
        let d = invert_delta(&c(), &m, 43.11, rule).unwrap();
        assert!((d - 0.03985).abs() < 5e-5, "{d}");
        assert!(invert_delta(&c(), &m, -1.0, rule).is_err());
        assert!(matches!(
            invert_delta(&c(), &m, f64::INFINITY, rule),
            Err(Error::ModelBreakdown { .. })
        ));
    }

    /// Closed-form WLS evaluated by hand from the table's observation column.
    #[test]
    fn table_fit() {
        let planets = bundled_planets();
        let rule = QuantumRule::PerihelionDistance;
        let fit = fit_delta(&c(), &planets, &bundled_observations(), rule).unwrap();

        let data = [("Mercury", 43.11, 0.45), ("Venus", 8.4, 4.8), ("Earth", 5.0, 1.2)];
        let mut num = 0.0;
        let mut den = 0.0;
        for (name, o, s) in data {
            let slope = planet_precession(&c(), &planet(name), 0.01, rule).unwrap().per_century / 0.01;
            num += slope * o / (s * s);
            den += slope * slope / (s * s);
        }
        assert!(((fit.delta_star - num / den) / fit.delta_star).abs() < 1e-12);
        assert!((fit.delta_sigma - den.powf(-0.5)).abs() < 1e-15);
        assert!((fit.delta_star - 0.0395).abs() < 0.0005, "{}", fit.delta_star);
        assert!(fit.residuals[0].residual.abs() < 0.5);
        for r in &fit.residuals[1..] {
            assert!(r.residual < -r.sigma, "{r:?}");
        }
        let chi2: f64 = fit.residuals.iter().map(|r| (r.residual / r.sigma).powi(2)).sum();
        assert_eq!(fit.chi2, chi2);
    }

    #[test]
    fn single_observation_fit_equals_inversion() {
        let planets = bundled_planets();
        for rule in [QuantumRule::PerihelionDistance, QuantumRule::SemiMinorAxis] {
            let fit = fit_delta(&c(), &planets, &[obs("Venus", 8.4, 4.8)], rule).unwrap();
            let inv = invert_delta(&c(), &planet("Venus"), 8.4, rule).unwrap();
            assert!(((fit.delta_star - inv) / inv).abs() < 1e-6);
        }
    }

    #[test]
    fn weight_limit() {
        let planets = bundled_planets();
        let o = vec![obs("Mercury", 43.11, 0.45), obs("Venus", 8.4, f64::INFINITY), obs("Earth", 5.0, 1e30)];
        let fit = fit_delta(&c(), &planets, &o, QuantumRule::default()).unwrap();
        let inv = invert_delta(&c(), &planet("Mercury"), 43.11, QuantumRule::default()).unwrap();
        assert!(((fit.delta_star - inv) / inv).abs() < 1e-6);
    }

    #[test]
    fn fit_errors() {
        let planets = bundled_planets();
        assert!(matches!(fit_delta(&c(), &planets, &[], QuantumRule::default()), Err(Error::Domain(_))));
        assert!(matches!(
            fit_delta(&c(), &planets, &[obs("Mars", 1.0, 1.0)], QuantumRule::default()),
            Err(Error::UnknownPlanet(_))
        ));
    }

    #[test]
    fn negative_optimum_clamps_to_zero() {
        let fit = fit_delta(&c(), &bundled_planets(), &[obs("Earth", -3.0, 1.0)], QuantumRule::default()).unwrap();
        assert_eq!(fit.delta_star, 0.0);
        assert_eq!(fit.residuals[0].residual, -3.0);
    }

    #[test]
    fn sweep_examples() {
        let m = planet("Mercury");
        let rule = QuantumRule::default();
        let rows = sweep_delta(&c(), &m, 0.01, 0.05, 2, rule, Execution::default()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].delta, rows[1].delta), (0.01, 0.05));
        assert!((rows[0].precession - 10.82).abs() < 0.005);
        assert!((rows[1].precession - 54.10).abs() < 0.005);

        let rows = sweep_delta(&c(), &m, 0.01, 0.05, 3, rule, Execution::Sequential).unwrap();
        assert!((rows[1].delta - 0.03).abs() < 1e-15);
        assert!((rows[1].precession - 32.46).abs() < 0.05);

        let rows = sweep_delta(&c(), &planet("Earth"), 0.0, 0.02, 2, rule, Execution::Parallel).unwrap();
        assert_eq!(rows[0], SweepRow { delta: 0.0, precession: 0.0 });

        assert!(sweep_delta(&c(), &m, 0.05, 0.01, 3, rule, Execution::default()).is_err());
        assert!(sweep_delta(&c(), &m, -0.01, 0.01, 3, rule, Execution::default()).is_err());
        assert!(sweep_delta(&c(), &m, 0.0, 0.01, 1, rule, Execution::default()).is_err());
    }

    #[test]
    fn sweep_is_execution_independent() {
        let m = planet("Venus");
        let rule = QuantumRule::SemiMinorAxis;
        let a = sweep_delta(&c(), &m, 0.0, 0.1, 1001, rule, Execution::Sequential).unwrap();
        let b = sweep_delta(&c(), &m, 0.0, 0.1, 1001, rule, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[1].precession > w[0].precession));
    }

    fn any_planet() -> impl Strategy<Value = PlanetElements> {
        prop::sample::select(bundled_planets())
    }

    fn any_rule() -> impl Strategy<Value = QuantumRule> {
        prop::sample::select(vec![QuantumRule::PerihelionDistance, QuantumRule::SemiMinorAxis])
    }

    proptest! {
        #[test]
        fn round_trip(el in any_planet(), delta in 1e-4f64..0.05, rule in any_rule()) {
            let target = planet_precession(&c(), &el, delta, rule).unwrap().per_century;
            let back = invert_delta(&c(), &el, target, rule).unwrap();
            prop_assert!(((back - delta) / delta).abs() <= 1e-10, "{} vs {}", back, delta);
        }

        #[test]
        fn noiseless_synthetic_fit(delta in 1e-4f64..0.1, sigmas in prop::array::uniform3(0.01f64..10.0), rule in any_rule()) {
            let planets = bundled_planets();
            let o: Vec<Observation> = planets.iter().zip(sigmas).map(|(p, s)| {
                obs(&p.name, slope(&c(), p, rule).unwrap() * delta, s)
            }).collect();
            let fit = fit_delta(&c(), &planets, &o, rule).unwrap();
            prop_assert!(((fit.delta_star - delta) / delta).abs() <= 1e-12);
        }

        #[test]
        fn chi2_non_increasing_in_sigma(which in 0usize..3, factor in 1.0f64..100.0) {
            let planets = bundled_planets();
            let base = bundled_observations();
            let mut widened = base.clone();
            widened[which].sigma *= factor;
            let rule = QuantumRule::default();
            let a = fit_delta(&c(), &planets, &base, rule).unwrap().chi2;
            let b = fit_delta(&c(), &planets, &widened, rule).unwrap().chi2;
            prop_assert!(b <= a * (1.0 + 1e-12));
        }

        #[test]
        fn sweep_monotone(el in any_planet(), lo in 0.0f64..0.05, span in 1e-3f64..0.1, steps in 2usize..50) {
            let rows = sweep_delta(&c(), &el, lo, lo + span, steps, QuantumRule::default(), Execution::default()).unwrap();
            prop_assert_eq!(rows.len(), steps);
            prop_assert!(rows.windows(2).all(|w| w[1].precession > w[0].precession));
        }
    }
}
