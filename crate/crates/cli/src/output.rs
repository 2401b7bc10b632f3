//! Rendering. Text output rounds to two decimals; CSV and JSON carry full
//! precision. Nothing here writes to stderr.

use std::fmt::Write as _;

use clap::ValueEnum;
use qgrav::analytic::QuantumRule;
use qgrav::calibration::{FitResult, SweepRow};
use qgrav::numeric::OrbitRun;
use qgrav::report::ReportRow;
use qgrav::{Constants, PrecessionResult};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

fn metadata(command: &str, consts: &Constants, rule: Option<QuantumRule>) -> Value {
    json!({
        "command": command,
        "constants_version": Constants::VERSION,
        "constants": consts,
        "rule": rule,
        "units": { "precession": "arcsec/century", "delta": "arcsec", "angle": "rad", "length": "m" },
    })
}

fn json_doc(meta: Value, body: Value) -> String {
    let mut doc = meta;
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

fn csv_doc(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn strings<const N: usize>(cols: [&str; N]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

/// Left-aligned columns separated by ` | `.
fn text_grid(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in &rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    for r in std::iter::once(&header).chain(&rows) {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        out.push_str(cells.join(" | ").trim_end());
        out.push('\n');
    }
    out
}

pub fn table(fmt: Format, consts: &Constants, rule: QuantumRule, rows: &[ReportRow]) -> String {
    let deltas: Vec<f64> = rows
        .first()
        .map(|r| r.model.iter().map(|m| m.delta).collect())
        .unwrap_or_default();
    match fmt {
        Format::Json => json_doc(metadata("table", consts, Some(rule)), json!({ "deltas": deltas, "rows": rows })),
        Format::Csv => {
            let mut header = strings(["planet", "observed_arcsec", "sigma_arcsec", "gr_baseline_arcsec"]);
            header.extend(deltas.iter().map(|d| format!("delta_{d}")));
            csv_doc(
                &header,
                rows.iter().map(|r| {
                    let (o, s) = r
                        .observation
                        .as_ref()
                        .map_or((String::new(), String::new()), |o| (o.value.to_string(), o.sigma.to_string()));
                    let mut rec = vec![r.planet.clone(), o, s, r.gr_baseline.to_string()];
                    rec.extend(r.model.iter().map(|m| m.precession.to_string()));
                    rec
                }),
            )
        }
        Format::Text => {
            let mut header = strings(["planet", "observation", "relativity"]);
            header.extend(deltas.iter().map(|d| format!("delta={d}")));
            let body = rows
                .iter()
                .map(|r| {
                    let obs = r
                        .observation
                        .as_ref()
                        .map_or("-".to_string(), |o| format!("{:.2}±{:.2}", o.value, o.sigma));
                    let mut rec = vec![r.planet.clone(), obs, format!("{:.2}", r.gr_baseline)];
                    rec.extend(r.model.iter().map(|m| format!("{:.2}", m.precession)));
                    rec
                })
                .collect();
            format!("# arcsec/century, rule = {rule}\n{}", text_grid(header, body))
        }
    }
}

pub fn precess(
    fmt: Format,
    consts: &Constants,
    rule: QuantumRule,
    planet: &str,
    delta: f64,
    results: &[PrecessionResult],
) -> String {
    match fmt {
        Format::Json => json_doc(
            metadata("precess", consts, Some(rule)),
            json!({ "planet": planet, "delta": delta, "results": results }),
        ),
        Format::Csv => csv_doc(
            &strings(["planet", "delta_arcsec", "provenance", "per_orbit_rad", "per_century_arcsec"]),
            results.iter().map(|r| {
                vec![
                    planet.to_string(),
                    delta.to_string(),
                    provenance(r),
                    r.per_orbit.to_string(),
                    r.per_century.to_string(),
                ]
            }),
        ),
        Format::Text => {
            let mut out = String::new();
            for r in results {
                let _ = writeln!(
                    out,
                    "{planet}: {:.2} arcsec/century ({}, delta = {delta} arcsec, rule = {rule}, {:.4e} rad/orbit)",
                    r.per_century,
                    provenance(r),
                    r.per_orbit
                );
            }
            out
        }
    }
}

fn provenance(r: &PrecessionResult) -> String {
    serde_json::to_value(r.provenance)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn orbit(fmt: Format, consts: &Constants, rule: QuantumRule, planet: &str, delta: f64, run: &OrbitRun) -> String {
    let samples = &run.trajectory.samples;
    match fmt {
        Format::Json => json_doc(
            metadata("orbit", consts, Some(rule)),
            json!({
                "planet": planet,
                "delta": delta,
                "q_l": run.q_l,
                "analytic": run.analytic,
                "integrator": {
                    "tol": run.trajectory.tol,
                    "steps": run.trajectory.steps,
                    "rejected_steps": run.trajectory.rejected_steps,
                },
                "perihelia": run.perihelia,
                "result": run.result,
                "samples": samples.iter().map(|s| json!({"theta": s.theta, "u": s.u, "r": s.radius()})).collect::<Vec<_>>(),
            }),
        ),
        Format::Csv => csv_doc(
            &strings(["theta_rad", "u_per_m", "r_m"]),
            samples
                .iter()
                .map(|s| vec![s.theta.to_string(), s.u.to_string(), s.radius().to_string()]),
        ),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "{planet}: delta = {delta} arcsec, rule = {rule}, q_l = {:.4e} m", run.q_l);
            let _ = writeln!(
                out,
                "integrated {} samples ({} steps, {} rejected, tol {:e})",
                samples.len(),
                run.trajectory.steps,
                run.trajectory.rejected_steps,
                run.trajectory.tol
            );
            for (i, theta) in run.perihelia.angles.iter().enumerate() {
                let _ = writeln!(out, "perihelion {i}: theta = {theta:.12} rad");
            }
            let _ = writeln!(
                out,
                "mean advance: {:.4e} rad/orbit = {:.2} arcsec/century",
                run.result.per_orbit, run.result.per_century
            );
            out
        }
    }
}

pub fn fit(fmt: Format, consts: &Constants, fit: &FitResult) -> String {
    match fmt {
        Format::Json => json_doc(metadata("fit", consts, Some(fit.rule)), json!({ "fit": fit })),
        Format::Csv => csv_doc(
            &strings([
                "planet",
                "observed_arcsec",
                "sigma_arcsec",
                "predicted_arcsec",
                "residual_arcsec",
                "delta_star",
                "delta_sigma",
                "chi2",
            ]),
            fit.residuals.iter().map(|r| {
                vec![
                    r.planet.clone(),
                    r.observed.to_string(),
                    r.sigma.to_string(),
                    r.predicted.to_string(),
                    r.residual.to_string(),
                    fit.delta_star.to_string(),
                    fit.delta_sigma.to_string(),
                    fit.chi2.to_string(),
                ]
            }),
        ),
        Format::Text => {
            let mut out = format!(
                "delta* = {:.5} ± {:.5} arcsec (rule = {}), chi2 = {:.2}\n",
                fit.delta_star, fit.delta_sigma, fit.rule, fit.chi2
            );
            let rows = fit
                .residuals
                .iter()
                .map(|r| {
                    vec![
                        r.planet.clone(),
                        format!("{:.2}±{:.2}", r.observed, r.sigma),
                        format!("{:.2}", r.predicted),
                        format!("{:+.2}", r.residual),
                    ]
                })
                .collect();
            out.push_str(&text_grid(strings(["planet", "observation", "predicted", "residual"]), rows));
            out
        }
    }
}

pub fn sweep(fmt: Format, consts: &Constants, rule: QuantumRule, planet: &str, rows: &[SweepRow]) -> String {
    match fmt {
        Format::Json => json_doc(metadata("sweep", consts, Some(rule)), json!({ "planet": planet, "rows": rows })),
        Format::Csv => csv_doc(
            &strings(["delta_arcsec", "precession_arcsec_per_century"]),
            rows.iter().map(|r| vec![r.delta.to_string(), r.precession.to_string()]),
        ),
        Format::Text => {
            let body = rows
                .iter()
                .map(|r| vec![format!("{:.4}", r.delta), format!("{:.2}", r.precession)])
                .collect();
            format!(
                "# {planet}, rule = {rule}\n{}",
                text_grid(strings(["delta", "arcsec/century"]), body)
            )
        }
    }
}
