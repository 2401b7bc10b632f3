use std::f64::consts::PI;

use serde::Serialize;

use super::binet::{BinetState, Trajectory};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerihelionSeries {
    /// Refined perihelion angles, rad, strictly increasing.
    pub angles: Vec<f64>,
    /// `angles[i+1] - angles[i] - 2 pi`, rad.
    pub advances: Vec<f64>,
}

impl PerihelionSeries {
    pub fn from_angles(angles: Vec<f64>) -> Self {
        let advances = angles.windows(2).map(|w| w[1] - w[0] - 2.0 * PI).collect();
        PerihelionSeries { angles, advances }
    }

    /// Mean advance per revolution over the whole span.
    pub fn mean_advance(&self) -> Option<f64> {
        let n = self.angles.len().checked_sub(1).filter(|&n| n > 0)?;
        Some((self.angles[n] - self.angles[0]) / n as f64 - 2.0 * PI)
    }

    pub fn truncate(&mut self, passages: usize) {
        self.angles.truncate(passages);
        self.advances.truncate(passages.saturating_sub(1));
    }
}

/// Abscissa of the vertex of the parabola through three samples of `u`.
fn quadratic_vertex(s: [&BinetState; 3]) -> Option<f64> {
    let t1 = s[1].theta;
    let (d0, d2) = (s[0].theta - t1, s[2].theta - t1);
    let (y0, y2) = (s[0].u - s[1].u, s[2].u - s[1].u);
    let det = d0 * d2 * (d0 - d2);
    let a = (y0 * d2 - y2 * d0) / det;
    let b = (d0 * d0 * y2 - d2 * d2 * y0) / det;
    if !(a < 0.0) {
        return None;
    }
    let offset = (-b / (2.0 * a)).clamp(d0, d2);
    Some(t1 + offset)
}

/// Locates maxima of `u` (minima of `r`) where `du` changes sign from
/// positive to non-positive, refining each with a quadratic through the
/// three consecutive samples nearest the crossing. A trajectory that starts with
/// `du = 0` and then decreases counts its first sample as a passage.
pub fn detect_perihelia(traj: &Trajectory) -> Result<PerihelionSeries> {
    let s = &traj.samples;
    let mut angles = Vec::new();
    if s.len() >= 2 && s[0].du == 0.0 && s[1].du < 0.0 {
        angles.push(s[0].theta);
    }
    for i in 0..s.len().saturating_sub(1) {
        if !(s[i].du > 0.0 && s[i + 1].du <= 0.0) {
            continue;
        }
        // the tighter of the two consecutive triples that contain the bracket
        let Some(start) = [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .filter(|&k| k + 2 < s.len())
            .min_by(|&a, &b| {
                let span = |k: usize| s[k + 2].theta - s[k].theta;
                span(a).total_cmp(&span(b))
            })
        else {
            continue;
        };
        if let Some(theta) = quadratic_vertex([&s[start], &s[start + 1], &s[start + 2]]) {
            if angles.last().is_none_or(|&prev| theta > prev) {
                angles.push(theta);
            }
        }
    }
    if angles.len() < 2 {
        return Err(Error::InsufficientSpan { found: angles.len() });
    }
    Ok(PerihelionSeries::from_angles(angles))
}
