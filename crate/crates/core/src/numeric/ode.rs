//! Dormand–Prince 5(4) embedded Runge–Kutta pair with FSAL and
//! proportional step-size control.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// difference between the 5th- and 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Per-step error bound relative to the largest state component.
    pub tol: f64,
    pub initial_step: f64,
    pub max_step: f64,
    /// Spacing of the fixed sub-steps used to re-cover steps selected by the
    /// densify predicate. Ignored when no predicate is given.
    pub dense_step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

struct Stages<const N: usize> {
    y_new: [f64; N],
    k7: [f64; N],
    err: [f64; N],
}

fn dp_step<const N: usize, F>(f: &mut F, t: f64, y: &[f64; N], k1: &[f64; N], h: f64) -> Result<Stages<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let k2 = f(t + C2 * h, &axpy(y, &[(A21, k1)], h))?;
    let k3 = f(t + C3 * h, &axpy(y, &[(A31, k1), (A32, &k2)], h))?;
    let k4 = f(t + C4 * h, &axpy(y, &[(A41, k1), (A42, &k2), (A43, &k3)], h))?;
    let k5 = f(t + C5 * h, &axpy(y, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)], h))?;
    let k6 = f(
        t + h,
        &axpy(y, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
    )?;
    let y_new = axpy(y, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], h);
    let k7 = f(t + h, &y_new)?;
    let mut err = [0.0; N];
    for (i, e) in err.iter_mut().enumerate() {
        *e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    Ok(Stages { y_new, k7, err })
}

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end > t0`, calling `observe`
/// with the initial state and after every accepted step. The last step is
/// shortened to land on `t_end` exactly.
///
/// When `densify(y_old, y_new)` holds for an accepted step, the step is
/// discarded and its interval re-covered by equal fixed steps no longer than
/// `ctrl.dense_step`, each of which is observed.
pub fn integrate<const N: usize, F, D, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    ctrl: StepControl,
    densify: D,
    mut observe: O,
) -> Result<StepStats>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    D: Fn(&[f64; N], &[f64; N]) -> bool,
    O: FnMut(f64, &[f64; N]),
{
    let mut stats = StepStats::default();
    let mut t = t0;
    let mut y = y0;
    let mut h = ctrl.initial_step.min(ctrl.max_step).min(t_end - t0);
    let mut k1 = f(t, &y)?;
    stats.evaluations += 1;
    observe(t, &y);

    while t < t_end {
        let min_step = 16.0 * f64::EPSILON * t.abs().max(1.0);
        if h < min_step {
            return Err(Error::StepFailure { theta: t, step: h });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let st = dp_step(&mut f, t, &y, &k1, h)?;
        stats.evaluations += 6;

        let scale = y
            .iter()
            .chain(st.y_new.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let err = st
            .err
            .iter()
            .fold(0.0f64, |m, e| m.max(e.abs() / (ctrl.tol * scale)));

        let factor = if err == 0.0 {
            MAX_FACTOR
        } else if err.is_finite() {
            (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
        } else {
            MIN_FACTOR
        };

        if err > 1.0 {
            stats.rejected += 1;
            h *= factor.min(1.0);
            continue;
        }

        let t_next = if last { t_end } else { t + h };
        stats.accepted += 1;
        if ctrl.dense_step > 0.0 && densify(&y, &st.y_new) {
            let n = (h / ctrl.dense_step).ceil().max(1.0) as usize;
            let sub = h / n as f64;
            for i in 1..=n {
                let st = dp_step(&mut f, t, &y, &k1, sub)?;
                stats.evaluations += 6;
                t = if i == n { t_next } else { t + sub };
                y = st.y_new;
                k1 = st.k7;
                observe(t, &y);
            }
        } else {
            t = t_next;
            y = st.y_new;
            k1 = st.k7;
            observe(t, &y);
        }
        h = (h * factor).min(ctrl.max_step);
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctrl(tol: f64) -> StepControl {
        StepControl { tol, initial_step: 0.1, max_step: 0.5, dense_step: 0.0 }
    }

    #[test]
    fn exponential_decay() {
        let mut last = (0.0, [1.0]);
        let stats = integrate(|_, y: &[f64; 1]| Ok([-y[0]]), 0.0, [1.0], 5.0, ctrl(1e-10), |_, _| false, |t, y| {
            last = (t, *y)
        })
        .unwrap();
        assert_eq!(last.0, 5.0);
        assert!(((last.1[0] - (-5.0f64).exp()) / (-5.0f64).exp()).abs() < 1e-8);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn harmonic_oscillator_over_many_periods() {
        let tau = 2.0 * std::f64::consts::PI;
        let mut last = [0.0; 2];
        integrate(
            |_, y: &[f64; 2]| Ok([y[1], -y[0]]),
            0.0,
            [1.0, 0.0],
            10.0 * tau,
            ctrl(1e-12),
            |_, _| false,
            |_, y| last = *y,
        )
        .unwrap();
        assert!((last[0] - 1.0).abs() < 1e-9);
        assert!(last[1].abs() < 1e-9);
    }

    #[test]
    fn tighter_tolerance_takes_more_steps() {
        let run = |tol| {
            integrate(|_, y: &[f64; 2]| Ok([y[1], -y[0]]), 0.0, [1.0, 0.0], 10.0, ctrl(tol), |_, _| false, |_, _| {})
                .unwrap()
                .accepted
        };
        assert!(run(1e-12) > run(1e-8));
    }

    #[test]
    fn rhs_error_propagates() {
        let r = integrate(
            |t, y: &[f64; 1]| if t > 1.0 { Err(Error::domain("stop")) } else { Ok([y[0]]) },
            0.0,
            [1.0],
            2.0,
            ctrl(1e-8),
            |_, _| false,
            |_, _| {},
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn densified_steps_are_evenly_refined() {
        let mut ts = Vec::new();
        let c = StepControl { dense_step: 0.01, ..ctrl(1e-10) };
        // densify every step whose end crosses y = 0 from above
        integrate(
            |_, y: &[f64; 2]| Ok([y[1], -y[0]]),
            0.0,
            [1.0, 0.0],
            3.0,
            c,
            |a, b| a[0] > 0.0 && b[0] <= 0.0,
            |t, _| ts.push(t),
        )
        .unwrap();
        let half_pi = std::f64::consts::FRAC_PI_2;
        let near: Vec<_> = ts.windows(2).filter(|w| w[0] <= half_pi && w[1] > half_pi).collect();
        assert_eq!(near.len(), 1);
        assert!(near[0][1] - near[0][0] <= 0.01 + 1e-12);
        assert_eq!(*ts.last().unwrap(), 3.0);
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn blow_up_underflows_step() {
        // y' = y^2 from y(0) = 1 reaches infinity at t = 1
        let r = integrate(|_, y: &[f64; 1]| Ok([y[0] * y[0]]), 0.0, [1.0], 2.0, ctrl(1e-10), |_, _| false, |_, _| {});
        assert!(matches!(r, Err(Error::StepFailure { .. })), "{r:?}");
    }
}
