//! Test-only oracles, independent of the library's integration and
//! refinement code paths.

use std::f64::consts::PI;

/// Exact per-revolution apsidal advance of the orbit
/// `u'' = -u + K / (1 - q u)` started at perihelion `u0` with `u' = 0`,
/// from the energy integral
/// `theta_aps = int du / sqrt(2 (E - V(u)))`, `V(u) = u^2/2 + (K/q) ln(1 - q u)`.
///
/// Works in units of `u0` so every quantity is of order one.
pub fn apsidal_advance(k: f64, q: f64, u0: f64) -> f64 {
    let kappa = k / u0;
    let lambda = q * u0;
    let v = |s: f64| {
        if lambda == 0.0 {
            0.5 * s * s - kappa * s
        } else {
            0.5 * s * s + (kappa / lambda) * (-lambda * s).ln_1p()
        }
    };
    let energy = v(1.0);

    // aphelion: the other root of E - V in (0, 1)
    let (mut lo, mut hi) = (1e-6, 1.0 - 1e-9);
    assert!(energy - v(lo) < 0.0 && energy - v(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if energy - v(mid) < 0.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    let s_min = 0.5 * (lo + hi);

    // s = m - w cos(phi) removes the endpoint singularities and leaves a
    // smooth periodic integrand, for which the midpoint rule converges fast
    let m = 0.5 * (1.0 + s_min);
    let w = 0.5 * (1.0 - s_min);
    let n = 20_000;
    let dphi = PI / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let phi = (i as f64 + 0.5) * dphi;
        let s = m - w * phi.cos();
        sum += w * phi.sin() / (2.0 * (energy - v(s))).max(f64::MIN_POSITIVE).sqrt();
    }
    2.0 * sum * dphi - 2.0 * PI
}
