//! Closed-form and implicit exact solutions.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use crate::error::{Error, Result};

pub const NEWTON_TOLERANCE: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 100;

/// Solves `u = u₀(θ − u t)` for a smooth periodic `u₀` before the first
/// characteristic crossing. `bounds` bracket the range of `u₀`.
pub fn burgers_implicit<F, D>(u0: F, du0: D, bounds: (f64, f64), theta: f64, t: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let fail = |reason: &str| Error::OracleFailed {
        param: theta,
        time: t,
        reason: reason.to_string(),
    };
    if t == 0.0 {
        return Ok(u0(theta));
    }
    let g = |u: f64| u - u0(theta - u * t);
    let (mut lo, mut hi) = bounds;
    if g(lo) > 0.0 || g(hi) < 0.0 {
        return Err(fail("root not bracketed by the initial range"));
    }
    let mut u = u0(theta);
    for _ in 0..NEWTON_MAX_ITER {
        let gu = g(u);
        if gu.abs() < NEWTON_TOLERANCE {
            return Ok(u);
        }
        if gu < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let dg = 1.0 + du0(theta - u * t) * t;
        if dg <= 0.0 {
            // characteristics have crossed: the implicit relation is multi-valued
            return Err(fail("characteristics cross (post-shock query)"));
        }
        let next = u - gu / dg;
        u = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    Err(fail("Newton iteration did not converge"))
}

/// Pre-shock solution of `u_t + (u²/2)_θ = 0` on the unit circle with
/// `u₀ = sin θ + 0.5`.
pub fn burgers_oracle_circle(theta: f64, t: f64) -> Result<f64> {
    burgers_implicit(|s| s.sin() + 0.5, f64::cos, (-0.5, 1.5), theta, t)
}

/// Periodic Burgers solution for the box `u₀ = 1` on `|θ| ≤ π/4`, 0 elsewhere,
/// valid until the shock meets the rarefaction tail at `t = 4π`.
pub fn burgers_box(theta: f64, t: f64) -> Result<f64> {
    // x = 0 at the left jump, the right jump at x = π/2
    let x = (theta + FRAC_PI_4).rem_euclid(TAU);
    if t == 0.0 {
        let centred = (theta + PI).rem_euclid(TAU) - PI;
        return Ok(if centred.abs() <= FRAC_PI_4 { 1.0 } else { 0.0 });
    }
    if t > 4.0 * PI {
        return Err(Error::OracleFailed {
            param: theta,
            time: t,
            reason: "box solution is tabulated only up to t = 4π".into(),
        });
    }
    if t <= PI {
        Ok(if x < t {
            x / t
        } else if x < FRAC_PI_2 + 0.5 * t {
            1.0
        } else {
            0.0
        })
    } else {
        // the fan has reached the shock; equal-area shock position
        let shock = (PI * t).sqrt();
        Ok(if x < shock { x / t } else { 0.0 })
    }
}

/// Torus bump `f(η)` built from `g(x) = (e^{1/(x−1)} − e^{1/x}) / (e^{1/(x−1)} + e^{1/x})`.
pub fn torus_profile(eta: f64) -> f64 {
    let eta = (eta + PI).rem_euclid(TAU) - PI;
    let x = if eta <= 0.0 { (PI + eta) / PI } else { (PI - eta) / PI };
    torus_g(x)
}

/// `g` rewritten as `tanh((1/(x−1) − 1/x)/2)` to avoid overflow.
pub fn torus_g(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return -1.0;
    }
    (0.5 * (1.0 / (x - 1.0) - 1.0 / x)).tanh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bisection(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn burgers_oracle_examples() {
        assert_eq!(burgers_oracle_circle(0.3, 0.0).unwrap(), 0.3f64.sin() + 0.5);
        let constant = burgers_implicit(|_| 0.7, |_| 0.0, (0.0, 1.0), 1.0, 5.0).unwrap();
        assert!((constant - 0.7).abs() < 1e-14);
        // u = sin(−0.9u) + 0.5 at θ = 0
        let u = burgers_oracle_circle(0.0, 0.9).unwrap();
        let reference = bisection(|v| v - (-0.9 * v).sin() - 0.5, -0.5, 1.5);
        assert!((u - reference).abs() < 1e-12);
    }

    #[test]
    fn post_shock_query_fails() {
        // at t = 1.5 the implicit relation has three roots near θ = π
        let failures = (0..200)
            .map(|k| burgers_oracle_circle(PI + 0.01 * (k as f64 - 100.0), 1.5))
            .filter(|r| r.is_err())
            .count();
        assert!(failures > 0);
    }

    proptest! {
        #[test]
        fn burgers_oracle_satisfies_relation(theta in -PI..PI, t in 0.0..0.99f64) {
            let u = burgers_oracle_circle(theta, t).unwrap();
            prop_assert!((u - ((theta - u * t).sin() + 0.5)).abs() < 1e-11);
        }

        #[test]
        fn box_solution_conserves_mass(t in 0.01..(4.0 * PI)) {
            let n = 20_000;
            let h = TAU / n as f64;
            let mass: f64 = (0..n).map(|k| burgers_box(-PI + (k as f64 + 0.5) * h, t).unwrap() * h).sum();
            prop_assert!((mass - FRAC_PI_2).abs() < 2e-3);
        }
    }

    #[test]
    fn box_solution_structure() {
        assert_eq!(burgers_box(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(burgers_box(FRAC_PI_4, 0.0).unwrap(), 1.0);
        assert_eq!(burgers_box(1.0, 0.0).unwrap(), 0.0);
        // rarefaction fan centred at −π/4
        assert!((burgers_box(-FRAC_PI_4 + 0.25, 0.5).unwrap() - 0.5).abs() < 1e-15);
        // shock moves at speed 1/2 before the fan arrives
        assert_eq!(burgers_box(FRAC_PI_4 + 0.24, 0.5).unwrap(), 1.0);
        assert_eq!(burgers_box(FRAC_PI_4 + 0.26, 0.5).unwrap(), 0.0);
        assert!(burgers_box(0.0, 13.0).is_err());
    }

    #[test]
    fn torus_profile_values() {
        assert_eq!(torus_profile(0.0), -1.0);
        assert_eq!(torus_profile(PI), -1.0);
        let mid = torus_profile(FRAC_PI_2);
        assert!((mid + 2.0f64.tanh()).abs() < 1e-15);
        assert!((torus_profile(-FRAC_PI_2) - mid).abs() < 1e-15);
        // direct formula away from the endpoints
        let x: f64 = 0.3;
        let direct = ((1.0 / (x - 1.0)).exp() - (1.0 / x).exp()) / ((1.0 / (x - 1.0)).exp() + (1.0 / x).exp());
        assert!((torus_g(x) - direct).abs() < 1e-14);
    }
}
