//! Explicit time steppers over slot-indexed state vectors.

use crate::error::Result;

/// A method-of-lines system: `rhs` evaluates `L(u)` on the evolved slots,
/// `boundary` refreshes the remaining ones at a given time.
pub trait SemiDiscrete {
    /// Slots evolved by the ODE; `rhs` output is aligned with this list.
    fn evolved(&self) -> &[u32];
    fn rhs(&self, u: &[f64]) -> Vec<f64>;
    fn boundary(&mut self, u: &mut [f64], t: f64) -> Result<()>;
}

#[allow(clippy::too_many_arguments)]
fn euler_stage(evolved: &[u32], base: &[f64], from: &[f64], l: &[f64], dt: f64, a: f64, b: f64, out: &mut [f64]) {
    // out = a·base + b·(from + Δt·L(from)) on evolved slots
    for (&s, li) in evolved.iter().zip(l) {
        let s = s as usize;
        out[s] = a * base[s] + b * (from[s] + dt * li);
    }
}

/// One TVDRK3 step from `t` to `t + Δt`, refreshing boundary slots after
/// every stage at that stage's time.
pub fn tvdrk3_step<S: SemiDiscrete + ?Sized>(sys: &mut S, u: &mut Vec<f64>, t: f64, dt: f64) -> Result<()> {
    let evolved: Vec<u32> = sys.evolved().to_vec();

    let l0 = sys.rhs(u);
    let mut u1 = u.clone();
    euler_stage(&evolved, u, u, &l0, dt, 0.0, 1.0, &mut u1);
    sys.boundary(&mut u1, t + dt)?;

    let l1 = sys.rhs(&u1);
    let mut u2 = u1.clone();
    euler_stage(&evolved, u, &u1, &l1, dt, 0.75, 0.25, &mut u2);
    sys.boundary(&mut u2, t + 0.5 * dt)?;

    let l2 = sys.rhs(&u2);
    let mut next = u2.clone();
    euler_stage(&evolved, u, &u2, &l2, dt, 1.0 / 3.0, 2.0 / 3.0, &mut next);
    sys.boundary(&mut next, t + dt)?;
    *u = next;
    Ok(())
}

/// One forward-Euler step.
pub fn euler_step<S: SemiDiscrete + ?Sized>(sys: &mut S, u: &mut Vec<f64>, t: f64, dt: f64) -> Result<()> {
    let evolved: Vec<u32> = sys.evolved().to_vec();
    let l = sys.rhs(u);
    for (&s, li) in evolved.iter().zip(&l) {
        u[s as usize] += dt * li;
    }
    sys.boundary(u, t + dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `u' = λu` on every slot, no boundary.
    struct Linear {
        lambda: f64,
        slots: Vec<u32>,
        boundary_times: Vec<f64>,
    }

    impl SemiDiscrete for Linear {
        fn evolved(&self) -> &[u32] {
            &self.slots
        }
        fn rhs(&self, u: &[f64]) -> Vec<f64> {
            self.slots.iter().map(|&s| self.lambda * u[s as usize]).collect()
        }
        fn boundary(&mut self, _u: &mut [f64], t: f64) -> Result<()> {
            self.boundary_times.push(t);
            Ok(())
        }
    }

    fn linear(lambda: f64) -> Linear {
        Linear {
            lambda,
            slots: vec![0, 1],
            boundary_times: Vec::new(),
        }
    }

    #[test]
    fn zero_rhs_keeps_state() {
        let mut sys = linear(0.0);
        let mut u = vec![1.5, -2.0];
        tvdrk3_step(&mut sys, &mut u, 0.0, 0.1).unwrap();
        assert_eq!(u, vec![1.5, -2.0]);
    }

    #[test]
    fn rk3_matches_taylor_polynomial() {
        // one step multiplies by 1 + z + z²/2 + z³/6 exactly
        for (lambda, dt) in [(-1.0, 0.1), (2.0, 0.05), (-3.0, 0.2)] {
            let mut sys = linear(lambda);
            let mut u = vec![1.0, 2.0];
            tvdrk3_step(&mut sys, &mut u, 0.0, dt).unwrap();
            let z: f64 = lambda * dt;
            let g = 1.0 + z + z * z / 2.0 + z * z * z / 6.0;
            assert!((u[0] - g).abs() < 1e-14 && (u[1] - 2.0 * g).abs() < 1e-14);
            assert!((u[0] - z.exp()).abs() < z.abs().powi(4));
        }
    }

    #[test]
    fn rk3_global_error_is_third_order() {
        let mut errs = Vec::new();
        for steps in [20, 40, 80] {
            let mut sys = linear(-1.0);
            let mut u = vec![1.0, 1.0];
            let dt = 1.0 / steps as f64;
            for k in 0..steps {
                tvdrk3_step(&mut sys, &mut u, k as f64 * dt, dt).unwrap();
            }
            errs.push((u[0] - (-1.0f64).exp()).abs());
        }
        let rate = (errs[1] / errs[2]).log2();
        assert!((rate - 3.0).abs() < 0.1, "{errs:?}");
    }

    #[test]
    fn boundary_is_refreshed_at_stage_times() {
        let mut sys = linear(1.0);
        let mut u = vec![1.0, 1.0];
        tvdrk3_step(&mut sys, &mut u, 1.0, 0.2).unwrap();
        let expected = [1.2, 1.1, 1.2];
        assert!(sys.boundary_times.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-15));
        euler_step(&mut sys, &mut u, 1.2, 0.1).unwrap();
        assert!((sys.boundary_times[3] - 1.3).abs() < 1e-15);
    }

    #[test]
    fn euler_step_is_first_order_update() {
        let mut sys = linear(-2.0);
        let mut u = vec![1.0, 0.5];
        euler_step(&mut sys, &mut u, 0.0, 0.1).unwrap();
        assert!((u[0] - 0.8).abs() < 1e-15 && (u[1] - 0.4).abs() < 1e-15);
    }
}
