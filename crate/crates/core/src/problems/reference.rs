//! Periodic one-dimensional solver on `[0, 2π)` using the same kernels as the
//! tube operators.

use std::f64::consts::TAU;

use crate::schemes::weno::{hj_weno3_derivatives, lxf_face, weno3_face, DEFAULT_EPS};
use crate::schemes::{cfl_dt, Order, ScalarFlux};

#[derive(Clone, Copy, Debug)]
pub enum Periodic1dEquation {
    /// `u_t + u_θ = 0`, upwind or HJ-WENO3.
    Advection,
    /// `u_t + f(u)_θ = 0`, Lax–Friedrichs or WENO3.
    Conservation(ScalarFlux),
}

#[derive(Clone, Debug)]
pub struct Periodic1d {
    pub values: Vec<f64>,
    pub time: f64,
    equation: Periodic1dEquation,
    order: Order,
    cfl: f64,
}

const GHOST: usize = 3;

#[inline]
fn at(v: &[f64], j: isize) -> f64 {
    v[j.rem_euclid(v.len() as isize) as usize]
}

impl Periodic1d {
    pub fn new(u0: impl Fn(f64) -> f64, n: usize, equation: Periodic1dEquation, order: Order, cfl: f64) -> Self {
        let h = TAU / n as f64;
        Self {
            values: (0..n).map(|j| u0(j as f64 * h)).collect(),
            time: 0.0,
            equation,
            order,
            cfl,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.values.len() as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    fn speed(&self, u: &[f64]) -> f64 {
        match self.equation {
            Periodic1dEquation::Advection => 1.0,
            Periodic1dEquation::Conservation(f) => u.iter().map(|&v| f.derivative(v).abs()).fold(0.0, f64::max),
        }
    }

    fn rhs(&self, u: &[f64]) -> Vec<f64> {
        let h = self.spacing();
        let n = u.len();
        // three ghost cells on each side
        let ext: Vec<f64> = (0..n + 2 * GHOST).map(|k| at(u, k as isize - GHOST as isize)).collect();
        match self.equation {
            Periodic1dEquation::Advection => (0..n)
                .map(|j| {
                    let c = j + GHOST;
                    let d = match self.order {
                        Order::First => (ext[c] - ext[c - 1]) / h,
                        Order::Third => {
                            let w = [ext[c - 2], ext[c - 1], ext[c], ext[c + 1], ext[c + 2]];
                            hj_weno3_derivatives(w, h, DEFAULT_EPS).0
                        }
                    };
                    -d
                })
                .collect(),
            Periodic1dEquation::Conservation(f) => {
                let alpha = self.speed(u);
                let gp: Vec<f64> = ext.iter().map(|&v| 0.5 * (f.value(v) + alpha * v)).collect();
                let gm: Vec<f64> = ext.iter().map(|&v| 0.5 * (f.value(v) - alpha * v)).collect();
                // faces[k] sits at j − 1/2 + k for j = k, so faces[j + 1] − faces[j] is the difference at j
                let faces: Vec<f64> = (GHOST - 1..n + GHOST)
                    .map(|c| weno3_face([gp[c - 1], gp[c], gp[c + 1]], [gm[c], gm[c + 1], gm[c + 2]], DEFAULT_EPS))
                    .collect();
                (0..n).map(|j| -(faces[j + 1] - faces[j]) / h).collect()
            }
        }
    }

    fn step(&mut self, dt: f64) {
        let h = self.spacing();
        let u = &self.values;
        let next: Vec<f64> = match (self.order, self.equation) {
            (Order::First, Periodic1dEquation::Conservation(f)) => {
                let c = h / dt;
                let faces: Vec<f64> = (0..u.len() as isize)
                    .map(|j| lxf_face(f.value(at(u, j)), f.value(at(u, j + 1)), at(u, j), at(u, j + 1), c))
                    .collect();
                (0..u.len() as isize)
                    .map(|j| at(u, j) - dt / h * (faces[j as usize] - at(&faces, j - 1)))
                    .collect()
            }
            (Order::First, Periodic1dEquation::Advection) => {
                let l = self.rhs(u);
                u.iter().zip(&l).map(|(a, b)| a + dt * b).collect()
            }
            (Order::Third, _) => {
                let l0 = self.rhs(u);
                let u1: Vec<f64> = u.iter().zip(&l0).map(|(a, b)| a + dt * b).collect();
                let l1 = self.rhs(&u1);
                let u2: Vec<f64> = (0..u.len())
                    .map(|j| 0.75 * u[j] + 0.25 * (u1[j] + dt * l1[j]))
                    .collect();
                let l2 = self.rhs(&u2);
                (0..u.len())
                    .map(|j| u[j] / 3.0 + 2.0 / 3.0 * (u2[j] + dt * l2[j]))
                    .collect()
            }
        };
        self.values = next;
    }

    /// Advances to time `t`, landing on it exactly.
    pub fn advance_to(&mut self, t: f64) {
        while self.time < t {
            let mut dt = cfl_dt(self.speed(&self.values), self.spacing(), self.cfl);
            let landing = self.time + dt >= t - 1e-12 * t.abs().max(1.0);
            if landing {
                dt = t - self.time;
            }
            self.step(dt);
            self.time = if landing { t } else { self.time + dt };
        }
    }

    /// Periodic four-point Lagrange interpolation at angle `theta`.
    pub fn value_at(&self, theta: f64) -> f64 {
        let h = self.spacing();
        let x = theta.rem_euclid(TAU) / h;
        let j = x.floor();
        let s = x - j;
        let j = j as isize;
        let w = crate::analysis::cubic_weights(s);
        (0..4).map(|k| w[k] * at(&self.values, j - 1 + k as isize)).sum()
    }
}

/// Solves to time `t` from `u₀` on `n` periodic nodes.
pub fn reference_1d_periodic(
    u0: impl Fn(f64) -> f64,
    equation: Periodic1dEquation,
    order: Order,
    n: usize,
    t: f64,
) -> Periodic1d {
    let mut p = Periodic1d::new(u0, n, equation, order, 0.5);
    p.advance_to(t);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::oracle::burgers_oracle_circle;

    #[test]
    fn advection_translates_sine() {
        let p = reference_1d_periodic(f64::sin, Periodic1dEquation::Advection, Order::Third, 1 << 16, 0.5);
        let err = (0..p.len())
            .map(|j| (p.values[j] - (p.node(j) - 0.5).sin()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn burgers_matches_implicit_oracle() {
        let p = reference_1d_periodic(
            |x| x.sin() + 0.5,
            Periodic1dEquation::Conservation(ScalarFlux::Burgers),
            Order::Third,
            1 << 16,
            0.9,
        );
        let err = (0..p.len())
            .step_by(64)
            .map(|j| (p.values[j] - burgers_oracle_circle(p.node(j), 0.9).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-5, "{err}");
    }

    #[test]
    fn constant_stays_constant() {
        for order in [Order::First, Order::Third] {
            let p = reference_1d_periodic(|_| 0.75, Periodic1dEquation::Conservation(ScalarFlux::Burgers), order, 4096, 2.0);
            assert!(p.values.iter().all(|&v| (v - 0.75).abs() < 1e-14));
        }
    }

    #[test]
    fn periodic_schemes_conserve_sum() {
        for order in [Order::First, Order::Third] {
            let mut p = Periodic1d::new(
                |x| if x < 1.0 { 1.0 } else { 0.2 * x.cos() },
                512,
                Periodic1dEquation::Conservation(ScalarFlux::Burgers),
                order,
                0.5,
            );
            let before: f64 = p.values.iter().sum();
            p.advance_to(1.3);
            let after: f64 = p.values.iter().sum();
            assert!((before - after).abs() < 1e-10, "{before} {after}");
        }
    }

    #[test]
    fn first_order_advection_converges_linearly() {
        let errs: Vec<f64> = [256, 512, 1024]
            .iter()
            .map(|&n| {
                let p = reference_1d_periodic(f64::sin, Periodic1dEquation::Advection, Order::First, n, 0.5);
                (0..n).map(|j| (p.values[j] - (p.node(j) - 0.5).sin()).abs()).fold(0.0, f64::max)
            })
            .collect();
        let rate = (errs[1] / errs[2]).log2();
        assert!((rate - 1.0).abs() < 0.1, "{errs:?}");
    }

    #[test]
    fn interpolation_reproduces_cubics_in_the_interior() {
        let mut p = Periodic1d::new(f64::sin, 64, Periodic1dEquation::Advection, Order::Third, 0.5);
        let h = p.spacing();
        p.values = (0..64).map(|j| (j as f64 * h).powi(3)).collect();
        let x = 10.3 * h;
        assert!((p.value_at(x) - x.powi(3)).abs() < 1e-11);
    }
}
