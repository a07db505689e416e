//! Spatial operators on tube points.

use rayon::prelude::*;

use super::weno::{hj_weno3_derivatives, lxf_face, weno3_face};
use super::Order;
use crate::linalg::Vec3;
use crate::tube::{neighbour_entry, TubeGrid, NO_SLOT};

/// Scalar flux function `f(u)`; the embedded flux is `f(u)·W(x)`.
#[derive(Clone, Copy, Debug)]
pub enum ScalarFlux {
    /// `f(u) = u`
    Linear,
    /// `f(u) = u²/2`
    Burgers,
    /// Arbitrary `f`, differentiated numerically.
    Custom(fn(f64) -> f64),
}

impl ScalarFlux {
    #[inline]
    pub fn value(&self, u: f64) -> f64 {
        match self {
            ScalarFlux::Linear => u,
            ScalarFlux::Burgers => 0.5 * u * u,
            ScalarFlux::Custom(f) => f(u),
        }
    }

    #[inline]
    pub fn derivative(&self, u: f64) -> f64 {
        match self {
            ScalarFlux::Linear => 1.0,
            ScalarFlux::Burgers => u,
            ScalarFlux::Custom(f) => {
                let h = 1e-6 * (1.0 + u.abs());
                (f(u + h) - f(u - h)) / (2.0 * h)
            }
        }
    }
}

/// Embedded right-hand side, with per-slot geometric vectors precomputed.
#[derive(Clone, Debug)]
pub enum OperatorKind {
    /// `ũ_t + ∇·(f(ũ) W) = 0` with `W = M·T(P(x))`.
    Conservation { flux: ScalarFlux, directions: Vec<Vec3> },
    /// `ũ_t + Ṽ·∇ũ = 0` with `Ṽ = M·V(P(x))`.
    Advection { velocity: Vec<Vec3> },
}

pub struct TubeOperator<'a> {
    tube: &'a TubeGrid,
    kind: OperatorKind,
    order: Order,
    eps: f64,
    /// Inner points and every slot their stencils reach.
    active: Vec<u32>,
}

/// `Δt = cfl·Δx / speed`, never above `Δx`.
pub fn cfl_dt(speed: f64, dx: f64, cfl: f64) -> f64 {
    if speed > 0.0 {
        (cfl * dx / speed).min(dx)
    } else {
        dx
    }
}

impl<'a> TubeOperator<'a> {
    pub fn new(tube: &'a TubeGrid, kind: OperatorKind, order: Order, eps: f64) -> Self {
        let mut mark = vec![false; tube.len()];
        for &s in tube.inner() {
            mark[s as usize] = true;
            for &q in tube.neighbours(s) {
                if q != NO_SLOT {
                    mark[q as usize] = true;
                }
            }
        }
        let active = (0..tube.len() as u32).filter(|&s| mark[s as usize]).collect();
        Self {
            tube,
            kind,
            order,
            eps,
            active,
        }
    }

    pub fn tube(&self) -> &TubeGrid {
        self.tube
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// `max_x Σ_k |∂F̃_k/∂u|` over inner points.
    pub fn wave_speed(&self, u: &[f64]) -> f64 {
        let dim = self.tube.dim();
        let speed_at = |s: u32| -> f64 {
            let s = s as usize;
            match &self.kind {
                OperatorKind::Conservation { flux, directions } => {
                    let d = flux.derivative(u[s]).abs();
                    directions[s][..dim].iter().map(|w| d * w.abs()).sum()
                }
                OperatorKind::Advection { velocity } => velocity[s][..dim].iter().map(|v| v.abs()).sum(),
            }
        };
        self.tube.inner().iter().map(|&s| speed_at(s)).fold(0.0, f64::max)
    }

    /// Global Lax–Friedrichs splitting constant per axis.
    fn split_alpha(&self, flux: &ScalarFlux, directions: &[Vec3], u: &[f64]) -> Vec3 {
        let mut alpha = [0.0; 3];
        for &s in &self.active {
            let d = flux.derivative(u[s as usize]).abs();
            for (k, a) in alpha.iter_mut().enumerate().take(self.tube.dim()) {
                *a = f64::max(*a, d * directions[s as usize][k].abs());
            }
        }
        alpha
    }

    #[inline]
    fn window(&self, s: u32, axis: usize) -> [usize; 5] {
        let nb = self.tube.neighbours(s);
        [
            nb[neighbour_entry(axis, -2)] as usize,
            nb[neighbour_entry(axis, -1)] as usize,
            s as usize,
            nb[neighbour_entry(axis, 1)] as usize,
            nb[neighbour_entry(axis, 2)] as usize,
        ]
    }

    /// WENO3 face fluxes `(f̂_{i−1/2}, f̂_{i+1/2})` of inner slot `s` along `axis`.
    pub fn weno_faces(&self, s: u32, axis: usize, u: &[f64], alpha: f64) -> (f64, f64) {
        let (flux, directions) = match &self.kind {
            OperatorKind::Conservation { flux, directions } => (flux, directions),
            OperatorKind::Advection { .. } => panic!("weno_faces needs a conservation operator"),
        };
        let w = self.window(s, axis);
        let mut gp = [0.0; 5];
        let mut gm = [0.0; 5];
        for j in 0..5 {
            let uj = u[w[j]];
            let g = flux.value(uj) * directions[w[j]][axis];
            gp[j] = 0.5 * (g + alpha * uj);
            gm[j] = 0.5 * (g - alpha * uj);
        }
        let left = weno3_face([gp[0], gp[1], gp[2]], [gm[1], gm[2], gm[3]], self.eps);
        let right = weno3_face([gp[1], gp[2], gp[3]], [gm[2], gm[3], gm[4]], self.eps);
        (left, right)
    }

    /// Semi-discrete `L(u)` at inner points, in `tube.inner()` order.
    pub fn rhs(&self, u: &[f64]) -> Vec<f64> {
        let dim = self.tube.dim();
        let dx = self.tube.spacing();
        match &self.kind {
            OperatorKind::Conservation { flux, directions } => {
                let alpha = self.split_alpha(flux, directions, u);
                self.tube
                    .inner()
                    .par_iter()
                    .map(|&s| {
                        let mut l = 0.0;
                        for (axis, &a) in alpha.iter().enumerate().take(dim) {
                            let (left, right) = self.weno_faces(s, axis, u, a);
                            l -= (right - left) / dx;
                        }
                        l
                    })
                    .collect()
            }
            OperatorKind::Advection { velocity } => self
                .tube
                .inner()
                .par_iter()
                .map(|&s| {
                    let v = velocity[s as usize];
                    let mut l = 0.0;
                    for (axis, &vk) in v.iter().enumerate().take(dim) {
                        if vk == 0.0 {
                            continue;
                        }
                        let w = self.window(s, axis);
                        let derivative = match self.order {
                            Order::First => {
                                if vk > 0.0 {
                                    (u[w[2]] - u[w[1]]) / dx
                                } else {
                                    (u[w[3]] - u[w[2]]) / dx
                                }
                            }
                            Order::Third => {
                                let (m, p) = hj_weno3_derivatives(
                                    [u[w[0]], u[w[1]], u[w[2]], u[w[3]], u[w[4]]],
                                    dx,
                                    self.eps,
                                );
                                if vk > 0.0 {
                                    m
                                } else {
                                    p
                                }
                            }
                        };
                        l -= vk * derivative;
                    }
                    l
                })
                .collect(),
        }
    }

    /// Lax–Friedrichs face fluxes `(f_{i−1/2}, f_{i+1/2})` with dissipation
    /// `Δx/(dΔt)`.
    pub fn lxf_faces(&self, s: u32, axis: usize, u: &[f64], dt: f64) -> (f64, f64) {
        let (flux, directions) = match &self.kind {
            OperatorKind::Conservation { flux, directions } => (flux, directions),
            OperatorKind::Advection { .. } => panic!("lxf_faces needs a conservation operator"),
        };
        let c = self.tube.spacing() / (self.tube.dim() as f64 * dt);
        let w = self.window(s, axis);
        let f = |j: usize| flux.value(u[w[j]]) * directions[w[j]][axis];
        let left = lxf_face(f(1), f(2), u[w[1]], u[w[2]], c);
        let right = lxf_face(f(2), f(3), u[w[2]], u[w[3]], c);
        (left, right)
    }

    /// Forward-Euler Lax–Friedrichs update of the inner points, in
    /// `tube.inner()` order.
    pub fn lxf_euler_values(&self, u: &[f64], dt: f64) -> Vec<f64> {
        let dim = self.tube.dim();
        let ratio = dt / self.tube.spacing();
        self.tube
            .inner()
            .par_iter()
            .map(|&s| {
                let mut v = u[s as usize];
                for axis in 0..dim {
                    let (left, right) = self.lxf_faces(s, axis, u, dt);
                    v -= ratio * (right - left);
                }
                v
            })
            .collect()
    }
}
