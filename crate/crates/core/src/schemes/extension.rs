//! Steady-state extension `u_τ + sign(φ) n·∇u = 0` on the outer layer.

use serde::{Deserialize, Serialize};

use crate::tube::{TubeGrid, NO_SLOT};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    /// Pseudo-time step as a multiple of `Δx`.
    pub dtau_factor: f64,
    pub max_iterations: usize,
    /// Stop once the max residual drops below `tolerance_factor·Δx`.
    pub tolerance_factor: f64,
    /// Accuracy of the one-sided differences: 1, 2, or 0 to follow the
    /// scheme order (1 for first-order runs, 2 for third-order runs).
    #[serde(default)]
    pub upwind_order: u8,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            dtau_factor: 0.5,
            max_iterations: 50,
            tolerance_factor: 1e-3,
            upwind_order: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepReport {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Upwind residual `r = c·∇u` at one outer slot, stored as
/// `Σ w·(u[slot] − u[q])` so that constants give exactly zero.
#[derive(Clone, Copy, Debug)]
struct Stencil {
    slot: u32,
    len: u8,
    upstream: [(u32, f64); 6],
}

/// Precomputed sweep order and upwind stencils.
#[derive(Clone, Debug)]
pub struct ExtensionSweep {
    params: SweepParams,
    dx: f64,
    /// Outer slots in bands of `|φ|` half a cell wide, innermost band first,
    /// by slot inside a band.
    stencils: Vec<Stencil>,
}

impl ExtensionSweep {
    pub fn new(tube: &TubeGrid, params: SweepParams) -> Self {
        let dx = tube.spacing();
        let second = params.upwind_order >= 2;
        let mut order: Vec<u32> = tube.outer().to_vec();
        order.sort_by_key(|&a| ((tube.phi(a).abs() / dx * 2.0) as u32, a));
        let stencils = order
            .iter()
            .map(|&s| {
                let n = tube.projection(s).surface.normal;
                let sign = if tube.phi(s) >= 0.0 { 1.0 } else { -1.0 };
                let mut st = Stencil {
                    slot: s,
                    len: 0,
                    upstream: [(s, 0.0); 6],
                };
                let mut push = |q: u32, w: f64| {
                    st.upstream[st.len as usize] = (q, w);
                    st.len += 1;
                };
                for (axis, &nk) in n.iter().enumerate().take(tube.dim()) {
                    let ck = sign * nk;
                    if ck == 0.0 {
                        continue;
                    }
                    // upstream direction along this axis
                    let dir: isize = if ck > 0.0 { -1 } else { 1 };
                    let q1 = tube.neighbour(s, axis, dir);
                    if q1 == NO_SLOT {
                        continue;
                    }
                    let q2 = tube.neighbour(s, axis, 2 * dir);
                    let a = ck.abs() / dx;
                    if second && q2 != NO_SLOT {
                        push(q1, 2.0 * a);
                        push(q2, -0.5 * a);
                    } else {
                        push(q1, a);
                    }
                }
                st
            })
            .collect();
        Self { params, dx, stencils }
    }

    pub fn params(&self) -> SweepParams {
        self.params
    }

    /// Gauss–Seidel pseudo-time iterations, updating outer values in place.
    pub fn sweep(&self, _tube: &TubeGrid, u: &mut [f64]) -> SweepReport {
        let dtau = self.params.dtau_factor * self.dx;
        let tol = self.params.tolerance_factor * self.dx;
        let mut residual = 0.0;
        for it in 1..=self.params.max_iterations {
            residual = 0.0f64;
            for st in &self.stencils {
                let s = st.slot as usize;
                let us = u[s];
                let mut r = 0.0;
                for &(q, w) in &st.upstream[..st.len as usize] {
                    r += w * (us - u[q as usize]);
                }
                u[s] -= dtau * r;
                residual = residual.max(r.abs());
            }
            if residual < tol {
                return SweepReport {
                    iterations: it,
                    residual,
                    converged: true,
                };
            }
        }
        SweepReport {
            iterations: self.params.max_iterations,
            residual,
            converged: false,
        }
    }
}
