//! Grid-to-surface interpolation, error norms, convergence rates and mass.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Shape, SurfacePoint};
use crate::linalg::Vec3;
use crate::tube::TubeGrid;

pub const CURVE_SAMPLES: usize = 4096;
pub const SURFACE_SAMPLES: (usize, usize) = (512, 256);

/// Four-point Lagrange weights on nodes `−1, 0, 1, 2` for offset `s ∈ [0, 1)`.
#[inline]
pub fn cubic_weights(s: f64) -> [f64; 4] {
    [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ]
}

/// Quadrature samples on the interface.
#[derive(Clone, Debug)]
pub struct SurfaceMesh {
    pub points: Vec<SurfacePoint>,
    pub weights: Vec<f64>,
}

impl SurfaceMesh {
    /// Default-density mesh for a shape.
    pub fn for_shape(shape: &Shape) -> Self {
        match shape.dim() {
            2 => Self::curve(shape, CURVE_SAMPLES),
            _ => Self::surface(shape, SURFACE_SAMPLES.0, SURFACE_SAMPLES.1),
        }
    }

    /// Midpoint parameter samples on a closed curve, weights `|c'(s)| Δs`.
    pub fn curve(shape: &Shape, samples: usize) -> Self {
        let h = TAU / samples as f64;
        let (points, weights) = (0..samples)
            .map(|k| {
                let s = -PI + (k as f64 + 0.5) * h;
                let speed = shape.curve_speed(s).expect("curve shape");
                (shape.surface_point([s, 0.0]), speed * h)
            })
            .unzip();
        Self { points, weights }
    }

    /// Midpoint samples on a sphere (`θ × polar angle`, weight = exact cell
    /// area) or torus (`θ × η`, area element `(R + r cos η) r dθ dη`).
    pub fn surface(shape: &Shape, n_theta: usize, n_second: usize) -> Self {
        let ht = TAU / n_theta as f64;
        let mut points = Vec::with_capacity(n_theta * n_second);
        let mut weights = Vec::with_capacity(n_theta * n_second);
        for i in 0..n_theta {
            let theta = -PI + (i as f64 + 0.5) * ht;
            for j in 0..n_second {
                match *shape {
                    Shape::Sphere { radius } => {
                        let hp = PI / n_second as f64;
                        let lo = -FRAC_PI_2 + j as f64 * hp;
                        points.push(shape.surface_point([theta, lo + 0.5 * hp]));
                        weights.push(radius * radius * ht * ((lo + hp).sin() - lo.sin()));
                    }
                    Shape::Torus { major, minor } => {
                        let he = TAU / n_second as f64;
                        let eta = -PI + (j as f64 + 0.5) * he;
                        points.push(shape.surface_point([theta, eta]));
                        weights.push((major + minor * eta.cos()) * minor * ht * he);
                    }
                    _ => panic!("surface mesh requested for a curve"),
                }
            }
        }
        Self { points, weights }
    }

    /// Keeps only sphere samples with `|latitude| ≤ band`.
    pub fn restrict_latitude(self, band: f64) -> Self {
        let (points, weights) = self
            .points
            .into_iter()
            .zip(self.weights)
            .filter(|(p, _)| p.param[1].abs() <= band)
            .unzip();
        Self { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `Σ w f(p)` over the mesh for a function given on the surface.
pub fn quadrature(mesh: &SurfaceMesh, f: impl Fn(&SurfacePoint) -> f64 + Sync + Send) -> f64 {
    let vals: Vec<f64> = mesh.points.par_iter().map(f).collect();
    vals.iter().zip(&mesh.weights).map(|(v, w)| v * w).sum()
}

/// Tensor-product cubic interpolation of slot values at `x`.
pub fn interpolate_point(tube: &TubeGrid, values: &[f64], x: &Vec3) -> Option<f64> {
    let grid = tube.grid();
    let dim = grid.dim();
    let n = grid.points_per_axis() as isize;
    let mut base = [0isize; 3];
    let mut w = [[1.0, 0.0, 0.0, 0.0]; 3];
    for axis in 0..dim {
        let (i, s) = grid.locate(x[axis]);
        if i - 1 < 0 || i + 2 >= n {
            return None;
        }
        base[axis] = i - 1;
        w[axis] = cubic_weights(s);
    }
    let span = |axis: usize| if axis < dim { 4 } else { 1 };
    let mut sum = 0.0;
    for c in 0..span(2) {
        for b in 0..span(1) {
            for a in 0..4 {
                let m = [
                    (base[0] + a as isize) as usize,
                    (base[1] + b as isize) as usize,
                    (base[2] + c as isize) as usize,
                ];
                let slot = tube.slot_at(m)?;
                sum += w[0][a] * w[1][b] * w[2][c] * values[slot as usize];
            }
        }
    }
    Some(sum)
}

/// Interpolated values at every mesh sample.
pub fn interpolate_to_surface(tube: &TubeGrid, values: &[f64], mesh: &SurfaceMesh) -> Result<Vec<f64>> {
    mesh.points
        .par_iter()
        .enumerate()
        .map(|(k, p)| {
            interpolate_point(tube, values, &p.position).ok_or(Error::InterpolationOutsideTube {
                sample: k,
                point: p.position,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

pub fn error_norms(samples: &[f64], exact: &[f64], weights: &[f64]) -> ErrorNorms {
    assert_eq!(samples.len(), exact.len());
    assert_eq!(samples.len(), weights.len());
    let mut out = ErrorNorms::default();
    let mut l2 = 0.0;
    for ((u, e), w) in samples.iter().zip(exact).zip(weights) {
        let d = (u - e).abs();
        out.l1 += w * d;
        l2 += w * d * d;
        out.linf = out.linf.max(d);
    }
    out.l2 = l2.sqrt();
    out
}

/// One row of a convergence table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub dx: f64,
    pub n: usize,
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

impl ErrorRow {
    pub fn new(dx: f64, n: usize, e: ErrorNorms) -> Self {
        Self {
            dx,
            n,
            l1: e.l1,
            l2: e.l2,
            linf: e.linf,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub l1: Option<f64>,
    pub l2: Option<f64>,
    pub linf: Option<f64>,
}

impl Rates {
    pub fn from_rows(rows: &[ErrorRow]) -> Self {
        let dx: Vec<f64> = rows.iter().map(|r| r.dx).collect();
        let pick = |f: fn(&ErrorRow) -> f64| {
            let e: Vec<f64> = rows.iter().map(f).collect();
            convergence_rate(&dx, &e)
        };
        Self {
            l1: pick(|r| r.l1),
            l2: pick(|r| r.l2),
            linf: pick(|r| r.linf),
        }
    }
}

/// Least-squares slope of `log e` against `log Δx`. Non-positive or
/// non-finite errors are skipped; fewer than two usable rows gives `None`.
pub fn convergence_rate(dx: &[f64], errors: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = dx
        .iter()
        .zip(errors)
        .filter(|(&h, &e)| h > 0.0 && e > 0.0 && e.is_finite())
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

pub fn total_mass(tube: &TubeGrid, values: &[f64], mesh: &SurfaceMesh) -> Result<f64> {
    let u = interpolate_to_surface(tube, values, mesh)?;
    Ok(u.iter().zip(&mesh.weights).map(|(a, w)| a * w).sum())
}

/// Largest spread `max − min` of the interpolated field along normal
/// segments `P + h n`, `|h| ≤ radius`, sampled at `per_line` points.
pub fn normal_variation(
    tube: &TubeGrid,
    values: &[f64],
    mesh: &SurfaceMesh,
    radius: f64,
    per_line: usize,
) -> Result<f64> {
    assert!(per_line >= 2);
    mesh.points
        .par_iter()
        .enumerate()
        .map(|(k, p)| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for j in 0..per_line {
                let h = -radius + 2.0 * radius * j as f64 / (per_line - 1) as f64;
                let x = [
                    p.position[0] + h * p.normal[0],
                    p.position[1] + h * p.normal[1],
                    p.position[2] + h * p.normal[2],
                ];
                let v = interpolate_point(tube, values, &x)
                    .ok_or(Error::InterpolationOutsideTube { sample: k, point: x })?;
                lo = lo.min(v);
                hi = hi.max(v);
            }
            Ok(hi - lo)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}
