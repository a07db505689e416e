//! Closed parametric plane curves whose level functions are not signed
//! distances. Distances are recovered by minimizing `½‖c(s) − x‖²` over the
//! curve parameter.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

pub type Point2 = [f64; 2];

pub trait PlaneCurve: Send + Sync {
    fn point(&self, s: f64) -> Point2;
    fn d1(&self, s: f64) -> Point2;
    fn d2(&self, s: f64) -> Point2;

    /// Natural parameter guess for a query point.
    fn seed(&self, x: Point2) -> f64;

    fn speed(&self, s: f64) -> f64 {
        let d = self.d1(s);
        d[0].hypot(d[1])
    }

    /// Outward unit normal; the curves are traversed counter-clockwise.
    fn normal(&self, s: f64) -> Point2 {
        let d = self.d1(s);
        let len = d[0].hypot(d[1]);
        [d[1] / len, -d[0] / len]
    }

    fn curvature(&self, s: f64) -> f64 {
        let d = self.d1(s);
        let dd = self.d2(s);
        (d[0] * dd[1] - d[1] * dd[0]) / d[0].hypot(d[1]).powi(3)
    }
}

/// `(a cos s, b sin s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipseCurve {
    pub a: f64,
    pub b: f64,
}

impl PlaneCurve for EllipseCurve {
    fn point(&self, s: f64) -> Point2 {
        [self.a * s.cos(), self.b * s.sin()]
    }

    fn d1(&self, s: f64) -> Point2 {
        [-self.a * s.sin(), self.b * s.cos()]
    }

    fn d2(&self, s: f64) -> Point2 {
        [-self.a * s.cos(), -self.b * s.sin()]
    }

    fn seed(&self, x: Point2) -> f64 {
        (x[1] / self.b).atan2(x[0] / self.a)
    }
}

/// Polar curve `r(θ) = r0 + a sin²(bθ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarCurve {
    pub r0: f64,
    pub a: f64,
    pub b: f64,
}

impl StarCurve {
    pub fn radius(&self, theta: f64) -> f64 {
        self.r0 + self.a * (self.b * theta).sin().powi(2)
    }

    fn radius_d1(&self, theta: f64) -> f64 {
        self.a * self.b * (2.0 * self.b * theta).sin()
    }

    fn radius_d2(&self, theta: f64) -> f64 {
        2.0 * self.a * self.b * self.b * (2.0 * self.b * theta).cos()
    }
}

impl PlaneCurve for StarCurve {
    fn point(&self, s: f64) -> Point2 {
        let r = self.radius(s);
        [r * s.cos(), r * s.sin()]
    }

    fn d1(&self, s: f64) -> Point2 {
        let (r, dr) = (self.radius(s), self.radius_d1(s));
        let (sn, cs) = s.sin_cos();
        [dr * cs - r * sn, dr * sn + r * cs]
    }

    fn d2(&self, s: f64) -> Point2 {
        let (r, dr, ddr) = (self.radius(s), self.radius_d1(s), self.radius_d2(s));
        let (sn, cs) = s.sin_cos();
        [
            ddr * cs - 2.0 * dr * sn - r * cs,
            ddr * sn + 2.0 * dr * cs - r * sn,
        ]
    }

    fn seed(&self, x: Point2) -> f64 {
        x[1].atan2(x[0])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveProjection {
    /// Curve parameter of the closest point, in `[0, 2π)`.
    pub param: f64,
    pub point: Point2,
    /// Unsigned distance.
    pub distance: f64,
}

pub const NEWTON_STARTS: usize = 8;
pub const NEWTON_TOLERANCE: f64 = 1e-12;
const NEWTON_MAX_ITERATIONS: usize = 100;
const MAX_STEP: f64 = 0.25;

pub fn wrap_angle(s: f64) -> f64 {
    let w = s.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Global minimizer of the squared distance from `x` to the curve.
///
/// Safeguarded Newton on the parameter from evenly spaced starts plus the
/// curve's own seed; the smallest converged distance wins.
pub fn project_onto_curve<C: PlaneCurve + ?Sized>(curve: &C, x: Point2) -> Result<CurveProjection> {
    let dist2 = |s: f64| {
        let c = curve.point(s);
        (c[0] - x[0]).powi(2) + (c[1] - x[1]).powi(2)
    };

    let mut best: Option<(f64, f64)> = None;
    let mut worst_residual = 0.0f64;
    let starts = (0..NEWTON_STARTS)
        .map(|k| TAU * k as f64 / NEWTON_STARTS as f64)
        .chain(std::iter::once(curve.seed(x)));

    for start in starts {
        let mut s = start;
        let mut converged = false;
        let mut residual = f64::INFINITY;
        for _ in 0..NEWTON_MAX_ITERATIONS {
            let c = curve.point(s);
            let d = curve.d1(s);
            let dd = curve.d2(s);
            let r = [c[0] - x[0], c[1] - x[1]];
            let g = r[0] * d[0] + r[1] * d[1];
            residual = g.abs();
            if residual <= NEWTON_TOLERANCE {
                converged = true;
                break;
            }
            let h = d[0] * d[0] + d[1] * d[1] + r[0] * dd[0] + r[1] * dd[1];
            let step = if h > 0.0 { -g / h } else { -g.signum() * MAX_STEP };
            let step = step.clamp(-MAX_STEP, MAX_STEP);
            s += step;
            if step.abs() < 1e-15 * (1.0 + s.abs()) {
                // stalled at round-off level; accept if the gradient is tiny
                converged = residual <= 1e3 * NEWTON_TOLERANCE;
                break;
            }
        }
        if converged {
            let d2 = dist2(s);
            if best.map_or(true, |(bd, _)| d2 < bd) {
                best = Some((d2, s));
            }
        } else {
            worst_residual = worst_residual.max(residual);
        }
    }

    match best {
        Some((d2, s)) => {
            let s = wrap_angle(s);
            Ok(CurveProjection {
                param: s,
                point: curve.point(s),
                distance: d2.sqrt(),
            })
        }
        None => Err(Error::MinimizerDiverged {
            point: [x[0], x[1], 0.0],
            residual: worst_residual,
        }),
    }
}

/// Largest absolute curvature found by dense sampling of the parameter.
pub fn sampled_max_curvature<C: PlaneCurve + ?Sized>(curve: &C, samples: usize) -> f64 {
    (0..samples)
        .map(|k| curve.curvature(TAU * k as f64 / samples as f64).abs())
        .fold(0.0, f64::max)
}

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

fn gauss5(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    GL5_NODES
        .iter()
        .zip(GL5_WEIGHTS.iter())
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Arclength `s(t) = ∫₀ᵗ |c'|` tabulated on panels, with in-panel Gauss-Legendre.
#[derive(Clone, Debug)]
pub struct ArcLength {
    cumulative: Vec<f64>,
    panel: f64,
    curve_kind: ArcCurve,
}

#[derive(Clone, Copy, Debug)]
enum ArcCurve {
    Ellipse(EllipseCurve),
    Star(StarCurve),
}

impl ArcCurve {
    fn speed(&self, s: f64) -> f64 {
        match self {
            ArcCurve::Ellipse(c) => c.speed(s),
            ArcCurve::Star(c) => c.speed(s),
        }
    }
}

const ARC_PANELS: usize = 2048;

impl ArcLength {
    pub fn ellipse(curve: EllipseCurve) -> Self {
        Self::build(ArcCurve::Ellipse(curve))
    }

    pub fn star(curve: StarCurve) -> Self {
        Self::build(ArcCurve::Star(curve))
    }

    fn build(kind: ArcCurve) -> Self {
        let panel = TAU / ARC_PANELS as f64;
        let mut cumulative = Vec::with_capacity(ARC_PANELS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for k in 0..ARC_PANELS {
            let a = panel * k as f64;
            acc += gauss5(|s| kind.speed(s), a, a + panel);
            cumulative.push(acc);
        }
        Self {
            cumulative,
            panel,
            curve_kind: kind,
        }
    }

    pub fn perimeter(&self) -> f64 {
        self.cumulative[ARC_PANELS]
    }

    /// Arclength from parameter 0 to `t` (wrapped into one period).
    pub fn length_at(&self, t: f64) -> f64 {
        let t = wrap_angle(t);
        let k = ((t / self.panel) as usize).min(ARC_PANELS - 1);
        let a = self.panel * k as f64;
        self.cumulative[k] + gauss5(|s| self.curve_kind.speed(s), a, t)
    }

    /// Parameter whose arclength is `s` (wrapped into one perimeter).
    pub fn param_at(&self, s: f64) -> f64 {
        let total = self.perimeter();
        let s = s.rem_euclid(total);
        let k = match self
            .cumulative
            .binary_search_by(|v| v.partial_cmp(&s).unwrap_or(std::cmp::Ordering::Less))
        {
            Ok(k) => return (self.panel * k as f64).min(TAU - f64::EPSILON),
            Err(k) => k.saturating_sub(1).min(ARC_PANELS - 1),
        };
        let a = self.panel * k as f64;
        let frac = (s - self.cumulative[k]) / (self.cumulative[k + 1] - self.cumulative[k]);
        let mut t = a + frac * self.panel;
        for _ in 0..20 {
            let f = self.cumulative[k] + gauss5(|x| self.curve_kind.speed(x), a, t) - s;
            let step = f / self.curve_kind.speed(t);
            t -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        t
    }
}

/// Half-open membership `θ ∈ [lo, hi)` after wrapping `θ` into `[0, 2π)`.
pub fn in_arc(theta: f64, lo: f64, hi: f64) -> bool {
    let t = wrap_angle(theta);
    t >= lo && t < hi
}
