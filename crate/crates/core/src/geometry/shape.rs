use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::curve::{project_onto_curve, sampled_max_curvature, EllipseCurve, PlaneCurve, StarCurve};
use crate::error::{Error, Result};
use crate::linalg::{norm, sub, Vec3};

/// Implicit interface catalog. Lengths are in box units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
    Star { r0: f64, a: f64, b: f64 },
    Sphere { radius: f64 },
    Torus { major: f64, minor: f64 },
}

/// A point on the interface with its surface parameters and outward normal.
///
/// Parameters: circle/star `[θ, 0]` (polar angle), ellipse `[t, 0]`
/// (`(a cos t, b sin t)`), sphere `[θ, latitude]`, torus `[θ, η]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub position: Vec3,
    pub param: [f64; 2],
    pub normal: Vec3,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projection {
    pub surface: SurfacePoint,
    /// Signed distance of the query point (negative inside).
    pub distance: f64,
}

const DEGENERATE: f64 = 1e-14;
const CURVATURE_SAMPLES: usize = 20_000;

#[inline]
fn sign(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Circle { .. } | Shape::Ellipse { .. } | Shape::Star { .. } => 2,
            Shape::Sphere { .. } | Shape::Torus { .. } => 3,
        }
    }

    pub fn has_closed_form_distance(&self) -> bool {
        matches!(self, Shape::Circle { .. } | Shape::Sphere { .. } | Shape::Torus { .. })
    }

    fn ellipse_curve(a: f64, b: f64) -> EllipseCurve {
        EllipseCurve { a, b }
    }

    fn star_curve(r0: f64, a: f64, b: f64) -> StarCurve {
        StarCurve { r0, a, b }
    }

    /// Level function whose zero set is the interface. Signed distance for
    /// circle, sphere and torus; the raw implicit form for ellipse and star.
    pub fn level_function(&self, x: &Vec3) -> f64 {
        match *self {
            Shape::Circle { radius } => x[0].hypot(x[1]) - radius,
            Shape::Sphere { radius } => norm(x) - radius,
            Shape::Torus { major, minor } => {
                (x[2] * x[2] + (x[0].hypot(x[1]) - major).powi(2)).sqrt() - minor
            }
            Shape::Ellipse { a, b } => ((x[0] / a).powi(2) + (x[1] / b).powi(2)).sqrt() - 1.0,
            Shape::Star { r0, a, b } => {
                x[0].hypot(x[1]) - Self::star_curve(r0, a, b).radius(x[1].atan2(x[0]))
            }
        }
    }

    pub fn signed_distance(&self, x: &Vec3) -> Result<f64> {
        match *self {
            Shape::Circle { .. } | Shape::Sphere { .. } | Shape::Torus { .. } => {
                Ok(self.level_function(x))
            }
            Shape::Ellipse { a, b } => {
                let p = project_onto_curve(&Self::ellipse_curve(a, b), [x[0], x[1]])?;
                Ok(sign(self.level_function(x)) * p.distance)
            }
            Shape::Star { r0, a, b } => {
                let p = project_onto_curve(&Self::star_curve(r0, a, b), [x[0], x[1]])?;
                Ok(sign(self.level_function(x)) * p.distance)
            }
        }
    }

    /// Closest point on the interface together with its parameters.
    pub fn project(&self, x: &Vec3) -> Result<Projection> {
        match *self {
            Shape::Circle { radius } => {
                let rho = x[0].hypot(x[1]);
                if rho < DEGENERATE {
                    return Err(Error::NonUniqueProjection { point: *x });
                }
                let n = [x[0] / rho, x[1] / rho, 0.0];
                Ok(Projection {
                    surface: SurfacePoint {
                        position: [radius * n[0], radius * n[1], 0.0],
                        param: [x[1].atan2(x[0]), 0.0],
                        normal: n,
                    },
                    distance: rho - radius,
                })
            }
            Shape::Sphere { radius } => {
                let rho = norm(x);
                if rho < DEGENERATE {
                    return Err(Error::NonUniqueProjection { point: *x });
                }
                let n = [x[0] / rho, x[1] / rho, x[2] / rho];
                Ok(Projection {
                    surface: SurfacePoint {
                        position: [radius * n[0], radius * n[1], radius * n[2]],
                        param: [x[1].atan2(x[0]), n[2].clamp(-1.0, 1.0).asin()],
                        normal: n,
                    },
                    distance: rho - radius,
                })
            }
            Shape::Torus { major, minor } => {
                let rho = x[0].hypot(x[1]);
                if rho < DEGENERATE {
                    return Err(Error::NonUniqueProjection { point: *x });
                }
                let centre = [major * x[0] / rho, major * x[1] / rho, 0.0];
                let q = sub(x, &centre);
                let qn = norm(&q);
                if qn < DEGENERATE {
                    return Err(Error::NonUniqueProjection { point: *x });
                }
                let n = [q[0] / qn, q[1] / qn, q[2] / qn];
                Ok(Projection {
                    surface: SurfacePoint {
                        position: [
                            centre[0] + minor * n[0],
                            centre[1] + minor * n[1],
                            minor * n[2],
                        ],
                        param: [x[1].atan2(x[0]), x[2].atan2(rho - major)],
                        normal: n,
                    },
                    distance: qn - minor,
                })
            }
            Shape::Ellipse { a, b } => {
                let curve = Self::ellipse_curve(a, b);
                self.project_curve(&curve, x)
            }
            Shape::Star { r0, a, b } => {
                let curve = Self::star_curve(r0, a, b);
                self.project_curve(&curve, x)
            }
        }
    }

    fn project_curve<C: PlaneCurve>(&self, curve: &C, x: &Vec3) -> Result<Projection> {
        let p = project_onto_curve(curve, [x[0], x[1]])?;
        let n = curve.normal(p.param);
        Ok(Projection {
            surface: SurfacePoint {
                position: [p.point[0], p.point[1], 0.0],
                param: [p.param, 0.0],
                normal: [n[0], n[1], 0.0],
            },
            distance: sign(self.level_function(x)) * p.distance,
        })
    }

    /// Interface point at the given parameters.
    pub fn surface_point(&self, param: [f64; 2]) -> SurfacePoint {
        match *self {
            Shape::Circle { radius } => {
                let (s, c) = param[0].sin_cos();
                SurfacePoint {
                    position: [radius * c, radius * s, 0.0],
                    param: [param[0], 0.0],
                    normal: [c, s, 0.0],
                }
            }
            Shape::Ellipse { a, b } => Self::curve_point(&Self::ellipse_curve(a, b), param[0]),
            Shape::Star { r0, a, b } => Self::curve_point(&Self::star_curve(r0, a, b), param[0]),
            Shape::Sphere { radius } => {
                let (st, ct) = param[0].sin_cos();
                let (sl, cl) = param[1].sin_cos();
                let n = [cl * ct, cl * st, sl];
                SurfacePoint {
                    position: [radius * n[0], radius * n[1], radius * n[2]],
                    param,
                    normal: n,
                }
            }
            Shape::Torus { major, minor } => {
                let (st, ct) = param[0].sin_cos();
                let (se, ce) = param[1].sin_cos();
                let rho = major + minor * ce;
                SurfacePoint {
                    position: [rho * ct, rho * st, minor * se],
                    param,
                    normal: [ce * ct, ce * st, se],
                }
            }
        }
    }

    fn curve_point<C: PlaneCurve>(curve: &C, s: f64) -> SurfacePoint {
        let p = curve.point(s);
        let n = curve.normal(s);
        SurfacePoint {
            position: [p[0], p[1], 0.0],
            param: [s, 0.0],
            normal: [n[0], n[1], 0.0],
        }
    }

    /// Largest absolute principal curvature of the interface.
    pub fn max_curvature(&self) -> f64 {
        match *self {
            Shape::Circle { radius } | Shape::Sphere { radius } => 1.0 / radius,
            Shape::Torus { major, minor } => (1.0 / minor).max(1.0 / (major - minor)),
            Shape::Ellipse { a, b } => a.max(b) / a.min(b).powi(2),
            Shape::Star { r0, a, b } => {
                sampled_max_curvature(&Self::star_curve(r0, a, b), CURVATURE_SAMPLES)
            }
        }
    }

    /// Half-widths of the axis-aligned bounding box centred at the origin.
    pub fn extent(&self) -> Vec3 {
        match *self {
            Shape::Circle { radius } => [radius, radius, 0.0],
            Shape::Sphere { radius } => [radius; 3],
            Shape::Torus { major, minor } => [major + minor, major + minor, minor],
            Shape::Ellipse { a, b } => [a, b, 0.0],
            Shape::Star { r0, a, .. } => [r0 + a, r0 + a, 0.0],
        }
    }

    /// Speed `|dX/dparam|` of the first surface parameter, used for curve
    /// quadrature weights.
    pub fn curve_speed(&self, s: f64) -> Option<f64> {
        match *self {
            Shape::Circle { radius } => Some(radius),
            Shape::Ellipse { a, b } => Some(Self::ellipse_curve(a, b).speed(s)),
            Shape::Star { r0, a, b } => Some(Self::star_curve(r0, a, b).speed(s)),
            _ => None,
        }
    }

    /// Unit tangent in the direction of increasing curve parameter.
    pub fn curve_tangent(&self, s: f64) -> Option<Vec3> {
        let d = match *self {
            Shape::Circle { .. } => [-s.sin(), s.cos()],
            Shape::Ellipse { a, b } => Self::ellipse_curve(a, b).d1(s),
            Shape::Star { r0, a, b } => Self::star_curve(r0, a, b).d1(s),
            _ => return None,
        };
        let len = d[0].hypot(d[1]);
        Some([d[0] / len, d[1] / len, 0.0])
    }

    pub fn perimeter_or_area(&self) -> f64 {
        match *self {
            Shape::Circle { radius } => TAU * radius,
            Shape::Sphere { radius } => 2.0 * TAU * radius * radius,
            Shape::Torus { major, minor } => TAU * TAU * major * minor,
            Shape::Ellipse { a, b } => super::curve::ArcLength::ellipse(Self::ellipse_curve(a, b)).perimeter(),
            Shape::Star { r0, a, b } => super::curve::ArcLength::star(Self::star_curve(r0, a, b)).perimeter(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;
    use proptest::prelude::*;

    const TORUS: Shape = Shape::Torus { major: 1.0, minor: 0.5 };

    #[test]
    fn circle_examples() {
        let c = Shape::Circle { radius: 1.0 };
        assert_eq!(c.signed_distance(&[2.0, 0.0, 0.0]).unwrap(), 1.0);
        let p = c.project(&[2.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.surface.position, [1.0, 0.0, 0.0]);
        let p = c.project(&[0.0, 0.5, 0.0]).unwrap();
        assert!((p.surface.position[0]).abs() < 1e-15 && (p.surface.position[1] - 1.0).abs() < 1e-15);
        assert!(c.project(&[0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn torus_surface_point_has_zero_distance() {
        assert!(TORUS.signed_distance(&[1.0, 0.0, 0.5]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn ellipse_distance_on_major_axis() {
        let e = Shape::Ellipse { a: 0.75, b: 1.25 };
        assert!((e.signed_distance(&[1.5, 0.0, 0.0]).unwrap() - 0.75).abs() < 1e-12);
        assert!((e.signed_distance(&[0.5, 0.0, 0.0]).unwrap() + 0.25).abs() < 1e-12);
    }

    #[test]
    fn zero_level_counts_as_outside() {
        assert_eq!(sign(0.0), 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn torus_projection_idempotent(t in -3.1f64..3.1, e in -3.1f64..3.1, h in -0.3f64..0.3) {
            let s = TORUS.surface_point([t, e]);
            let x = [
                s.position[0] + h * s.normal[0],
                s.position[1] + h * s.normal[1],
                s.position[2] + h * s.normal[2],
            ];
            let p = TORUS.project(&x).unwrap();
            prop_assert!((p.distance - h).abs() < 1e-12);
            let q = TORUS.project(&p.surface.position).unwrap();
            prop_assert!(norm(&sub(&q.surface.position, &p.surface.position)) < 1e-10);
            prop_assert!((p.surface.param[0] - t).abs() < 1e-10);
            prop_assert!((p.surface.param[1] - e).abs() < 1e-10);
        }

        #[test]
        fn sphere_projection_round_trip(t in -3.1f64..3.1, lat in -1.5f64..1.5, h in -0.3f64..0.3) {
            let sph = Shape::Sphere { radius: 1.0 };
            let s = sph.surface_point([t, lat]);
            let x = [
                (1.0 + h) * s.position[0],
                (1.0 + h) * s.position[1],
                (1.0 + h) * s.position[2],
            ];
            let p = sph.project(&x).unwrap();
            prop_assert!((p.distance - h).abs() < 1e-12);
            prop_assert!((p.surface.param[0] - t).abs() < 1e-10);
            prop_assert!((p.surface.param[1] - lat).abs() < 1e-10);
        }

        #[test]
        fn curve_projection_normal_is_radial_direction(t in 0.0f64..6.28, h in -0.08f64..0.08) {
            let star = Shape::Star { r0: 1.0, a: 0.5, b: 3.0 };
            let s = star.surface_point([t, 0.0]);
            let x = [s.position[0] + h * s.normal[0], s.position[1] + h * s.normal[1], 0.0];
            let p = star.project(&x).unwrap();
            prop_assert!((p.distance - h).abs() < 1e-9);
            // the displacement to the closest point is along the returned normal
            let d = sub(&x, &p.surface.position);
            prop_assert!((dot(&d, &p.surface.normal) - h).abs() < 1e-9);
        }
    }

    #[test]
    fn max_curvatures() {
        assert_eq!(TORUS.max_curvature(), 2.0);
        assert!((Shape::Star { r0: 1.0, a: 0.5, b: 3.0 }.max_curvature() - 8.0).abs() < 1e-6);
    }
}
