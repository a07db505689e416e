//! Experiment catalog: shapes, surface fluxes and velocities, initial data and
//! exact solutions.

mod oracle;
mod reference;

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI, SQRT_2, TAU};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use oracle::{burgers_box, burgers_implicit, burgers_oracle_circle, torus_g, torus_profile};
pub use reference::{reference_1d_periodic, Periodic1d, Periodic1dEquation};

use crate::error::{Error, Result};
use crate::geometry::{ArcLength, EllipseCurve, Shape, StarCurve, SurfacePoint};
use crate::linalg::Vec3;
use crate::pushforward::{embed_field, PushForwardField};
use crate::schemes::{GridField, OperatorKind, OuterWriter, ScalarFlux};
use crate::tube::TubeGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentId {
    A1,
    A2,
    A3,
    A4,
    B1,
    B2u1,
    B2u2,
    B2u3,
    B3,
    M1,
    M2,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 11] = [
        ExperimentId::A1,
        ExperimentId::A2,
        ExperimentId::A3,
        ExperimentId::A4,
        ExperimentId::B1,
        ExperimentId::B2u1,
        ExperimentId::B2u2,
        ExperimentId::B2u3,
        ExperimentId::B3,
        ExperimentId::M1,
        ExperimentId::M2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::A1 => "A1",
            ExperimentId::A2 => "A2",
            ExperimentId::A3 => "A3",
            ExperimentId::A4 => "A4",
            ExperimentId::B1 => "B1",
            ExperimentId::B2u1 => "B2u1",
            ExperimentId::B2u2 => "B2u2",
            ExperimentId::B2u3 => "B2u3",
            ExperimentId::B3 => "B3",
            ExperimentId::M1 => "M1",
            ExperimentId::M2 => "M2",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentId::A1 => "advection on the unit circle, u0 = sin(theta), t = 0.5",
            ExperimentId::A2 => "advection by arclength on the ellipse a = 0.75, b = 1.25, t = L/4",
            ExperimentId::A3 => "advection of a three-level step profile on the star r = 1 + 0.5 sin^2(3 theta), t = L",
            ExperimentId::A4 => "advection in eta on the torus R = 1, r = 0.5, t = 1",
            ExperimentId::B1 => "Burgers on the unit circle, u0 = sin(theta) + 0.5, t = 0.9",
            ExperimentId::B2u1 => "Burgers on the unit sphere, u0 = sin(theta) + 0.5, t = 0.5",
            ExperimentId::B2u2 => "Burgers on the unit sphere, box initial data, t = 4 pi",
            ExperimentId::B2u3 => "Burgers on the unit sphere, Y(2,-1) + Y(4,-3), t = 4 pi",
            ExperimentId::B3 => "Burgers on the torus along both principal directions, t = 2 pi",
            ExperimentId::M1 => "mass study: Burgers on the unit circle with box initial data, t = 2 pi",
            ExperimentId::M2 => "mass study: Burgers on the unit sphere with box initial data, t = 2 pi",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown experiment '{s}'")))
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Equation {
    /// `u_t + V·∇_Γ u = 0` with a tangential velocity `V`.
    Advection,
    /// `u_t + ∇_Γ·(f(u) T) = 0` with a tangential direction field `T`.
    Conservation(ScalarFlux),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialCondition {
    SinTheta,
    SinThetaPlusHalf,
    EllipseCosSquared,
    StarBands,
    TorusBump,
    CircleBox,
    SphereBox,
    SphereHarmonics,
    TorusProduct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    None,
    /// Rigid transport along the surface parameter.
    Translation,
    /// Implicit pre-shock Burgers solution along azimuthal circles.
    BurgersImplicit,
    /// Rarefaction/shock solution of the box data along azimuthal circles.
    BurgersBox,
}

#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub id: ExperimentId,
    pub shape: Shape,
    pub equation: Equation,
    pub initial: InitialCondition,
    pub oracle: OracleKind,
    pub t_final: f64,
    /// Exact total mass, where known.
    pub exact_mass: Option<f64>,
    /// Errors are measured only where `|latitude| ≤` this bound (sphere).
    pub latitude_band: Option<f64>,
    arclength: Option<ArcLength>,
}

const ELLIPSE: EllipseCurve = EllipseCurve { a: 0.75, b: 1.25 };
const STAR: StarCurve = StarCurve { r0: 1.0, a: 0.5, b: 3.0 };
const TORUS_MAJOR: f64 = 1.0;
const TORUS_MINOR: f64 = 0.5;

impl ProblemSpec {
    pub fn new(id: ExperimentId) -> Self {
        use ExperimentId::*;
        let circle = Shape::Circle { radius: 1.0 };
        let sphere = Shape::Sphere { radius: 1.0 };
        let torus = Shape::Torus {
            major: TORUS_MAJOR,
            minor: TORUS_MINOR,
        };
        let burgers = Equation::Conservation(ScalarFlux::Burgers);
        let (shape, equation, initial, oracle) = match id {
            A1 => (circle, Equation::Advection, InitialCondition::SinTheta, OracleKind::Translation),
            A2 => (
                Shape::Ellipse { a: ELLIPSE.a, b: ELLIPSE.b },
                Equation::Advection,
                InitialCondition::EllipseCosSquared,
                OracleKind::Translation,
            ),
            A3 => (
                Shape::Star { r0: STAR.r0, a: STAR.a, b: STAR.b },
                Equation::Advection,
                InitialCondition::StarBands,
                OracleKind::Translation,
            ),
            A4 => (torus, Equation::Advection, InitialCondition::TorusBump, OracleKind::Translation),
            B1 => (circle, burgers, InitialCondition::SinThetaPlusHalf, OracleKind::BurgersImplicit),
            B2u1 => (sphere, burgers, InitialCondition::SinThetaPlusHalf, OracleKind::BurgersImplicit),
            B2u2 => (sphere, burgers, InitialCondition::SphereBox, OracleKind::BurgersBox),
            B2u3 => (sphere, burgers, InitialCondition::SphereHarmonics, OracleKind::None),
            B3 => (torus, burgers, InitialCondition::TorusProduct, OracleKind::None),
            M1 => (circle, burgers, InitialCondition::CircleBox, OracleKind::BurgersBox),
            M2 => (sphere, burgers, InitialCondition::SphereBox, OracleKind::BurgersBox),
        };
        let arclength = match id {
            A2 => Some(ArcLength::ellipse(ELLIPSE)),
            A3 => Some(ArcLength::star(STAR)),
            _ => None,
        };
        let perimeter = arclength.as_ref().map(|a| a.perimeter()).unwrap_or(TAU);
        let t_final = match id {
            A1 => 0.5,
            A2 => perimeter / 4.0,
            A3 => perimeter,
            A4 => 1.0,
            B1 => 0.9,
            B2u1 => 0.5,
            B2u2 | B2u3 => 4.0 * PI,
            B3 | M1 | M2 => TAU,
        };
        let exact_mass = match id {
            M1 => Some(PI / 2.0),
            M2 | B2u2 => Some(PI / SQRT_2),
            _ => None,
        };
        let latitude_band = match id {
            B2u1 => Some(FRAC_PI_6),
            _ => None,
        };
        Self {
            id,
            shape,
            equation,
            initial,
            oracle,
            t_final,
            exact_mass,
            latitude_band,
            arclength,
        }
    }

    /// Perimeter of a closed curve; `None` for surfaces.
    pub fn perimeter(&self) -> Option<f64> {
        match self.shape {
            Shape::Circle { radius } => Some(TAU * radius),
            Shape::Ellipse { .. } | Shape::Star { .. } => self.arclength.as_ref().map(|a| a.perimeter()),
            _ => None,
        }
    }

    pub fn has_oracle(&self) -> bool {
        self.oracle != OracleKind::None
    }

    /// Arclength coordinate of a curve point, when the problem is posed in it.
    fn arclength_of(&self, p: &SurfacePoint) -> Option<f64> {
        self.arclength.as_ref().map(|a| a.length_at(p.param[0]))
    }

    /// Tangential velocity (advection) or flux direction (conservation) at a
    /// surface point.
    pub fn tangent(&self, p: &SurfacePoint) -> Vec3 {
        let [x, y, _] = p.position;
        match self.id {
            ExperimentId::A1 | ExperimentId::B1 | ExperimentId::M1 => {
                let (s, c) = p.param[0].sin_cos();
                [-s, c, 0.0]
            }
            ExperimentId::A2 => {
                let (a2, b2) = (ELLIPSE.a * ELLIPSE.a, ELLIPSE.b * ELLIPSE.b);
                let v = [-y / b2, x / a2];
                let len = v[0].hypot(v[1]);
                [v[0] / len, v[1] / len, 0.0]
            }
            ExperimentId::A3 => {
                let theta = y.atan2(x);
                let k = STAR.a * STAR.b * (2.0 * STAR.b * theta).sin();
                let v = [-y + k * theta.cos(), x + k * theta.sin()];
                let len = v[0].hypot(v[1]);
                [v[0] / len, v[1] / len, 0.0]
            }
            ExperimentId::A4 => {
                let (st, ct) = p.param[0].sin_cos();
                let (se, ce) = p.param[1].sin_cos();
                [-TORUS_MINOR * se * ct, -TORUS_MINOR * se * st, TORUS_MINOR * ce]
            }
            ExperimentId::B2u1 | ExperimentId::B2u2 | ExperimentId::B2u3 | ExperimentId::M2 => {
                let rho = x.hypot(y);
                if rho == 0.0 {
                    [0.0; 3]
                } else {
                    [-y / rho, x / rho, 0.0]
                }
            }
            ExperimentId::B3 => {
                let (st, ct) = p.param[0].sin_cos();
                let (se, ce) = p.param[1].sin_cos();
                [-st - se * ct, ct - se * st, ce]
            }
        }
    }

    /// Initial value at a surface point, evaluated from its parameters.
    pub fn initial_value(&self, p: &SurfacePoint) -> f64 {
        let theta = p.param[0];
        match self.initial {
            InitialCondition::SinTheta => theta.sin(),
            InitialCondition::SinThetaPlusHalf => theta.sin() + 0.5,
            InitialCondition::EllipseCosSquared => {
                let l = self.perimeter().expect("ellipse perimeter");
                let s = self.arclength_of(p).expect("ellipse arclength");
                (TAU * s / l).cos().powi(2)
            }
            InitialCondition::StarBands => star_bands(theta),
            InitialCondition::TorusBump => torus_profile(p.param[1]),
            InitialCondition::CircleBox => burgers_box(theta, 0.0).expect("t = 0"),
            InitialCondition::SphereBox => sphere_box(theta, p.param[1]),
            InitialCondition::SphereHarmonics => sphere_harmonics(theta, p.param[1]),
            InitialCondition::TorusProduct => theta.sin() * p.param[1].cos(),
        }
    }

    /// Exact solution at a surface point and time.
    pub fn exact(&self, p: &SurfacePoint, t: f64) -> Result<f64> {
        let theta = p.param[0];
        match self.oracle {
            OracleKind::None => Err(Error::OracleFailed {
                param: theta,
                time: t,
                reason: format!("experiment {} has no exact solution", self.id),
            }),
            OracleKind::Translation => Ok(self.advection_oracle(p, t)),
            OracleKind::BurgersImplicit => {
                let rho = self.azimuthal_radius(p);
                if rho == 0.0 {
                    return Ok(self.initial_value(p));
                }
                burgers_oracle_circle(theta, t / rho)
            }
            OracleKind::BurgersBox => match self.shape {
                Shape::Sphere { .. } => {
                    let lat = p.param[1];
                    if lat.abs() >= FRAC_PI_4 {
                        Ok(0.0)
                    } else if t == 0.0 {
                        Ok(sphere_box(theta, lat))
                    } else {
                        burgers_box(theta, t / lat.cos())
                    }
                }
                _ => burgers_box(theta, t),
            },
        }
    }

    fn azimuthal_radius(&self, p: &SurfacePoint) -> f64 {
        match self.shape {
            Shape::Sphere { .. } => p.param[1].cos().max(0.0),
            _ => 1.0,
        }
    }

    /// `u₀(parameter − t)` for unit-speed transport.
    pub fn advection_oracle(&self, p: &SurfacePoint, t: f64) -> f64 {
        match self.id {
            ExperimentId::A1 => (p.param[0] - t).sin(),
            ExperimentId::A2 => {
                let l = self.perimeter().expect("ellipse perimeter");
                let s = self.arclength_of(p).expect("ellipse arclength") - t;
                (TAU * s / l).cos().powi(2)
            }
            ExperimentId::A3 => {
                let arc = self.arclength.as_ref().expect("star arclength");
                let s = arc.length_at(p.param[0]) - t;
                star_bands(arc.param_at(s))
            }
            ExperimentId::A4 => torus_profile(p.param[1] - t),
            _ => self.initial_value(p),
        }
    }

    pub fn operator_kind(&self, pf: &PushForwardField, tube: &TubeGrid) -> OperatorKind {
        let field = embed_field(pf, tube, |p| self.tangent(p));
        match self.equation {
            Equation::Advection => OperatorKind::Advection { velocity: field },
            Equation::Conservation(flux) => OperatorKind::Conservation { flux, directions: field },
        }
    }

    /// `ũ(x, 0) = u₀(P(x))` on every tube slot.
    pub fn extend_initial(&self, tube: &TubeGrid) -> GridField {
        let values = (0..tube.len() as u32)
            .into_par_iter()
            .map(|s| self.initial_value(&tube.projection(s).surface))
            .collect();
        GridField { values, time: 0.0 }
    }

    /// Writer for the exact-outer boundary condition.
    pub fn exact_outer(&self) -> Result<OuterWriter<'_>> {
        if !self.has_oracle() {
            return Err(Error::Problem(format!(
                "experiment {} has no exact solution for the outer layer",
                self.id
            )));
        }
        Ok(Box::new(move |t, tube: &TubeGrid, u: &mut [f64]| {
            let values = tube
                .outer()
                .par_iter()
                .map(|&s| self.exact(&tube.projection(s).surface, t))
                .collect::<Result<Vec<_>>>()?;
            for (&s, v) in tube.outer().iter().zip(values) {
                u[s as usize] = v;
            }
            Ok(())
        }))
    }
}

/// Three-level data on half-open angular bands of width π/3.
pub fn star_bands(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    let band = ((t / (PI / 3.0)).floor() as usize).min(5);
    // bands 0..5 carry 1, 2, 3, 1, 2, 3
    (band % 3 + 1) as f64
}

fn sphere_box(theta: f64, lat: f64) -> f64 {
    let centred = (theta + PI).rem_euclid(TAU) - PI;
    if lat.abs() < FRAC_PI_4 && centred.abs() < FRAC_PI_4 {
        1.0
    } else {
        0.0
    }
}

/// Real orthonormal `Y_{2,−1} + Y_{4,−3}` (sine-type for negative order,
/// no Condon–Shortley phase).
pub fn sphere_harmonics(theta: f64, lat: f64) -> f64 {
    let x = lat.sin();
    let s = lat.cos();
    let n21 = (5.0 / (4.0 * PI) / 6.0).sqrt();
    let n43 = (9.0 / (4.0 * PI) / 5040.0).sqrt();
    let p21 = 3.0 * x * s;
    let p43 = 105.0 * x * s.powi(3);
    SQRT_2 * (n21 * p21 * theta.sin() + n43 * p43 * (3.0 * theta).sin())
}
