//! Implicit interfaces: shapes, signed distances, closest points and
//! sampled level-set derivatives.

pub mod curve;
mod field;
mod shape;

pub use curve::{ArcLength, EllipseCurve, PlaneCurve, StarCurve};
pub use field::LevelSetField;
pub use shape::{Projection, Shape, SurfacePoint};
