use crate::linalg::Vec3;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("geometry: closest-point search did not converge at {point:?} (residual {residual:e})")]
    MinimizerDiverged { point: Vec3, residual: f64 },

    #[error("geometry: closest point of {point:?} is not unique")]
    NonUniqueProjection { point: Vec3 },

    #[error("geometry: central-difference stencil at node {index:?} leaves the grid")]
    StencilOutsideGrid { index: [usize; 3] },

    #[error("tube: radius {radius} violates the reach bound 1/kappa_max = {reach} (kappa_max = {kappa_max})")]
    CurvatureBound {
        radius: f64,
        kappa_max: f64,
        reach: f64,
    },

    #[error("tube: {0}")]
    TubeConfig(String),

    #[error("pushforward: I - phi*H is near-singular at node {index:?} (det = {det:e})")]
    NearSingular { index: [usize; 3], det: f64 },

    #[error("schemes: non-finite value at {point:?} (t = {time})")]
    NonFinite { point: Vec3, time: f64 },

    #[error("schemes: {0}")]
    SchemeConfig(String),

    #[error("problems: oracle failed at parameter {param} (t = {time}): {reason}")]
    OracleFailed {
        param: f64,
        time: f64,
        reason: String,
    },

    #[error("problems: {0}")]
    Problem(String),

    #[error("analysis: interpolation stencil of sample {sample} at {point:?} leaves the tube")]
    InterpolationOutsideTube { sample: usize, point: Vec3 },

    #[error("cli: {0}")]
    Config(String),

    #[error("cli: {0}")]
    Io(#[from] std::io::Error),

    #[error("cli: {0}")]
    Json(#[from] serde_json::Error),
}
