//! Scalar conservation laws and advection on implicit curves and surfaces,
//! solved on a narrow band of a Cartesian grid.

pub mod error;
pub mod geometry;
pub mod grid;
pub mod linalg;
pub mod pushforward;
pub mod schemes;
pub mod tube;
pub mod problems;
pub mod analysis;
pub mod cli;

pub use error::{Error, Result};
