//! Push-forward matrices `[I − φH]⁻¹` on tube points and their application
//! to surface fluxes and velocities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{LevelSetField, SurfacePoint};
use crate::linalg::{det2, det3, identity, inverse2, inverse3, mat_vec, Mat3, Vec3};
use crate::tube::TubeGrid;

/// Determinant floor for `I − φH`.
pub const SINGULAR_DET: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingMode {
    #[default]
    #[serde(rename = "pushforward")]
    PushForward,
    Straightforward,
}

impl EmbeddingMode {
    pub fn label(self) -> &'static str {
        match self {
            EmbeddingMode::PushForward => "pushforward",
            EmbeddingMode::Straightforward => "straightforward",
        }
    }
}

impl std::str::FromStr for EmbeddingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pushforward" => Ok(EmbeddingMode::PushForward),
            "straightforward" => Ok(EmbeddingMode::Straightforward),
            other => Err(Error::Config(format!("unknown embedding mode '{other}'"))),
        }
    }
}

/// One matrix per tube slot; the identity everywhere in straightforward mode.
#[derive(Clone, Debug)]
pub struct PushForwardField {
    mode: EmbeddingMode,
    matrices: Vec<Mat3>,
}

pub fn build_pushforward(field: &LevelSetField, tube: &TubeGrid, mode: EmbeddingMode) -> Result<PushForwardField> {
    let matrices = match mode {
        EmbeddingMode::Straightforward => vec![identity(); tube.len()],
        EmbeddingMode::PushForward => {
            let dim = tube.dim();
            (0..tube.len() as u32)
                .into_par_iter()
                .map(|s| {
                    let m = tube.grid().multi_index(tube.node(s));
                    let h = field.hessian(m)?;
                    let phi = tube.phi(s);
                    let mut a = identity();
                    for i in 0..dim {
                        for j in 0..dim {
                            a[i][j] -= phi * h[i][j];
                        }
                    }
                    let (det, inv) = if dim == 2 {
                        (det2(&a), inverse2(&a))
                    } else {
                        (det3(&a), inverse3(&a))
                    };
                    // beyond the focal distance the determinant changes sign
                    match inv {
                        Some(inv) if det >= SINGULAR_DET => Ok(inv),
                        _ => Err(Error::NearSingular { index: m, det }),
                    }
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(PushForwardField { mode, matrices })
}

impl PushForwardField {
    pub fn mode(&self) -> EmbeddingMode {
        self.mode
    }

    #[inline]
    pub fn matrix(&self, slot: u32) -> &Mat3 {
        &self.matrices[slot as usize]
    }

    #[inline]
    pub fn apply(&self, slot: u32, v: &Vec3) -> Vec3 {
        mat_vec(&self.matrices[slot as usize], v)
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

/// `M(x)·F(P(x), u)` for a tube slot.
pub fn embed_flux<F>(pf: &PushForwardField, tube: &TubeGrid, flux: F, slot: u32, u: f64) -> Vec3
where
    F: Fn(&SurfacePoint, f64) -> Vec3,
{
    pf.apply(slot, &flux(&tube.projection(slot).surface, u))
}

/// `M(x)·V(P(x))` for a tube slot.
pub fn embed_velocity<V>(pf: &PushForwardField, tube: &TubeGrid, velocity: V, slot: u32) -> Vec3
where
    V: Fn(&SurfacePoint) -> Vec3,
{
    pf.apply(slot, &velocity(&tube.projection(slot).surface))
}

/// Embedded vector field for every slot.
pub fn embed_field<V>(pf: &PushForwardField, tube: &TubeGrid, velocity: V) -> Vec<Vec3>
where
    V: Fn(&SurfacePoint) -> Vec3 + Sync,
{
    (0..tube.len() as u32)
        .into_par_iter()
        .map(|s| embed_velocity(pf, tube, &velocity, s))
        .collect()
}
