//! Narrow-band classification of grid nodes around the interface.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{LevelSetField, Projection};
use crate::grid::CartesianGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointClass {
    Inner,
    Outer,
    Exterior,
}

impl PointClass {
    pub fn label(self) -> &'static str {
        match self {
            PointClass::Inner => "inner",
            PointClass::Outer => "outer",
            PointClass::Exterior => "exterior",
        }
    }
}

/// Marks a missing slot in the dense node map and in neighbour tables.
pub const NO_SLOT: u32 = u32::MAX;

/// Offsets stored in the neighbour table, per axis.
pub const NEIGHBOUR_OFFSETS: [isize; 4] = [-2, -1, 1, 2];

#[inline]
pub fn neighbour_entry(axis: usize, offset: isize) -> usize {
    let k = match offset {
        -2 => 0,
        -1 => 1,
        1 => 2,
        2 => 3,
        _ => panic!("neighbour offset {offset} not tabulated"),
    };
    axis * 4 + k
}

pub fn classify(phi: f64, inner_radius: f64, outer_radius: f64) -> PointClass {
    let a = phi.abs();
    if a < inner_radius {
        PointClass::Inner
    } else if a < outer_radius {
        PointClass::Outer
    } else {
        PointClass::Exterior
    }
}

/// Inner tube plus outer extension layer, stored as compact slot arrays.
///
/// Slots enumerate all inner and outer nodes in increasing node index.
#[derive(Clone, Debug)]
pub struct TubeGrid {
    grid: CartesianGrid,
    inner_radius: f64,
    outer_radius: f64,
    slot_of: Vec<u32>,
    nodes: Vec<usize>,
    classes: Vec<PointClass>,
    phi: Vec<f64>,
    projections: Vec<Projection>,
    neighbours: Vec<[u32; 12]>,
    inner: Vec<u32>,
    outer: Vec<u32>,
}

pub fn build_tube(field: &LevelSetField, inner_radius: f64, outer_radius: f64) -> Result<TubeGrid> {
    let grid = field.grid().clone();
    let shape = field.shape();
    if !(inner_radius > 0.0 && inner_radius < outer_radius) {
        return Err(Error::TubeConfig(format!(
            "need 0 < R < R', got R = {inner_radius}, R' = {outer_radius}"
        )));
    }
    let kappa_max = shape.max_curvature();
    if inner_radius * kappa_max >= 1.0 {
        return Err(Error::CurvatureBound {
            radius: inner_radius,
            kappa_max,
            reach: 1.0 / kappa_max,
        });
    }
    let extent = shape.extent();
    for (axis, e) in extent.iter().enumerate().take(grid.dim()) {
        if e + outer_radius + grid.spacing() > CartesianGrid::HALF_WIDTH {
            return Err(Error::TubeConfig(format!(
                "outer layer leaves the box along axis {axis}: extent {e} + R' {outer_radius} exceeds {}",
                CartesianGrid::HALF_WIDTH
            )));
        }
    }

    let nodes: Vec<usize> = (0..grid.node_count())
        .filter(|&i| field.phi(i).abs() < outer_radius)
        .collect();
    if nodes.len() >= NO_SLOT as usize {
        return Err(Error::TubeConfig("tube has too many points".into()));
    }
    let mut slot_of = vec![NO_SLOT; grid.node_count()];
    for (s, &node) in nodes.iter().enumerate() {
        slot_of[node] = s as u32;
    }
    let phi: Vec<f64> = nodes.iter().map(|&i| field.phi(i)).collect();
    let classes: Vec<PointClass> = phi
        .iter()
        .map(|&p| classify(p, inner_radius, outer_radius))
        .collect();
    let projections = nodes
        .par_iter()
        .map(|&i| field.closest_point(&grid.position(i)))
        .collect::<Result<Vec<_>>>()?;

    let neighbours: Vec<[u32; 12]> = nodes
        .iter()
        .map(|&node| {
            let m = grid.multi_index(node);
            let mut table = [NO_SLOT; 12];
            for axis in 0..grid.dim() {
                for &off in &NEIGHBOUR_OFFSETS {
                    if let Some(q) = grid.shift(m, axis, off) {
                        table[neighbour_entry(axis, off)] = slot_of[grid.index_of(q)];
                    }
                }
            }
            table
        })
        .collect();

    let inner: Vec<u32> = (0..nodes.len() as u32)
        .filter(|&s| classes[s as usize] == PointClass::Inner)
        .collect();
    let outer: Vec<u32> = (0..nodes.len() as u32)
        .filter(|&s| classes[s as usize] == PointClass::Outer)
        .collect();

    let tube = TubeGrid {
        grid,
        inner_radius,
        outer_radius,
        slot_of,
        nodes,
        classes,
        phi,
        projections,
        neighbours,
        inner,
        outer,
    };
    for &s in &tube.inner {
        if !tube.stencil_ok(tube.nodes[s as usize], 2) {
            return Err(Error::TubeConfig(format!(
                "stencil of inner node {:?} escapes the outer layer",
                tube.grid.multi_index(tube.nodes[s as usize])
            )));
        }
    }
    Ok(tube)
}

impl TubeGrid {
    pub fn grid(&self) -> &CartesianGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing()
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    /// Number of stored (inner and outer) points.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn inner(&self) -> &[u32] {
        &self.inner
    }

    pub fn outer(&self) -> &[u32] {
        &self.outer
    }

    pub fn class_of_node(&self, node: usize) -> PointClass {
        match self.slot_of[node] {
            NO_SLOT => PointClass::Exterior,
            s => self.classes[s as usize],
        }
    }

    #[inline]
    pub fn class(&self, slot: u32) -> PointClass {
        self.classes[slot as usize]
    }

    #[inline]
    pub fn slot_of(&self, node: usize) -> u32 {
        self.slot_of[node]
    }

    /// Slot of the node with the given multi-index, if it is stored.
    pub fn slot_at(&self, m: [usize; 3]) -> Option<u32> {
        match self.slot_of[self.grid.index_of(m)] {
            NO_SLOT => None,
            s => Some(s),
        }
    }

    #[inline]
    pub fn node(&self, slot: u32) -> usize {
        self.nodes[slot as usize]
    }

    #[inline]
    pub fn phi(&self, slot: u32) -> f64 {
        self.phi[slot as usize]
    }

    #[inline]
    pub fn projection(&self, slot: u32) -> &Projection {
        &self.projections[slot as usize]
    }

    #[inline]
    pub fn neighbours(&self, slot: u32) -> &[u32; 12] {
        &self.neighbours[slot as usize]
    }

    #[inline]
    pub fn neighbour(&self, slot: u32, axis: usize, offset: isize) -> u32 {
        self.neighbours[slot as usize][neighbour_entry(axis, offset)]
    }

    /// True iff every node of the axis-aligned stencil of the given radius
    /// around `node` is inner or outer. The centre itself is not checked.
    pub fn stencil_ok(&self, node: usize, radius: usize) -> bool {
        let m = self.grid.multi_index(node);
        (0..self.grid.dim()).all(|axis| {
            (1..=radius as isize).all(|r| {
                [-r, r].iter().all(|&off| match self.grid.shift(m, axis, off) {
                    Some(q) => self.slot_of[self.grid.index_of(q)] != NO_SLOT,
                    None => false,
                })
            })
        })
    }
}
