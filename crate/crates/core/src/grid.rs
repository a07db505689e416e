use crate::error::{Error, Result};
use crate::linalg::Vec3;

/// Uniform node-centred Cartesian grid on the box `[-2, 2]^d`.
///
/// Nodes are numbered with the x index running fastest, so sorting by linear
/// index orders nodes lexicographically by `(k, j, i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CartesianGrid {
    dim: usize,
    n: usize,
    dx: f64,
}

impl CartesianGrid {
    pub const HALF_WIDTH: f64 = 2.0;

    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::TubeConfig(format!("dimension must be 2 or 3, got {dim}")));
        }
        if n < 5 {
            return Err(Error::TubeConfig(format!("need at least 5 points per axis, got {n}")));
        }
        Ok(Self {
            dim,
            n,
            dx: 2.0 * Self::HALF_WIDTH / (n - 1) as f64,
        })
    }

    /// Grid with the given spacing (rounded to the nearest admissible point count).
    pub fn with_spacing(dim: usize, dx: f64) -> Result<Self> {
        let n = (2.0 * Self::HALF_WIDTH / dx).round() as usize + 1;
        Self::new(dim, n)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.dx
    }

    pub fn node_count(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    #[inline]
    pub fn index_of(&self, m: [usize; 3]) -> usize {
        m[0] + self.n * (m[1] + self.n * m[2])
    }

    #[inline]
    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx % n, (idx / n) % n, idx / (n * n)]
    }

    /// Coordinate of node `i` along one axis; exactly symmetric about the origin.
    #[inline]
    pub fn coordinate(&self, i: usize) -> f64 {
        let m = (self.n - 1) as f64;
        Self::HALF_WIDTH * (2.0 * i as f64 - m) / m
    }

    pub fn position_of(&self, m: [usize; 3]) -> Vec3 {
        let mut x = [0.0; 3];
        for (axis, xi) in x.iter_mut().enumerate().take(self.dim) {
            *xi = self.coordinate(m[axis]);
        }
        x
    }

    pub fn position(&self, idx: usize) -> Vec3 {
        self.position_of(self.multi_index(idx))
    }

    /// Multi-index shifted by `delta` along `axis`, if it stays on the grid.
    #[inline]
    pub fn shift(&self, m: [usize; 3], axis: usize, delta: isize) -> Option<[usize; 3]> {
        let v = m[axis] as isize + delta;
        if v < 0 || v >= self.n as isize {
            return None;
        }
        let mut out = m;
        out[axis] = v as usize;
        Some(out)
    }

    /// Index of the grid cell containing coordinate `x` along one axis and the
    /// fractional offset inside it.
    pub fn locate(&self, x: f64) -> (isize, f64) {
        let s = (x + Self::HALF_WIDTH) / self.dx;
        let i = s.floor();
        (i as isize, s - i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_symmetry() {
        let g = CartesianGrid::new(2, 81).unwrap();
        assert!((g.spacing() - 0.05).abs() < 1e-15);
        assert_eq!(g.coordinate(40), 0.0);
        assert_eq!(g.coordinate(0), -2.0);
        assert_eq!(g.coordinate(80), 2.0);
        assert_eq!(g.coordinate(10), -g.coordinate(70));
    }

    #[test]
    fn index_round_trip() {
        let g = CartesianGrid::new(3, 9).unwrap();
        for idx in [0, 5, 80, 728] {
            assert_eq!(g.index_of(g.multi_index(idx)), idx);
        }
        assert_eq!(g.node_count(), 729);
    }

    #[test]
    fn with_spacing_picks_point_count() {
        assert_eq!(CartesianGrid::with_spacing(2, 0.025).unwrap().points_per_axis(), 161);
        assert_eq!(CartesianGrid::with_spacing(3, 0.0125).unwrap().points_per_axis(), 321);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(CartesianGrid::new(1, 10).is_err());
        assert!(CartesianGrid::new(2, 3).is_err());
    }
}
