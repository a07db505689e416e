use rayon::prelude::*;

use super::shape::{Projection, Shape};
use crate::error::{Error, Result};
use crate::grid::CartesianGrid;
use crate::linalg::{Mat3, Vec3};

/// Signed distance sampled at every grid node, with central-difference
/// derivatives on demand.
#[derive(Clone, Debug)]
pub struct LevelSetField {
    shape: Shape,
    grid: CartesianGrid,
    phi: Vec<f64>,
}

impl LevelSetField {
    pub fn new(shape: Shape, grid: CartesianGrid) -> Result<Self> {
        if shape.dim() != grid.dim() {
            return Err(Error::TubeConfig(format!(
                "shape is {}-dimensional but the grid is {}-dimensional",
                shape.dim(),
                grid.dim()
            )));
        }
        let phi = (0..grid.node_count())
            .into_par_iter()
            .map(|idx| shape.signed_distance(&grid.position(idx)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { shape, grid, phi })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn grid(&self) -> &CartesianGrid {
        &self.grid
    }

    #[inline]
    pub fn phi(&self, node: usize) -> f64 {
        self.phi[node]
    }

    pub fn signed_distance(&self, x: &Vec3) -> Result<f64> {
        self.shape.signed_distance(x)
    }

    /// `P(x) = x − φ(x)∇φ(x)`; evaluated in closed form for distance shapes
    /// and by the curve minimizer otherwise.
    pub fn closest_point(&self, x: &Vec3) -> Result<Projection> {
        self.shape.project(x)
    }

    fn sample(&self, m: [usize; 3], offsets: &[(usize, isize)]) -> Result<f64> {
        let mut p = m;
        for &(axis, d) in offsets {
            p = self
                .grid
                .shift(p, axis, d)
                .ok_or(Error::StencilOutsideGrid { index: m })?;
        }
        Ok(self.phi[self.grid.index_of(p)])
    }

    /// Second-order central-difference gradient.
    pub fn gradient(&self, m: [usize; 3]) -> Result<Vec3> {
        let h = self.grid.spacing();
        let mut g = [0.0; 3];
        for (axis, gk) in g.iter_mut().enumerate().take(self.grid.dim()) {
            *gk = (self.sample(m, &[(axis, 1)])? - self.sample(m, &[(axis, -1)])?) / (2.0 * h);
        }
        Ok(g)
    }

    /// Second-order central-difference Hessian, symmetric by construction.
    pub fn hessian(&self, m: [usize; 3]) -> Result<Mat3> {
        let h2 = self.grid.spacing().powi(2);
        let centre = self.sample(m, &[])?;
        let mut hess = [[0.0; 3]; 3];
        let d = self.grid.dim();
        for a in 0..d {
            hess[a][a] = (self.sample(m, &[(a, 1)])? - 2.0 * centre + self.sample(m, &[(a, -1)])?) / h2;
            for b in (a + 1)..d {
                let v = (self.sample(m, &[(a, 1), (b, 1)])? - self.sample(m, &[(a, 1), (b, -1)])?
                    - self.sample(m, &[(a, -1), (b, 1)])?
                    + self.sample(m, &[(a, -1), (b, -1)])?)
                    / (4.0 * h2);
                hess[a][b] = v;
                hess[b][a] = v;
            }
        }
        Ok(hess)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm;

    fn node_near(grid: &CartesianGrid, x: Vec3) -> [usize; 3] {
        let mut m = [0; 3];
        for a in 0..grid.dim() {
            let (i, f) = grid.locate(x[a]);
            m[a] = (i + if f > 0.5 { 1 } else { 0 }) as usize;
        }
        m
    }

    /// Analytic Hessian of |x| − r: (I − n nᵀ)/|x|.
    fn radial_hessian(x: Vec3, dim: usize) -> Mat3 {
        let r = norm(&x);
        let mut h = [[0.0; 3]; 3];
        for i in 0..dim {
            for j in 0..dim {
                h[i][j] = (if i == j { 1.0 } else { 0.0 } - x[i] * x[j] / (r * r)) / r;
            }
        }
        h
    }

    fn max_abs_diff(a: &Mat3, b: &Mat3) -> f64 {
        (0..3)
            .flat_map(|i| (0..3).map(move |j| (a[i][j] - b[i][j]).abs()))
            .fold(0.0, f64::max)
    }

    #[test]
    fn circle_hessian_matches_closed_form() {
        // (1/r³)[[y², −xy], [−xy, x²]]; at (2, 0) this is [[0, 0], [0, 0.5]]
        let grid = CartesianGrid::new(2, 161).unwrap();
        let field = LevelSetField::new(Shape::Circle { radius: 1.0 }, grid.clone()).unwrap();
        let m = node_near(&grid, [2.0 - 2.0 * grid.spacing(), 0.0, 0.0]);
        let h = field.hessian(m).unwrap();
        let x = grid.position_of(m);
        assert!(max_abs_diff(&h, &radial_hessian(x, 2)) < 1e-3);
        assert!((h[1][1] * x[0] / 2.0 - 0.5).abs() < 1e-3);
    }

    #[test]
    fn circle_hessian_converges_at_second_order() {
        let mut errors = Vec::new();
        for n in [81, 161, 321] {
            let grid = CartesianGrid::new(2, n).unwrap();
            let field = LevelSetField::new(Shape::Circle { radius: 1.0 }, grid.clone()).unwrap();
            let m = node_near(&grid, [0.6, 0.8, 0.0]);
            let x = grid.position_of(m);
            let h = field.hessian(m).unwrap();
            errors.push(max_abs_diff(&h, &radial_hessian(x, 2)));
        }
        assert!(errors[0] / errors[1] > 3.0 && errors[1] / errors[2] > 3.0, "{errors:?}");
    }

    #[test]
    fn hessian_at_box_edge_is_an_error() {
        let grid = CartesianGrid::new(2, 41).unwrap();
        let field = LevelSetField::new(Shape::Circle { radius: 1.0 }, grid).unwrap();
        assert!(matches!(
            field.hessian([40, 20, 0]),
            Err(Error::StencilOutsideGrid { .. })
        ));
    }

    #[test]
    fn sphere_hessian_eigenvalues() {
        // at (0, 0, r): analytic eigenvalues {1/r, 1/r, 0}
        let grid = CartesianGrid::new(3, 81).unwrap();
        let field = LevelSetField::new(Shape::Sphere { radius: 1.0 }, grid.clone()).unwrap();
        let m = node_near(&grid, [0.0, 0.0, 1.5]);
        let x = grid.position_of(m);
        let h = field.hessian(m).unwrap();
        let hm = nalgebra::Matrix3::from_fn(|i, j| h[i][j]);
        let mut ev: Vec<f64> = hm.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let r = x[2];
        let dx2 = grid.spacing().powi(2);
        assert!(ev[0].abs() < 10.0 * dx2, "{ev:?}");
        assert!((ev[1] - 1.0 / r).abs() < 10.0 * dx2 && (ev[2] - 1.0 / r).abs() < 10.0 * dx2);
    }

    #[test]
    fn flat_interface_has_zero_hessian() {
        let grid = CartesianGrid::new(2, 41).unwrap();
        let phi: Vec<f64> = (0..grid.node_count()).map(|i| grid.position(i)[0] - 0.3).collect();
        let field = LevelSetField {
            shape: Shape::Circle { radius: 1.0 },
            grid: grid.clone(),
            phi,
        };
        let h = field.hessian([20, 20, 0]).unwrap();
        assert!(max_abs_diff(&h, &[[0.0; 3]; 3]) < 1e-9);
    }

    #[test]
    fn gradient_has_unit_length_near_interface() {
        for shape in [Shape::Circle { radius: 1.0 }, Shape::Torus { major: 1.0, minor: 0.5 }] {
            let grid = CartesianGrid::new(shape.dim(), 81).unwrap();
            let dx = grid.spacing();
            let field = LevelSetField::new(shape, grid.clone()).unwrap();
            for idx in 0..grid.node_count() {
                if field.phi(idx).abs() < 3.0 * dx {
                    let g = field.gradient(grid.multi_index(idx)).unwrap();
                    assert!((norm(&g) - 1.0).abs() <= 5.0 * dx * dx);
                }
            }
        }
    }
}
