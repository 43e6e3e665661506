//! Field containers for each stratum of the staggered grid.
//!
//! Each field owns its grid (grids are small value types) plus a flat
//! `Vec<f64>` in the fixed storage order defined by [`crate::grid`]. Vector
//! fields on edges and faces store the tangential / normal component of the
//! vector at each DOF, one block per orientation.

use crate::error::CoreError;
use crate::grid::{cyclic, StaggeredGrid};

macro_rules! scalar_field_common {
    ($name:ident, $len:ident) => {
        impl $name {
            pub fn zeros(grid: &StaggeredGrid) -> Self {
                $name {
                    data: vec![0.0; grid.$len()],
                    grid: grid.clone(),
                }
            }

            pub fn grid(&self) -> &StaggeredGrid {
                &self.grid
            }

            pub fn data(&self) -> &[f64] {
                &self.data
            }

            pub fn data_mut(&mut self) -> &mut [f64] {
                &mut self.data
            }

            pub fn len(&self) -> usize {
                self.data.len()
            }

            pub fn is_empty(&self) -> bool {
                self.data.is_empty()
            }

            pub fn from_data(grid: &StaggeredGrid, data: Vec<f64>) -> Result<Self, CoreError> {
                if data.len() != grid.$len() {
                    return Err(CoreError::invalid(format!(
                        concat!(stringify!($name), ": data length {} does not match grid ({})"),
                        data.len(),
                        grid.$len()
                    )));
                }
                Ok($name {
                    data,
                    grid: grid.clone(),
                })
            }
        }
    };
}

/// Scalar field sampled on grid nodes.
#[derive(Clone, Debug)]
pub struct NodeField {
    grid: StaggeredGrid,
    data: Vec<f64>,
}

scalar_field_common!(NodeField, num_nodes);

impl NodeField {
    pub fn from_fn(grid: &StaggeredGrid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let mut out = NodeField::zeros(grid);
        let d = grid.node_dims();
        let mut idx = 0;
        for k in 0..d[2] {
            for j in 0..d[1] {
                for i in 0..d[0] {
                    out.data[idx] = f(grid.node_pos([i, j, k]));
                    idx += 1;
                }
            }
        }
        out
    }

    pub fn at(&self, p: [usize; 3]) -> f64 {
        self.data[self.grid.node_idx(p)]
    }

    /// Volume-weighted mean over the box.
    pub fn mean(&self) -> f64 {
        let d = self.grid.node_dims();
        let mut s = 0.0;
        let mut idx = 0;
        for k in 0..d[2] {
            for j in 0..d[1] {
                for i in 0..d[0] {
                    s += self.grid.node_volume([i, j, k]) * self.data[idx];
                    idx += 1;
                }
            }
        }
        s / self.grid.domain_volume()
    }
}

/// Scalar field sampled at cell centers.
#[derive(Clone, Debug)]
pub struct CellField {
    grid: StaggeredGrid,
    data: Vec<f64>,
}

scalar_field_common!(CellField, num_cells);

impl CellField {
    pub fn from_fn(grid: &StaggeredGrid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let mut out = CellField::zeros(grid);
        let d = grid.cell_dims();
        let mut idx = 0;
        for k in 0..d[2] {
            for j in 0..d[1] {
                for i in 0..d[0] {
                    out.data[idx] = f(grid.cell_center([i, j, k]));
                    idx += 1;
                }
            }
        }
        out
    }

    pub fn at(&self, p: [usize; 3]) -> f64 {
        self.data[self.grid.cell_idx(p)]
    }
}

/// Vector field with tangential components on edges.
#[derive(Clone, Debug)]
pub struct EdgeField {
    grid: StaggeredGrid,
    data: Vec<f64>,
}

scalar_field_common!(EdgeField, num_edges);

impl EdgeField {
    /// Sample the component along each edge's axis from a closed-form vector field.
    pub fn from_vector_fn(grid: &StaggeredGrid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut out = EdgeField::zeros(grid);
        for a in 0..3 {
            let d = grid.edge_dims(a);
            for k in 0..d[2] {
                for j in 0..d[1] {
                    for i in 0..d[0] {
                        let p = [i, j, k];
                        out.data[grid.edge_idx(a, p)] = f(grid.edge_center(a, p))[a];
                    }
                }
            }
        }
        out
    }

    pub fn at(&self, axis: usize, p: [usize; 3]) -> f64 {
        self.data[self.grid.edge_idx(axis, p)]
    }

    pub fn set(&mut self, axis: usize, p: [usize; 3], v: f64) {
        let idx = self.grid.edge_idx(axis, p);
        self.data[idx] = v;
    }
}

/// Vector field with normal components on faces.
#[derive(Clone, Debug)]
pub struct FaceField {
    grid: StaggeredGrid,
    data: Vec<f64>,
}

scalar_field_common!(FaceField, num_faces);

impl FaceField {
    /// Sample the component along each face's normal axis from a closed-form vector field.
    pub fn from_vector_fn(grid: &StaggeredGrid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut out = FaceField::zeros(grid);
        for a in 0..3 {
            let d = grid.face_dims(a);
            for k in 0..d[2] {
                for j in 0..d[1] {
                    for i in 0..d[0] {
                        let p = [i, j, k];
                        out.data[grid.face_idx(a, p)] = f(grid.face_center(a, p))[a];
                    }
                }
            }
        }
        out
    }

    pub fn at(&self, axis: usize, p: [usize; 3]) -> f64 {
        self.data[self.grid.face_idx(axis, p)]
    }

    pub fn set(&mut self, axis: usize, p: [usize; 3], v: f64) {
        let idx = self.grid.face_idx(axis, p);
        self.data[idx] = v;
    }
}

/// Boundary data carrier: tangential components on boundary edges and normal
/// components on boundary faces.
///
/// The edge part stores the restriction of an edge field `u` to boundary
/// edges. Because the in-plane rotation `a ↦ n×a` is an isometry with
/// `(n×a)·(n×b) = a·b`, these stored components are simultaneously the exact
/// cross-edge flux representation of the rotated datum `f = n×u`; the surface
/// divergence of `f` is therefore computable from them by a compact flux
/// stencil. Norms of `f` and of `u`'s tangential part coincide.
#[derive(Clone, Debug)]
pub struct BoundaryTrace {
    grid: StaggeredGrid,
    edge_ids: Vec<usize>,
    edge_vals: Vec<f64>,
    face_ids: Vec<usize>,
    face_vals: Vec<f64>,
}

impl BoundaryTrace {
    pub fn zeros(grid: &StaggeredGrid) -> Self {
        let edge_ids = grid.boundary_edge_ids();
        let face_ids = grid.boundary_face_ids();
        BoundaryTrace {
            grid: grid.clone(),
            edge_vals: vec![0.0; edge_ids.len()],
            face_vals: vec![0.0; face_ids.len()],
            edge_ids,
            face_ids,
        }
    }

    pub fn grid(&self) -> &StaggeredGrid {
        &self.grid
    }

    pub fn edge_ids(&self) -> &[usize] {
        &self.edge_ids
    }

    pub fn edge_vals(&self) -> &[f64] {
        &self.edge_vals
    }

    pub fn edge_vals_mut(&mut self) -> &mut [f64] {
        &mut self.edge_vals
    }

    pub fn face_ids(&self) -> &[usize] {
        &self.face_ids
    }

    pub fn face_vals(&self) -> &[f64] {
        &self.face_vals
    }

    pub fn face_vals_mut(&mut self) -> &mut [f64] {
        &mut self.face_vals
    }

    /// Slot of a global edge id in the boundary enumeration.
    pub fn edge_slot(&self, global_edge_id: usize) -> Option<usize> {
        self.edge_ids.binary_search(&global_edge_id).ok()
    }

    pub fn face_slot(&self, global_face_id: usize) -> Option<usize> {
        self.face_ids.binary_search(&global_face_id).ok()
    }

    pub fn edge_val(&self, global_edge_id: usize) -> Option<f64> {
        self.edge_slot(global_edge_id).map(|s| self.edge_vals[s])
    }

    /// Fill the edge part by sampling a closed-form vector field's tangential
    /// components at boundary edge centers.
    pub fn from_vector_fn(grid: &StaggeredGrid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut t = BoundaryTrace::zeros(grid);
        for s in 0..t.edge_ids.len() {
            let (a, p) = grid.edge_decode(t.edge_ids[s]);
            t.edge_vals[s] = f(grid.edge_center(a, p))[a];
        }
        t
    }

    /// Area weight of each boundary edge: each adjacent boundary face
    /// contributes a quarter of its area, so the weights sum exactly to the
    /// boundary area.
    pub fn edge_area_weights(&self) -> Vec<f64> {
        let g = &self.grid;
        let mut w = vec![0.0; self.edge_ids.len()];
        for &fid in &self.face_ids {
            let (a, p) = g.face_decode(fid);
            let (b, c) = cyclic(a);
            let quarter = 0.25 * g.face_area(a);
            for dc in 0..2 {
                let mut q = p;
                q[c] += dc;
                let id = g.edge_idx(b, q);
                let slot = self.edge_slot(id).expect("face edge is a boundary edge");
                w[slot] += quarter;
            }
            for db in 0..2 {
                let mut q = p;
                q[b] += db;
                let id = g.edge_idx(c, q);
                let slot = self.edge_slot(id).expect("face edge is a boundary edge");
                w[slot] += quarter;
            }
        }
        w
    }

    /// Maximum absolute edge value (useful for "is this trace zero" checks).
    pub fn edge_max_abs(&self) -> f64 {
        self.edge_vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_area_weights_sum_to_boundary_area() {
        let g = StaggeredGrid::new([0.0; 3], [1.0, 2.0, 0.5], [3, 4, 2]).unwrap();
        let t = BoundaryTrace::zeros(&g);
        let total: f64 = t.edge_area_weights().iter().sum();
        assert!((total - g.boundary_area()).abs() < 1e-12 * g.boundary_area());
    }

    #[test]
    fn trace_sampling_matches_restriction() {
        let g = StaggeredGrid::unit_cube(3);
        let f = |x: [f64; 3]| [x[1], x[2] * 2.0, x[0] - x[1]];
        let u = EdgeField::from_vector_fn(&g, f);
        let t = BoundaryTrace::from_vector_fn(&g, f);
        for (s, &id) in t.edge_ids().iter().enumerate() {
            assert_eq!(t.edge_vals()[s], u.data()[id]);
        }
    }

    #[test]
    fn from_data_rejects_bad_length() {
        let g = StaggeredGrid::unit_cube(2);
        assert!(NodeField::from_data(&g, vec![0.0; 5]).is_err());
        assert!(EdgeField::from_data(&g, vec![0.0; g.num_edges()]).is_ok());
    }
}
