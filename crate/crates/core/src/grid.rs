//! Staggered grid on an axis-aligned box.
//!
//! Degrees of freedom live on four strata: scalars on nodes and cells,
//! tangential vector components on edges, normal vector components on faces.
//! Storage order is fixed and deterministic: per stratum, orientation blocks
//! in x, y, z order, and within a block the x index varies fastest, then y,
//! then z. All index tuples `[i, j, k]` are given in global x/y/z order; for
//! an edge or face of axis `a`, the tuple entry at position `a` is the index
//! along that axis (an interval/cell index), the other two entries are node
//! indices.

use crate::error::CoreError;

/// Coordinate axis. Convertible to/from `usize` for loop-heavy code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        match i {
            0 => Axis::X,
            1 => Axis::Y,
            2 => Axis::Z,
            _ => panic!("axis index out of range: {i}"),
        }
    }
}

/// The two axes complementary to `a`, in cyclic order (a, b, c).
pub fn cyclic(a: usize) -> (usize, usize) {
    ((a + 1) % 3, (a + 2) % 3)
}

/// Axis-aligned box discretized into `cells[a]` intervals per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct StaggeredGrid {
    origin: [f64; 3],
    extent: [f64; 3],
    cells: [usize; 3],
    h: [f64; 3],
}

impl StaggeredGrid {
    pub fn new(origin: [f64; 3], extent: [f64; 3], cells: [usize; 3]) -> Result<Self, CoreError> {
        for a in 0..3 {
            if !(extent[a] > 0.0) || !extent[a].is_finite() || !origin[a].is_finite() {
                return Err(CoreError::invalid(format!(
                    "box extent must be positive and finite, got extent[{a}] = {}",
                    extent[a]
                )));
            }
            if cells[a] < 2 {
                return Err(CoreError::invalid(format!(
                    "cell count must be at least 2 per axis, got cells[{a}] = {}",
                    cells[a]
                )));
            }
        }
        let h = [
            extent[0] / cells[0] as f64,
            extent[1] / cells[1] as f64,
            extent[2] / cells[2] as f64,
        ];
        Ok(StaggeredGrid {
            origin,
            extent,
            cells,
            h,
        })
    }

    /// Unit cube `[0,1]^3` with `n` cells per axis.
    pub fn unit_cube(n: usize) -> Self {
        StaggeredGrid::new([0.0; 3], [1.0; 3], [n; 3]).expect("unit cube with n >= 2")
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn extent(&self) -> [f64; 3] {
        self.extent
    }

    pub fn cells(&self) -> [usize; 3] {
        self.cells
    }

    pub fn h(&self) -> [f64; 3] {
        self.h
    }

    pub fn h_min(&self) -> f64 {
        self.h[0].min(self.h[1]).min(self.h[2])
    }

    pub fn cell_volume(&self) -> f64 {
        self.h[0] * self.h[1] * self.h[2]
    }

    pub fn domain_volume(&self) -> f64 {
        self.extent[0] * self.extent[1] * self.extent[2]
    }

    pub fn boundary_area(&self) -> f64 {
        let e = self.extent;
        2.0 * (e[0] * e[1] + e[1] * e[2] + e[0] * e[2])
    }

    // ---- dimensions per stratum ---------------------------------------------------------

    pub fn node_dims(&self) -> [usize; 3] {
        [self.cells[0] + 1, self.cells[1] + 1, self.cells[2] + 1]
    }

    pub fn edge_dims(&self, axis: usize) -> [usize; 3] {
        let mut d = self.node_dims();
        d[axis] = self.cells[axis];
        d
    }

    pub fn face_dims(&self, axis: usize) -> [usize; 3] {
        let mut d = self.cells;
        d[axis] = self.cells[axis] + 1;
        d
    }

    pub fn cell_dims(&self) -> [usize; 3] {
        self.cells
    }

    pub fn num_nodes(&self) -> usize {
        let d = self.node_dims();
        d[0] * d[1] * d[2]
    }

    pub fn num_edges_axis(&self, axis: usize) -> usize {
        let d = self.edge_dims(axis);
        d[0] * d[1] * d[2]
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges_axis(0) + self.num_edges_axis(1) + self.num_edges_axis(2)
    }

    pub fn edge_offset(&self, axis: usize) -> usize {
        match axis {
            0 => 0,
            1 => self.num_edges_axis(0),
            2 => self.num_edges_axis(0) + self.num_edges_axis(1),
            _ => panic!("axis out of range"),
        }
    }

    pub fn num_faces_axis(&self, axis: usize) -> usize {
        let d = self.face_dims(axis);
        d[0] * d[1] * d[2]
    }

    pub fn num_faces(&self) -> usize {
        self.num_faces_axis(0) + self.num_faces_axis(1) + self.num_faces_axis(2)
    }

    pub fn face_offset(&self, axis: usize) -> usize {
        match axis {
            0 => 0,
            1 => self.num_faces_axis(0),
            2 => self.num_faces_axis(0) + self.num_faces_axis(1),
            _ => panic!("axis out of range"),
        }
    }

    pub fn num_cells(&self) -> usize {
        self.cells[0] * self.cells[1] * self.cells[2]
    }

    // ---- linear indexing (x fastest, then y, then z) ------------------------------------

    pub fn node_idx(&self, p: [usize; 3]) -> usize {
        let d = self.node_dims();
        p[0] + d[0] * (p[1] + d[1] * p[2])
    }

    pub fn edge_idx(&self, axis: usize, p: [usize; 3]) -> usize {
        let d = self.edge_dims(axis);
        self.edge_offset(axis) + p[0] + d[0] * (p[1] + d[1] * p[2])
    }

    pub fn face_idx(&self, axis: usize, p: [usize; 3]) -> usize {
        let d = self.face_dims(axis);
        self.face_offset(axis) + p[0] + d[0] * (p[1] + d[1] * p[2])
    }

    pub fn cell_idx(&self, p: [usize; 3]) -> usize {
        let d = self.cells;
        p[0] + d[0] * (p[1] + d[1] * p[2])
    }

    // ---- DOF positions ------------------------------------------------------------------

    pub fn node_pos(&self, p: [usize; 3]) -> [f64; 3] {
        [
            self.origin[0] + p[0] as f64 * self.h[0],
            self.origin[1] + p[1] as f64 * self.h[1],
            self.origin[2] + p[2] as f64 * self.h[2],
        ]
    }

    pub fn edge_center(&self, axis: usize, p: [usize; 3]) -> [f64; 3] {
        let mut x = self.node_pos(p);
        x[axis] += 0.5 * self.h[axis];
        x
    }

    pub fn face_center(&self, axis: usize, p: [usize; 3]) -> [f64; 3] {
        let (b, c) = cyclic(axis);
        let mut x = self.node_pos(p);
        x[b] += 0.5 * self.h[b];
        x[c] += 0.5 * self.h[c];
        x
    }

    pub fn cell_center(&self, p: [usize; 3]) -> [f64; 3] {
        let mut x = self.node_pos(p);
        for a in 0..3 {
            x[a] += 0.5 * self.h[a];
        }
        x
    }

    // ---- control volumes (trapezoid weights: halved on boundary strata) ------------------

    fn axis_weight(&self, axis: usize, node_index: usize) -> f64 {
        if node_index == 0 || node_index == self.cells[axis] {
            0.5 * self.h[axis]
        } else {
            self.h[axis]
        }
    }

    pub fn node_volume(&self, p: [usize; 3]) -> f64 {
        self.axis_weight(0, p[0]) * self.axis_weight(1, p[1]) * self.axis_weight(2, p[2])
    }

    pub fn edge_volume(&self, axis: usize, p: [usize; 3]) -> f64 {
        let (b, c) = cyclic(axis);
        self.h[axis] * self.axis_weight(b, p[b]) * self.axis_weight(c, p[c])
    }

    pub fn face_volume(&self, axis: usize, p: [usize; 3]) -> f64 {
        let (b, c) = cyclic(axis);
        self.axis_weight(axis, p[axis]) * self.h[b] * self.h[c]
    }

    /// Area of a boundary face as a cell of the boundary surface.
    pub fn face_area(&self, axis: usize) -> f64 {
        let (b, c) = cyclic(axis);
        self.h[b] * self.h[c]
    }

    // ---- boundary structure ---------------------------------------------------------------

    /// An edge lies on the boundary iff one of its transverse node indices is extreme.
    pub fn edge_on_boundary(&self, axis: usize, p: [usize; 3]) -> bool {
        let (b, c) = cyclic(axis);
        p[b] == 0 || p[b] == self.cells[b] || p[c] == 0 || p[c] == self.cells[c]
    }

    /// A face lies on the boundary iff its normal-axis index is extreme.
    pub fn face_on_boundary(&self, axis: usize, p: [usize; 3]) -> bool {
        p[axis] == 0 || p[axis] == self.cells[axis]
    }

    pub fn node_on_boundary(&self, p: [usize; 3]) -> bool {
        (0..3).any(|a| p[a] == 0 || p[a] == self.cells[a])
    }

    /// Global ids of boundary edges in ascending storage order.
    pub fn boundary_edge_ids(&self) -> Vec<usize> {
        let mut ids = Vec::new();
        for a in 0..3 {
            let d = self.edge_dims(a);
            for k in 0..d[2] {
                for j in 0..d[1] {
                    for i in 0..d[0] {
                        let p = [i, j, k];
                        if self.edge_on_boundary(a, p) {
                            ids.push(self.edge_idx(a, p));
                        }
                    }
                }
            }
        }
        ids
    }

    /// Global ids of boundary faces in ascending storage order.
    pub fn boundary_face_ids(&self) -> Vec<usize> {
        let mut ids = Vec::new();
        for a in 0..3 {
            let d = self.face_dims(a);
            for k in 0..d[2] {
                for j in 0..d[1] {
                    for i in 0..d[0] {
                        let p = [i, j, k];
                        if self.face_on_boundary(a, p) {
                            ids.push(self.face_idx(a, p));
                        }
                    }
                }
            }
        }
        ids
    }

    /// Decode a global edge id into (axis, tuple).
    pub fn edge_decode(&self, id: usize) -> (usize, [usize; 3]) {
        let mut rest = id;
        for a in 0..3 {
            let n = self.num_edges_axis(a);
            if rest < n {
                let d = self.edge_dims(a);
                let i = rest % d[0];
                let j = (rest / d[0]) % d[1];
                let k = rest / (d[0] * d[1]);
                return (a, [i, j, k]);
            }
            rest -= n;
        }
        panic!("edge id out of range: {id}");
    }

    /// Decode a global face id into (axis, tuple).
    pub fn face_decode(&self, id: usize) -> (usize, [usize; 3]) {
        let mut rest = id;
        for a in 0..3 {
            let n = self.num_faces_axis(a);
            if rest < n {
                let d = self.face_dims(a);
                let i = rest % d[0];
                let j = (rest / d[0]) % d[1];
                let k = rest / (d[0] * d[1]);
                return (a, [i, j, k]);
            }
            rest -= n;
        }
        panic!("face id out of range: {id}");
    }

    /// Check geometric compatibility of two grids for binary operations.
    pub fn check_same(&self, other: &StaggeredGrid, what: &str) -> Result<(), CoreError> {
        if self != other {
            return Err(CoreError::grid(format!(
                "{what}: grids differ ({:?} cells vs {:?} cells)",
                self.cells, other.cells
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_identities_cube() {
        // 4^3 cube: 3 * n^2 * (n+1) faces and 3 * n * (n+1)^2 edges
        let g = StaggeredGrid::unit_cube(4);
        assert_eq!(g.num_faces(), 3 * 4 * 4 * 5);
        assert_eq!(g.num_faces(), 240);
        let g2 = StaggeredGrid::unit_cube(2);
        assert_eq!(g2.num_edges(), 3 * 2 * 3 * 3);
        assert_eq!(g2.num_edges(), 54);
        assert_eq!(g2.num_nodes(), 27);
        assert_eq!(g2.num_cells(), 8);
    }

    #[test]
    fn euler_characteristic_of_box_complex() {
        // nodes - edges + faces - cells = 1 for a contractible complex
        for n in [2usize, 3, 5] {
            let g = StaggeredGrid::unit_cube(n);
            let chi = g.num_nodes() as i64 - g.num_edges() as i64 + g.num_faces() as i64
                - g.num_cells() as i64;
            assert_eq!(chi, 1, "n = {n}");
        }
    }

    #[test]
    fn rejects_degenerate_boxes() {
        assert!(StaggeredGrid::new([0.0; 3], [1.0, 0.0, 1.0], [2; 3]).is_err());
        assert!(StaggeredGrid::new([0.0; 3], [1.0; 3], [2, 0, 2]).is_err());
        assert!(StaggeredGrid::new([0.0; 3], [1.0, -2.0, 1.0], [2; 3]).is_err());
        // fewer than 2 cells on any axis is rejected
        assert!(StaggeredGrid::new([0.0; 3], [1.0; 3], [1, 4, 4]).is_err());
    }

    #[test]
    fn edge_and_face_roundtrip_decode() {
        let g = StaggeredGrid::new([0.0; 3], [1.0, 2.0, 3.0], [3, 4, 5]).unwrap();
        for a in 0..3 {
            let d = g.edge_dims(a);
            for k in 0..d[2] {
                for j in 0..d[1] {
                    for i in 0..d[0] {
                        let id = g.edge_idx(a, [i, j, k]);
                        assert_eq!(g.edge_decode(id), (a, [i, j, k]));
                    }
                }
            }
            let d = g.face_dims(a);
            for k in 0..d[2] {
                for j in 0..d[1] {
                    for i in 0..d[0] {
                        let id = g.face_idx(a, [i, j, k]);
                        assert_eq!(g.face_decode(id), (a, [i, j, k]));
                    }
                }
            }
        }
    }

    #[test]
    fn control_volumes_partition_the_box() {
        let g = StaggeredGrid::new([0.0; 3], [1.0, 2.0, 0.5], [3, 2, 4]).unwrap();
        let vol = g.domain_volume();
        // node volumes tile the box
        let mut s = 0.0;
        let d = g.node_dims();
        for k in 0..d[2] {
            for j in 0..d[1] {
                for i in 0..d[0] {
                    s += g.node_volume([i, j, k]);
                }
            }
        }
        assert!((s - vol).abs() < 1e-12 * vol);
        // per-axis edge volumes tile the box
        for a in 0..3 {
            let mut s = 0.0;
            let d = g.edge_dims(a);
            for k in 0..d[2] {
                for j in 0..d[1] {
                    for i in 0..d[0] {
                        s += g.edge_volume(a, [i, j, k]);
                    }
                }
            }
            assert!((s - vol).abs() < 1e-12 * vol, "axis {a}");
        }
        // per-axis face volumes tile the box
        for a in 0..3 {
            let mut s = 0.0;
            let d = g.face_dims(a);
            for k in 0..d[2] {
                for j in 0..d[1] {
                    for i in 0..d[0] {
                        s += g.face_volume(a, [i, j, k]);
                    }
                }
            }
            assert!((s - vol).abs() < 1e-12 * vol, "axis {a}");
        }
    }

    #[test]
    fn boundary_enumerations_are_sorted_and_complete() {
        let g = StaggeredGrid::unit_cube(3);
        let be = g.boundary_edge_ids();
        assert!(be.windows(2).all(|w| w[0] < w[1]));
        // every edge of every boundary face is a boundary edge
        let edge_set: std::collections::BTreeSet<usize> = be.iter().copied().collect();
        for id in g.boundary_face_ids() {
            let (a, p) = g.face_decode(id);
            let (b, c) = cyclic(a);
            for db in 0..2 {
                let mut q = p;
                q[b] += db;
                // the two c-edges of the face
                assert!(edge_set.contains(&g.edge_idx(c, q)));
            }
            for dc in 0..2 {
                let mut q = p;
                q[c] += dc;
                assert!(edge_set.contains(&g.edge_idx(b, q)));
            }
        }
    }
}
