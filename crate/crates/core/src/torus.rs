//! Periodic (torus) companion of the staggered grid, carrying the cell
//! problems and the periodic Poisson solves behind the vector potential.
//!
//! Every stratum (nodes, edges per axis, faces per axis, cells) has exactly
//! `n₁n₂n₃` entries; vector strata store three axis blocks in x, y, z order
//! with x fastest, matching the box layout. Fields are plain `&[f64]` slices —
//! the torus is an internal engine, not a public data model.
//!
//! Operator conventions: edge `(a, p)` runs from node `p` to node `p + e_a`
//! (wrapped); face `(a, p)` is the lower-`a` face of cell `p`. `grad`, `curl`,
//! `div` are the forward-difference primal operators; `grad_transpose` and
//! `curl_transpose` are their exact algebraic transposes (uniform weights make
//! adjoints transposes). The chain identities `curl∘grad = 0`,
//! `div∘curl = 0`, and the factorization `curl∘curlᵀ + divᵀ∘div = −Δ`
//! (componentwise 7-point Laplacian on faces) hold stencil-exactly.

use crate::error::CoreError;
use crate::grid::cyclic;

#[derive(Clone, Debug, PartialEq)]
pub struct TorusGrid {
    origin: [f64; 3],
    extent: [f64; 3],
    cells: [usize; 3],
    h: [f64; 3],
}

impl TorusGrid {
    pub fn new(origin: [f64; 3], extent: [f64; 3], cells: [usize; 3]) -> Result<Self, CoreError> {
        for a in 0..3 {
            if !(extent[a] > 0.0) || !extent[a].is_finite() {
                return Err(CoreError::invalid(format!(
                    "torus extent must be positive and finite, got extent[{a}] = {}",
                    extent[a]
                )));
            }
            if cells[a] < 2 {
                return Err(CoreError::invalid(format!(
                    "torus needs at least 2 cells per axis, got cells[{a}] = {}",
                    cells[a]
                )));
            }
        }
        let h = [
            extent[0] / cells[0] as f64,
            extent[1] / cells[1] as f64,
            extent[2] / cells[2] as f64,
        ];
        Ok(TorusGrid {
            origin,
            extent,
            cells,
            h,
        })
    }

    /// Unit torus [0,1)³ with n cells per axis.
    pub fn unit(n: usize) -> Self {
        TorusGrid::new([0.0; 3], [1.0; 3], [n; 3]).expect("unit torus with n >= 2")
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

    pub fn cell_volume(&self) -> f64 {
        self.h[0] * self.h[1] * self.h[2]
    }

    pub fn domain_volume(&self) -> f64 {
        self.extent[0] * self.extent[1] * self.extent[2]
    }

    /// Entries in one scalar stratum (nodes or cells).
    pub fn scalar_len(&self) -> usize {
        self.cells[0] * self.cells[1] * self.cells[2]
    }

    /// Entries in one vector stratum (edges or faces): three axis blocks.
    pub fn vector_len(&self) -> usize {
        3 * self.scalar_len()
    }

    #[inline]
    pub fn wrap(&self, a: usize, i: isize) -> usize {
        let n = self.cells[a] as isize;
        i.rem_euclid(n) as usize
    }

    /// Lexicographic index within one block (x fastest); `p` must be in range.
    #[inline]
    pub fn lex(&self, p: [usize; 3]) -> usize {
        p[0] + self.cells[0] * (p[1] + self.cells[1] * p[2])
    }

    #[inline]
    pub fn block_idx(&self, axis: usize, p: [usize; 3]) -> usize {
        axis * self.scalar_len() + self.lex(p)
    }

    /// Neighbor of `p` displaced by `step` along `axis`, wrapped.
    #[inline]
    pub fn step(&self, p: [usize; 3], axis: usize, step: isize) -> [usize; 3] {
        let mut q = p;
        q[axis] = self.wrap(axis, p[axis] as isize + step);
        q
    }

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

    /// Visit all lattice points `[i, j, k]` in storage order.
    pub fn for_each(&self, mut f: impl FnMut([usize; 3])) {
        for k in 0..self.cells[2] {
            for j in 0..self.cells[1] {
                for i in 0..self.cells[0] {
                    f([i, j, k]);
                }
            }
        }
    }
}

/// Node scalar → edge vector: forward difference along each axis.
pub fn grad(g: &TorusGrid, p: &[f64], out: &mut [f64]) {
    debug_assert_eq!(p.len(), g.scalar_len());
    debug_assert_eq!(out.len(), g.vector_len());
    for a in 0..3 {
        let inv_h = 1.0 / g.h()[a];
        g.for_each(|q| {
            let head = g.step(q, a, 1);
            out[g.block_idx(a, q)] = (p[g.lex(head)] - p[g.lex(q)]) * inv_h;
        });
    }
}

/// Exact transpose of [`grad`]: edge vector → node scalar.
pub fn grad_transpose(g: &TorusGrid, e: &[f64], out: &mut [f64]) {
    debug_assert_eq!(e.len(), g.vector_len());
    debug_assert_eq!(out.len(), g.scalar_len());
    out.fill(0.0);
    for a in 0..3 {
        let inv_h = 1.0 / g.h()[a];
        g.for_each(|q| {
            let prev = g.step(q, a, -1);
            out[g.lex(q)] += (e[g.block_idx(a, prev)] - e[g.block_idx(a, q)]) * inv_h;
        });
    }
}

/// Edge vector → face vector: circulation per face.
pub fn curl(g: &TorusGrid, u: &[f64], out: &mut [f64]) {
    debug_assert_eq!(u.len(), g.vector_len());
    debug_assert_eq!(out.len(), g.vector_len());
    for a in 0..3 {
        let (b, c) = cyclic(a);
        let inv_hb = 1.0 / g.h()[b];
        let inv_hc = 1.0 / g.h()[c];
        g.for_each(|p| {
            let pb = g.step(p, b, 1);
            let pc = g.step(p, c, 1);
            out[g.block_idx(a, p)] = (u[g.block_idx(c, pb)] - u[g.block_idx(c, p)]) * inv_hb
                - (u[g.block_idx(b, pc)] - u[g.block_idx(b, p)]) * inv_hc;
        });
    }
}

/// Exact transpose of [`curl`]: face vector → edge vector (itself a curl, by
/// the self-duality of the periodic lattice).
pub fn curl_transpose(g: &TorusGrid, w: &[f64], out: &mut [f64]) {
    debug_assert_eq!(w.len(), g.vector_len());
    debug_assert_eq!(out.len(), g.vector_len());
    for a in 0..3 {
        let (b, c) = cyclic(a);
        let inv_hb = 1.0 / g.h()[b];
        let inv_hc = 1.0 / g.h()[c];
        g.for_each(|q| {
            let qb = g.step(q, b, -1);
            let qc = g.step(q, c, -1);
            out[g.block_idx(a, q)] = (w[g.block_idx(c, q)] - w[g.block_idx(c, qb)]) * inv_hb
                - (w[g.block_idx(b, q)] - w[g.block_idx(b, qc)]) * inv_hc;
        });
    }
}

/// Face vector → cell scalar: net outward flux per cell volume.
pub fn div(g: &TorusGrid, w: &[f64], out: &mut [f64]) {
    debug_assert_eq!(w.len(), g.vector_len());
    debug_assert_eq!(out.len(), g.scalar_len());
    for idx in out.iter_mut() {
        *idx = 0.0;
    }
    for a in 0..3 {
        let inv_h = 1.0 / g.h()[a];
        g.for_each(|p| {
            let up = g.step(p, a, 1);
            out[g.lex(p)] += (w[g.block_idx(a, up)] - w[g.block_idx(a, p)]) * inv_h;
        });
    }
}

/// Exact transpose of [`div`]: cell scalar → face vector (the negative
/// backward-difference gradient).
pub fn div_transpose(g: &TorusGrid, c: &[f64], out: &mut [f64]) {
    debug_assert_eq!(c.len(), g.scalar_len());
    debug_assert_eq!(out.len(), g.vector_len());
    for a in 0..3 {
        let inv_h = 1.0 / g.h()[a];
        g.for_each(|p| {
            let prev = g.step(p, a, -1);
            out[g.block_idx(a, p)] = (c[g.lex(prev)] - c[g.lex(p)]) * inv_h;
        });
    }
}

/// Componentwise 7-point negative Laplacian on face vectors.
pub fn neg_laplace_face(g: &TorusGrid, w: &[f64], out: &mut [f64]) {
    debug_assert_eq!(w.len(), g.vector_len());
    debug_assert_eq!(out.len(), g.vector_len());
    for a in 0..3 {
        g.for_each(|p| {
            let i = g.block_idx(a, p);
            let mut s = 0.0;
            for d in 0..3 {
                let up = g.block_idx(a, g.step(p, d, 1));
                let dn = g.block_idx(a, g.step(p, d, -1));
                s += (2.0 * w[i] - w[up] - w[dn]) / (g.h()[d] * g.h()[d]);
            }
            out[i] = s;
        });
    }
}

/// Mean of a scalar stratum (uniform weights).
pub fn mean_scalar(v: &[f64]) -> f64 {
    let mut s = 0.0;
    for x in v {
        s += x;
    }
    s / v.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_field(len: usize, seed: u64) -> Vec<f64> {
        // deterministic small-integer data: mimetic identities cancel bitwise
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        (0..len)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 33) % 17) as f64 - 8.0
            })
            .collect()
    }

    #[test]
    fn curl_of_grad_is_bitwise_zero_on_dyadic_data() {
        let g = TorusGrid::new([0.0; 3], [1.0, 2.0, 0.5], [4, 8, 4]).unwrap();
        let p = int_field(g.scalar_len(), 3);
        let mut e = vec![0.0; g.vector_len()];
        grad(&g, &p, &mut e);
        let mut w = vec![0.0; g.vector_len()];
        curl(&g, &e, &mut w);
        assert!(w.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn div_of_curl_is_bitwise_zero_on_dyadic_data() {
        let g = TorusGrid::new([0.0; 3], [1.0, 1.0, 1.0], [8, 4, 4]).unwrap();
        let u = int_field(g.vector_len(), 7);
        let mut w = vec![0.0; g.vector_len()];
        curl(&g, &u, &mut w);
        let mut d = vec![0.0; g.scalar_len()];
        div(&g, &w, &mut d);
        assert!(d.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn transposes_are_exact_adjoints() {
        let g = TorusGrid::new([0.5, 0.0, -1.0], [1.0, 1.5, 2.0], [4, 6, 2]).unwrap();
        let u = int_field(g.vector_len(), 11);
        let w = int_field(g.vector_len(), 13);
        let p = int_field(g.scalar_len(), 17);
        let c = int_field(g.scalar_len(), 19);

        let mut cu = vec![0.0; g.vector_len()];
        curl(&g, &u, &mut cu);
        let mut ctw = vec![0.0; g.vector_len()];
        curl_transpose(&g, &w, &mut ctw);
        let lhs: f64 = cu.iter().zip(&w).map(|(a, b)| a * b).sum();
        let rhs: f64 = u.iter().zip(&ctw).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() <= 1e-12 * (lhs.abs() + rhs.abs() + 1.0));

        let mut dp = vec![0.0; g.vector_len()];
        grad(&g, &p, &mut dp);
        let mut dtu = vec![0.0; g.scalar_len()];
        grad_transpose(&g, &u, &mut dtu);
        let lhs: f64 = dp.iter().zip(&u).map(|(a, b)| a * b).sum();
        let rhs: f64 = p.iter().zip(&dtu).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() <= 1e-12 * (lhs.abs() + rhs.abs() + 1.0));

        let mut vw = vec![0.0; g.scalar_len()];
        div(&g, &w, &mut vw);
        let mut vtc = vec![0.0; g.vector_len()];
        div_transpose(&g, &c, &mut vtc);
        let lhs: f64 = vw.iter().zip(&c).map(|(a, b)| a * b).sum();
        let rhs: f64 = w.iter().zip(&vtc).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() <= 1e-12 * (lhs.abs() + rhs.abs() + 1.0));
    }

    #[test]
    fn face_laplacian_factorizes_through_curl_and_div() {
        // curl∘curlᵀ + divᵀ∘div = −Δ componentwise
        let g = TorusGrid::new([0.0; 3], [1.0, 1.0, 2.0], [4, 4, 8]).unwrap();
        let w = int_field(g.vector_len(), 23);
        let mut ct = vec![0.0; g.vector_len()];
        curl_transpose(&g, &w, &mut ct);
        let mut cct = vec![0.0; g.vector_len()];
        curl(&g, &ct, &mut cct);
        let mut dv = vec![0.0; g.scalar_len()];
        div(&g, &w, &mut dv);
        let mut vtv = vec![0.0; g.vector_len()];
        div_transpose(&g, &dv, &mut vtv);
        let mut lap = vec![0.0; g.vector_len()];
        neg_laplace_face(&g, &w, &mut lap);
        for i in 0..w.len() {
            let lhs = cct[i] + vtv[i];
            assert!(
                (lhs - lap[i]).abs() <= 1e-11 * (1.0 + lap[i].abs()),
                "mismatch at {i}: {lhs} vs {}",
                lap[i]
            );
        }
    }

    #[test]
    fn wrap_indexing_is_periodic() {
        let g = TorusGrid::unit(4);
        assert_eq!(g.wrap(0, -1), 3);
        assert_eq!(g.wrap(0, 4), 0);
        assert_eq!(g.wrap(0, 9), 1);
        assert_eq!(g.step([0, 0, 0], 1, -1), [0, 3, 0]);
    }
}
