//! Scalar elliptic solves on the box: `div(M(∇w + g)) = F` with strong
//! Dirichlet or weak (natural) Neumann boundary conditions.
//!
//! Unknowns are nodal; gradients live on edges. The diagonal coefficient on
//! an edge is the harmonic mean of the cell-centered samples adjacent to that
//! edge — the flux form that is exact for one-dimensional laminate profiles.
//! Off-diagonal entries couple edge averages through a cell-centered
//! quadrature that keeps the discrete form symmetric whenever `M` is.
//!
//! The Neumann variant requires compatible data (the constant test function
//! must annihilate the right-hand side) and returns the zero-mean solution.

use crate::coeff::CoefficientField;
use crate::error::CoreError;
use crate::field::{BoundaryTrace, EdgeField, FaceField, NodeField};
use crate::grid::{cyclic, StaggeredGrid};
use crate::krylov::{bicgstab, cg, KrylovOpts, LinOp, SolveStats};
use crate::ops;

/// Relative Krylov tolerance for scalar solves.
pub const SCALAR_TOL: f64 = 1e-10;

/// Scalar problem data: `div(M(∇w + g)) = F` with `M = coeff(x/eps)`.
pub struct ScalarProblem<'a> {
    pub grid: &'a StaggeredGrid,
    pub coeff: &'a CoefficientField,
    /// Oscillation scale; `f64::INFINITY` freezes the coefficient at 0.
    pub eps: f64,
    /// Nodal volume source F.
    pub source: &'a NodeField,
    /// Face flux source g (transferred to edges inside the solver).
    pub flux_source: &'a FaceField,
}

/// Boundary condition for a scalar solve.
pub enum ScalarBc<'a> {
    /// Strong nodal values; only boundary entries of the field are read.
    Dirichlet(&'a NodeField),
    /// Prescribed conormal flux `n·M(∇w+g)` in the face slots of the trace.
    Neumann(&'a BoundaryTrace),
}

#[derive(Clone, Debug)]
pub struct ScalarSolution {
    pub w: NodeField,
    pub stats: SolveStats,
    /// Independently recomputed relative residual of the assembled system.
    pub recheck: f64,
}

/// Coefficient samples for the box bilinear form: per-edge harmonic-mean
/// diagonal entries (already multiplied by the edge control volume) and,
/// when off-diagonal entries exist, full matrices at cell centers.
struct BoxCoeff {
    /// |ω_e| · harmonic mean of M_αα over the cells adjacent to edge e.
    diag: Vec<f64>,
    /// (cell matrices, cell volume) when M has off-diagonal entries.
    cells: Option<Vec<[[f64; 3]; 3]>>,
}

fn sample_box(grid: &StaggeredGrid, coeff: &CoefficientField, eps: f64) -> Result<BoxCoeff, CoreError> {
    if !(eps > 0.0) {
        return Err(CoreError::invalid(format!(
            "oscillation scale eps must be positive (or infinite), got {eps}"
        )));
    }
    let nc = grid.cell_dims();
    // cell-centered diagonal samples per axis
    let mut cell_diag = vec![[0.0; 3]; grid.num_cells()];
    let mut cell_full: Option<Vec<[[f64; 3]; 3]>> = if coeff.is_diagonal() {
        None
    } else {
        Some(vec![[[0.0; 3]; 3]; grid.num_cells()])
    };
    for k in 0..nc[2] {
        for j in 0..nc[1] {
            for i in 0..nc[0] {
                let q = [i, j, k];
                let m = coeff.eval_scaled(grid.cell_center(q), eps);
                let id = grid.cell_idx(q);
                for a in 0..3 {
                    if m[a][a] <= 0.0 {
                        return Err(CoreError::NumericalDegeneracy(format!(
                            "non-positive diagonal sample {} at cell {q:?}",
                            m[a][a]
                        )));
                    }
                    cell_diag[id][a] = m[a][a];
                }
                if let Some(full) = cell_full.as_mut() {
                    full[id] = m;
                }
            }
        }
    }

    let mut diag = vec![0.0; grid.num_edges()];
    for a in 0..3 {
        let (b, c) = cyclic(a);
        let d = grid.edge_dims(a);
        for k in 0..d[2] {
            for j in 0..d[1] {
                for i in 0..d[0] {
                    let p = [i, j, k];
                    let mut inv_sum = 0.0;
                    let mut count = 0.0;
                    for db in 0..2usize {
                        for dc in 0..2usize {
                            let cb = p[b] as isize - 1 + db as isize;
                            let cc = p[c] as isize - 1 + dc as isize;
                            if cb < 0
                                || cc < 0
                                || cb >= nc[b] as isize
                                || cc >= nc[c] as isize
                            {
                                continue;
                            }
                            let mut q = p;
                            q[b] = cb as usize;
                            q[c] = cc as usize;
                            inv_sum += 1.0 / cell_diag[grid.cell_idx(q)][a];
                            count += 1.0;
                        }
                    }
                    diag[grid.edge_idx(a, p)] = grid.edge_volume(a, p) * count / inv_sum;
                }
            }
        }
    }
    Ok(BoxCoeff {
        diag,
        cells: cell_full,
    })
}

/// out = W e: the weighted coefficient application of the bilinear form,
/// so that a(w, v) = ⟨W ∇w, ∇v⟩ in the plain dot product.
fn apply_weighted(grid: &StaggeredGrid, s: &BoxCoeff, e: &EdgeField, out: &mut EdgeField) {
    for (o, (&d, &v)) in out
        .data_mut()
        .iter_mut()
        .zip(s.diag.iter().zip(e.data().iter()))
    {
        *o = d * v;
    }
    let Some(cells) = &s.cells else {
        return;
    };
    let nc = grid.cell_dims();
    let scatter_vol = 0.25 * grid.cell_volume();
    for k in 0..nc[2] {
        for j in 0..nc[1] {
            for i in 0..nc[0] {
                let q = [i, j, k];
                let m = &cells[grid.cell_idx(q)];
                let mut avg = [0.0; 3];
                let mut ids = [[0usize; 4]; 3];
                for a in 0..3 {
                    let (b, c) = cyclic(a);
                    let mut t = 0.0;
                    let mut n = 0;
                    for db in 0..2usize {
                        for dc in 0..2usize {
                            let mut p = q;
                            p[b] += db;
                            p[c] += dc;
                            let id = grid.edge_idx(a, p);
                            ids[a][n] = id;
                            t += e.data()[id];
                            n += 1;
                        }
                    }
                    avg[a] = 0.25 * t;
                }
                for beta in 0..3 {
                    let mut coupled = 0.0;
                    for alpha in 0..3 {
                        if alpha != beta {
                            coupled += m[beta][alpha] * avg[alpha];
                        }
                    }
                    if coupled != 0.0 {
                        let wgt = scatter_vol * coupled;
                        for &id in &ids[beta] {
                            out.data_mut()[id] += wgt;
                        }
                    }
                }
            }
        }
    }
}

/// Exact transpose of the nodal gradient (zero extension off the grid).
fn grad_transpose_box(grid: &StaggeredGrid, e: &EdgeField, out: &mut NodeField) {
    out.data_mut().fill(0.0);
    let nd = grid.node_dims();
    for a in 0..3 {
        let inv_h = 1.0 / grid.h()[a];
        for k in 0..nd[2] {
            for j in 0..nd[1] {
                for i in 0..nd[0] {
                    let q = [i, j, k];
                    let mut acc = 0.0;
                    if q[a] > 0 {
                        let mut p = q;
                        p[a] -= 1;
                        acc += e.at(a, p);
                    }
                    if q[a] < nd[a] - 1 {
                        acc -= e.at(a, q);
                    }
                    out.data_mut()[grid.node_idx(q)] += acc * inv_h;
                }
            }
        }
    }
}

struct ScalarOperator<'a> {
    grid: &'a StaggeredGrid,
    s: &'a BoxCoeff,
    /// true at nodes pinned by Dirichlet data (rows and columns masked)
    mask: Option<&'a [bool]>,
    scratch: std::cell::RefCell<(EdgeField, EdgeField, NodeField)>,
}

impl<'a> ScalarOperator<'a> {
    fn new(grid: &'a StaggeredGrid, s: &'a BoxCoeff, mask: Option<&'a [bool]>) -> Self {
        ScalarOperator {
            grid,
            s,
            mask,
            scratch: std::cell::RefCell::new((
                EdgeField::zeros(grid),
                EdgeField::zeros(grid),
                NodeField::zeros(grid),
            )),
        }
    }

    fn jacobi(&self) -> Vec<f64> {
        let grid = self.grid;
        let nd = grid.node_dims();
        let mut d = vec![0.0; grid.num_nodes()];
        for a in 0..3 {
            let inv_h2 = 1.0 / (grid.h()[a] * grid.h()[a]);
            for k in 0..nd[2] {
                for j in 0..nd[1] {
                    for i in 0..nd[0] {
                        let q = [i, j, k];
                        let mut acc = 0.0;
                        if q[a] > 0 {
                            let mut p = q;
                            p[a] -= 1;
                            acc += self.s.diag[grid.edge_idx(a, p)];
                        }
                        if q[a] < nd[a] - 1 {
                            acc += self.s.diag[grid.edge_idx(a, q)];
                        }
                        d[grid.node_idx(q)] += acc * inv_h2;
                    }
                }
            }
        }
        if let Some(mask) = self.mask {
            for (v, &m) in d.iter_mut().zip(mask) {
                if m {
                    *v = 1.0;
                }
            }
        }
        d
    }
}

impl LinOp for ScalarOperator<'_> {
    fn len(&self) -> usize {
        self.grid.num_nodes()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut buf = self.scratch.borrow_mut();
        let (e, w, n) = &mut *buf;
        // gradient of x (boundary entries of x are zero under the mask)
        {
            let nd = self.grid.node_dims();
            for a in 0..3 {
                let inv_h = 1.0 / self.grid.h()[a];
                let d = self.grid.edge_dims(a);
                for k in 0..d[2] {
                    for j in 0..d[1] {
                        for i in 0..d[0] {
                            let p = [i, j, k];
                            let mut head = p;
                            head[a] += 1;
                            let _ = nd;
                            e.set(
                                a,
                                p,
                                (x[self.grid.node_idx(head)] - x[self.grid.node_idx(p)]) * inv_h,
                            );
                        }
                    }
                }
            }
        }
        apply_weighted(self.grid, self.s, e, w);
        grad_transpose_box(self.grid, w, n);
        y.copy_from_slice(n.data());
        if let Some(mask) = self.mask {
            for (v, (&m, &xi)) in y.iter_mut().zip(mask.iter().zip(x)) {
                if m {
                    *v = xi; // identity on pinned rows keeps the mask invariant
                }
            }
        }
    }
}

fn node_boundary_mask(grid: &StaggeredGrid) -> Vec<bool> {
    let nd = grid.node_dims();
    let mut mask = vec![false; grid.num_nodes()];
    for k in 0..nd[2] {
        for j in 0..nd[1] {
            for i in 0..nd[0] {
                let q = [i, j, k];
                if grid.node_on_boundary(q) {
                    mask[grid.node_idx(q)] = true;
                }
            }
        }
    }
    mask
}

fn node_volumes(grid: &StaggeredGrid) -> Vec<f64> {
    let nd = grid.node_dims();
    let mut w = vec![0.0; grid.num_nodes()];
    for k in 0..nd[2] {
        for j in 0..nd[1] {
            for i in 0..nd[0] {
                let q = [i, j, k];
                w[grid.node_idx(q)] = grid.node_volume(q);
            }
        }
    }
    w
}

/// Shared right-hand side: −⟨F, v⟩ − ⟨W g̃, ∇v⟩ in the nodal test basis.
fn base_rhs(p: &ScalarProblem, s: &BoxCoeff) -> Vec<f64> {
    let grid = p.grid;
    let vols = node_volumes(grid);
    let mut b: Vec<f64> = p
        .source
        .data()
        .iter()
        .zip(&vols)
        .map(|(&f, &w)| -w * f)
        .collect();
    let g_edge = ops::face_to_edge(p.flux_source);
    let mut wg = EdgeField::zeros(grid);
    apply_weighted(grid, s, &g_edge, &mut wg);
    let mut div_wg = NodeField::zeros(grid);
    grad_transpose_box(grid, &wg, &mut div_wg);
    for (bi, &d) in b.iter_mut().zip(div_wg.data()) {
        *bi -= d;
    }
    b
}

fn check_problem(p: &ScalarProblem) -> Result<(), CoreError> {
    p.grid.check_same(p.source.grid(), "scalar source")?;
    p.grid.check_same(p.flux_source.grid(), "scalar flux source")?;
    Ok(())
}

/// Solve with strong Dirichlet values; the returned field carries the given
/// boundary values bit-exactly.
pub fn solve_dirichlet(p: &ScalarProblem, bc: &NodeField) -> Result<ScalarSolution, CoreError> {
    check_problem(p)?;
    p.grid.check_same(bc.grid(), "Dirichlet data")?;
    let s = sample_box(p.grid, p.coeff, p.eps)?;
    let mask = node_boundary_mask(p.grid);

    // lift: boundary values in place, zero inside
    let mut lift = vec![0.0; p.grid.num_nodes()];
    for (l, (&m, &v)) in lift.iter_mut().zip(mask.iter().zip(bc.data())) {
        if m {
            *l = v;
        }
    }

    let mut b = base_rhs(p, &s);
    // subtract A·lift using the unmasked operator
    let op_full = ScalarOperator::new(p.grid, &s, None);
    let mut a_lift = vec![0.0; b.len()];
    op_full.apply(&lift, &mut a_lift);
    for ((bi, &al), &m) in b.iter_mut().zip(&a_lift).zip(&mask) {
        *bi -= al;
        if m {
            *bi = 0.0;
        }
    }

    let op = ScalarOperator::new(p.grid, &s, Some(&mask));
    let diag = op.jacobi();
    let opts = KrylovOpts {
        tol: SCALAR_TOL,
        max_iters: 40 * p.grid.cells().iter().map(|&n| n * n).max().unwrap_or(1),
        diag: Some(&diag),
        null_weights: None,
    };
    let (z, stats) = if p.coeff.is_symmetric() {
        cg(&op, &b, &opts)?
    } else {
        bicgstab(&op, &b, &opts)?
    };

    let recheck = residual_norm(&op, &b, &z);
    let mut w = NodeField::zeros(p.grid);
    for (o, (zi, li)) in w.data_mut().iter_mut().zip(z.iter().zip(&lift)) {
        *o = zi + li;
    }
    Ok(ScalarSolution { w, stats, recheck })
}

/// Solve with natural (Neumann) flux data `n·M(∇w+g) = flux` given in the
/// face slots of `flux`. Requires compatible data; returns the solution with
/// zero volume-weighted mean.
pub fn solve_neumann(p: &ScalarProblem, flux: &BoundaryTrace) -> Result<ScalarSolution, CoreError> {
    check_problem(p)?;
    p.grid.check_same(flux.grid(), "Neumann data")?;
    let s = sample_box(p.grid, p.coeff, p.eps)?;
    let grid = p.grid;

    let mut b = base_rhs(p, &s);
    // boundary quadrature: each boundary face spreads |F|·flux/4 to its corners
    for (&fid, &fv) in flux.face_ids().iter().zip(flux.face_vals()) {
        let (a, q) = grid.face_decode(fid);
        let (bb, cc) = cyclic(a);
        let wgt = 0.25 * grid.face_area(a) * fv;
        for db in 0..2usize {
            for dc in 0..2usize {
                let mut nq = q;
                nq[bb] += db;
                nq[cc] += dc;
                b[grid.node_idx(nq)] += wgt;
            }
        }
    }

    // compatibility: the constant test function must annihilate the data
    let total: f64 = b.iter().sum();
    let scale: f64 = b.iter().map(|v| v.abs()).sum::<f64>().max(1e-300);
    if total.abs() > 1e-8 * scale {
        return Err(CoreError::Incompatible {
            what: "Neumann data: volume source and boundary flux do not balance".into(),
            value: total,
            limit: 1e-8 * scale,
        });
    }

    let op = ScalarOperator::new(grid, &s, None);
    let diag = op.jacobi();
    let vols = node_volumes(grid);
    let opts = KrylovOpts {
        tol: SCALAR_TOL,
        max_iters: 40 * grid.cells().iter().map(|&n| n * n).max().unwrap_or(1),
        diag: Some(&diag),
        null_weights: Some(&vols),
    };
    let (z, stats) = if p.coeff.is_symmetric() {
        cg(&op, &b, &opts)?
    } else {
        bicgstab(&op, &b, &opts)?
    };
    let recheck = residual_norm(&op, &b, &z);
    let mut w = NodeField::zeros(grid);
    w.data_mut().copy_from_slice(&z);
    Ok(ScalarSolution { w, stats, recheck })
}

fn residual_norm(op: &dyn LinOp, b: &[f64], x: &[f64]) -> f64 {
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if bnorm == 0.0 {
        return 0.0;
    }
    let mut ax = vec![0.0; x.len()];
    op.apply(x, &mut ax);
    let r2: f64 = b.iter().zip(&ax).map(|(bi, ai)| (bi - ai) * (bi - ai)).sum();
    r2.sqrt() / bnorm
}

/// The discrete flux `M(∇w + g)` seen by the scheme, as a plain edge field
/// (control-volume weights divided back out).
pub fn flux(
    grid: &StaggeredGrid,
    coeff: &CoefficientField,
    eps: f64,
    w: &NodeField,
    g: &FaceField,
) -> Result<EdgeField, CoreError> {
    grid.check_same(w.grid(), "flux argument")?;
    grid.check_same(g.grid(), "flux source")?;
    let s = sample_box(grid, coeff, eps)?;
    let mut e = ops::discrete_grad(w);
    let g_edge = ops::face_to_edge(g);
    for (ev, &gv) in e.data_mut().iter_mut().zip(g_edge.data()) {
        *ev += gv;
    }
    let mut weighted = EdgeField::zeros(grid);
    apply_weighted(grid, &s, &e, &mut weighted);
    let mut out = EdgeField::zeros(grid);
    for a in 0..3 {
        let d = grid.edge_dims(a);
        for k in 0..d[2] {
            for j in 0..d[1] {
                for i in 0..d[0] {
                    let p = [i, j, k];
                    let id = grid.edge_idx(a, p);
                    out.data_mut()[id] = weighted.data()[id] / grid.edge_volume(a, p);
                }
            }
        }
    }
    Ok(out)
}

/// Dirichlet corrector along `axis`: `div(M(x/eps) ∇Φ) = 0`, `Φ = x_axis`
/// on the boundary.
pub fn dirichlet_corrector(
    grid: &StaggeredGrid,
    coeff: &CoefficientField,
    eps: f64,
    axis: usize,
) -> Result<ScalarSolution, CoreError> {
    if axis > 2 {
        return Err(CoreError::invalid(format!(
            "corrector axis must be 0, 1, or 2, got {axis}"
        )));
    }
    let zero_n = NodeField::zeros(grid);
    let zero_f = FaceField::zeros(grid);
    let p = ScalarProblem {
        grid,
        coeff,
        eps,
        source: &zero_n,
        flux_source: &zero_f,
    };
    let bc = NodeField::from_fn(grid, |x| x[axis]);
    solve_dirichlet(&p, &bc)
}

/// Gradient size summary of a nodal field, split by boundary proximity.
#[derive(Clone, Copy, Debug)]
pub struct LipschitzReport {
    pub sup_solution: f64,
    /// max |∇w| over all edges
    pub sup_gradient: f64,
    /// max |∇w| over edges not lying on the boundary
    pub sup_gradient_interior: f64,
}

pub fn lipschitz_report(w: &NodeField) -> LipschitzReport {
    let grid = w.grid().clone();
    let grad = ops::discrete_grad(w);
    let mut sup_g = 0.0f64;
    let mut sup_int = 0.0f64;
    for a in 0..3 {
        let d = grid.edge_dims(a);
        for k in 0..d[2] {
            for j in 0..d[1] {
                for i in 0..d[0] {
                    let p = [i, j, k];
                    let v = grad.at(a, p).abs();
                    sup_g = sup_g.max(v);
                    if !grid.edge_on_boundary(a, p) {
                        sup_int = sup_int.max(v);
                    }
                }
            }
        }
    }
    let sup_w = w.data().iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    LipschitzReport {
        sup_solution: sup_w,
        sup_gradient: sup_g,
        sup_gradient_interior: sup_int,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::make_family;
    use crate::norms::FieldNorms;
    use std::f64::consts::PI;

    fn identity_coeff() -> CoefficientField {
        CoefficientField::constant([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap()
    }

    fn dirichlet_error(n: usize) -> f64 {
        let grid = StaggeredGrid::unit_cube(n);
        let coeff = identity_coeff();
        let exact = |x: [f64; 3]| (PI * x[0]).sin() * (PI * x[1]).sin() * (PI * x[2]).sin();
        // div(∇w*) = Δw* = −3π² w*
        let source = NodeField::from_fn(&grid, |x| -3.0 * PI * PI * exact(x));
        let zero_f = FaceField::zeros(&grid);
        let p = ScalarProblem {
            grid: &grid,
            coeff: &coeff,
            eps: f64::INFINITY,
            source: &source,
            flux_source: &zero_f,
        };
        let bc = NodeField::from_fn(&grid, exact);
        let sol = solve_dirichlet(&p, &bc).unwrap();
        let mut err = sol.w.clone();
        let exact_field = NodeField::from_fn(&grid, exact);
        for (e, &x) in err.data_mut().iter_mut().zip(exact_field.data()) {
            *e -= x;
        }
        err.lp_norm(2.0).unwrap()
    }

    #[test]
    fn dirichlet_manufactured_solution_is_second_order() {
        let e1 = dirichlet_error(8);
        let e2 = dirichlet_error(16);
        let rate = (e1 / e2).log2();
        assert!(rate > 1.9, "rate {rate}, errors {e1} vs {e2}");
    }

    fn neumann_error(n: usize) -> f64 {
        let grid = StaggeredGrid::unit_cube(n);
        let coeff = identity_coeff();
        let exact = |x: [f64; 3]| (PI * x[0]).cos();
        let source = NodeField::from_fn(&grid, |x| -PI * PI * exact(x));
        let zero_f = FaceField::zeros(&grid);
        let p = ScalarProblem {
            grid: &grid,
            coeff: &coeff,
            eps: f64::INFINITY,
            source: &source,
            flux_source: &zero_f,
        };
        // ∂w*/∂n = ∓π sin(πx₁) = 0 on the x-walls; 0 on tangential walls too
        let flux = BoundaryTrace::zeros(&grid);
        let sol = solve_neumann(&p, &flux).unwrap();
        // compare zero-mean representatives
        let exact_field = NodeField::from_fn(&grid, exact);
        let vols = node_volumes(&grid);
        let total: f64 = vols.iter().sum();
        let mean_exact: f64 = exact_field
            .data()
            .iter()
            .zip(&vols)
            .map(|(&v, &w)| v * w)
            .sum::<f64>()
            / total;
        let mut err = sol.w.clone();
        for (e, &x) in err.data_mut().iter_mut().zip(exact_field.data()) {
            *e -= x - mean_exact;
        }
        err.lp_norm(2.0).unwrap()
    }

    #[test]
    fn neumann_manufactured_solution_is_second_order() {
        let e1 = neumann_error(8);
        let e2 = neumann_error(16);
        let rate = (e1 / e2).log2();
        assert!(rate > 1.9, "rate {rate}, errors {e1} vs {e2}");
    }

    #[test]
    fn neumann_rejects_unbalanced_data() {
        let grid = StaggeredGrid::unit_cube(4);
        let coeff = identity_coeff();
        let zero_n = NodeField::zeros(&grid);
        let zero_f = FaceField::zeros(&grid);
        let p = ScalarProblem {
            grid: &grid,
            coeff: &coeff,
            eps: f64::INFINITY,
            source: &zero_n,
            flux_source: &zero_f,
        };
        let mut flux = BoundaryTrace::zeros(&grid);
        for v in flux.face_vals_mut() {
            *v = 1.0; // net influx with no volume sink
        }
        assert!(matches!(
            solve_neumann(&p, &flux),
            Err(CoreError::Incompatible { .. })
        ));
    }

    #[test]
    fn laminate_axial_profile_is_reproduced_exactly() {
        // With bc sampled from the discrete 1-D profile, the harmonic-mean
        // scheme reproduces it at every node (the flux is constant).
        let n = 12;
        let grid = StaggeredGrid::unit_cube(n);
        let coeff = make_family("laminate", &[2.0, 1.0]).unwrap();
        let a = |t: f64| 2.0 + (2.0 * PI * t).cos();
        let h = 1.0 / n as f64;
        let mut cum = vec![0.0; n + 1];
        for i in 0..n {
            cum[i + 1] = cum[i] + 1.0 / a((i as f64 + 0.5) * h);
        }
        let total = cum[n];
        let profile: Vec<f64> = cum.iter().map(|&s| s / total).collect();

        let zero_n = NodeField::zeros(&grid);
        let zero_f = FaceField::zeros(&grid);
        let p = ScalarProblem {
            grid: &grid,
            coeff: &coeff,
            eps: 1.0,
            source: &zero_n,
            flux_source: &zero_f,
        };
        let bc = NodeField::from_fn(&grid, |x| {
            let i = (x[0] * n as f64).round() as usize;
            profile[i.min(n)]
        });
        let sol = solve_dirichlet(&p, &bc).unwrap();
        let mut max_err = 0.0f64;
        let nd = grid.node_dims();
        for k in 0..nd[2] {
            for j in 0..nd[1] {
                for i in 0..nd[0] {
                    let diff = (sol.w.at([i, j, k]) - profile[i]).abs();
                    max_err = max_err.max(diff);
                }
            }
        }
        assert!(max_err < 1e-8, "max deviation {max_err}");
    }

    #[test]
    fn transverse_coordinate_stays_harmonic_for_laminate() {
        let grid = StaggeredGrid::unit_cube(8);
        let coeff = make_family("laminate", &[2.0, 1.0]).unwrap();
        let sol = dirichlet_corrector(&grid, &coeff, 0.5, 1).unwrap();
        let exact = NodeField::from_fn(&grid, |x| x[1]);
        let max_err = sol
            .w
            .data()
            .iter()
            .zip(exact.data())
            .fold(0.0f64, |m, (&a, &b)| m.max((a - b).abs()));
        assert!(max_err < 1e-8, "max deviation {max_err}");
    }

    #[test]
    fn corrector_gradient_stays_bounded_across_scales() {
        // 1-D laminate corrector gradient is at most max(a)·(harmonic mean)⁻¹…
        // in the interior; the bound must not degrade as eps shrinks.
        let grid = StaggeredGrid::unit_cube(16);
        let coeff = make_family("laminate", &[2.0, 1.0]).unwrap();
        for &eps in &[0.5, 0.25] {
            let sol = dirichlet_corrector(&grid, &coeff, eps, 0).unwrap();
            let rep = lipschitz_report(&sol.w);
            assert!(rep.sup_solution <= 1.0 + 1e-8);
            assert!(
                rep.sup_gradient_interior < 2.0,
                "eps {eps}: interior gradient {}",
                rep.sup_gradient_interior
            );
        }
    }

    #[test]
    fn oblique_constant_coefficient_keeps_second_order() {
        // exercise the off-diagonal quadrature with a full constant matrix
        let m = [[2.0, 0.4, 0.0], [0.4, 1.5, 0.2], [0.0, 0.2, 1.0]];
        let coeff = CoefficientField::constant(m).unwrap();
        let err = |n: usize| -> f64 {
            let grid = StaggeredGrid::unit_cube(n);
            let exact = |x: [f64; 3]| (PI * x[0]).sin() * (PI * x[1]).sin() * (PI * x[2]).sin();
            // div(M∇w*) for constant symmetric M
            let source = NodeField::from_fn(&grid, |x| {
                let s = |t: f64| (PI * t).sin();
                let c = |t: f64| (PI * t).cos();
                let (x1, x2, x3) = (x[0], x[1], x[2]);
                let wxx = -PI * PI * exact(x);
                let wxy = PI * PI * c(x1) * c(x2) * s(x3);
                let wxz = PI * PI * c(x1) * s(x2) * c(x3);
                let wyz = PI * PI * s(x1) * c(x2) * c(x3);
                m[0][0] * wxx + m[1][1] * wxx + m[2][2] * wxx
                    + 2.0 * (m[0][1] * wxy + m[0][2] * wxz + m[1][2] * wyz)
            });
            let zero_f = FaceField::zeros(&grid);
            let p = ScalarProblem {
                grid: &grid,
                coeff: &coeff,
                eps: f64::INFINITY,
                source: &source,
                flux_source: &zero_f,
            };
            let bc = NodeField::from_fn(&grid, exact);
            let sol = solve_dirichlet(&p, &bc).unwrap();
            let exact_field = NodeField::from_fn(&grid, exact);
            let mut e = sol.w.clone();
            for (v, &x) in e.data_mut().iter_mut().zip(exact_field.data()) {
                *v -= x;
            }
            e.lp_norm(2.0).unwrap()
        };
        let e1 = err(8);
        let e2 = err(16);
        let rate = (e1 / e2).log2();
        assert!(rate > 1.7, "rate {rate}, errors {e1} vs {e2}");
    }
}
