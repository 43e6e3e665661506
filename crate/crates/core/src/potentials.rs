//! Potential reconstructions and reduction transcripts.
//!
//! Two discrete right inverses are provided: a vector potential `h` with
//! `∇×h = g` for discretely solenoidal face fields `g`, and a gradient
//! potential `P` with `∇P = u` for discretely irrotational edge fields `u`.
//! The vector potential is built on a padded periodic lattice of twice the
//! box extent: the field is extended across the box boundary by a harmonic
//! flux extension on the shell, the mean is peeled off into an affine
//! potential, and a componentwise periodic Poisson solve supplies the rest.
//! Exact transpose identities of the periodic operators (`∇·∇×ᵀ = 0`, and
//! the factorization of the vector Laplacian into curl and divergence parts)
//! make the reconstruction exact up to solver tolerances.
//!
//! On top of these sit two [`ReductionTranscript`] builders that re-derive a
//! curl-curl solution through its potentials — once eliminating the field in
//! favor of its curl, once the other way around — and record the residual of
//! every identity used along the way.

use std::cell::RefCell;

use crate::elliptic;
use crate::error::CoreError;
use crate::field::{EdgeField, FaceField, NodeField};
use crate::grid::{cyclic, StaggeredGrid};
use crate::krylov::{cg, KrylovOpts, LinOp, SolveStats};
use crate::maxwell::{self, MaxwellProblem};
use crate::ops;
use crate::torus::{self, TorusGrid};

/// Relative Krylov tolerance for potential solves. Tighter than the field
/// solves because reconstruction residuals chain through several solves.
pub const POTENTIAL_TOL: f64 = 1e-12;

/// Aggregate work/quality counters over the solves inside one potential
/// reconstruction.
#[derive(Clone, Copy, Debug, Default)]
pub struct PotentialStats {
    pub iterations: usize,
    pub max_residual: f64,
}

impl PotentialStats {
    fn absorb(&mut self, s: &SolveStats) {
        self.iterations += s.iterations;
        self.max_residual = self.max_residual.max(s.residual);
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// `2·Σ_a 1/h_a`: the scale factor relating a field to its first differences.
fn grad_scale(h: [f64; 3]) -> f64 {
    2.0 * (1.0 / h[0] + 1.0 / h[1] + 1.0 / h[2])
}

// ---------------------------------------------------------------------------
// divergence projection on box cells
// ---------------------------------------------------------------------------

/// Plain 7-point cell Laplacian on the box with natural (zero-flux) walls,
/// scaled by the cell volume.
struct BoxCellLaplace<'a> {
    grid: &'a StaggeredGrid,
}

impl LinOp for BoxCellLaplace<'_> {
    fn len(&self) -> usize {
        self.grid.num_cells()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let g = self.grid;
        let d = g.cell_dims();
        let h = g.h();
        let vol = g.cell_volume();
        for k in 0..d[2] {
            for j in 0..d[1] {
                for i in 0..d[0] {
                    let p = [i, j, k];
                    let id = g.cell_idx(p);
                    let mut s = 0.0;
                    for a in 0..3 {
                        let inv_h2 = 1.0 / (h[a] * h[a]);
                        if p[a] + 1 < d[a] {
                            let mut q = p;
                            q[a] += 1;
                            s += (x[id] - x[g.cell_idx(q)]) * inv_h2;
                        }
                        if p[a] > 0 {
                            let mut q = p;
                            q[a] -= 1;
                            s += (x[id] - x[g.cell_idx(q)]) * inv_h2;
                        }
                    }
                    y[id] = vol * s;
                }
            }
        }
    }
}

fn cell_divergence(grid: &StaggeredGrid, v: &FaceField) -> Vec<f64> {
    let d = grid.cell_dims();
    let h = grid.h();
    let mut out = vec![0.0; grid.num_cells()];
    for k in 0..d[2] {
        for j in 0..d[1] {
            for i in 0..d[0] {
                let p = [i, j, k];
                let mut s = 0.0;
                for a in 0..3 {
                    let mut hi = p;
                    hi[a] += 1;
                    s += (v.at(a, hi) - v.at(a, p)) / h[a];
                }
                out[grid.cell_idx(p)] = s;
            }
        }
    }
    out
}

/// Remove the cell divergence of a face field by subtracting the gradient of
/// a cell potential. Interior faces receive gradient fluxes; boundary faces
/// receive the uniform compensating flux that balances the total divergence.
pub fn make_divergence_free(
    grid: &StaggeredGrid,
    v: &FaceField,
) -> Result<(FaceField, SolveStats), CoreError> {
    grid.check_same(v.grid(), "divergence projection")?;
    let div = cell_divergence(grid, v);
    let vol = grid.cell_volume();
    let h = grid.h();
    let ext = grid.extent();
    let area_total =
        2.0 * (ext[1] * ext[2] + ext[0] * ext[2] + ext[0] * ext[1]);
    let total: f64 = div.iter().map(|d| d * vol).sum();
    let kappa = total / area_total;

    let d = grid.cell_dims();
    let mut b = vec![0.0; grid.num_cells()];
    for k in 0..d[2] {
        for j in 0..d[1] {
            for i in 0..d[0] {
                let p = [i, j, k];
                let mut wall_area = 0.0;
                for a in 0..3 {
                    let face_area = vol / h[a];
                    if p[a] == 0 {
                        wall_area += face_area;
                    }
                    if p[a] + 1 == d[a] {
                        wall_area += face_area;
                    }
                }
                b[grid.cell_idx(p)] = kappa * wall_area - div[grid.cell_idx(p)] * vol;
            }
        }
    }

    let op = BoxCellLaplace { grid };
    let ones = vec![1.0; grid.num_cells()];
    let max_n = *grid.cells().iter().max().unwrap_or(&1);
    let opts = KrylovOpts {
        tol: POTENTIAL_TOL,
        max_iters: 80 * max_n * max_n,
        diag: None,
        null_weights: Some(&ones),
    };
    let (psi, stats) = cg(&op, &b, &opts)?;

    let mut out = v.clone();
    for a in 0..3 {
        let fd = grid.face_dims(a);
        for k in 0..fd[2] {
            for j in 0..fd[1] {
                for i in 0..fd[0] {
                    let p = [i, j, k];
                    let id = grid.face_idx(a, p);
                    let corr = if p[a] == 0 {
                        // lower wall: outward is −a, stored component −κ
                        -kappa
                    } else if p[a] == fd[a] - 1 {
                        kappa
                    } else {
                        let mut lo = p;
                        lo[a] -= 1;
                        (psi[grid.cell_idx(p)] - psi[grid.cell_idx(lo)]) / h[a]
                    };
                    out.data_mut()[id] = v.data()[id] - corr;
                }
            }
        }
    }
    Ok((out, stats))
}

// ---------------------------------------------------------------------------
// vector potential on the padded torus
// ---------------------------------------------------------------------------

fn padded_torus(grid: &StaggeredGrid) -> Result<(TorusGrid, [usize; 3]), CoreError> {
    let n = grid.cells();
    let h = grid.h();
    let origin = grid.origin();
    let off = [n[0] / 2, n[1] / 2, n[2] / 2];
    let t_origin = [
        origin[0] - off[0] as f64 * h[0],
        origin[1] - off[1] as f64 * h[1],
        origin[2] - off[2] as f64 * h[2],
    ];
    let t_extent = [
        2.0 * grid.extent()[0],
        2.0 * grid.extent()[1],
        2.0 * grid.extent()[2],
    ];
    let t = TorusGrid::new(t_origin, t_extent, [2 * n[0], 2 * n[1], 2 * n[2]])?;
    Ok((t, off))
}

/// Harmonic extension of the interface fluxes into the shell: compact-vector
/// Neumann Laplacian over the shell cells of the padded torus.
struct ShellLaplace<'a> {
    t: &'a TorusGrid,
    cells: &'a [[usize; 3]],
    /// torus lex cell id → compact index (usize::MAX when not a shell cell)
    compact: &'a [usize],
}

impl LinOp for ShellLaplace<'_> {
    fn len(&self) -> usize {
        self.cells.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let h = self.t.h();
        let vol = self.t.cell_volume();
        for (i, &p) in self.cells.iter().enumerate() {
            let mut s = 0.0;
            for a in 0..3 {
                let inv_h2 = 1.0 / (h[a] * h[a]);
                for dir in [-1isize, 1] {
                    let q = self.t.step(p, a, dir);
                    let nb = self.compact[self.t.lex(q)];
                    if nb != usize::MAX {
                        s += (x[i] - x[nb]) * inv_h2;
                    }
                }
            }
            y[i] = vol * s;
        }
    }
}

/// Componentwise periodic scalar Laplacian `DᵀD` on the torus cell lattice.
struct TorusScalarLaplace<'a> {
    t: &'a TorusGrid,
    scratch: RefCell<Vec<f64>>,
}

impl LinOp for TorusScalarLaplace<'_> {
    fn len(&self) -> usize {
        self.t.scalar_len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut e = self.scratch.borrow_mut();
        torus::grad(self.t, x, &mut e);
        torus::grad_transpose(self.t, &e, y);
    }
}

fn in_box(off: [usize; 3], n: [usize; 3], q: [usize; 3]) -> bool {
    (0..3).all(|a| q[a] >= off[a] && q[a] < off[a] + n[a])
}

/// Construct an edge field `h` with `∇×h = g`, for a face field `g` whose
/// cell divergence vanishes (up to round-off; project with
/// [`make_divergence_free`] first otherwise). The gauge is fixed by the
/// construction and carries no physical meaning.
pub fn vector_potential(
    grid: &StaggeredGrid,
    g: &FaceField,
) -> Result<(EdgeField, PotentialStats), CoreError> {
    grid.check_same(g.grid(), "vector potential")?;
    let sup_g = sup(g.data());
    if sup_g == 0.0 {
        return Ok((EdgeField::zeros(grid), PotentialStats::default()));
    }
    let div = cell_divergence(grid, g);
    let div_sup = sup(&div);
    let tol_div = 1e-8 * grad_scale(grid.h()) * sup_g;
    if div_sup > tol_div {
        return Err(CoreError::invalid(format!(
            "vector potential input has cell divergence {div_sup:.3e} \
             (tolerance {tol_div:.3e}); project the field first"
        )));
    }

    let (t, off) = padded_torus(grid)?;
    let n = grid.cells();
    let h = t.h();
    let mut stats = PotentialStats::default();

    // scatter the box faces into the torus face vector; mark interface faces
    let mut gt = vec![0.0; t.vector_len()];
    let mut assigned = vec![false; t.vector_len()];
    for a in 0..3 {
        let fd = grid.face_dims(a);
        for k in 0..fd[2] {
            for j in 0..fd[1] {
                for i in 0..fd[0] {
                    let p = [i, j, k];
                    let q = [p[0] + off[0], p[1] + off[1], p[2] + off[2]];
                    let id = t.block_idx(a, q);
                    gt[id] = g.at(a, p);
                    assigned[id] = true;
                }
            }
        }
    }

    // shell cells in torus storage order (deterministic)
    let mut shell_cells: Vec<[usize; 3]> = Vec::new();
    let mut compact = vec![usize::MAX; t.scalar_len()];
    t.for_each(|p| {
        if !in_box(off, n, p) {
            compact[t.lex(p)] = shell_cells.len();
            shell_cells.push(p);
        }
    });

    // balance equations: prescribed interface fluxes move to the right side
    let vol = t.cell_volume();
    let mut b = vec![0.0; shell_cells.len()];
    for (i, &p) in shell_cells.iter().enumerate() {
        let mut s = 0.0;
        for a in 0..3 {
            let hi_cell = t.step(p, a, 1);
            if in_box(off, n, hi_cell) {
                s += gt[t.block_idx(a, hi_cell)] / h[a];
            }
            let lo_cell = t.step(p, a, -1);
            if in_box(off, n, lo_cell) {
                s -= gt[t.block_idx(a, p)] / h[a];
            }
        }
        b[i] = vol * s;
    }
    // exact-arithmetic compatibility holds because the box divergence
    // vanishes; sweep the round-off imbalance out before the solve
    let imbalance: f64 = b.iter().sum::<f64>() / b.len() as f64;
    for v in &mut b {
        *v -= imbalance;
    }
    let shell_op = ShellLaplace {
        t: &t,
        cells: &shell_cells,
        compact: &compact,
    };
    let ones = vec![1.0; shell_cells.len()];
    let max_n = 2 * *n.iter().max().unwrap_or(&1);
    let opts = KrylovOpts {
        tol: POTENTIAL_TOL,
        max_iters: 80 * max_n * max_n,
        diag: None,
        null_weights: Some(&ones),
    };
    let (phi, st) = cg(&shell_op, &b, &opts)?;
    stats.absorb(&st);

    // gradient fluxes on shell–shell faces complete the extension
    for a in 0..3 {
        t.for_each(|p| {
            let id = t.block_idx(a, p);
            if assigned[id] {
                return;
            }
            let up = compact[t.lex(p)];
            let lo_cell = t.step(p, a, -1);
            let lo = compact[t.lex(lo_cell)];
            let val = match (up, lo) {
                (u, l) if u != usize::MAX && l != usize::MAX => (phi[u] - phi[l]) / h[a],
                _ => unreachable!("unassigned faces lie between shell cells"),
            };
            gt[id] = val;
        });
    }

    // peel off the block means: they are reproduced by an affine potential
    let slen = t.scalar_len();
    let mut gbar = [0.0f64; 3];
    for a in 0..3 {
        gbar[a] = torus::mean_scalar(&gt[a * slen..(a + 1) * slen]);
    }

    // componentwise periodic Poisson for the fluctuating part
    let mut w = vec![0.0; t.vector_len()];
    let lap = TorusScalarLaplace {
        t: &t,
        scratch: RefCell::new(vec![0.0; t.vector_len()]),
    };
    for a in 0..3 {
        let mut rhs: Vec<f64> = gt[a * slen..(a + 1) * slen]
            .iter()
            .map(|&v| v - gbar[a])
            .collect();
        let m = torus::mean_scalar(&rhs);
        for v in &mut rhs {
            *v -= m;
        }
        let ones_s = vec![1.0; slen];
        let opts = KrylovOpts {
            tol: POTENTIAL_TOL,
            max_iters: 80 * max_n * max_n,
            diag: None,
            null_weights: Some(&ones_s),
        };
        let (wa, st) = cg(&lap, &rhs, &opts)?;
        stats.absorb(&st);
        w[a * slen..(a + 1) * slen].copy_from_slice(&wa);
    }

    // h = ∇×ᵀ w + affine part reproducing the mean curl
    let mut ht = vec![0.0; t.vector_len()];
    torus::curl_transpose(&t, &w, &mut ht);
    let center = [
        t.origin()[0] + 0.5 * t.extent()[0],
        t.origin()[1] + 0.5 * t.extent()[1],
        t.origin()[2] + 0.5 * t.extent()[2],
    ];
    for a in 0..3 {
        let (bx, cx) = cyclic(a);
        t.for_each(|p| {
            let x = t.edge_center(a, p);
            let y = [x[0] - center[0], x[1] - center[1], x[2] - center[2]];
            ht[t.block_idx(a, p)] += 0.5 * (gbar[bx] * y[cx] - gbar[cx] * y[bx]);
        });
    }

    // restrict to the box edge lattice
    let mut out = EdgeField::zeros(grid);
    for a in 0..3 {
        let ed = grid.edge_dims(a);
        for k in 0..ed[2] {
            for j in 0..ed[1] {
                for i in 0..ed[0] {
                    let p = [i, j, k];
                    let q = [p[0] + off[0], p[1] + off[1], p[2] + off[2]];
                    out.set(a, p, ht[t.block_idx(a, q)]);
                }
            }
        }
    }
    Ok((out, stats))
}

// ---------------------------------------------------------------------------
// gradient potential on box nodes
// ---------------------------------------------------------------------------

/// Weighted nodal Laplacian `DᵀWD` with the edge control volumes as weights.
struct NodeLaplace<'a> {
    grid: &'a StaggeredGrid,
    scratch: RefCell<(NodeField, EdgeField)>,
}

impl NodeLaplace<'_> {
    fn weighted_grad_transpose(grid: &StaggeredGrid, e: &EdgeField, out: &mut [f64]) {
        let div = ops::nodal_div_weak(e);
        let nd = grid.node_dims();
        for k in 0..nd[2] {
            for j in 0..nd[1] {
                for i in 0..nd[0] {
                    let p = [i, j, k];
                    let id = grid.node_idx(p);
                    out[id] = -grid.node_volume(p) * div.at(p);
                }
            }
        }
    }

    fn jacobi(&self) -> Vec<f64> {
        let g = self.grid;
        let nd = g.node_dims();
        let n = g.cells();
        let h = g.h();
        let mut d = vec![0.0; g.num_nodes()];
        for k in 0..nd[2] {
            for j in 0..nd[1] {
                for i in 0..nd[0] {
                    let p = [i, j, k];
                    let mut s = 0.0;
                    for a in 0..3 {
                        let inv_h2 = 1.0 / (h[a] * h[a]);
                        if p[a] < n[a] {
                            s += g.edge_volume(a, p) * inv_h2;
                        }
                        if p[a] > 0 {
                            let mut q = p;
                            q[a] -= 1;
                            s += g.edge_volume(a, q) * inv_h2;
                        }
                    }
                    d[g.node_idx(p)] = s;
                }
            }
        }
        d
    }
}

impl LinOp for NodeLaplace<'_> {
    fn len(&self) -> usize {
        self.grid.num_nodes()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut buf = self.scratch.borrow_mut();
        let (node, edge) = &mut *buf;
        node.data_mut().copy_from_slice(x);
        ops::discrete_grad_into(node, edge);
        Self::weighted_grad_transpose(self.grid, edge, y);
    }
}

/// Construct a nodal potential `P` with `∇P = u`, for an edge field whose
/// discrete curl vanishes (up to round-off). `P` has weighted zero mean.
pub fn gradient_potential(
    grid: &StaggeredGrid,
    u: &EdgeField,
) -> Result<(NodeField, SolveStats), CoreError> {
    grid.check_same(u.grid(), "gradient potential")?;
    let sup_u = sup(u.data());
    if sup_u == 0.0 {
        return Ok((NodeField::zeros(grid), SolveStats::default()));
    }
    let curl = ops::discrete_curl(u);
    let curl_sup = sup(curl.data());
    let tol_curl = 1e-8 * grad_scale(grid.h()) * sup_u;
    if curl_sup > tol_curl {
        return Err(CoreError::invalid(format!(
            "gradient potential input has circulation {curl_sup:.3e} \
             (tolerance {tol_curl:.3e}); it is not a discrete gradient"
        )));
    }

    let op = NodeLaplace {
        grid,
        scratch: RefCell::new((NodeField::zeros(grid), EdgeField::zeros(grid))),
    };
    let mut b = vec![0.0; grid.num_nodes()];
    NodeLaplace::weighted_grad_transpose(grid, u, &mut b);
    let diag = op.jacobi();
    let vols = {
        let nd = grid.node_dims();
        let mut v = vec![0.0; grid.num_nodes()];
        for k in 0..nd[2] {
            for j in 0..nd[1] {
                for i in 0..nd[0] {
                    let p = [i, j, k];
                    v[grid.node_idx(p)] = grid.node_volume(p);
                }
            }
        }
        v
    };
    let max_n = *grid.cells().iter().max().unwrap_or(&1);
    let opts = KrylovOpts {
        tol: POTENTIAL_TOL,
        max_iters: 80 * max_n * max_n,
        diag: Some(&diag),
        null_weights: Some(&vols),
    };
    let (p, stats) = cg(&op, &b, &opts)?;
    let mut out = NodeField::zeros(grid);
    out.data_mut().copy_from_slice(&p);
    Ok((out, stats))
}

// ---------------------------------------------------------------------------
// reduction transcripts
// ---------------------------------------------------------------------------

/// One verified identity in a reduction transcript.
#[derive(Clone, Debug)]
pub struct TranscriptItem {
    pub label: &'static str,
    pub residual: f64,
    pub tol: f64,
}

impl TranscriptItem {
    pub fn pass(&self) -> bool {
        self.residual <= self.tol
    }
}

/// The residual record of one reduction chain.
#[derive(Clone, Debug, Default)]
pub struct ReductionTranscript {
    pub items: Vec<TranscriptItem>,
}

impl ReductionTranscript {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(TranscriptItem::pass)
    }

    fn record(&mut self, label: &'static str, residual: f64, tol: f64) {
        self.items.push(TranscriptItem {
            label,
            residual,
            tol,
        });
    }
}

fn transcript_tol(grid: &StaggeredGrid) -> f64 {
    let hmax = grid.h().iter().cloned().fold(0.0f64, f64::max);
    (4.0 * hmax).max(1e-6)
}

fn rel(num: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        num / scale
    } else {
        num
    }
}

fn l2_diff_edges(a: &EdgeField, b: &EdgeField) -> Result<(f64, f64), CoreError> {
    use crate::norms::FieldNorms;
    let mut d = a.clone();
    for (v, &x) in d.data_mut().iter_mut().zip(b.data()) {
        *v -= x;
    }
    Ok((d.lp_norm(2.0)?, b.lp_norm(2.0)?))
}

fn l2_diff_faces(a: &FaceField, b: &FaceField) -> Result<(f64, f64), CoreError> {
    use crate::norms::FieldNorms;
    let mut d = a.clone();
    for (v, &x) in d.data_mut().iter_mut().zip(b.data()) {
        *v -= x;
    }
    Ok((d.lp_norm(2.0)?, b.lp_norm(2.0)?))
}

fn interior_div_sup(grid: &StaggeredGrid, e: &EdgeField) -> f64 {
    let div = ops::nodal_div_weak(e);
    let nd = grid.node_dims();
    let mut m = 0.0f64;
    for k in 1..nd[2] - 1 {
        for j in 1..nd[1] - 1 {
            for i in 1..nd[0] - 1 {
                m = m.max(div.at([i, j, k]).abs());
            }
        }
    }
    m
}

/// Re-derive the curl of a solved field through its potentials: the
/// zero-order defect `B∘u − F` is solenoidal, admits a curl potential, and
/// together with a scalar pressure reproduces `A∘(∇×u)`. Every identity
/// used in the chain is recorded with its relative residual.
pub fn reduce_curl_bound(
    p: &MaxwellProblem,
    u: &EdgeField,
) -> Result<ReductionTranscript, CoreError> {
    let grid = p.grid;
    grid.check_same(u.grid(), "reduction input")?;
    let tol = transcript_tol(grid);
    let kappa = grad_scale(grid.h());
    let mut tr = ReductionTranscript::default();

    // d = B∘u − F on edges
    let mut d = maxwell::apply_b_pointwise(grid, p.coeff_b, p.eps, u)?;
    for (v, &f) in d.data_mut().iter_mut().zip(p.rhs_f.data()) {
        *v -= f;
    }
    let r1 = rel(interior_div_sup(grid, &d), kappa * sup(d.data()));
    tr.record("zero-order defect is weakly solenoidal", r1, tol);

    // transfer to faces, project, reconstruct its curl potential
    let d_face = ops::edge_to_face(&d);
    let (d_clean, _) = make_divergence_free(grid, &d_face)?;
    let (h_pot, _) = vector_potential(grid, &d_clean)?;
    let ch = ops::discrete_curl(&h_pot);
    let (num, den) = l2_diff_faces(&ch, &d_face)?;
    tr.record("defect admits a curl potential", rel(num, den), tol);

    // scalar pressure: div(A⁻¹(∇P + G − h)) = 0 with conormal data from the
    // surface divergence of the tangential trace
    let a_inv = p.coeff_a.invert_field()?;
    let h_face = ops::edge_to_face(&h_pot);
    let mut g_flux = p.rhs_g.clone();
    for (v, &hv) in g_flux.data_mut().iter_mut().zip(h_face.data()) {
        *v -= hv;
    }
    let zero_src = NodeField::zeros(grid);
    let scalar = elliptic::ScalarProblem {
        grid,
        coeff: &a_inv,
        eps: p.eps,
        source: &zero_src,
        flux_source: &g_flux,
    };
    let mut neumann = ops::surface_divergence(p.trace);
    for v in neumann.face_vals_mut() {
        *v = -*v;
    }
    let pressure = elliptic::solve_neumann(&scalar, &neumann)?;
    let flux = elliptic::flux(grid, &a_inv, p.eps, &pressure.w, &g_flux)?;
    let curl_u = ops::discrete_curl(u);
    let target = ops::face_to_edge(&curl_u);
    let (num, den) = l2_diff_edges(&flux, &target)?;
    tr.record("pressure flux recovers the curl", rel(num, den), tol);

    // boundary closure: n·(∇×u) = −Div(n×u) on every boundary face
    let nt = ops::normal_trace(&curl_u);
    let sd = ops::surface_divergence(p.trace);
    let mut worst = 0.0f64;
    for (a, b) in nt.face_vals().iter().zip(sd.face_vals()) {
        worst = worst.max((a + b).abs());
    }
    let r4 = rel(worst, kappa * sup(u.data()));
    tr.record("normal curl balances the surface divergence", r4, tol);

    Ok(tr)
}

/// Re-derive the field itself through its potentials: `∇×u` is solenoidal
/// and admits a vector potential `h`, the difference `u − h` is a gradient
/// `∇Q`, and the reconstructed field balances the volume source in the weak
/// divergence sense.
pub fn reduce_field_bound(
    p: &MaxwellProblem,
    u: &EdgeField,
) -> Result<ReductionTranscript, CoreError> {
    let grid = p.grid;
    grid.check_same(u.grid(), "reduction input")?;
    let tol = transcript_tol(grid);
    let kappa = grad_scale(grid.h());
    let mut tr = ReductionTranscript::default();

    let curl_u = ops::discrete_curl(u);

    // v = A∘(∇×u) − G; inverting the coefficient must return the curl
    let v_def = {
        let mut w = maxwell::apply_a_pointwise(grid, p.coeff_a, p.eps, &curl_u)?;
        for (x, &gv) in w.data_mut().iter_mut().zip(p.rhs_g.data()) {
            *x -= gv;
        }
        w
    };
    let a_inv = p.coeff_a.invert_field()?;
    let mut v_plus_g = v_def.clone();
    for (x, &gv) in v_plus_g.data_mut().iter_mut().zip(p.rhs_g.data()) {
        *x += gv;
    }
    let back = maxwell::apply_a_pointwise(grid, &a_inv, p.eps, &v_plus_g)?;
    let (num, den) = l2_diff_faces(&back, &curl_u)?;
    tr.record("coefficient inversion returns the curl", rel(num, den), tol);

    // the curl of the solution is solenoidal by construction
    let divs = cell_divergence(grid, &curl_u);
    let r2 = rel(sup(&divs), kappa * sup(curl_u.data()));
    tr.record("curl of the solution is solenoidal", r2, tol);

    // vector potential of the curl and the gradient remainder
    let (h_pot, _) = vector_potential(grid, &curl_u)?;
    let ch = ops::discrete_curl(&h_pot);
    let (num, den) = l2_diff_faces(&ch, &curl_u)?;
    tr.record("curl field admits a vector potential", rel(num, den), tol);

    let mut diff = u.clone();
    for (x, &hv) in diff.data_mut().iter_mut().zip(h_pot.data()) {
        *x -= hv;
    }
    let (q_pot, _) = gradient_potential(grid, &diff)?;
    let dq = ops::discrete_grad(&q_pot);
    let (num, den) = l2_diff_edges(&dq, &diff)?;
    tr.record("remainder is a discrete gradient", rel(num, den), tol);

    // weighted balance: div(B∘(∇Q + h) − F) vanishes weakly inside
    let mut recon = dq.clone();
    for (x, &hv) in recon.data_mut().iter_mut().zip(h_pot.data()) {
        *x += hv;
    }
    let mut balance = maxwell::apply_b_pointwise(grid, p.coeff_b, p.eps, &recon)?;
    for (x, &fv) in balance.data_mut().iter_mut().zip(p.rhs_f.data()) {
        *x -= fv;
    }
    let r5 = rel(
        interior_div_sup(grid, &balance),
        kappa * sup(balance.data()),
    );
    tr.record("reconstructed field balances the source", r5, tol);

    Ok(tr)
}
