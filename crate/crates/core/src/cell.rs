//! Periodic cell problems and effective (homogenized) coefficient matrices.
//!
//! For a 1-periodic elliptic coefficient `M`, the corrector `χ_j` solves
//! `div(M (∇χ_j + e_j)) = 0` on the unit torus with zero mean. The effective
//! matrix is the energy average `H_ij = ⟨(∇χ_j + e_j) · M (∇χ_i + e_i)⟩`,
//! which coincides with the flux average `⟨M(∇χ_j + e_j)⟩_i` because the
//! corrector equation annihilates discrete gradients.
//!
//! Discretization: nodal unknowns on [`TorusGrid`], forward-difference
//! gradients on edges. Diagonal coefficient entries are sampled at edge
//! midpoints (midpoint quadrature is spectrally accurate for smooth periodic
//! integrands and reproduces the discrete harmonic mean for laminates);
//! off-diagonal entries couple edge averages through a cell-centered
//! quadrature that keeps the discrete form symmetric whenever `M` is.

use crate::coeff::CoefficientField;
use crate::error::CoreError;
use crate::krylov::{bicgstab, cg, KrylovOpts, LinOp, SolveStats};
use crate::mat3::{self, Mat3};
use crate::torus::{self, TorusGrid};

/// Relative Krylov tolerance for corrector solves.
pub const CORRECTOR_TOL: f64 = 1e-10;

/// One solved corrector on the unit torus.
#[derive(Clone, Debug)]
pub struct CorrectorSolution {
    pub grid: TorusGrid,
    pub axis: usize,
    /// Nodal corrector values, zero mean.
    pub chi: Vec<f64>,
    pub stats: SolveStats,
    /// Independently recomputed relative residual ‖b − Aχ‖/‖b‖ (0 when b = 0).
    pub recheck: f64,
}

/// Effective coefficient matrix with its numerical pedigree.
#[derive(Clone, Debug)]
pub struct EffectiveMatrix {
    pub matrix: Mat3,
    /// Cells per axis used for the fine solve.
    pub resolution: usize,
    /// Name of the coefficient family this was computed from.
    pub provenance: String,
    /// Max-abs difference against a half-resolution recomputation.
    pub estimated_error: f64,
    /// Independent relative residuals of the three corrector solves.
    pub residuals: [f64; 3],
    pub iterations: [usize; 3],
}

/// Coefficient samples on one torus: diagonal entries at edge midpoints,
/// full matrices at cell centers only when off-diagonal entries exist.
struct SampledCoeff {
    diag: Vec<f64>,
    cells: Option<Vec<Mat3>>,
}

fn sample_coeff(coeff: &CoefficientField, g: &TorusGrid) -> SampledCoeff {
    let mut diag = vec![0.0; g.vector_len()];
    for a in 0..3 {
        g.for_each(|p| {
            let m = coeff.eval(g.edge_center(a, p));
            diag[g.block_idx(a, p)] = m[a][a];
        });
    }
    let cells = if coeff.is_diagonal() {
        None
    } else {
        let mut mats = Vec::with_capacity(g.scalar_len());
        g.for_each(|p| mats.push(coeff.eval(g.cell_center(p))));
        Some(mats)
    };
    SampledCoeff { diag, cells }
}

/// out = T e: pointwise diagonal multiply plus, when present, the
/// cell-quadrature coupling of edge averages across orientations.
fn apply_coeff(g: &TorusGrid, s: &SampledCoeff, e: &[f64], out: &mut [f64]) {
    for i in 0..e.len() {
        out[i] = s.diag[i] * e[i];
    }
    let Some(cells) = &s.cells else {
        return;
    };
    g.for_each(|p| {
        let m = &cells[g.lex(p)];
        // average of the four axis-aligned edges of cell p, per axis
        let mut avg = [0.0; 3];
        let mut edge_ids = [[0usize; 4]; 3];
        for a in 0..3 {
            let (b, c) = crate::grid::cyclic(a);
            let mut k = 0;
            let mut s_a = 0.0;
            for db in 0..2 {
                for dc in 0..2 {
                    let mut q = p;
                    q = g.step(q, b, db);
                    q = g.step(q, c, dc);
                    let id = g.block_idx(a, q);
                    edge_ids[a][k] = id;
                    s_a += e[id];
                    k += 1;
                }
            }
            avg[a] = 0.25 * s_a;
        }
        for beta in 0..3 {
            let mut coupled = 0.0;
            for alpha in 0..3 {
                if alpha != beta {
                    coupled += m[beta][alpha] * avg[alpha];
                }
            }
            if coupled != 0.0 {
                let w = 0.25 * coupled;
                for &id in &edge_ids[beta] {
                    out[id] += w;
                }
            }
        }
    });
}

/// Corrector operator x ↦ Dᵀ T D x on torus nodes (volume factor divided out).
struct CellOperator<'a> {
    g: &'a TorusGrid,
    s: &'a SampledCoeff,
    scratch_e: std::cell::RefCell<(Vec<f64>, Vec<f64>)>,
}

impl<'a> CellOperator<'a> {
    fn new(g: &'a TorusGrid, s: &'a SampledCoeff) -> Self {
        let n = g.vector_len();
        CellOperator {
            g,
            s,
            scratch_e: std::cell::RefCell::new((vec![0.0; n], vec![0.0; n])),
        }
    }

    fn jacobi_diagonal(&self) -> Vec<f64> {
        let g = self.g;
        let mut d = vec![0.0; g.scalar_len()];
        for a in 0..3 {
            let inv_h2 = 1.0 / (g.h()[a] * g.h()[a]);
            g.for_each(|q| {
                let prev = g.step(q, a, -1);
                d[g.lex(q)] +=
                    (self.s.diag[g.block_idx(a, q)] + self.s.diag[g.block_idx(a, prev)]) * inv_h2;
            });
        }
        d
    }
}

impl LinOp for CellOperator<'_> {
    fn len(&self) -> usize {
        self.g.scalar_len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut buf = self.scratch_e.borrow_mut();
        let (e, w) = &mut *buf;
        torus::grad(self.g, x, e);
        apply_coeff(self.g, self.s, e, w);
        torus::grad_transpose(self.g, w, y);
    }
}

/// Right-hand side −Dᵀ T 1_axis for the corrector along `axis`.
fn corrector_rhs(g: &TorusGrid, s: &SampledCoeff, axis: usize) -> Vec<f64> {
    let mut unit = vec![0.0; g.vector_len()];
    let n = g.scalar_len();
    unit[axis * n..(axis + 1) * n].fill(1.0);
    let mut w = vec![0.0; g.vector_len()];
    apply_coeff(g, s, &unit, &mut w);
    let mut b = vec![0.0; n];
    torus::grad_transpose(g, &w, &mut b);
    for v in b.iter_mut() {
        *v = -*v;
    }
    b
}

fn check_resolution(resolution: usize) -> Result<(), CoreError> {
    if resolution < 4 || !resolution.is_multiple_of(2) {
        return Err(CoreError::invalid(format!(
            "cell-problem resolution must be even and >= 4, got {resolution}"
        )));
    }
    Ok(())
}

/// Solve one corrector problem on the unit torus at `resolution` cells/axis.
pub fn solve_corrector(
    coeff: &CoefficientField,
    resolution: usize,
    axis: usize,
) -> Result<CorrectorSolution, CoreError> {
    check_resolution(resolution)?;
    if axis > 2 {
        return Err(CoreError::invalid(format!(
            "corrector axis must be 0, 1, or 2, got {axis}"
        )));
    }
    let g = TorusGrid::unit(resolution);
    let s = sample_coeff(coeff, &g);
    solve_one(coeff, &g, &s, axis)
}

fn solve_one(
    coeff: &CoefficientField,
    g: &TorusGrid,
    s: &SampledCoeff,
    axis: usize,
) -> Result<CorrectorSolution, CoreError> {
    let op = CellOperator::new(g, s);
    let b = corrector_rhs(g, s, axis);
    let diag = op.jacobi_diagonal();
    let weights = vec![1.0; g.scalar_len()];
    let opts = KrylovOpts {
        tol: CORRECTOR_TOL,
        max_iters: 20 * g.cells()[0] * g.cells()[0],
        diag: Some(&diag),
        null_weights: Some(&weights),
    };
    let (chi, stats) = if coeff.is_symmetric() {
        cg(&op, &b, &opts)?
    } else {
        bicgstab(&op, &b, &opts)?
    };

    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let recheck = if bnorm == 0.0 {
        0.0
    } else {
        let mut ax = vec![0.0; chi.len()];
        op.apply(&chi, &mut ax);
        let r2: f64 = b
            .iter()
            .zip(&ax)
            .map(|(bi, ai)| (bi - ai) * (bi - ai))
            .sum();
        r2.sqrt() / bnorm
    };
    if recheck > 10.0 * CORRECTOR_TOL {
        return Err(CoreError::SolverFailure {
            what: format!("corrector axis {axis} failed independent residual re-check"),
            residual: recheck,
            iterations: stats.iterations,
        });
    }
    Ok(CorrectorSolution {
        grid: g.clone(),
        axis,
        chi,
        stats,
        recheck,
    })
}

/// Effective matrix entries from three solved correctors on one torus.
fn assemble_effective(g: &TorusGrid, s: &SampledCoeff, chis: &[Vec<f64>; 3]) -> Mat3 {
    let n = g.scalar_len();
    let vol_ratio = g.cell_volume() / g.domain_volume();
    // q_j = D chi_j + 1_j, t_j = T q_j
    let mut q = [
        vec![0.0; g.vector_len()],
        vec![0.0; g.vector_len()],
        vec![0.0; g.vector_len()],
    ];
    let mut t = vec![0.0; g.vector_len()];
    let mut h = [[0.0; 3]; 3];
    for j in 0..3 {
        torus::grad(g, &chis[j], &mut q[j]);
        for v in q[j][j * n..(j + 1) * n].iter_mut() {
            *v += 1.0;
        }
    }
    for j in 0..3 {
        apply_coeff(g, s, &q[j], &mut t);
        for i in 0..3 {
            let dot: f64 = t.iter().zip(&q[i]).map(|(a, b)| a * b).sum();
            h[i][j] = vol_ratio * dot;
        }
    }
    h
}

fn homogenize_on(coeff: &CoefficientField, resolution: usize) -> Result<(Mat3, [f64; 3], [usize; 3]), CoreError> {
    let g = TorusGrid::unit(resolution);
    let s = sample_coeff(coeff, &g);
    let mut chis = [Vec::new(), Vec::new(), Vec::new()];
    let mut residuals = [0.0; 3];
    let mut iterations = [0usize; 3];
    for axis in 0..3 {
        let sol = solve_one(coeff, &g, &s, axis)?;
        residuals[axis] = sol.recheck;
        iterations[axis] = sol.stats.iterations;
        chis[axis] = sol.chi;
    }
    Ok((assemble_effective(&g, &s, &chis), residuals, iterations))
}

/// Homogenize a periodic coefficient: solve the three cell problems at
/// `resolution` and at half resolution, and report the effective matrix with
/// a discretization-error estimate from the difference.
pub fn homogenize(coeff: &CoefficientField, resolution: usize) -> Result<EffectiveMatrix, CoreError> {
    check_resolution(resolution)?;
    let (fine, residuals, iterations) = homogenize_on(coeff, resolution)?;
    let estimated_error = if resolution / 2 >= 4 {
        let (coarse, _, _) = homogenize_on(coeff, resolution / 2)?;
        mat3::max_abs(&mat3::sub(&fine, &coarse))
    } else {
        f64::INFINITY
    };
    Ok(EffectiveMatrix {
        matrix: fine,
        resolution,
        provenance: coeff.name().to_string(),
        estimated_error,
        residuals,
        iterations,
    })
}

/// Effective pair for the curl-curl system: the curl coefficient homogenizes
/// through the inverse (`A₀ = (H(A⁻¹))⁻¹`), the zero-order coefficient
/// homogenizes directly (`B₀ = H(B)`).
pub fn effective_maxwell(
    a: &CoefficientField,
    b: &CoefficientField,
    resolution: usize,
) -> Result<(EffectiveMatrix, EffectiveMatrix), CoreError> {
    let a_inv = a.invert_field()?;
    let h_inv = homogenize(&a_inv, resolution)?;
    let a0 = mat3::inverse(&h_inv.matrix)?;
    // propagate the half-resolution estimate through the matrix inversion
    let est = if h_inv.estimated_error.is_finite() {
        let norm_a0 = mat3::spectral_norm(&a0);
        norm_a0 * norm_a0 * h_inv.estimated_error
    } else {
        f64::INFINITY
    };
    let a_eff = EffectiveMatrix {
        matrix: a0,
        resolution,
        provenance: format!("inverse-homogenized {}", a.name()),
        estimated_error: est,
        residuals: h_inv.residuals,
        iterations: h_inv.iterations,
    };
    let b_eff = homogenize(b, resolution)?;
    Ok((a_eff, b_eff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{make_family, CoefficientField};

    const SQRT3: f64 = 1.732_050_807_568_877_3;

    #[test]
    fn constant_full_matrix_is_reproduced_exactly() {
        let m = [[2.0, 0.3, 0.1], [0.3, 1.5, -0.2], [0.1, -0.2, 3.0]];
        let coeff = CoefficientField::constant(m).unwrap();
        let eff = homogenize(&coeff, 8).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (eff.matrix[i][j] - m[i][j]).abs() < 1e-12,
                    "H[{i}][{j}] = {} vs {}",
                    eff.matrix[i][j],
                    m[i][j]
                );
            }
        }
        assert!(eff.estimated_error < 1e-12);
        assert_eq!(eff.iterations, [0, 0, 0]);
    }

    #[test]
    fn laminate_matches_harmonic_and_arithmetic_means() {
        // a(y) = 2 + cos 2πy₁: effective diag(√3, 2, 2); the discrete answer
        // must match the discrete 1-D reductions to solver precision.
        let coeff = make_family("laminate", &[2.0, 1.0]).unwrap();
        let n = 16;
        let eff = homogenize(&coeff, n).unwrap();

        let a = |t: f64| 2.0 + (2.0 * std::f64::consts::PI * t).cos();
        let mut inv_sum = 0.0;
        let mut arith = 0.0;
        for i in 0..n {
            inv_sum += 1.0 / a((i as f64 + 0.5) / n as f64);
            arith += a(i as f64 / n as f64);
        }
        let h11 = n as f64 / inv_sum;
        let h22 = arith / n as f64;

        assert!((eff.matrix[0][0] - h11).abs() < 1e-9);
        assert!((eff.matrix[1][1] - h22).abs() < 1e-12);
        assert!((eff.matrix[2][2] - h22).abs() < 1e-12);
        // continuum limit already visible at n = 16
        assert!((eff.matrix[0][0] - SQRT3).abs() < 1e-6);
        assert!((eff.matrix[1][1] - 2.0).abs() < 1e-12);
        // off-diagonal entries vanish for diagonal coefficients
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(eff.matrix[i][j].abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn effective_pair_for_laminate_curl_coefficient() {
        let a = make_family("laminate", &[2.0, 1.0]).unwrap();
        let b = CoefficientField::constant([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
            .unwrap();
        let (a0, b0) = effective_maxwell(&a, &b, 16).unwrap();
        // inverse-homogenized laminate: diag(2, √3, √3)
        assert!((a0.matrix[0][0] - 2.0).abs() < 1e-6);
        assert!((a0.matrix[1][1] - SQRT3).abs() < 1e-6);
        assert!((a0.matrix[2][2] - SQRT3).abs() < 1e-6);
        for i in 0..3 {
            assert!((b0.matrix[i][i] - 1.0).abs() < 1e-12);
        }
        assert!(a0.provenance.contains("laminate"));
    }

    #[test]
    fn flux_average_agrees_with_energy_average() {
        let coeff =
            make_family("two_phase_laminate", &[1.0, 4.0, 0.25]).unwrap();
        let n = 8;
        let g = TorusGrid::unit(n);
        let s = sample_coeff(&coeff, &g);
        let mut chis = [Vec::new(), Vec::new(), Vec::new()];
        for axis in 0..3 {
            chis[axis] = solve_one(&coeff, &g, &s, axis).unwrap().chi;
        }
        let h = assemble_effective(&g, &s, &chis);

        // independent flux average: H e_j = ⟨T q_j⟩ componentwise
        let nn = g.scalar_len();
        let vol_ratio = g.cell_volume() / g.domain_volume();
        for j in 0..3 {
            let mut q = vec![0.0; g.vector_len()];
            torus::grad(&g, &chis[j], &mut q);
            for v in q[j * nn..(j + 1) * nn].iter_mut() {
                *v += 1.0;
            }
            let mut t = vec![0.0; g.vector_len()];
            apply_coeff(&g, &s, &q, &mut t);
            for i in 0..3 {
                let flux: f64 = t[i * nn..(i + 1) * nn].iter().sum::<f64>() * vol_ratio;
                assert!(
                    (flux - h[i][j]).abs() < 1e-8,
                    "flux {flux} vs energy {} at ({i},{j})",
                    h[i][j]
                );
            }
        }
    }

    #[test]
    fn two_phase_approaches_phase_means_as_width_shrinks() {
        // phases {1, 4} at equal volume: harmonic mean 1.6, arithmetic 2.5
        // the gap to the sharp-interface limit closes linearly in the width
        let mut first = 0.0;
        let mut prev = f64::INFINITY;
        for &w in &[0.3, 0.2, 0.1] {
            let coeff = make_family("two_phase_laminate", &[1.0, 4.0, w]).unwrap();
            let eff = homogenize(&coeff, 32).unwrap();
            let err = (eff.matrix[0][0] - 1.6).abs();
            assert!(err < prev + 1e-12, "width {w}: error {err} grew past {prev}");
            if w == 0.3 {
                first = err;
            }
            prev = err;
            assert!((eff.matrix[1][1] - 2.5).abs() < 0.02);
        }
        assert!(prev < 0.07, "width 0.1 gap {prev} too large");
        assert!(prev < 0.5 * first, "gap does not scale down with width");
    }

    #[test]
    fn rejects_bad_resolution_and_axis() {
        let coeff = make_family("laminate", &[2.0, 1.0]).unwrap();
        assert!(solve_corrector(&coeff, 3, 0).is_err());
        assert!(solve_corrector(&coeff, 7, 0).is_err());
        assert!(solve_corrector(&coeff, 8, 3).is_err());
        assert!(homogenize(&coeff, 2).is_err());
    }

    #[test]
    fn corrector_has_zero_mean_and_small_recheck() {
        let coeff = make_family("trig", &[2.0, 1.0]).unwrap();
        let sol = solve_corrector(&coeff, 8, 0).unwrap();
        let mean: f64 = sol.chi.iter().sum::<f64>() / sol.chi.len() as f64;
        assert!(mean.abs() < 1e-12);
        assert!(sol.recheck <= 10.0 * CORRECTOR_TOL);
        assert!(sol.stats.iterations > 0);
    }
}
