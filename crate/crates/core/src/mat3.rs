//! Small dense 3×3 helpers used by coefficient fields and effective matrices.
//!
//! Everything here is closed-form or a short fixed iteration; no external
//! linear algebra is pulled in for 3×3 work.

use crate::error::CoreError;

pub type Mat3 = [[f64; 3]; 3];
pub type Vec3 = [f64; 3];

pub const IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn scale(m: &Mat3, s: f64) -> Mat3 {
    let mut r = *m;
    for row in r.iter_mut() {
        for v in row.iter_mut() {
            *v *= s;
        }
    }
    r
}

pub fn add(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = a[i][j] + b[i][j];
        }
    }
    r
}

pub fn sub(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = a[i][j] - b[i][j];
        }
    }
    r
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = m[j][i];
        }
    }
    r
}

pub fn matvec(m: &Mat3, x: &Vec3) -> Vec3 {
    let mut y = [0.0; 3];
    for i in 0..3 {
        y[i] = m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2];
    }
    y
}

pub fn matmul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, bk) in b.iter().enumerate() {
                r[i][j] += a[i][k] * bk[j];
            }
        }
    }
    r
}

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn det(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse via the adjugate; errors when the determinant is numerically zero
/// relative to the matrix scale.
pub fn inverse(m: &Mat3) -> Result<Mat3, CoreError> {
    let d = det(m);
    let scale_cub = max_abs(m).powi(3).max(f64::MIN_POSITIVE);
    if d.abs() < 1e-14 * scale_cub {
        return Err(CoreError::NumericalDegeneracy(format!(
            "singular 3x3 matrix sample (det = {d:.3e})"
        )));
    }
    let inv_d = 1.0 / d;
    let c = |i: usize, j: usize| -> f64 {
        let (r0, r1) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (c0, c1) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        if (i + j).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // adjugate transposes the cofactor matrix
            inv[i][j] = c(j, i) * inv_d;
        }
    }
    Ok(inv)
}

pub fn max_abs(m: &Mat3) -> f64 {
    let mut r: f64 = 0.0;
    for row in m {
        for v in row {
            r = r.max(v.abs());
        }
    }
    r
}

pub fn frobenius(m: &Mat3) -> f64 {
    let mut s = 0.0;
    for row in m {
        for v in row {
            s += v * v;
        }
    }
    s.sqrt()
}

pub fn is_symmetric(m: &Mat3, tol: f64) -> bool {
    let s = max_abs(m).max(1.0);
    (m[0][1] - m[1][0]).abs() <= tol * s
        && (m[0][2] - m[2][0]).abs() <= tol * s
        && (m[1][2] - m[2][1]).abs() <= tol * s
}

/// Eigenvalues of a symmetric 3×3 matrix by cyclic Jacobi rotations,
/// returned in ascending order. Deterministic and accurate to ~1e-14·‖m‖.
pub fn sym_eigenvalues(m: &Mat3) -> Vec3 {
    let mut a = *m;
    // symmetrize defensively so tiny asymmetries cannot stall the sweep
    for i in 0..3 {
        for j in (i + 1)..3 {
            let v = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    for _sweep in 0..64 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off <= 1e-30 * (frobenius(&a).powi(2)).max(f64::MIN_POSITIVE) {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q].abs() <= 1e-300 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut r = a;
            for k in 0..3 {
                r[p][k] = c * a[p][k] - s * a[q][k];
                r[q][k] = s * a[p][k] + c * a[q][k];
            }
            let b = r;
            let mut r2 = b;
            for k in 0..3 {
                r2[k][p] = c * b[k][p] - s * b[k][q];
                r2[k][q] = s * b[k][p] + c * b[k][q];
            }
            a = r2;
        }
    }
    let mut ev = [a[0][0], a[1][1], a[2][2]];
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Spectral (operator 2-) norm of a general 3×3 matrix: sqrt of the largest
/// eigenvalue of mᵀm.
pub fn spectral_norm(m: &Mat3) -> f64 {
    let mtm = matmul(&transpose(m), m);
    let ev = sym_eigenvalues(&mtm);
    ev[2].max(0.0).sqrt()
}
