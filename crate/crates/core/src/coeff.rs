//! Periodic matrix-valued coefficient fields on the unit torus.
//!
//! A field is a closed-form evaluation rule `y ↦ M(y)` (3×3, 1-periodic per
//! axis) together with declared structural constants: the two-sided
//! ellipticity constant `μ ∈ (0,1]` (so `μ|ξ|² ≤ ξ·M(y)ξ ≤ μ⁻¹|ξ|²`), a
//! Hölder exponent `τ ∈ (0,1]` with seminorm `λ`, and a symmetry flag.
//! Closed-form rules — rather than gridded data — let every grid resolution
//! sample the same field consistently, including ε-rescaled samples `M(x/ε)`.

use crate::error::CoreError;
use crate::lds;
use crate::mat3::{self, Mat3};

const TWO_PI: f64 = std::f64::consts::TAU;

/// Hermite smoothstep on [0,1].
fn smoothstep(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * (3.0 - 2.0 * u)
}

/// 1-periodic C¹ square wave: +1 on the first half period, −1 on the second,
/// with transitions of width `w` centered at t = 0 and t = 1/2.
/// Max slope 3/w.
fn square_wave(t: f64, w: f64) -> f64 {
    let t = t.rem_euclid(1.0);
    let hw = 0.5 * w;
    if t < hw {
        // second half of the rising transition through t = 0
        -1.0 + 2.0 * smoothstep((t + hw) / w)
    } else if t < 0.5 - hw {
        1.0
    } else if t < 0.5 + hw {
        1.0 - 2.0 * smoothstep((t - (0.5 - hw)) / w)
    } else if t < 1.0 - hw {
        -1.0
    } else {
        -1.0 + 2.0 * smoothstep((t - (1.0 - hw)) / w)
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Constant(Mat3),
    /// a(y₁)·I with a(t) = c₀ + c₁ cos 2πt.
    CosineLaminate { c0: f64, c1: f64 },
    /// a(y₁)·I, smoothed two-phase square wave taking values a₀ and a₁.
    TwoPhaseLaminate { a0: f64, a1: f64, width: f64 },
    /// diag(aᵢ(y)) with aᵢ(y) = c₀ + c₁ cos 2πyᵢ.
    Trig { c0: f64, c1: f64 },
    /// a(y)·I with a = mid + amp·q(y₁)q(y₂), q a smoothed square wave.
    Checkerboard { a0: f64, a1: f64, width: f64 },
    /// Discontinuous checkerboard — not Hölder continuous; kept for
    /// out-of-hypothesis experiments.
    RawCheckerboard { a0: f64, a1: f64 },
    /// Pointwise matrix inverse of the inner field.
    Inverse(Box<CoefficientField>),
    /// Pointwise transpose of the inner field.
    Transpose(Box<CoefficientField>),
}

/// A periodic coefficient field with declared structural constants.
#[derive(Clone, Debug)]
pub struct CoefficientField {
    name: String,
    kind: Kind,
    mu: f64,
    tau: f64,
    lambda: f64,
    symmetric: bool,
    /// false for families outside the Hölder-continuity hypothesis
    holder_continuous: bool,
}

/// Observed Rayleigh-quotient range of `ξ·M(y)ξ/|ξ|²` over a deterministic
/// sample set, compared against the declared ellipticity constant.
#[derive(Clone, Debug)]
pub struct EllipticityReport {
    pub min_quotient: f64,
    pub max_quotient: f64,
    pub worst_point: [f64; 3],
    pub worst_direction: [f64; 3],
    pub pass: bool,
}

fn fmt_params(params: &[f64]) -> String {
    params
        .iter()
        .map(|p| format!("{p}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Construct a catalog coefficient field by family name.
///
/// Families and parameters:
/// - `"constant"`: 1 param `c` → `c·I`; 3 params → diagonal; 9 params →
///   full matrix, row-major.
/// - `"laminate"`: `[c0, c1]` → `(c0 + c1·cos 2πy₁)·I`.
/// - `"two_phase_laminate"`: `[a0, a1, width]` → smoothed equal-volume
///   two-phase laminate in y₁.
/// - `"trig"`: `[c0, c1]` → `diag(c0 + c1·cos 2πyᵢ)`.
/// - `"checkerboard"`: `[a0, a1, width]` (optionally `[a0, a1, width, tau]`)
///   → smoothed two-phase checkerboard in (y₁,y₂), Hölder exponent `tau`.
/// - `"checkerboard_raw"`: `[a0, a1]` → discontinuous checkerboard, flagged
///   as not Hölder continuous.
pub fn make_family(name: &str, params: &[f64]) -> Result<CoefficientField, CoreError> {
    let full_name = format!("{name}({})", fmt_params(params));
    match name {
        "constant" => {
            let m: Mat3 = match params.len() {
                1 => mat3::scale(&mat3::IDENTITY, params[0]),
                3 => [
                    [params[0], 0.0, 0.0],
                    [0.0, params[1], 0.0],
                    [0.0, 0.0, params[2]],
                ],
                9 => [
                    [params[0], params[1], params[2]],
                    [params[3], params[4], params[5]],
                    [params[6], params[7], params[8]],
                ],
                n => {
                    return Err(CoreError::invalid(format!(
                        "constant family takes 1, 3, or 9 parameters, got {n}"
                    )))
                }
            };
            constant_field(full_name, m)
        }
        "laminate" | "trig" => {
            if params.len() != 2 {
                return Err(CoreError::invalid(format!(
                    "{name} family takes [c0, c1], got {} parameters",
                    params.len()
                )));
            }
            let (c0, c1) = (params[0], params[1]);
            let lo = c0 - c1.abs();
            let hi = c0 + c1.abs();
            if lo <= 0.0 {
                return Err(CoreError::invalid(format!(
                    "{name}(c0={c0}, c1={c1}) loses ellipticity: min value {lo} <= 0"
                )));
            }
            let kind = if name == "laminate" {
                Kind::CosineLaminate { c0, c1 }
            } else {
                Kind::Trig { c0, c1 }
            };
            Ok(CoefficientField {
                name: full_name,
                kind,
                mu: range_mu(lo, hi),
                tau: 1.0,
                lambda: TWO_PI * c1.abs(),
                symmetric: true,
                holder_continuous: true,
            })
        }
        "two_phase_laminate" => {
            let [a0, a1, width] = three(name, params)?;
            check_phase(name, a0, a1, width)?;
            let amp = 0.5 * (a1 - a0).abs();
            Ok(CoefficientField {
                name: full_name,
                kind: Kind::TwoPhaseLaminate { a0, a1, width },
                mu: range_mu(a0.min(a1), a0.max(a1)),
                tau: 1.0,
                lambda: 3.0 * amp / width,
                symmetric: true,
                holder_continuous: true,
            })
        }
        "checkerboard" => {
            let (core, tau) = match params.len() {
                3 => (params, 1.0),
                4 => (&params[..3], params[3]),
                n => {
                    return Err(CoreError::invalid(format!(
                        "checkerboard takes [a0, a1, width] or [a0, a1, width, tau], got {n} parameters"
                    )))
                }
            };
            let [a0, a1, width] = three(name, core)?;
            check_phase(name, a0, a1, width)?;
            if !(tau > 0.0 && tau <= 1.0) {
                return Err(CoreError::invalid(format!(
                    "checkerboard Hölder exponent must lie in (0,1], got {tau}"
                )));
            }
            let amp = 0.5 * (a1 - a0).abs();
            // |∇a| ≤ amp·(3/w)·√2 and osc(a) ≤ 2·amp, so for any τ the pair
            // (τ, Lip^τ · osc^{1−τ}) is a valid Hölder declaration.
            let lip = amp * 3.0 / width * std::f64::consts::SQRT_2;
            let osc = 2.0 * amp;
            Ok(CoefficientField {
                name: full_name,
                kind: Kind::Checkerboard { a0, a1, width },
                mu: range_mu(a0.min(a1), a0.max(a1)),
                tau,
                lambda: lip.powf(tau) * osc.powf(1.0 - tau),
                symmetric: true,
                holder_continuous: true,
            })
        }
        "checkerboard_raw" => {
            if params.len() != 2 {
                return Err(CoreError::invalid(format!(
                    "checkerboard_raw takes [a0, a1], got {} parameters",
                    params.len()
                )));
            }
            let (a0, a1) = (params[0], params[1]);
            if a0.min(a1) <= 0.0 {
                return Err(CoreError::invalid(format!(
                    "checkerboard_raw({a0},{a1}) loses ellipticity"
                )));
            }
            Ok(CoefficientField {
                name: full_name,
                kind: Kind::RawCheckerboard { a0, a1 },
                mu: range_mu(a0.min(a1), a0.max(a1)),
                tau: 1.0,
                lambda: f64::INFINITY,
                symmetric: true,
                holder_continuous: false,
            })
        }
        other => Err(CoreError::invalid(format!(
            "unknown coefficient family '{other}'"
        ))),
    }
}

fn three(name: &str, params: &[f64]) -> Result<[f64; 3], CoreError> {
    if params.len() != 3 {
        return Err(CoreError::invalid(format!(
            "{name} takes 3 parameters, got {}",
            params.len()
        )));
    }
    Ok([params[0], params[1], params[2]])
}

fn check_phase(name: &str, a0: f64, a1: f64, width: f64) -> Result<(), CoreError> {
    if a0.min(a1) <= 0.0 {
        return Err(CoreError::invalid(format!(
            "{name}: phase values must be positive, got {a0}, {a1}"
        )));
    }
    if !(width > 0.0 && width <= 0.5) {
        return Err(CoreError::invalid(format!(
            "{name}: transition width must lie in (0, 0.5], got {width}"
        )));
    }
    Ok(())
}

/// μ such that the scalar range [lo, hi] satisfies μ ≤ a ≤ μ⁻¹ … as tightly
/// as the one-parameter form allows.
fn range_mu(lo: f64, hi: f64) -> f64 {
    lo.min(1.0 / hi)
}

fn constant_field(name: String, m: Mat3) -> Result<CoefficientField, CoreError> {
    let sym = mat3::is_symmetric(&m, 1e-14);
    let s = mat3::add(&m, &mat3::transpose(&m));
    let s = mat3::scale(&s, 0.5);
    let eigs = mat3::sym_eigenvalues(&s);
    if eigs[0] <= 0.0 {
        return Err(CoreError::invalid(format!(
            "constant coefficient is not elliptic: min symmetric-part eigenvalue {}",
            eigs[0]
        )));
    }
    Ok(CoefficientField {
        name,
        kind: Kind::Constant(m),
        mu: range_mu(eigs[0], eigs[2]),
        tau: 1.0,
        lambda: 0.0,
        symmetric: sym,
        holder_continuous: true,
    })
}

impl CoefficientField {
    /// Constant field from an explicit matrix.
    pub fn constant(m: Mat3) -> Result<Self, CoreError> {
        constant_field(format!("constant({})", fmt_params(&flatten(m))), m)
    }

    /// Escape hatch for validator tests: any matrix with hand-declared
    /// constants, no construction-time checks.
    pub fn constant_with_declared(m: Mat3, mu: f64, tau: f64, lambda: f64) -> Self {
        CoefficientField {
            name: format!("declared({})", fmt_params(&flatten(m))),
            kind: Kind::Constant(m),
            mu,
            tau,
            lambda,
            symmetric: mat3::is_symmetric(&m, 1e-14),
            holder_continuous: true,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_holder_continuous(&self) -> bool {
        self.holder_continuous
    }

    /// True when every sample is a diagonal matrix — enables fast paths in
    /// the operators.
    pub fn is_diagonal(&self) -> bool {
        match &self.kind {
            Kind::Constant(m) => {
                m[0][1] == 0.0
                    && m[0][2] == 0.0
                    && m[1][0] == 0.0
                    && m[1][2] == 0.0
                    && m[2][0] == 0.0
                    && m[2][1] == 0.0
            }
            Kind::CosineLaminate { .. }
            | Kind::TwoPhaseLaminate { .. }
            | Kind::Trig { .. }
            | Kind::Checkerboard { .. }
            | Kind::RawCheckerboard { .. } => true,
            Kind::Inverse(inner) | Kind::Transpose(inner) => inner.is_diagonal(),
        }
    }

    pub fn is_constant(&self) -> bool {
        match &self.kind {
            Kind::Constant(_) => true,
            Kind::Inverse(inner) | Kind::Transpose(inner) => inner.is_constant(),
            _ => false,
        }
    }

    /// Evaluate at a point of the unit torus (inputs wrapped into [0,1)).
    pub fn eval(&self, y: [f64; 3]) -> Mat3 {
        let t = [
            y[0].rem_euclid(1.0),
            y[1].rem_euclid(1.0),
            y[2].rem_euclid(1.0),
        ];
        match &self.kind {
            Kind::Constant(m) => *m,
            Kind::CosineLaminate { c0, c1 } => {
                mat3::scale(&mat3::IDENTITY, c0 + c1 * (TWO_PI * t[0]).cos())
            }
            Kind::TwoPhaseLaminate { a0, a1, width } => {
                let mid = 0.5 * (a0 + a1);
                let amp = 0.5 * (a1 - a0);
                // phase chosen so the a1 plateau covers the first half period
                mat3::scale(&mat3::IDENTITY, mid + amp * square_wave(t[0], *width))
            }
            Kind::Trig { c0, c1 } => {
                let mut m = [[0.0; 3]; 3];
                for a in 0..3 {
                    m[a][a] = c0 + c1 * (TWO_PI * t[a]).cos();
                }
                m
            }
            Kind::Checkerboard { a0, a1, width } => {
                let mid = 0.5 * (a0 + a1);
                let amp = 0.5 * (a1 - a0);
                let q = square_wave(t[0], *width) * square_wave(t[1], *width);
                mat3::scale(&mat3::IDENTITY, mid + amp * q)
            }
            Kind::RawCheckerboard { a0, a1 } => {
                let s1 = t[0] < 0.5;
                let s2 = t[1] < 0.5;
                mat3::scale(&mat3::IDENTITY, if s1 == s2 { *a1 } else { *a0 })
            }
            Kind::Inverse(inner) => mat3::inverse(&inner.eval(t))
                .expect("inverse field evaluated at a singular sample"),
            Kind::Transpose(inner) => mat3::transpose(&inner.eval(t)),
        }
    }

    /// Evaluate the ε-rescaled field `M(x/ε)`. `ε = ∞` means the field is
    /// used unrescaled at its base point (constant-coefficient mode).
    pub fn eval_scaled(&self, x: [f64; 3], eps: f64) -> Mat3 {
        debug_assert!(eps > 0.0, "eps must be positive or infinite");
        if eps.is_infinite() {
            self.eval([0.0, 0.0, 0.0])
        } else {
            self.eval([x[0] / eps, x[1] / eps, x[2] / eps])
        }
    }

    /// Validated batch version of [`eval_scaled`](Self::eval_scaled).
    pub fn sample_scaled(&self, eps: f64, points: &[[f64; 3]]) -> Result<Vec<Mat3>, CoreError> {
        if !(eps > 0.0) {
            return Err(CoreError::invalid(format!(
                "scaling parameter must be positive, got {eps}"
            )));
        }
        Ok(points.iter().map(|&x| self.eval_scaled(x, eps)).collect())
    }

    /// Rayleigh-quotient scan over a deterministic sample set. The set always
    /// contains the coordinate directions, so axis-degenerate matrices are
    /// caught no matter how few samples are requested.
    pub fn validate_ellipticity(&self, samples: usize) -> EllipticityReport {
        let samples = samples.max(1);
        let mut min_q = f64::INFINITY;
        let mut max_q = f64::NEG_INFINITY;
        let mut worst_point = [0.0; 3];
        let mut worst_direction = [0.0; 3];
        let mut consider = |y: [f64; 3], xi: [f64; 3], m: &Mat3| {
            let n2 = mat3::dot(&xi, &xi);
            let q = mat3::dot(&xi, &mat3::matvec(m, &xi)) / n2;
            if q < min_q {
                min_q = q;
                worst_point = y;
                worst_direction = xi;
            }
            if q > max_q {
                max_q = q;
            }
        };
        for i in 0..samples {
            let y = lds::point3(i);
            let m = self.eval(y);
            // coordinate directions first, then a quasi-random one
            for a in 0..3 {
                let mut xi = [0.0; 3];
                xi[a] = 1.0;
                consider(y, xi, &m);
            }
            consider(y, lds::direction3(i), &m);
        }
        let tol = 1e-9;
        let pass = min_q >= self.mu * (1.0 - tol) && max_q <= (1.0 + tol) / self.mu;
        EllipticityReport {
            min_quotient: min_q,
            max_quotient: max_q,
            worst_point,
            worst_direction,
            pass,
        }
    }

    /// Max over a deterministic pair set of `|M(x) − M(y)| / |x − y|^τ`
    /// (spectral norm) — a lower bound for the true Hölder seminorm,
    /// monotone nondecreasing in `sample_pairs`.
    pub fn holder_seminorm(&self, tau: f64, sample_pairs: usize) -> Result<f64, CoreError> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(CoreError::invalid(format!(
                "Hölder exponent must lie in (0,1], got {tau}"
            )));
        }
        let mut best = 0.0f64;
        for i in 0..sample_pairs {
            let x = lds::point3(i);
            // cycle separation scales over dyadic decades and directions over
            // the axes plus a quasi-random one
            let scale = 0.5f64.powi((i % 12) as i32 + 1);
            let dir = match i % 4 {
                0 => [1.0, 0.0, 0.0],
                1 => [0.0, 1.0, 0.0],
                2 => [0.0, 0.0, 1.0],
                _ => lds::direction3(i),
            };
            let y = [
                x[0] + scale * dir[0],
                x[1] + scale * dir[1],
                x[2] + scale * dir[2],
            ];
            let dist = scale; // |dir| = 1
            let diff = mat3::sub(&self.eval(x), &self.eval(y));
            let v = mat3::spectral_norm(&diff) / dist.powf(tau);
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }

    /// Pointwise matrix inverse as a new field.
    pub fn invert_field(&self) -> Result<CoefficientField, CoreError> {
        // verify invertibility on a deterministic sample set up front
        for i in 0..64 {
            let y = lds::point3(i);
            let m = self.eval(y);
            if mat3::inverse(&m).is_err() {
                return Err(CoreError::NumericalDegeneracy(format!(
                    "field {} is singular near {:?}",
                    self.name, y
                )));
            }
        }
        let mu = if self.symmetric {
            // symmetric spectra in [μ, 1/μ] invert to the same interval
            self.mu
        } else if let Kind::Constant(m) = &self.kind {
            let inv = mat3::inverse(m)?;
            let s = mat3::scale(&mat3::add(&inv, &mat3::transpose(&inv)), 0.5);
            let eigs = mat3::sym_eigenvalues(&s);
            if eigs[0] <= 0.0 {
                return Err(CoreError::NumericalDegeneracy(format!(
                    "inverse of {} loses ellipticity",
                    self.name
                )));
            }
            range_mu(eigs[0], eigs[2])
        } else {
            return Err(CoreError::invalid(format!(
                "inverse of the nonsymmetric oscillating field {} is not supported",
                self.name
            )));
        };
        // The inverse of a τ-Hölder field on a compact value range is τ-Hölder
        // with seminorm ≤ λ / μ² (|M⁻¹−N⁻¹| ≤ |M⁻¹||N⁻¹||M−N|).
        let lambda = if self.lambda.is_finite() {
            self.lambda / (self.mu * self.mu)
        } else {
            f64::INFINITY
        };
        Ok(CoefficientField {
            name: format!("inv[{}]", self.name),
            kind: Kind::Inverse(Box::new(self.clone())),
            mu,
            tau: self.tau,
            lambda,
            symmetric: self.symmetric,
            holder_continuous: self.holder_continuous,
        })
    }

    /// Pointwise transpose (the adjoint coefficients A*, B*).
    pub fn transposed(&self) -> CoefficientField {
        if self.symmetric {
            return self.clone();
        }
        CoefficientField {
            name: format!("adj[{}]", self.name),
            kind: Kind::Transpose(Box::new(self.clone())),
            ..self.clone()
        }
    }
}

fn flatten(m: Mat3) -> Vec<f64> {
    m.iter().flat_map(|r| r.iter().copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_identity_has_unit_mu_and_zero_seminorm() {
        let c = make_family("constant", &[1.0]).unwrap();
        assert_eq!(c.mu(), 1.0);
        assert_eq!(c.lambda(), 0.0);
        assert!(c.is_symmetric());
        assert!(c.is_diagonal());
        let rep = c.validate_ellipticity(100);
        assert!(rep.pass);
        assert!((rep.min_quotient - 1.0).abs() < 1e-14);
        assert!((rep.max_quotient - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cosine_laminate_declares_one_third_mu() {
        // a(t) = 2 + cos 2πt ranges over [1,3]: μ = min(1, 1/3) = 1/3
        let c = make_family("laminate", &[2.0, 1.0]).unwrap();
        assert!((c.mu() - 1.0 / 3.0).abs() < 1e-15);
        let rep = c.validate_ellipticity(4096);
        assert!(rep.pass);
        assert!(rep.min_quotient >= 1.0 - 1e-12 && rep.min_quotient < 1.01);
        assert!(rep.max_quotient <= 3.0 + 1e-12 && rep.max_quotient > 2.99);
    }

    #[test]
    fn degenerate_parameters_are_rejected() {
        assert!(make_family("laminate", &[1.0, 2.0]).is_err());
        assert!(make_family("two_phase_laminate", &[-1.0, 4.0, 0.1]).is_err());
        assert!(make_family("constant", &[0.0]).is_err());
        assert!(make_family("nonsense", &[1.0]).is_err());
    }

    #[test]
    fn declared_degenerate_matrix_fails_at_the_axis_direction() {
        let m = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]];
        let c = CoefficientField::constant_with_declared(m, 0.1, 1.0, 0.0);
        let rep = c.validate_ellipticity(8);
        assert!(!rep.pass);
        assert!(rep.min_quotient.abs() < 1e-14);
        assert_eq!(rep.worst_direction, [0.0, 0.0, 1.0]);
    }

    #[test]
    fn scaled_sampling_hits_closed_form_values() {
        // a(t) = 2 + cos 2πt at x₁/ε = 1 gives a = 3
        let c = make_family("laminate", &[2.0, 1.0]).unwrap();
        let m = c.sample_scaled(0.5, &[[0.5, 0.0, 0.0]]).unwrap()[0];
        assert!((m[0][0] - 3.0).abs() < 1e-12);
        assert!((m[1][1] - 3.0).abs() < 1e-12);
        // exact periodicity at representable offsets: x and x + ε e₁
        let x = [0.125, 0.5, 0.75];
        let eps = 0.25;
        let m1 = c.eval_scaled(x, eps);
        let m2 = c.eval_scaled([x[0] + eps, x[1], x[2]], eps);
        assert_eq!(m1, m2);
        assert!(c.sample_scaled(0.0, &[[0.0; 3]]).is_err());
    }

    #[test]
    fn holder_scan_approaches_the_laminate_slope_bound() {
        // sup |a′| = 2π for a(t) = 2 + cos 2πt
        let c = make_family("laminate", &[2.0, 1.0]).unwrap();
        let coarse = c.holder_seminorm(1.0, 512).unwrap();
        let fine = c.holder_seminorm(1.0, 8192).unwrap();
        assert!(fine >= coarse, "monotone in sample count");
        assert!(fine <= TWO_PI * (1.0 + 1e-9), "lower bound property");
        assert!(fine > TWO_PI * 0.95, "approaches 2π, got {fine}");
        assert!(c.holder_seminorm(1.5, 10).is_err());
    }

    #[test]
    fn inverse_field_multiplies_back_to_identity() {
        let c = make_family("laminate", &[2.0, 1.0]).unwrap();
        let inv = c.invert_field().unwrap();
        assert_eq!(inv.mu(), c.mu());
        for i in 0..50 {
            let y = lds::point3(i);
            let prod = mat3::matmul(&c.eval(y), &inv.eval(y));
            for r in 0..3 {
                for s in 0..3 {
                    let want = if r == s { 1.0 } else { 0.0 };
                    assert!((prod[r][s] - want).abs() < 1e-12);
                }
            }
        }
        // involution up to round-off
        let back = inv.invert_field().unwrap();
        for i in 0..50 {
            let y = lds::point3(i);
            let d = mat3::sub(&back.eval(y), &c.eval(y));
            assert!(mat3::max_abs(&d) < 1e-12);
        }
    }

    #[test]
    fn nonsymmetric_constant_inverse_exists() {
        let m = [[2.0, 0.5, 0.0], [-0.5, 2.0, 0.0], [0.0, 0.0, 1.0]];
        let c = CoefficientField::constant(m).unwrap();
        assert!(!c.is_symmetric());
        let inv = c.invert_field().unwrap();
        let prod = mat3::matmul(&c.eval([0.3, 0.4, 0.5]), &inv.eval([0.9, 0.1, 0.2]));
        for r in 0..3 {
            for s in 0..3 {
                let want = if r == s { 1.0 } else { 0.0 };
                assert!((prod[r][s] - want).abs() < 1e-12);
            }
        }
        let t = c.transposed();
        assert_eq!(t.eval([0.0; 3])[0][1], -0.5);
    }

    #[test]
    fn two_phase_and_checkerboard_families_are_elliptic() {
        let lam = make_family("two_phase_laminate", &[1.0, 4.0, 0.1]).unwrap();
        assert!(lam.validate_ellipticity(2048).pass);
        assert!((lam.mu() - 0.25).abs() < 1e-15);
        let cb = make_family("checkerboard", &[1.0, 4.0, 0.1, 0.5]).unwrap();
        assert!(cb.validate_ellipticity(2048).pass);
        assert!((cb.tau() - 0.5).abs() < 1e-15);
        let raw = make_family("checkerboard_raw", &[1.0, 4.0]).unwrap();
        assert!(!raw.is_holder_continuous());
        assert!(raw.validate_ellipticity(2048).pass);
    }

    #[test]
    fn declared_holder_constants_bound_their_own_scans() {
        for (name, params) in [
            ("laminate", &[2.0, 1.0][..]),
            ("trig", &[3.0, 1.5][..]),
            ("two_phase_laminate", &[1.0, 4.0, 0.125][..]),
            ("checkerboard", &[1.0, 4.0, 0.125, 0.5][..]),
        ] {
            let c = make_family(name, params).unwrap();
            let scan = c.holder_seminorm(c.tau(), 4096).unwrap();
            assert!(
                scan <= c.lambda() * (1.0 + 1e-9),
                "{name}: scanned {scan} exceeds declared {}",
                c.lambda()
            );
        }
    }
}
