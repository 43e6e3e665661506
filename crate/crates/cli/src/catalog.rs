//! Named data generators for (F, G, f): every experiment's right-hand side is
//! reproducible from a name, a seed, and an amplitude.

use curl_homog_core::field::{BoundaryTrace, EdgeField, FaceField};
use curl_homog_core::grid::StaggeredGrid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::config::DataSpec;
use crate::CliError;

/// One problem's data: volume sources, curl source, and tangential trace,
/// plus the closed-form solution when the generator knows it.
pub struct ProblemData {
    pub rhs_f: EdgeField,
    pub rhs_g: FaceField,
    pub trace: BoundaryTrace,
    pub exact: Option<EdgeField>,
}

pub fn make_data(grid: &StaggeredGrid, spec: &DataSpec) -> Result<ProblemData, CliError> {
    let amp = spec.amplitude;
    match spec.name.as_str() {
        "zero" => Ok(ProblemData {
            rhs_f: EdgeField::zeros(grid),
            rhs_g: FaceField::zeros(grid),
            trace: BoundaryTrace::zeros(grid),
            exact: None,
        }),
        // u = amp·(0, 0, sin πx₁ sin πx₂) solves curl curl u + u = F for
        // identity coefficients; its tangential trace on the unit cube is
        // zero analytically, so the trace is emitted as exact zeros rather
        // than floating samples of sin π·1.
        "manufactured" => {
            let rhs_f = EdgeField::from_vector_fn(grid, move |x| {
                [
                    0.0,
                    0.0,
                    amp * (2.0 * PI * PI + 1.0) * (PI * x[0]).sin() * (PI * x[1]).sin(),
                ]
            });
            let exact = EdgeField::from_vector_fn(grid, move |x| {
                [0.0, 0.0, amp * (PI * x[0]).sin() * (PI * x[1]).sin()]
            });
            Ok(ProblemData {
                rhs_f,
                rhs_g: FaceField::zeros(grid),
                trace: BoundaryTrace::zeros(grid),
                exact: Some(exact),
            })
        }
        // fixed smooth volume and curl sources, zero trace
        "trig_smooth" => Ok(ProblemData {
            rhs_f: smooth_f(grid, amp),
            rhs_g: FaceField::from_vector_fn(grid, move |x| {
                [
                    amp * 0.3 * (PI * x[2]).sin(),
                    amp * 0.4 * (PI * x[0]).cos(),
                    amp * (0.2 * (PI * x[1]).sin() + 0.1 * (PI * x[2]).cos()),
                ]
            }),
            trace: BoundaryTrace::zeros(grid),
            exact: None,
        }),
        // the same volume source with no curl source: the configuration used
        // by the homogenization-convergence ladder
        "trig_f_only" => Ok(ProblemData {
            rhs_f: smooth_f(grid, amp),
            rhs_g: FaceField::zeros(grid),
            trace: BoundaryTrace::zeros(grid),
            exact: None,
        }),
        "poly" => Ok(ProblemData {
            rhs_f: EdgeField::from_vector_fn(grid, move |x| {
                [
                    amp * x[1] * x[2],
                    amp * x[2] * x[0],
                    amp * (x[0] * x[1] + x[2] * x[2]),
                ]
            }),
            rhs_g: FaceField::from_vector_fn(grid, move |x| {
                [
                    amp * 0.5 * x[0] * x[0],
                    -amp * x[1] * x[2],
                    amp * (x[0] + 0.25 * x[1] * x[1]),
                ]
            }),
            trace: BoundaryTrace::zeros(grid),
            exact: None,
        }),
        // seeded low-mode trigonometric fields: identical bytes for identical
        // (seed, amplitude, grid)
        "random_smooth" => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let cf = random_coeffs(&mut rng);
            let cg = random_coeffs(&mut rng);
            Ok(ProblemData {
                rhs_f: EdgeField::from_vector_fn(grid, move |x| eval_trig(&cf, x, amp)),
                rhs_g: FaceField::from_vector_fn(grid, move |x| eval_trig(&cg, x, amp)),
                trace: BoundaryTrace::zeros(grid),
                exact: None,
            })
        }
        // trace of a fixed smooth vector field; the surface divergence of the
        // stored datum equals −n·(∇×v) at the discrete level
        "tangential_boundary" => {
            let v = move |x: [f64; 3]| {
                [
                    amp * (PI * x[2]).sin(),
                    amp * (PI * x[0]).cos(),
                    amp * (PI * x[1]).sin(),
                ]
            };
            Ok(ProblemData {
                rhs_f: EdgeField::zeros(grid),
                rhs_g: FaceField::zeros(grid),
                trace: BoundaryTrace::from_vector_fn(grid, v),
                exact: None,
            })
        }
        other => Err(CliError::Config(format!(
            "unknown data family '{other}' (expected zero|manufactured|trig_smooth|trig_f_only|poly|random_smooth|tangential_boundary)"
        ))),
    }
}

fn smooth_f(grid: &StaggeredGrid, amp: f64) -> EdgeField {
    EdgeField::from_vector_fn(grid, move |x| {
        [
            amp * ((PI * x[1]).sin() + 0.5 * (PI * x[2]).cos()),
            amp * ((PI * x[2]).sin() - 0.25 * (PI * x[0]).cos()),
            amp * (PI * x[0]).sin() * (PI * x[1]).sin(),
        ]
    })
}

fn random_coeffs(rng: &mut ChaCha8Rng) -> [[f64; 7]; 3] {
    let mut c = [[0.0; 7]; 3];
    for row in c.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
    }
    c
}

fn eval_trig(c: &[[f64; 7]; 3], x: [f64; 3], amp: f64) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        let r = &c[i];
        out[i] = amp
            * (r[0]
                + r[1] * (PI * x[0]).sin()
                + r[2] * (PI * x[1]).sin()
                + r[3] * (PI * x[2]).sin()
                + r[4] * (PI * x[0]).cos()
                + r[5] * (PI * x[1]).cos()
                + r[6] * (PI * x[2]).cos());
    }
    out
}
