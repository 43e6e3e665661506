//! Numerical laboratory for second-order elliptic systems of Maxwell's type
//! with rapidly oscillating periodic coefficients.
//!
//! The crate solves, on axis-aligned boxes discretized by a staggered
//! (edge/face) grid,
//!
//! ```text
//! curl( A(x/eps) curl u ) + B(x/eps) u = F + curl G,     n x u = f on the boundary,
//! ```
//!
//! together with the supporting machinery that the quantitative theory of
//! these systems runs on:
//!
//! * [`grid`], [`field`], [`ops`] — the staggered mesh, its node/edge/face/cell
//!   fields, and mimetic gradient/curl/divergence operators whose composition
//!   identities hold in machine arithmetic.
//! * [`coeff`] — closed-form periodic coefficient families (laminates,
//!   trigonometric diagonals, smoothed checkerboards) with ellipticity and
//!   Hölder validation.
//! * [`cell`] — periodic corrector problems on the unit torus and the
//!   effective matrices they induce.
//! * [`elliptic`] — scalar divergence-form solvers (Dirichlet and Neumann)
//!   with oscillating coefficients, plus Dirichlet correctors.
//! * [`maxwell`] — the curl-curl boundary value problem itself, its
//!   homogenized companion, and the adjoint/duality checks.
//! * [`potentials`] — gradient and vector potentials (right inverses of grad
//!   and curl) and the reduction pipelines that factor the Maxwell solution
//!   through scalar problems.
//! * [`norms`] — Lᵖ/W¹ᵖ/Hölder/boundary norms used by the estimate ratios.
//! * [`krylov`] — matrix-free conjugate-gradient and BiCGStab kernels shared
//!   by every solver.
//!
//! All solvers are matrix-free, deterministic, and allocate plain `Vec<f64>`
//! state; no randomness or threading enters any numerical path.

// `!(x > 0.0)`-style guards are deliberate throughout: they reject NaN, which
// the suggested `x <= 0.0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Stencil loops index several parallel per-axis arrays at once; iterator
// rewrites would obscure the index arithmetic they exist to show.
#![allow(clippy::needless_range_loop)]

pub mod cell;
pub mod coeff;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod grid;
pub mod krylov;
pub mod lds;
pub mod mat3;
pub mod maxwell;
pub mod norms;
pub mod ops;
pub mod potentials;
pub mod torus;

pub use error::CoreError;
pub use field::{BoundaryTrace, CellField, EdgeField, FaceField, NodeField};
pub use grid::{Axis, StaggeredGrid};
