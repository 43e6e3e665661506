//! Command-line laboratory for oscillating-coefficient curl-curl systems.
//!
//! The library half of the `curl-homog` binary: configuration parsing,
//! reproducible data generators, the experiment drivers (single solves,
//! ratio sweeps, convergence ladders, reduction transcripts), report and
//! plot-file writers, and the self-checking `verify` suite.

// `!(x > 0.0)`-style guards are deliberate throughout: they reject NaN, which
// the suggested `x <= 0.0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod config;
pub mod experiments;
pub mod report;
pub mod verify;

use thiserror::Error;

/// Anything that can go wrong between parsing a config and writing reports.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] curl_homog_core::error::CoreError),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
