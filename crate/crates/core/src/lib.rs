//! Lasso-family solution paths, the α-modification of penalized
//! estimates, and tuning-parameter selection by cross-validated squared
//! prediction correlation (AR2) and α-modified prediction error.
//!
//! The crate is organized bottom-up:
//!
//! * [`data`]: standardization, submodel least squares, SNR calibration.
//! * [`solver`]: coordinate descent for Lasso, Relaxed Lasso, SCAD, MCP.
//! * [`alphamod`]: the α-modification and its closed-form diagnostics.
//! * [`select`]: K-fold cross-validation and information criteria.
//! * [`simlab`]: Monte Carlo support-recovery experiments.
//! * [`verify`]: executable property suites for the theory.

// `!(a > b)` is used on purpose so that NaN takes the failing branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alphamod;
pub mod data;
pub mod error;
pub mod rng;
pub mod select;
pub mod simlab;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
