//! Outage analysis for a fluid-antenna receiver serving a K-user dirty
//! multiple access channel over spatially correlated Fisher-Snedecor F
//! fading.
//!
//! The crate is layered bottom-up:
//!
//! - [`specfun`]: incomplete beta, its inverse, Bessel J0 and log-gamma.
//! - [`fading`]: the F-distributed squared channel gain.
//! - [`spatial`]: port geometry, Jakes correlation and the map from a
//!   linear correlation coefficient to a Clayton parameter.
//! - [`copula`]: the d-dimensional Clayton copula and Marshall-Olkin sampling.
//! - [`fas`]: the best-port gain of a fluid antenna and its joint CDF.
//! - [`outage`]: closed-form and Monte Carlo outage probability.
//! - [`harness`]: configuration, parameter sweeps, CSV and SVG output.

// `!(x >= 0.0)` is used throughout so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod copula;
pub mod error;
pub mod fading;
pub mod fas;
pub mod harness;
pub mod outage;
pub mod spatial;
pub mod specfun;

pub use error::{Error, Result};
