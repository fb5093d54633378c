//! Imaging of sources in a two-dimensional acoustic waveguide from single-mode,
//! multi-frequency data measured at one point.
//!
//! * [`modal`]: cross-section eigenpairs and the modal Green function.
//! * [`synth`]: synthetic data on the frequency lattices the operators need.
//! * [`mfop`]: assembly of the multi-frequency operators and their factors.
//! * [`imaging`]: spectral and sampling indicators, point spread function.
//! * [`cli`]: JSON-configured runs behind the `wgfm` binary.

pub mod cli;
pub mod error;
pub mod imaging;
pub mod mfop;
pub mod modal;
pub mod synth;

pub use error::{Error, Result};
