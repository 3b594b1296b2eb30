//! Exact b-ary symbolic machinery and multifractal tooling for Lévy functions
//! `L(x) = Σ {bⁱx} / b^{αi}` and their translates.
//!
//! The crate is organised bottom-up:
//!
//! * [`symbolic`]: digit streams, shifts, cylinders, run and match scans.
//! * [`diophantine`]: finite-depth estimates of b-adic approximation exponents.
//! * [`levy`]: certified evaluation, Haar coefficients, Hölder estimates.
//! * [`construction`]: translation parameters with prescribed digit patterns and
//!   the Cantor-type subsets of bivariate level sets.
//! * [`measure`]: the mass distribution carried by those Cantor sets.
//! * [`spectrum`]: closed-form bivariate spectra, the dichotomy classifier and an
//!   empirical estimator.
//! * [`yspec`]: the textual `--y-spec` grammar shared by the CLI and tests.

pub mod construction;
pub mod diophantine;
mod error;
pub mod exact;
pub mod levy;
pub mod measure;
pub mod spectrum;
pub mod symbolic;
pub mod yspec;

pub use error::{Error, Result};

/// Version tag written into every JSON artifact.
pub const SCHEMA: &str = "levyspec/1";
