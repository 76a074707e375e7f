//! Simulation and analysis toolkit for stochastic differential equations
//! driven by α-stable Lévy noise.
//!
//! The numerical core is generic over a floating-point [`Scalar`]
//! (`f32` or `f64`); the `*64` aliases below fix it to `f64`, which is what
//! the command-line tool uses.
//!
//! - [`stable`]: Chambers–Mallows–Stuck α-stable variates.
//! - [`noise`]: stable Lévy increments, Kolmogorov–Smirnov tests and the
//!   self-similarity check.
//! - [`sde`]: Euler–Maruyama paths for the stable Ornstein–Uhlenbeck process
//!   and geometric Lévy motion.
//! - [`interp`]: multivariate Lagrange interpolation on a sample matrix.
//! - [`link`]: first-jump detection and the degree-1 parameter link fit.
//! - [`io`], [`cli`]: CSV/SVG persistence and the `stable-sde` subcommands.

pub mod cli;
pub mod error;
pub mod interp;
pub mod io;
pub mod link;
pub mod noise;
pub mod rng;
pub mod scalar;
pub mod sde;
pub mod stable;

pub use error::{Error, Result};
pub use rng::{RngStream, StreamKey, VariateSource};
pub use scalar::Scalar;

pub type StableParams64 = stable::StableParams<f64>;
pub type NoiseSpec64 = noise::NoiseSpec<f64>;
pub type ModelSpec64 = sde::ModelSpec<f64>;
pub type GridSpec64 = sde::GridSpec<f64>;
pub type Trajectory64 = sde::Trajectory<f64>;
pub type Interpolant64 = interp::Interpolant<f64>;
pub type SampleMatrix64 = interp::SampleMatrix<f64>;
pub type SampleRow64 = link::SampleRow<f64>;
pub type LinkEquation64 = link::LinkEquation<f64>;
pub type KsReport64 = noise::KsReport<f64>;

pub type StableParams32 = stable::StableParams<f32>;
pub type ModelSpec32 = sde::ModelSpec<f32>;
pub type Interpolant32 = interp::Interpolant<f32>;
