//! Numerical laboratory for corotational harmonic map flow into the round
//! 2-sphere: finite-time blowup simulation, neck-region decay measurement,
//! real-dimension radial heat kernels, and supersolution/comparison
//! verification on log-radial grids.
//!
//! The crate is organised around five subsystems:
//!
//! * [`kernels`] — the radial heat kernel in real dimension `mu > 1`, its
//!   integral representation, Dirichlet/boundary solution operators, and
//!   the associated envelope checks.
//! * [`parabolic`] — the `box_nu` operator calculus, barrier construction,
//!   and a grid-level comparison-principle verifier.
//! * [`flow`] — the corotational flow solver with blowup detection and
//!   stress-energy diagnostics.
//! * [`neck`] — outer energy scale, blowup-exponent fitting, neck decay
//!   envelopes, evolution-inequality verification, and Hölder moduli.
//! * [`runner`] / [`config`] / [`manifest`] — the reproducible CLI surface.

pub mod config;
pub mod field;
pub mod flow;
pub mod grid;
pub mod kernels;
pub mod manifest;
pub mod neck;
pub mod parabolic;
pub mod quad;
pub mod runner;
pub mod special;
pub mod stepper;

pub use field::KernelField;
pub use grid::RadialGrid;
