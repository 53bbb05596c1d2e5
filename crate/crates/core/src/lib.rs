//! Grid-quality measures built from weighted least-squares gradient stencils.
//!
//! The crate is `no_std` (it only needs `alloc`) and contains the numerical
//! core: the grid model and its derived geometry, neighbor stencils, the
//! 2×2 normal-equation kernel, the F- and G-measures, deterministic grid
//! generators and a model implicit defect-correction solver for steady
//! linear advection. File formats, threading and the command line live in
//! the `gridgauge` crate.
#![no_std]
// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod exec;
pub mod geometry;
pub mod grid;
pub mod gridgen;
pub mod lsq;
pub mod measures;
pub mod solver;
pub mod stencil;

pub use error::{Error, GridError};
pub use exec::{CellMap, Serial};
pub use geometry::Vec2;
pub use grid::{Cell, Face, Grid};
pub use gridgen::{generate, GenSpec, GridKind};
pub use lsq::{Gradient, LsqSystem, Weighting};
pub use measures::{analyze, MeasureReport, MeasureValues};
pub use solver::{defect_correction_solve, Forcing, ProblemSpec, SolveReport, SolveStatus};
pub use stencil::{build_stencils, Stencil, StencilMode};
