//! Model implicit solver: steady linear advection `a·∇u = f` on the unit
//! square, discretized by a second-order cell-centered finite-volume scheme
//! with least-squares gradients, and iterated by defect correction with the
//! exact Jacobian of the first-order (zero-gradient) residual.

mod sparse;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::{CellMap, Serial};
use crate::geometry::Vec2;
use crate::grid::Grid;
use crate::lsq::{Gradient, LsqSystem, Weighting};
use crate::stencil::{build_stencil, StencilMode};

pub use sparse::CsrMatrix;

/// Relative residual growth treated as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

/// Work charged per residual evaluation and per directional relaxation sweep.
pub const RESIDUAL_WORK: f64 = 1.0;
pub const SWEEP_WORK: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Forcing {
    /// Source and inflow data of `u* = sin(πx) sin(πy)`.
    #[default]
    Manufactured,
    /// `f = 0` and zero boundary data.
    Homogeneous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    /// Advection direction, degrees from the x axis.
    pub theta_deg: f64,
    pub forcing: Forcing,
    /// Stop when ‖R‖₁/‖R₀‖₁ falls to this.
    pub tolerance: f64,
    pub max_outer: usize,
    /// Cap on symmetric Gauss-Seidel sweeps per outer iteration.
    pub inner_sweep_cap: usize,
    /// Target reduction of the linear residual per outer iteration.
    pub inner_reduction: f64,
    /// Drop the gradient reconstruction (first-order residual).
    pub first_order: bool,
}

impl ProblemSpec {
    pub fn new(theta_deg: f64) -> ProblemSpec {
        ProblemSpec {
            theta_deg,
            forcing: Forcing::Manufactured,
            tolerance: 1e-10,
            max_outer: 500,
            inner_sweep_cap: 20,
            inner_reduction: 0.1,
            first_order: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidSpec("tolerance must be positive"));
        }
        if self.max_outer < 1 || self.inner_sweep_cap < 1 {
            return Err(Error::InvalidSpec("iteration caps must be at least 1"));
        }
        if !(self.inner_reduction > 0.0 && self.inner_reduction < 1.0) {
            return Err(Error::InvalidSpec("inner reduction must lie in (0, 1)"));
        }
        if !self.theta_deg.is_finite() {
            return Err(Error::InvalidSpec("advection angle must be finite"));
        }
        Ok(())
    }

    pub fn velocity(&self) -> Vec2 {
        advection_velocity(self.theta_deg)
    }
}

pub fn advection_velocity(theta_deg: f64) -> Vec2 {
    let (s, c) = libm::sincos(theta_deg.to_radians());
    Vec2::new(c, s)
}

pub fn exact_solution(p: Vec2) -> f64 {
    libm::sin(PI * p.x) * libm::sin(PI * p.y)
}

/// `a·∇u*`.
pub fn manufactured_source(a: Vec2, p: Vec2) -> f64 {
    let (sx, cx) = libm::sincos(PI * p.x);
    let (sy, cy) = libm::sincos(PI * p.y);
    PI * (a.x * cx * sy + a.y * sx * cy)
}

/// Upwind flux `½(a·n)(uL+uR) − ½|a·n|(uR−uL)` per unit length.
#[inline]
pub fn upwind_flux(an: f64, ul: f64, ur: f64) -> f64 {
    0.5 * an * (ul + ur) - 0.5 * libm::fabs(an) * (ur - ul)
}

/// Everything about the scheme that does not depend on the state.
#[derive(Debug, Clone)]
pub struct Discretization<'g> {
    grid: &'g Grid,
    velocity: Vec2,
    forcing: Forcing,
    /// `(neighbors, system)` per cell; `None` where the stencil is unusable.
    reconstruction: Vec<Option<(Vec<usize>, LsqSystem)>>,
    first_order: bool,
}

impl<'g> Discretization<'g> {
    pub fn new(
        grid: &'g Grid,
        spec: &ProblemSpec,
        weighting: Weighting,
        mode: StencilMode,
    ) -> Discretization<'g> {
        Self::new_with(&Serial, grid, spec, weighting, mode)
    }

    pub fn new_with<E: CellMap>(
        exec: &E,
        grid: &'g Grid,
        spec: &ProblemSpec,
        weighting: Weighting,
        mode: StencilMode,
    ) -> Discretization<'g> {
        let reconstruction = exec.map(grid.ncells(), |c| {
            let stencil = build_stencil(grid, c, mode).ok()?;
            let sys = LsqSystem::build(&stencil, weighting).ok()?;
            Some((stencil.neighbors, sys))
        });
        Discretization {
            grid,
            velocity: spec.velocity(),
            forcing: spec.forcing,
            reconstruction,
            first_order: spec.first_order,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.grid
    }

    /// Cells whose gradient is forced to zero for lack of a usable stencil.
    pub fn unreconstructed_cells(&self) -> usize {
        self.reconstruction.iter().filter(|r| r.is_none()).count()
    }

    fn boundary_value(&self, p: Vec2) -> f64 {
        match self.forcing {
            Forcing::Manufactured => exact_solution(p),
            Forcing::Homogeneous => 0.0,
        }
    }

    fn source(&self, p: Vec2) -> f64 {
        match self.forcing {
            Forcing::Manufactured => manufactured_source(self.velocity, p),
            Forcing::Homogeneous => 0.0,
        }
    }

    pub fn gradient(&self, u: &[f64], cell: usize) -> Gradient {
        if self.first_order {
            return Vec2::ZERO;
        }
        match &self.reconstruction[cell] {
            Some((nbrs, sys)) => sys.apply_iter(nbrs.iter().map(|&k| u[k] - u[cell])),
            None => Vec2::ZERO,
        }
    }

    pub fn gradients_with<E: CellMap>(&self, exec: &E, u: &[f64]) -> Vec<Gradient> {
        exec.map(self.grid.ncells(), |c| self.gradient(u, c))
    }

    /// Residual of one cell: Σ flux·length − f(centroid)·area.
    ///
    /// Each face flux is evaluated in the orientation of its left cell, so
    /// the two owners of an interior face see bitwise opposite contributions.
    pub fn cell_residual(&self, u: &[f64], grads: &[Gradient], cell: usize) -> f64 {
        let grid = self.grid;
        let reconstruct = |c: usize, at: Vec2| {
            u[c] + grads[c].dot(at - grid.cells()[c].centroid())
        };
        let mut r = 0.0;
        for &fi in grid.cell_faces(cell) {
            let face = &grid.faces()[fi];
            let ul = reconstruct(face.left, face.midpoint);
            let ur = match face.right {
                Some(right) => reconstruct(right, face.midpoint),
                None => self.boundary_value(face.midpoint),
            };
            let flux = upwind_flux(self.velocity.dot(face.normal), ul, ur) * face.length;
            if face.left == cell {
                r += flux;
            } else {
                r -= flux;
            }
        }
        let c = &grid.cells()[cell];
        r - self.source(c.centroid()) * c.area()
    }

    pub fn residual_with<E: CellMap>(&self, exec: &E, u: &[f64]) -> Vec<f64> {
        let grads = self.gradients_with(exec, u);
        exec.map(self.grid.ncells(), |c| self.cell_residual(u, &grads, c))
    }

    pub fn residual(&self, u: &[f64]) -> Vec<f64> {
        self.residual_with(&Serial, u)
    }

    pub fn jacobian(&self) -> CsrMatrix {
        jacobian_low_order(self.grid, self.velocity)
    }
}

/// Second-order residual of `u` (see [`Discretization::cell_residual`]).
pub fn residual_second_order(
    grid: &Grid,
    spec: &ProblemSpec,
    weighting: Weighting,
    mode: StencilMode,
    u: &[f64],
) -> Vec<f64> {
    Discretization::new(grid, spec, weighting, mode).residual(u)
}

/// Exact Jacobian of the first-order upwind residual.
///
/// Row `j` holds `Σ_f max(a·n, 0)·len` on the diagonal and `min(a·n, 0)·len`
/// for each face neighbor, with `n` pointing out of `j`. The row pattern is
/// exactly the face adjacency of the grid plus the diagonal.
pub fn jacobian_low_order(grid: &Grid, velocity: Vec2) -> CsrMatrix {
    let rows = (0..grid.ncells())
        .map(|j| {
            let mut row = Vec::with_capacity(grid.cell_faces(j).len() + 1);
            let mut diag = 0.0;
            for &fi in grid.cell_faces(j) {
                let face = &grid.faces()[fi];
                let an = velocity.dot(face.outward_normal(j));
                diag += 0.5 * (an + libm::fabs(an)) * face.length;
                if let Some(k) = face.other(j) {
                    row.push((k, 0.5 * (an - libm::fabs(an)) * face.length));
                }
            }
            row.push((j, diag));
            row
        })
        .collect();
    CsrMatrix::from_rows(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    Diverged,
    MaxIterations,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::Diverged => "DIVERGED",
            SolveStatus::MaxIterations => "max-iterations",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryEntry {
    pub iter: usize,
    /// ‖R‖₁ / ‖R₀‖₁.
    pub residual_norm: f64,
    /// Cumulative work, in residual evaluations.
    pub work_units: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub history: Vec<HistoryEntry>,
    pub status: SolveStatus,
    /// Outer iterations needed to reach the tolerance, if it was reached.
    pub iterations_to_tol: Option<usize>,
    pub work_units: f64,
    pub initial_residual_norm: f64,
    pub solution: Vec<f64>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}

pub fn defect_correction_solve(
    grid: &Grid,
    spec: &ProblemSpec,
    weighting: Weighting,
    mode: StencilMode,
) -> Result<SolveReport> {
    defect_correction_solve_with(&Serial, grid, spec, weighting, mode)
}

/// Outer loop: `J δ = −R(u)` solved approximately by symmetric Gauss-Seidel,
/// then `u ← u + δ`, until the relative L1 residual reaches the tolerance.
pub fn defect_correction_solve_with<E: CellMap>(
    exec: &E,
    grid: &Grid,
    spec: &ProblemSpec,
    weighting: Weighting,
    mode: StencilMode,
) -> Result<SolveReport> {
    spec.validate()?;
    let disc = Discretization::new_with(exec, grid, spec, weighting, mode);
    let jac = disc.jacobian();
    let n = grid.ncells();

    let mut u = vec![0.0; n];
    let mut work = 0.0;
    let mut r = disc.residual_with(exec, &u);
    work += RESIDUAL_WORK;
    let r0 = l1(&r);
    let mut history = vec![HistoryEntry {
        iter: 0,
        residual_norm: 1.0,
        work_units: work,
    }];
    let finish = |history, status, iterations_to_tol, work_units, solution| SolveReport {
        history,
        status,
        iterations_to_tol,
        work_units,
        initial_residual_norm: r0,
        solution,
    };
    if r0 == 0.0 {
        return Ok(finish(history, SolveStatus::Converged, Some(0), work, u));
    }

    let mut delta = vec![0.0; n];
    for iter in 1..=spec.max_outer {
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        delta.iter_mut().for_each(|d| *d = 0.0);
        let target = spec.inner_reduction * l1(&rhs);
        for _ in 0..spec.inner_sweep_cap {
            jac.symmetric_gauss_seidel(&mut delta, &rhs);
            work += 2.0 * SWEEP_WORK;
            if jac.residual_l1(&delta, &rhs) <= target {
                break;
            }
        }
        for (ui, di) in u.iter_mut().zip(&delta) {
            *ui += di;
        }

        r = disc.residual_with(exec, &u);
        work += RESIDUAL_WORK;
        let rel = l1(&r) / r0;
        history.push(HistoryEntry {
            iter,
            residual_norm: rel,
            work_units: work,
        });
        if !rel.is_finite() || rel > DIVERGENCE_FACTOR {
            return Ok(finish(history, SolveStatus::Diverged, None, work, u));
        }
        if rel <= spec.tolerance {
            return Ok(finish(history, SolveStatus::Converged, Some(iter), work, u));
        }
    }
    Ok(finish(history, SolveStatus::MaxIterations, None, work, u))
}

pub fn l1(v: &[f64]) -> f64 {
    v.iter().map(|x| libm::fabs(*x)).sum()
}

/// Area-weighted mean of |u − u*| at the cell centroids.
pub fn solution_error_l1(grid: &Grid, u: &[f64]) -> f64 {
    let (mut err, mut area) = (0.0, 0.0);
    for (c, ui) in grid.cells().iter().zip(u) {
        err += libm::fabs(ui - exact_solution(c.centroid())) * c.area();
        area += c.area();
    }
    err / area
}
