//! Neighbor stencils for cell-centered gradient reconstruction.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::grid::Grid;

/// Relative (to the bounding-box diagonal) distance below which a neighbor
/// centroid is considered coincident with the target centroid.
pub const COINCIDENT_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum StencilMode {
    /// Cells sharing an edge.
    #[default]
    Face,
    /// Cells sharing at least one node.
    Vertex,
}

impl StencilMode {
    pub fn as_str(self) -> &'static str {
        match self {
            StencilMode::Face => "face",
            StencilMode::Vertex => "vertex",
        }
    }
}

impl fmt::Display for StencilMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StencilMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "face" => Ok(StencilMode::Face),
            "vertex" => Ok(StencilMode::Vertex),
            _ => Err(Error::InvalidSpec("stencil mode must be `face` or `vertex`")),
        }
    }
}

/// Neighbor cells of one target cell together with centroid offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    pub target: usize,
    /// Ascending cell indices.
    pub neighbors: Vec<usize>,
    /// `centroid(neighbor) - centroid(target)`.
    pub offsets: Vec<Vec2>,
    pub distances: Vec<f64>,
}

impl Stencil {
    /// Builds a stencil directly from offsets. Used for synthetic stencils;
    /// neighbor indices are `1..=N` and the target is `0`.
    pub fn from_offsets(offsets: Vec<Vec2>) -> Result<Stencil> {
        let neighbors = (1..=offsets.len()).collect();
        Self::assemble(0, neighbors, offsets, 0.0)
    }

    fn assemble(
        target: usize,
        neighbors: Vec<usize>,
        offsets: Vec<Vec2>,
        min_distance: f64,
    ) -> Result<Stencil> {
        let distances: Vec<f64> = offsets.iter().map(|d| d.norm()).collect();
        if offsets.len() < 2 || distances.iter().any(|&d| !(d > min_distance)) {
            return Err(Error::DegenerateStencil {
                cell: target,
                neighbors: distances.iter().filter(|&&d| d > min_distance).count(),
            });
        }
        Ok(Stencil {
            target,
            neighbors,
            offsets,
            distances,
        })
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// Distance to the farthest neighbor centroid.
    pub fn max_distance(&self) -> f64 {
        self.distances.iter().copied().fold(0.0, f64::max)
    }

    /// The same stencil with all offsets multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Stencil> {
        Self::assemble(
            self.target,
            self.neighbors.clone(),
            self.offsets.iter().map(|&d| d * factor).collect(),
            0.0,
        )
    }

    /// The same stencil with all offsets rotated by `angle` radians.
    pub fn rotated(&self, angle: f64) -> Result<Stencil> {
        Self::assemble(
            self.target,
            self.neighbors.clone(),
            self.offsets.iter().map(|&d| d.rotated(angle)).collect(),
            0.0,
        )
    }
}

/// Neighbor cell indices of `cell` in the given mode, ascending, without the cell itself.
pub fn neighbor_cells(grid: &Grid, cell: usize, mode: StencilMode) -> Vec<usize> {
    let mut out: Vec<usize> = match mode {
        StencilMode::Face => grid
            .cell_faces(cell)
            .iter()
            .filter_map(|&fi| grid.faces()[fi].other(cell))
            .collect(),
        StencilMode::Vertex => grid.cells()[cell]
            .vertices()
            .iter()
            .flat_map(|&v| grid.node_cells(v).iter().copied())
            .filter(|&c| c != cell)
            .collect(),
    };
    out.sort_unstable();
    out.dedup();
    out
}

/// Stencil of a single cell.
pub fn build_stencil(grid: &Grid, cell: usize, mode: StencilMode) -> Result<Stencil> {
    let neighbors = neighbor_cells(grid, cell, mode);
    let origin = grid.cells()[cell].centroid();
    let offsets = neighbors
        .iter()
        .map(|&k| grid.cells()[k].centroid() - origin)
        .collect();
    Stencil::assemble(
        cell,
        neighbors,
        offsets,
        COINCIDENT_TOLERANCE * grid.bbox_diagonal(),
    )
}

/// Stencils of every cell, one entry per cell. Degenerate cells yield their
/// error in place so callers can flag rather than abort.
pub fn build_stencils(grid: &Grid, mode: StencilMode) -> Vec<Result<Stencil>> {
    (0..grid.ncells())
        .map(|c| build_stencil(grid, c, mode))
        .collect()
}
