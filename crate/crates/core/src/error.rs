use core::fmt;

/// Violations of the grid invariants, detected when a [`Grid`](crate::Grid) is built.
#[derive(Debug, Clone, PartialEq)]
pub enum GridError {
    NoCells,
    VertexCount { cell: usize, count: usize },
    VertexOutOfRange { cell: usize, vertex: usize, nnodes: usize },
    RepeatedVertex { cell: usize, vertex: usize },
    NonPositiveArea { cell: usize, area: f64 },
    NonFiniteCoordinate { node: usize },
    /// A node pair is used by more than two cells, or twice in the same direction.
    FaceSharing { nodes: [usize; 2] },
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::NoCells => write!(f, "grid has no cells"),
            GridError::VertexCount { cell, count } => {
                write!(f, "cell {cell} has {count} vertices, expected 3 or 4")
            }
            GridError::VertexOutOfRange { cell, vertex, nnodes } => write!(
                f,
                "cell {cell} references vertex {vertex}, but the grid has {nnodes} nodes"
            ),
            GridError::RepeatedVertex { cell, vertex } => {
                write!(f, "cell {cell} lists vertex {vertex} more than once")
            }
            GridError::NonPositiveArea { cell, area } => write!(
                f,
                "cell {cell} has non-positive signed area {area:e} (vertices must be counter-clockwise)"
            ),
            GridError::NonFiniteCoordinate { node } => {
                write!(f, "node {node} has a non-finite coordinate")
            }
            GridError::FaceSharing { nodes } => write!(
                f,
                "face ({}, {}) is not shared consistently by at most two cells",
                nodes[0], nodes[1]
            ),
        }
    }
}

impl core::error::Error for GridError {}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    Grid(GridError),
    /// Fewer than two neighbors, or a neighbor centroid coincides with the target.
    DegenerateStencil { cell: usize, neighbors: usize },
    /// The normal matrix is (numerically) rank deficient: collinear centroids.
    SingularStencil { det: f64, frobenius_sq: f64 },
    LengthMismatch { expected: usize, found: usize },
    /// More than half of the cells have degenerate or singular stencils.
    GridDegenerate { degenerate: usize, ncells: usize },
    InvalidSpec(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Grid(e) => write!(f, "invalid grid: {e}"),
            Error::DegenerateStencil { cell, neighbors } => write!(
                f,
                "degenerate stencil at cell {cell} ({neighbors} usable neighbors)"
            ),
            Error::SingularStencil { det, frobenius_sq } => write!(
                f,
                "singular least-squares stencil (det {det:e}, |AtA|_F^2 {frobenius_sq:e})"
            ),
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} neighbor values, found {found}")
            }
            Error::GridDegenerate { degenerate, ncells } => write!(
                f,
                "{degenerate} of {ncells} cells have degenerate stencils"
            ),
            Error::InvalidSpec(msg) => write!(f, "invalid parameters: {msg}"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::Grid(e) => Some(e),
            _ => None,
        }
    }
}

impl From<GridError> for Error {
    fn from(e: GridError) -> Self {
        Error::Grid(e)
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
