//! Grid data model and derived geometry.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::GridError;
use crate::geometry::{polygon_area_centroid, Vec2};

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    vertices: Vec<usize>,
    centroid: Vec2,
    area: f64,
}

impl Cell {
    /// Node indices, counter-clockwise.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn centroid(&self) -> Vec2 {
        self.centroid
    }

    pub fn area(&self) -> f64 {
        self.area
    }
}

/// An edge of the grid. `nodes` follow the counter-clockwise order of the
/// `left` cell, so `normal` points out of `left` (and into `right`).
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub nodes: [usize; 2],
    pub left: usize,
    pub right: Option<usize>,
    /// Unit normal, outward from `left`.
    pub normal: Vec2,
    pub length: f64,
    pub midpoint: Vec2,
}

impl Face {
    pub fn is_boundary(&self) -> bool {
        self.right.is_none()
    }

    /// The cell on the other side of the face from `cell`, if any.
    pub fn other(&self, cell: usize) -> Option<usize> {
        if self.left == cell {
            self.right
        } else {
            Some(self.left)
        }
    }

    /// Unit normal pointing out of `cell`.
    pub fn outward_normal(&self, cell: usize) -> Vec2 {
        if self.left == cell {
            self.normal
        } else {
            -self.normal
        }
    }
}

/// A validated 2D grid of triangles and quadrilaterals with its geometry.
///
/// Immutable once built; every query is a pure read.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    name: String,
    nodes: Vec<Vec2>,
    cells: Vec<Cell>,
    faces: Vec<Face>,
    cell_faces: Vec<Vec<usize>>,
    node_cells: Vec<Vec<usize>>,
    bbox_diagonal: f64,
}

impl Grid {
    /// Validates the connectivity and derives centroids, areas and faces.
    pub fn new(
        name: impl Into<String>,
        nodes: Vec<Vec2>,
        connectivity: Vec<Vec<usize>>,
    ) -> Result<Grid, GridError> {
        if connectivity.is_empty() {
            return Err(GridError::NoCells);
        }
        if let Some(node) = nodes.iter().position(|p| !p.is_finite()) {
            return Err(GridError::NonFiniteCoordinate { node });
        }
        let nnodes = nodes.len();
        let mut cells = Vec::with_capacity(connectivity.len());
        for (ci, vertices) in connectivity.into_iter().enumerate() {
            validate_cell(ci, &vertices, nnodes)?;
            let mut pts = [Vec2::ZERO; 4];
            for (slot, &v) in pts.iter_mut().zip(&vertices) {
                *slot = nodes[v];
            }
            let (area, centroid) = polygon_area_centroid(&pts[..vertices.len()]);
            if !(area > 0.0) {
                return Err(GridError::NonPositiveArea { cell: ci, area });
            }
            cells.push(Cell {
                vertices,
                centroid,
                area,
            });
        }

        let (faces, cell_faces) = build_faces(&nodes, &cells)?;

        let mut node_cells = alloc::vec![Vec::new(); nnodes];
        for (ci, cell) in cells.iter().enumerate() {
            for &v in &cell.vertices {
                node_cells[v].push(ci);
            }
        }

        let (lo, hi) = nodes.iter().fold(
            (
                Vec2::new(f64::INFINITY, f64::INFINITY),
                Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
            ),
            |(lo, hi), p| {
                (
                    Vec2::new(lo.x.min(p.x), lo.y.min(p.y)),
                    Vec2::new(hi.x.max(p.x), hi.y.max(p.y)),
                )
            },
        );

        Ok(Grid {
            name: name.into(),
            nodes,
            cells,
            faces,
            cell_faces,
            node_cells,
            bbox_diagonal: (hi - lo).norm(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Grid {
        self.name = name.into();
        self
    }

    pub fn nodes(&self) -> &[Vec2] {
        &self.nodes
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn ncells(&self) -> usize {
        self.cells.len()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Indices into [`Grid::faces`] of the edges of `cell`, in vertex order.
    pub fn cell_faces(&self, cell: usize) -> &[usize] {
        &self.cell_faces[cell]
    }

    /// Cells that use `node` as a vertex, ascending.
    pub fn node_cells(&self, node: usize) -> &[usize] {
        &self.node_cells[node]
    }

    pub fn bbox_diagonal(&self) -> f64 {
        self.bbox_diagonal
    }

    /// Cell connectivity as it would be written to a file.
    pub fn connectivity(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.cells.iter().map(|c| c.vertices.as_slice())
    }

    /// A copy with every node mapped through `f`. Connectivity is reused, so
    /// `f` must preserve orientation.
    pub fn map_nodes(&self, f: impl Fn(Vec2) -> Vec2) -> Result<Grid, GridError> {
        Grid::new(
            self.name.clone(),
            self.nodes.iter().map(|&p| f(p)).collect(),
            self.cells.iter().map(|c| c.vertices.clone()).collect(),
        )
    }

    pub fn translated(&self, t: Vec2) -> Result<Grid, GridError> {
        self.map_nodes(|p| p + t)
    }

    pub fn rotated(&self, angle: f64) -> Result<Grid, GridError> {
        self.map_nodes(|p| p.rotated(angle))
    }

    pub fn scaled(&self, factor: f64) -> Result<Grid, GridError> {
        self.map_nodes(|p| p * factor)
    }
}

fn validate_cell(ci: usize, vertices: &[usize], nnodes: usize) -> Result<(), GridError> {
    if !(3..=4).contains(&vertices.len()) {
        return Err(GridError::VertexCount {
            cell: ci,
            count: vertices.len(),
        });
    }
    for (i, &v) in vertices.iter().enumerate() {
        if v >= nnodes {
            return Err(GridError::VertexOutOfRange {
                cell: ci,
                vertex: v,
                nnodes,
            });
        }
        if vertices[..i].contains(&v) {
            return Err(GridError::RepeatedVertex { cell: ci, vertex: v });
        }
    }
    Ok(())
}

fn build_faces(nodes: &[Vec2], cells: &[Cell]) -> Result<(Vec<Face>, Vec<Vec<usize>>), GridError> {
    let mut faces: Vec<Face> = Vec::new();
    let mut cell_faces = Vec::with_capacity(cells.len());
    let mut by_key: BTreeMap<(usize, usize), usize> = BTreeMap::new();

    for (ci, cell) in cells.iter().enumerate() {
        let n = cell.vertices.len();
        let mut own = Vec::with_capacity(n);
        for i in 0..n {
            let a = cell.vertices[i];
            let b = cell.vertices[(i + 1) % n];
            let key = (a.min(b), a.max(b));
            match by_key.get(&key) {
                None => {
                    let edge = nodes[b] - nodes[a];
                    let length = edge.norm();
                    by_key.insert(key, faces.len());
                    own.push(faces.len());
                    faces.push(Face {
                        nodes: [a, b],
                        left: ci,
                        right: None,
                        normal: edge.perp_cw() * (1.0 / length),
                        length,
                        midpoint: (nodes[a] + nodes[b]) * 0.5,
                    });
                }
                Some(&fi) => {
                    let face = &mut faces[fi];
                    // A second counter-clockwise owner must traverse the edge backwards.
                    if face.right.is_some() || face.nodes != [b, a] {
                        return Err(GridError::FaceSharing { nodes: [a, b] });
                    }
                    face.right = Some(ci);
                    own.push(fi);
                }
            }
        }
        cell_faces.push(own);
    }
    Ok((faces, cell_faces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn unit_square() -> Grid {
        Grid::new(
            "sq",
            vec![
                Vec2::new(0.0, 0.0),
                Vec2::new(1.0, 0.0),
                Vec2::new(1.0, 1.0),
                Vec2::new(0.0, 1.0),
            ],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap()
    }

    /// 3×3 nodes, 2×2 quads, row-major.
    fn two_by_two() -> Grid {
        let mut nodes = Vec::new();
        for j in 0..3 {
            for i in 0..3 {
                nodes.push(Vec2::new(i as f64, j as f64));
            }
        }
        let mut cells = Vec::new();
        for j in 0..2 {
            for i in 0..2 {
                let n0 = j * 3 + i;
                cells.push(vec![n0, n0 + 1, n0 + 4, n0 + 3]);
            }
        }
        Grid::new("2x2", nodes, cells).unwrap()
    }

    #[test]
    fn single_square() {
        let g = unit_square();
        assert_eq!(g.ncells(), 1);
        assert_eq!(g.cells()[0].area(), 1.0);
        assert_eq!(g.cells()[0].centroid(), Vec2::new(0.5, 0.5));
        assert_eq!(g.faces().len(), 4);
        assert!(g.faces().iter().all(Face::is_boundary));
    }

    #[test]
    fn two_by_two_face_census() {
        // Hand count: 2 interior vertical + 2 interior horizontal edges; 8 on the boundary.
        let g = two_by_two();
        let interior = g.faces().iter().filter(|f| f.right.is_some()).count();
        let boundary = g.faces().iter().filter(|f| f.is_boundary()).count();
        assert_eq!((interior, boundary), (4, 8));
        for f in g.faces().iter().filter(|f| !f.is_boundary()) {
            assert_ne!(Some(f.left), f.right);
        }
    }

    #[test]
    fn normals_point_out_of_left_cell() {
        let g = two_by_two();
        for f in g.faces() {
            let c = g.cells()[f.left].centroid();
            assert!((f.midpoint - c).dot(f.normal) > 0.0);
            assert!((f.normal.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_cells_have_zero_normal_sum() {
        let g = two_by_two().rotated(0.3).unwrap();
        for ci in 0..g.ncells() {
            let mut s = Vec2::ZERO;
            for &fi in g.cell_faces(ci) {
                let f = &g.faces()[fi];
                s += f.outward_normal(ci) * f.length;
            }
            assert!(s.norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_clockwise_cell() {
        let err = Grid::new(
            "cw",
            vec![
                Vec2::new(0.0, 0.0),
                Vec2::new(1.0, 0.0),
                Vec2::new(1.0, 1.0),
                Vec2::new(0.0, 1.0),
            ],
            vec![vec![0, 3, 2, 1]],
        )
        .unwrap_err();
        assert!(matches!(err, GridError::NonPositiveArea { cell: 0, .. }));
    }

    #[test]
    fn rejects_out_of_range_and_bad_counts() {
        let nodes = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        assert!(matches!(
            Grid::new("x", nodes.clone(), vec![vec![0, 1, 5]]),
            Err(GridError::VertexOutOfRange { vertex: 5, .. })
        ));
        assert!(matches!(
            Grid::new("x", nodes.clone(), vec![vec![0, 1]]),
            Err(GridError::VertexCount { count: 2, .. })
        ));
        assert!(matches!(
            Grid::new("x", nodes.clone(), vec![vec![0, 1, 1]]),
            Err(GridError::RepeatedVertex { .. })
        ));
        assert!(matches!(Grid::new("x", nodes, vec![]), Err(GridError::NoCells)));
    }

    #[test]
    fn rejects_overlapping_cells() {
        // The same triangle twice traverses every edge in the same direction.
        let nodes = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        assert!(matches!(
            Grid::new("x", nodes, vec![vec![0, 1, 2], vec![0, 1, 2]]),
            Err(GridError::FaceSharing { .. })
        ));
    }
}
