//! Deterministic generators for structured and perturbed grids on a rectangle.
//!
//! Nodes are numbered row-major (`j * nx + i`, `x` fastest) and cells are
//! emitted quad by quad in the same order. Triangular kinds emit the two
//! triangles of each quad consecutively.
//!
//! `TriIrregular` moves every interior node by independent uniform offsets in
//! `[-β·hx, β·hx] × [-β·hy, β·hy]`, drawn from a ChaCha8 stream seeded with
//! `seed` in row-major node order. Each quad then draws one boolean from the
//! same stream to pick its diagonal. If the drawn diagonal leaves a triangle
//! smaller than [`FLIP_AREA_FRACTION`] of the unperturbed triangle and the
//! other diagonal does better, the other diagonal is used.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{twice_signed_area, Vec2};
use crate::grid::Grid;

/// See the module docs.
pub const FLIP_AREA_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridKind {
    Quad,
    QuadAr,
    TriRegular,
    TriIrregular,
}

impl GridKind {
    pub const ALL: [GridKind; 4] = [
        GridKind::Quad,
        GridKind::QuadAr,
        GridKind::TriRegular,
        GridKind::TriIrregular,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GridKind::Quad => "quad",
            GridKind::QuadAr => "quad-ar",
            GridKind::TriRegular => "tri-regular",
            GridKind::TriIrregular => "tri-irregular",
        }
    }
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GridKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GridKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s || k.as_str().replace('-', "_") == s)
            .ok_or(Error::InvalidSpec("unknown grid kind"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub kind: GridKind,
    pub nx: usize,
    pub ny: usize,
    /// Cell Δx/Δy for `QuadAr`.
    pub aspect_ratio: f64,
    /// Perturbation amplitude β for `TriIrregular`, in units of the local spacing.
    pub perturb: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(kind: GridKind, nx: usize, ny: usize) -> GenSpec {
        GenSpec {
            kind,
            nx,
            ny,
            aspect_ratio: 4.0,
            perturb: 0.3,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidSpec("nx and ny must be at least 2"));
        }
        if !(self.aspect_ratio.is_finite() && self.aspect_ratio > 0.0) {
            return Err(Error::InvalidSpec("aspect ratio must be positive"));
        }
        if !(0.0..0.5).contains(&self.perturb) {
            return Err(Error::InvalidSpec("perturbation must lie in [0, 0.5)"));
        }
        Ok(())
    }

    /// Domain height; the width is always 1.
    pub fn height(&self) -> f64 {
        match self.kind {
            GridKind::QuadAr => {
                (self.ny - 1) as f64 / ((self.nx - 1) as f64 * self.aspect_ratio)
            }
            _ => 1.0,
        }
    }

    pub fn name(&self) -> alloc::string::String {
        let base = format!("{}-{}x{}", self.kind, self.nx, self.ny);
        match self.kind {
            GridKind::QuadAr => format!("{base}-ar{}", self.aspect_ratio),
            GridKind::TriIrregular => format!("{base}-b{}-s{}", self.perturb, self.seed),
            _ => base,
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Grid> {
    spec.validate()?;
    let (nx, ny) = (spec.nx, spec.ny);
    let height = spec.height();
    let hx = 1.0 / (nx - 1) as f64;
    let hy = height / (ny - 1) as f64;

    let mut nodes = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let y = height * (j as f64 / (ny - 1) as f64);
        for i in 0..nx {
            nodes.push(Vec2::new(i as f64 / (nx - 1) as f64, y));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    if spec.kind == GridKind::TriIrregular {
        let beta = spec.perturb;
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let dx = (2.0 * rng.random::<f64>() - 1.0) * beta * hx;
                let dy = (2.0 * rng.random::<f64>() - 1.0) * beta * hy;
                nodes[j * nx + i] += Vec2::new(dx, dy);
            }
        }
    }

    let ncells = (nx - 1) * (ny - 1);
    let mut cells = Vec::with_capacity(match spec.kind {
        GridKind::Quad | GridKind::QuadAr => ncells,
        _ => 2 * ncells,
    });
    let min_twice_area = FLIP_AREA_FRACTION * hx * hy;
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let n00 = j * nx + i;
            let (n10, n01, n11) = (n00 + 1, n00 + nx, n00 + nx + 1);
            // Diagonal n00-n11, upper-left triangle first.
            let split_a = [[n00, n11, n01], [n00, n10, n11]];
            // Diagonal n10-n01.
            let split_b = [[n00, n10, n01], [n10, n11, n01]];
            match spec.kind {
                GridKind::Quad | GridKind::QuadAr => cells.push(alloc::vec![n00, n10, n11, n01]),
                GridKind::TriRegular => cells.extend(split_a.iter().map(|t| t.to_vec())),
                GridKind::TriIrregular => {
                    let drawn_a = rng.random::<bool>();
                    let smallest = |split: &[[usize; 3]; 2]| {
                        split
                            .iter()
                            .map(|t| twice_signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]))
                            .fold(f64::INFINITY, f64::min)
                    };
                    let (drawn, other) = if drawn_a {
                        (split_a, split_b)
                    } else {
                        (split_b, split_a)
                    };
                    let split = if smallest(&drawn) < min_twice_area
                        && smallest(&other) > smallest(&drawn)
                    {
                        other
                    } else {
                        drawn
                    };
                    cells.extend(split.iter().map(|t| t.to_vec()));
                }
            }
        }
    }

    Ok(Grid::new(spec.name(), nodes, cells)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_quad() {
        let g = generate(&GenSpec::new(GridKind::Quad, 2, 2)).unwrap();
        assert_eq!((g.nodes().len(), g.ncells()), (4, 1));
        assert_eq!(g.cells()[0].area(), 1.0);
    }

    #[test]
    fn quad_counts() {
        let g = generate(&GenSpec::new(GridKind::Quad, 16, 16)).unwrap();
        assert_eq!((g.nodes().len(), g.ncells()), (256, 225));
    }

    #[test]
    fn single_split_quad() {
        let g = generate(&GenSpec::new(GridKind::TriRegular, 2, 2)).unwrap();
        assert_eq!(g.ncells(), 2);
        assert!(g.cells().iter().all(|c| c.area() == 0.5));
    }

    #[test]
    fn aspect_ratio_cells() {
        let g = generate(&GenSpec::new(GridKind::QuadAr, 16, 16)).unwrap();
        let c = &g.cells()[0];
        let p = |k: usize| g.nodes()[c.vertices()[k]];
        let dx = p(1).x - p(0).x;
        let dy = p(3).y - p(0).y;
        assert!((dx / dy - 4.0).abs() < 1e-12);
        let top = g.nodes().iter().map(|p| p.y).fold(0.0, f64::max);
        assert_eq!(top, 0.25);
    }

    #[test]
    fn zero_perturbation_is_the_lattice() {
        for seed in [0, 1, 99] {
            let irr = generate(&GenSpec {
                perturb: 0.0,
                seed,
                ..GenSpec::new(GridKind::TriIrregular, 9, 7)
            })
            .unwrap();
            let reg = generate(&GenSpec::new(GridKind::Quad, 9, 7)).unwrap();
            assert_eq!(irr.nodes(), reg.nodes());
        }
    }

    #[test]
    fn boundary_nodes_stay_put() {
        let spec = GenSpec {
            perturb: 0.45,
            seed: 3,
            ..GenSpec::new(GridKind::TriIrregular, 12, 10)
        };
        let g = generate(&spec).unwrap();
        let reg = generate(&GenSpec::new(GridKind::Quad, 12, 10)).unwrap();
        for j in 0..10 {
            for i in 0..12 {
                if i == 0 || j == 0 || i == 11 || j == 9 {
                    assert_eq!(g.nodes()[j * 12 + i], reg.nodes()[j * 12 + i]);
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let spec = GenSpec {
            seed: 42,
            ..GenSpec::new(GridKind::TriIrregular, 33, 33)
        };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = GenSpec { seed: 43, ..spec.clone() };
        assert_ne!(generate(&spec).unwrap().nodes(), generate(&other).unwrap().nodes());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(generate(&GenSpec::new(GridKind::Quad, 1, 4)).is_err());
        let bad_beta = GenSpec {
            perturb: 0.5,
            ..GenSpec::new(GridKind::TriIrregular, 4, 4)
        };
        assert!(generate(&bad_beta).is_err());
        let bad_ar = GenSpec {
            aspect_ratio: 0.0,
            ..GenSpec::new(GridKind::QuadAr, 4, 4)
        };
        assert!(generate(&bad_ar).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for k in GridKind::ALL {
            assert_eq!(k.as_str().parse::<GridKind>().unwrap(), k);
        }
        assert_eq!("tri_irregular".parse::<GridKind>().unwrap(), GridKind::TriIrregular);
    }
}
