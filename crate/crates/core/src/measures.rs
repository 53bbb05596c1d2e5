//! F- and G-measures per cell and their grid-level aggregates.
//!
//! * F = s / ‖AᵀA‖_F with s = Σ w_k² d_k. Lower is better; it scales as 1/length.
//! * G = |∇u| of the least-squares gradient of `u = exp(-(x̃² + ỹ²))`, where
//!   offsets are normalized by the distance `s_max` to the farthest neighbor
//!   and the gradient is taken with respect to the normalized coordinates
//!   (the physical gradient times `s_max`). It is dimensionless, unchanged by
//!   uniform scaling, and vanishes on centrally symmetric stencils.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exec::{CellMap, Serial};
use crate::grid::Grid;
use crate::lsq::{LsqSystem, Weighting};
use crate::stencil::{build_stencil, Stencil, StencilMode};

pub fn f_measure(stencil: &Stencil, system: &LsqSystem) -> f64 {
    let s: f64 = system
        .weights
        .iter()
        .zip(&stencil.distances)
        .map(|(w, d)| w * w * d)
        .sum();
    s / system.normal.frobenius()
}

/// Neighbor differences of the normalized Gaussian centered on the target.
pub fn gaussian_differences(stencil: &Stencil) -> Vec<f64> {
    let s_max = stencil.max_distance();
    stencil
        .distances
        .iter()
        .map(|d| {
            let r = d / s_max;
            libm::exp(-(r * r)) - 1.0
        })
        .collect()
}

pub fn g_measure(stencil: &Stencil, system: &LsqSystem) -> f64 {
    stencil.max_distance() * system.apply_iter(gaussian_differences(stencil)).norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureValues {
    /// NaN when `degenerate`.
    pub f: f64,
    /// NaN when `degenerate`.
    pub g: f64,
    pub degenerate: bool,
}

impl MeasureValues {
    pub const DEGENERATE: MeasureValues = MeasureValues {
        f: f64::NAN,
        g: f64::NAN,
        degenerate: true,
    };
}

/// F and G of one cell; degenerate or singular stencils are flagged, not errors.
pub fn evaluate_cell(
    grid: &Grid,
    cell: usize,
    weighting: Weighting,
    mode: StencilMode,
) -> MeasureValues {
    let Ok(stencil) = build_stencil(grid, cell, mode) else {
        return MeasureValues::DEGENERATE;
    };
    match LsqSystem::build(&stencil, weighting) {
        Ok(sys) => MeasureValues {
            f: f_measure(&stencil, &sys),
            g: g_measure(&stencil, &sys),
            degenerate: false,
        },
        Err(_) => MeasureValues::DEGENERATE,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min: f64,
    pub max: f64,
    pub avg: f64,
}

impl Summary {
    /// Fixed-order reduction; the mean is clamped into `[min, max]` so
    /// rounding cannot push it outside.
    fn of(values: impl Iterator<Item = f64>) -> Option<Summary> {
        let (mut min, mut max, mut sum, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
        for v in values {
            min = min.min(v);
            max = max.max(v);
            sum += v;
            n += 1;
        }
        (n > 0).then(|| Summary {
            min,
            max,
            avg: (sum / n as f64).clamp(min, max),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub grid_name: alloc::string::String,
    pub per_cell: Vec<MeasureValues>,
    pub f: Summary,
    pub g: Summary,
    pub degenerate_count: usize,
    pub weighting: Weighting,
    pub stencil_mode: StencilMode,
}

impl MeasureReport {
    /// Aggregates per-cell values over the non-degenerate cells.
    pub fn from_cells(
        grid_name: &str,
        per_cell: Vec<MeasureValues>,
        weighting: Weighting,
        stencil_mode: StencilMode,
    ) -> Result<MeasureReport> {
        let ncells = per_cell.len();
        let degenerate = per_cell.iter().filter(|v| v.degenerate).count();
        if 2 * degenerate > ncells || degenerate == ncells {
            return Err(Error::GridDegenerate { degenerate, ncells });
        }
        let good = || per_cell.iter().filter(|v| !v.degenerate);
        let f = Summary::of(good().map(|v| v.f)).expect("at least one good cell");
        let g = Summary::of(good().map(|v| v.g)).expect("at least one good cell");
        Ok(MeasureReport {
            grid_name: grid_name.into(),
            per_cell,
            f,
            g,
            degenerate_count: degenerate,
            weighting,
            stencil_mode,
        })
    }

    pub fn ncells(&self) -> usize {
        self.per_cell.len()
    }
}

/// Per-cell F and G with `exec` driving the cell loop.
pub fn analyze_with<E: CellMap>(
    exec: &E,
    grid: &Grid,
    weighting: Weighting,
    mode: StencilMode,
) -> Result<MeasureReport> {
    let per_cell = exec.map(grid.ncells(), |c| evaluate_cell(grid, c, weighting, mode));
    MeasureReport::from_cells(grid.name(), per_cell, weighting, mode)
}

pub fn analyze(grid: &Grid, weighting: Weighting, mode: StencilMode) -> Result<MeasureReport> {
    analyze_with(&Serial, grid, weighting, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use crate::gridgen::{generate, GenSpec, GridKind};
    use alloc::vec;

    fn sys(s: &Stencil) -> LsqSystem {
        LsqSystem::build(s, Weighting::Unweighted).unwrap()
    }

    #[test]
    fn cross_stencil() {
        let s = Stencil::from_offsets(vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(0.0, -1.0),
        ])
        .unwrap();
        // s = 4, |diag(2,2)|_F = 2√2.
        assert!((f_measure(&s, &sys(&s)) - core::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(g_measure(&s, &sys(&s)), 0.0);
        let s2 = s.scaled(2.0).unwrap();
        assert!((f_measure(&s2, &sys(&s2)) - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn l_stencil() {
        let s = Stencil::from_offsets(vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
        ])
        .unwrap();
        // AtA = diag(2, 1): s = 3, |AtA|_F = √5.
        let f = f_measure(&s, &sys(&s));
        assert!((f - 3.0 / libm::sqrt(5.0)).abs() < 1e-15);
        // Δu = e⁻¹ - 1 for all three; ux cancels, uy = Δu_2 / 1.
        let g = g_measure(&s, &sys(&s));
        assert!((g - (1.0 - libm::exp(-1.0))).abs() < 1e-15);
        let s3 = s.scaled(3.0).unwrap();
        assert!((g_measure(&s3, &sys(&s3)) - g).abs() < 1e-12);
    }

    #[test]
    fn quad_grid_interior_values() {
        let g = generate(&GenSpec::new(GridKind::Quad, 16, 16)).unwrap();
        let r = analyze(&g, Weighting::Unweighted, StencilMode::Face).unwrap();
        assert_eq!(r.degenerate_count, 0);
        let f_expect = core::f64::consts::SQRT_2 * 15.0;
        for j in 1..14 {
            for i in 1..14 {
                let v = r.per_cell[j * 15 + i];
                assert!((v.f - f_expect).abs() / f_expect < 1e-12);
                assert!(v.g <= 1e-12);
            }
        }
        assert!(r.g.avg > 0.0);
        assert!(r.f.min <= r.f.avg && r.f.avg <= r.f.max);
    }

    #[test]
    fn single_cell_grid_is_degenerate() {
        let g = generate(&GenSpec::new(GridKind::Quad, 2, 2)).unwrap();
        assert!(matches!(
            analyze(&g, Weighting::Unweighted, StencilMode::Face),
            Err(Error::GridDegenerate { degenerate: 1, ncells: 1 })
        ));
    }

    #[test]
    fn degenerate_cells_do_not_contaminate_aggregates() {
        // tri-regular has two corner triangles with a single face neighbor.
        let g = generate(&GenSpec::new(GridKind::TriRegular, 5, 5)).unwrap();
        let r = analyze(&g, Weighting::Unweighted, StencilMode::Face).unwrap();
        assert_eq!(r.degenerate_count, 2);
        assert!(r.per_cell.iter().filter(|v| v.degenerate).all(|v| v.f.is_nan()));
        assert!(r.f.avg.is_finite() && r.g.avg.is_finite());
    }
}
