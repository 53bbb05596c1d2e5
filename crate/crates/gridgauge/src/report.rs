//! CSV and legacy-VTK serialization of measure reports and solver histories.

use std::io::{self, Write};

use gridgauge_core::measures::MeasureReport;
use gridgauge_core::{Grid, SolveReport};

use crate::format::fmt17;

pub const SUMMARY_HEADER: &str =
    "grid_name,ncells,p,stencil_mode,F_min,F_max,F_avg,G_min,G_max,G_avg,degenerate_count";

pub const HISTORY_HEADER: &str = "iter,residual_norm,work_units";

pub fn summary_row(r: &MeasureReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.grid_name,
        r.ncells(),
        r.weighting.exponent(),
        r.stencil_mode,
        fmt17(r.f.min),
        fmt17(r.f.max),
        fmt17(r.f.avg),
        fmt17(r.g.min),
        fmt17(r.g.max),
        fmt17(r.g.avg),
        r.degenerate_count
    )
}

pub fn write_summary(r: &MeasureReport, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    writeln!(w, "{}", summary_row(r))
}

pub fn write_history(report: &SolveReport, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "{HISTORY_HEADER}")?;
    for h in &report.history {
        writeln!(w, "{},{},{}", h.iter, fmt17(h.residual_norm), fmt17(h.work_units))?;
    }
    Ok(())
}

pub fn summary_line(report: &SolveReport) -> String {
    let last = report.history.last().map_or(f64::NAN, |h| h.residual_norm);
    let iterations = report
        .iterations_to_tol
        .map_or_else(|| "DIVERGED".to_string(), |n| n.to_string());
    format!(
        "status={} iterations_to_tol={} outer_iterations={} work_units={} final_residual={}",
        report.status.as_str(),
        iterations,
        report.history.len() - 1,
        fmt17(report.work_units),
        fmt17(last)
    )
}

const VTK_TRIANGLE: u8 = 5;
const VTK_QUAD: u8 = 9;

/// Legacy ASCII VTK unstructured grid with `F_measure` and `G_measure` cell
/// scalars. Degenerate cells are written as `nan`.
pub fn write_vtk(grid: &Grid, report: &MeasureReport, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "{}", grid.name())?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {} double", grid.nodes().len())?;
    for p in grid.nodes() {
        writeln!(w, "{} {} 0", fmt17(p.x), fmt17(p.y))?;
    }
    let size: usize = grid.connectivity().map(|c| c.len() + 1).sum();
    writeln!(w, "CELLS {} {}", grid.ncells(), size)?;
    for verts in grid.connectivity() {
        write!(w, "{}", verts.len())?;
        for v in verts {
            write!(w, " {v}")?;
        }
        writeln!(w)?;
    }
    writeln!(w, "CELL_TYPES {}", grid.ncells())?;
    for verts in grid.connectivity() {
        writeln!(w, "{}", if verts.len() == 3 { VTK_TRIANGLE } else { VTK_QUAD })?;
    }
    writeln!(w, "CELL_DATA {}", grid.ncells())?;
    let mut scalars = |name: &str, values: &mut dyn Iterator<Item = f64>| -> io::Result<()> {
        writeln!(w, "SCALARS {name} double 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for v in values {
            if v.is_nan() {
                writeln!(w, "nan")?;
            } else {
                writeln!(w, "{}", fmt17(v))?;
            }
        }
        Ok(())
    };
    scalars("F_measure", &mut report.per_cell.iter().map(|v| v.f))?;
    scalars("G_measure", &mut report.per_cell.iter().map(|v| v.g))?;
    Ok(())
}
