//! Command-line front end: `gen`, `analyze`, `rank` and `solve`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use gridgauge_core::measures::{analyze_with, MeasureReport};
use gridgauge_core::solver::defect_correction_solve_with;
use gridgauge_core::{
    generate, CellMap, GenSpec, GridKind, ProblemSpec, Serial, StencilMode, Weighting,
};

use crate::error::{exit, Error};
use crate::format::{fmt17, read_grid, save_grid, write_grid};
use crate::parallel::Parallel;
use crate::report::{summary_line, write_history, write_summary, write_vtk};

#[derive(Debug, Parser)]
#[command(name = "gridgauge", version, about = "Least-squares gradient grid-quality measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a structured or perturbed grid on a rectangle.
    Gen(GenArgs),
    /// Compute F- and G-measures of a grid.
    Analyze(AnalyzeArgs),
    /// Order grids by a measure statistic, best (lowest) first.
    Rank(RankArgs),
    /// Run the defect-correction advection solver on a grid.
    Solve(SolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Quad,
    #[value(alias = "quad_ar")]
    QuadAr,
    #[value(alias = "tri_regular")]
    TriRegular,
    #[value(alias = "tri_irregular")]
    TriIrregular,
}

impl From<KindArg> for GridKind {
    fn from(k: KindArg) -> GridKind {
        match k {
            KindArg::Quad => GridKind::Quad,
            KindArg::QuadAr => GridKind::QuadAr,
            KindArg::TriRegular => GridKind::TriRegular,
            KindArg::TriIrregular => GridKind::TriIrregular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StencilArg {
    Face,
    Vertex,
}

impl From<StencilArg> for StencilMode {
    fn from(s: StencilArg) -> StencilMode {
        match s {
            StencilArg::Face => StencilMode::Face,
            StencilArg::Vertex => StencilMode::Vertex,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub nx: usize,
    #[arg(long)]
    pub ny: usize,
    /// Cell aspect ratio Δx/Δy (quad-ar).
    #[arg(long, default_value_t = 4.0)]
    pub ar: f64,
    /// Node perturbation β in [0, 0.5) (tri-irregular).
    #[arg(long, default_value_t = 0.3)]
    pub perturb: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct SchemeArgs {
    /// Weight exponent in w = 1/d^p.
    #[arg(long = "p", default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=1))]
    pub p: u32,
    #[arg(long, value_enum, default_value_t = StencilArg::Face)]
    pub stencil: StencilArg,
}

impl SchemeArgs {
    fn weighting(&self) -> Weighting {
        Weighting::from_exponent(self.p).expect("range checked by clap")
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub grid: PathBuf,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Also write per-cell measures as legacy VTK.
    #[arg(long)]
    pub vtk: Option<PathBuf>,
    /// CSV output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatArg {
    Min,
    Max,
    Avg,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(required = true)]
    pub grids: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = MeasureArg::G)]
    pub measure: MeasureArg,
    #[arg(long, value_enum, default_value_t = StatArg::Avg)]
    pub stat: StatArg,
    #[command(flatten)]
    pub scheme: SchemeArgs,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub grid: PathBuf,
    /// Advection angle in degrees.
    #[arg(long, default_value_t = 30.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    /// Symmetric Gauss-Seidel sweeps per outer iteration, at most.
    #[arg(long, default_value_t = 20)]
    pub inner_cap: usize,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Use the first-order residual (zero gradients).
    #[arg(long)]
    pub first_order: bool,
    /// Assemble residuals on the worker pool.
    #[arg(long)]
    pub parallel: bool,
    /// History CSV file; stdout when omitted.
    #[arg(long)]
    pub history: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub rank: usize,
    pub grid_name: String,
    pub value: f64,
}

/// Sorts ascending by value, ties by name, then by input order.
pub fn rank_entries(items: Vec<(String, f64)>) -> Vec<RankEntry> {
    let mut items = items;
    items.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    items
        .into_iter()
        .enumerate()
        .map(|(i, (grid_name, value))| RankEntry {
            rank: i + 1,
            grid_name,
            value,
        })
        .collect()
}

fn statistic(r: &MeasureReport, measure: MeasureArg, stat: StatArg) -> f64 {
    let s = match measure {
        MeasureArg::F => r.f,
        MeasureArg::G => r.g,
    };
    match stat {
        StatArg::Min => s.min,
        StatArg::Max => s.max,
        StatArg::Avg => s.avg,
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| Error::Io {
            path: p.to_owned(),
            source,
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn finish(mut w: Box<dyn Write>, path: Option<&Path>) -> Result<(), Error> {
    w.flush().map_err(|source| match path {
        Some(p) => Error::Io {
            path: p.to_owned(),
            source,
        },
        None => Error::Stream(source),
    })
}

pub fn cmd_gen(args: &GenArgs) -> Result<(), Error> {
    let spec = GenSpec {
        kind: args.kind.into(),
        nx: args.nx,
        ny: args.ny,
        aspect_ratio: args.ar,
        perturb: args.perturb,
        seed: args.seed,
    };
    let grid = generate(&spec)?;
    match &args.output {
        Some(path) => save_grid(&grid, path),
        None => {
            let mut w = output(None)?;
            write_grid(&grid, &mut w)?;
            finish(w, None)
        }
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), Error> {
    let grid = read_grid(&args.grid)?;
    let exec = Parallel::from_env()?;
    let report = analyze_with(&exec, &grid, args.scheme.weighting(), args.scheme.stencil.into())?;
    if let Some(path) = &args.vtk {
        let mut w = output(Some(path))?;
        write_vtk(&grid, &report, &mut w).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        finish(w, Some(path))?;
    }
    let mut w = output(args.output.as_deref())?;
    write_summary(&report, &mut w)?;
    finish(w, args.output.as_deref())
}

pub fn cmd_rank(args: &RankArgs) -> Result<(), Error> {
    if args.grids.len() < 2 {
        return Err(Error::Usage("rank needs at least two grid files".into()));
    }
    let exec = Parallel::from_env()?;
    let mut items = Vec::with_capacity(args.grids.len());
    for path in &args.grids {
        let grid = read_grid(path)?;
        let report =
            analyze_with(&exec, &grid, args.scheme.weighting(), args.scheme.stencil.into())?;
        items.push((grid.name().to_string(), statistic(&report, args.measure, args.stat)));
    }
    let column = format!(
        "{}_{}",
        match args.measure {
            MeasureArg::F => "F",
            MeasureArg::G => "G",
        },
        match args.stat {
            StatArg::Min => "min",
            StatArg::Max => "max",
            StatArg::Avg => "avg",
        }
    );
    let mut w = output(None)?;
    writeln!(w, "rank,grid_name,{column}")?;
    for e in rank_entries(items) {
        writeln!(w, "{},{},{}", e.rank, e.grid_name, fmt17(e.value))?;
    }
    finish(w, None)
}

pub fn cmd_solve(args: &SolveArgs) -> Result<(), Error> {
    let grid = read_grid(&args.grid)?;
    let spec = ProblemSpec {
        tolerance: args.tol,
        max_outer: args.max_iter,
        inner_sweep_cap: args.inner_cap,
        first_order: args.first_order,
        ..ProblemSpec::new(args.theta)
    };
    let (weighting, mode) = (args.scheme.weighting(), args.scheme.stencil.into());
    let report = if args.parallel {
        solve_on(&Parallel::from_env()?, &grid, &spec, weighting, mode)?
    } else {
        solve_on(&Serial, &grid, &spec, weighting, mode)?
    };
    let mut w = output(args.history.as_deref())?;
    write_history(&report, &mut w)?;
    finish(w, args.history.as_deref())?;
    eprintln!("{}", summary_line(&report));
    if report.converged() {
        Ok(())
    } else {
        Err(Error::NotConverged(report.status.as_str()))
    }
}

fn solve_on<E: CellMap>(
    exec: &E,
    grid: &gridgauge_core::Grid,
    spec: &ProblemSpec,
    weighting: Weighting,
    mode: StencilMode,
) -> Result<gridgauge_core::SolveReport, Error> {
    Ok(defect_correction_solve_with(exec, grid, spec, weighting, mode)?)
}

pub fn execute(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Solve(a) => cmd_solve(a),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(()) => exit::SUCCESS,
        Err(e) => {
            eprintln!("gridgauge: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranking_sorts_and_breaks_ties_by_name() {
        let r = rank_entries(vec![
            ("b".into(), 0.5),
            ("a".into(), 0.5),
            ("c".into(), 0.1),
        ]);
        let names: Vec<_> = r.iter().map(|e| e.grid_name.as_str()).collect();
        assert_eq!(names, ["c", "a", "b"]);
        assert_eq!(r.iter().map(|e| e.rank).collect::<Vec<_>>(), [1, 2, 3]);
    }

    #[test]
    fn p_is_restricted() {
        assert!(Cli::try_parse_from(["gridgauge", "analyze", "g.txt", "--p", "2"]).is_err());
        assert!(Cli::try_parse_from(["gridgauge", "analyze", "g.txt", "--p", "1"]).is_ok());
    }

    #[test]
    fn kind_accepts_underscores() {
        let cli = Cli::try_parse_from([
            "gridgauge", "gen", "--kind", "tri_irregular", "--nx", "3", "--ny", "3",
        ])
        .unwrap();
        let Command::Gen(a) = cli.command else { panic!() };
        assert_eq!(a.kind, KindArg::TriIrregular);
    }
}
