use std::path::{Path, PathBuf};

use bsys::discretize::{assemble_laplacian_eig, reference_pair, refinement_study, GridSpec, Grids, OperatorKind, TruncationOptions};
use bsys::field::ScalarField;
use bsys::graph::{BoundarySpec, MetricGraph};
use bsys::io::{csv, csv_float, to_json, BoundaryDoc, GraphDoc};
use bsys::linrel::LagrangianData;
use bsys::secular::{ScanOptions, SecularEigenvalue, SecularProblem};
use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::{read_json, write_file, Context};

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Checks the graph and its boundary condition and prints a JSON report.
    Validate { graph: PathBuf },
    /// Smallest Laplacian eigenvalues by finite differences, as CSV `index,value,residual`.
    SpectrumFd(FdArgs),
    /// Laplacian eigenvalues from the secular matrix, as CSV `index,value,multiplicity,sigma_min`.
    SpectrumSecular(SecularArgs),
    /// Boundary-system residuals over a refinement ladder, as CSV `points,h_max,residual,order`.
    Bcheck(BcheckArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for ScalarField {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Real => ScalarField::Real,
            FieldArg::Complex => ScalarField::Complex,
        }
    }
}

#[derive(Debug, Args)]
pub struct FdArgs {
    graph: PathBuf,
    /// Grid points per edge.
    #[arg(long, default_value_t = 100, conflicts_with = "h")]
    points: usize,
    /// Largest grid step; overrides --points.
    #[arg(long)]
    h: Option<f64>,
    /// Number of eigenvalues.
    #[arg(long, default_value_t = 8)]
    count: usize,
    /// Length at which unbounded edges are cut.
    #[arg(long, default_value_t = 10.0)]
    truncation_length: f64,
    #[arg(long, value_enum, default_value_t = FieldArg::Real)]
    field: FieldArg,
    /// Also write the full JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SecularArgs {
    graph: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    lower: f64,
    #[arg(long, allow_negative_numbers = true)]
    upper: f64,
    /// Scan grid points; adjacent eigenvalues must be at least two grid steps apart.
    #[arg(long, default_value_t = 2000)]
    points: usize,
    #[arg(long, value_enum, default_value_t = FieldArg::Real)]
    field: FieldArg,
    /// Also write the scan curve as CSV `lambda,sigma_min` here.
    #[arg(long)]
    scan: Option<PathBuf>,
    /// Also write a JSON report with the complex-offset probe here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OperatorArg {
    Laplace,
    Derivative,
}

#[derive(Debug, Args)]
pub struct BcheckArgs {
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = OperatorArg::Laplace)]
    operator: OperatorArg,
    /// Grid points per edge, coarse to fine.
    #[arg(long, value_delimiter = ',', default_values_t = [25usize, 50, 100, 200, 400])]
    ladder: Vec<usize>,
}

/// Output of `graph validate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateOutput {
    pub vertices: usize,
    pub edges: usize,
    /// `None` when the infimum is infinite (no finite edges).
    pub min_edge_length: Option<f64>,
    pub left_count: usize,
    pub right_count: usize,
    pub boundary_count: usize,
    pub compact: bool,
    pub degrees: Vec<(String, usize)>,
    /// `"type"` of the boundary condition, if the document has one.
    pub bc: Option<String>,
}

/// JSON report of `graph spectrum-secular --report`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecularReport {
    pub eigenvalues: Vec<SecularEigenvalue>,
    /// Smallest relative `σ_min` at `λ + 0.1i` over the scan grid.
    pub complex_probe: f64,
}

pub const PROBE_OFFSET: f64 = 0.1;

fn load(path: &Path, ctx: &Context) -> Result<(GraphDoc, MetricGraph, Option<BoundarySpec>)> {
    let mut doc: GraphDoc = read_json(path)?;
    if let (Some(BoundaryDoc::SelfAdjoint { tol, .. }), Some(override_tol)) = (doc.bc.as_mut(), ctx.tol) {
        *tol = override_tol;
    }
    let g = doc.to_graph()?;
    let spec = doc.to_spec(&g)?;
    Ok((doc, g, spec))
}

fn laplace_data(path: &Path, field: ScalarField, ctx: &Context) -> Result<(MetricGraph, LagrangianData)> {
    let (_, g, spec) = load(path, ctx)?;
    let spec = spec.ok_or_else(|| CliError::input(format!("{}: graph has no \"bc\"", path.display())))?;
    let data = spec.self_adjoint_data(&g, field)?;
    Ok((g, data))
}

pub fn run(cmd: GraphCmd, ctx: &Context) -> Result<()> {
    match cmd {
        GraphCmd::Validate { graph } => validate(&graph, ctx),
        GraphCmd::SpectrumFd(args) => spectrum_fd(args, ctx),
        GraphCmd::SpectrumSecular(args) => spectrum_secular(args, ctx),
        GraphCmd::Bcheck(args) => bcheck(args, ctx),
    }
}

fn validate(path: &Path, ctx: &Context) -> Result<()> {
    let (doc, g, spec) = load(path, ctx)?;
    if let Some(spec) = &spec {
        spec.validate(&g)?;
    }
    let report = g.report();
    let bc = doc.bc.as_ref().map(|bc| {
        serde_json::to_value(bc)
            .ok()
            .and_then(|v| v.get("type").and_then(|t| t.as_str()).map(str::to_string))
            .unwrap_or_default()
    });
    let out = ValidateOutput {
        vertices: g.vertices().len(),
        edges: g.edges().len(),
        min_edge_length: report.min_edge_length.is_finite().then_some(report.min_edge_length),
        left_count: report.left_count,
        right_count: report.right_count,
        boundary_count: report.boundary_count,
        compact: report.compact,
        degrees: report.degrees.clone(),
        bc,
    };
    ctx.emit(&to_json(&out))
}

fn spectrum_fd(args: FdArgs, ctx: &Context) -> Result<()> {
    let (g, data) = laplace_data(&args.graph, args.field.into(), ctx)?;
    let spec = match args.h {
        Some(h) => GridSpec::MaxStep(h),
        None => GridSpec::Points(args.points),
    };
    let trunc = TruncationOptions {
        length: args.truncation_length,
        ..TruncationOptions::default()
    };
    let grids = Grids::new(&g, spec, trunc)?;
    let spectrum = assemble_laplacian_eig(&g, &grids, &data, args.count)?;
    if let Some(path) = &args.report {
        write_file(path, &to_json(&spectrum))?;
    }
    let rows = spectrum
        .eigenvalues
        .iter()
        .zip(&spectrum.residuals)
        .enumerate()
        .map(|(i, (v, r))| vec![i.to_string(), csv_float(*v), csv_float(*r)]);
    ctx.emit(&csv(&["index", "value", "residual"], rows))
}

fn spectrum_secular(args: SecularArgs, ctx: &Context) -> Result<()> {
    let (g, data) = laplace_data(&args.graph, args.field.into(), ctx)?;
    let problem = SecularProblem::new(&g, &data)?;
    let opts = ScanOptions::new(args.lower, args.upper).with_points(args.points);
    let found = problem.eigenvalue_scan(&opts)?;
    if let Some(path) = &args.scan {
        let curve = problem.scan_curve(&opts)?;
        let rows = curve.iter().map(|(x, s)| vec![csv_float(*x), csv_float(*s)]);
        write_file(path, &csv(&["lambda", "sigma_min"], rows))?;
    }
    if let Some(path) = &args.report {
        let report = SecularReport {
            eigenvalues: found.clone(),
            complex_probe: problem.complex_probe(&opts.grid(), PROBE_OFFSET),
        };
        write_file(path, &to_json(&report))?;
    }
    let rows = found.iter().enumerate().map(|(i, e)| {
        vec![
            i.to_string(),
            csv_float(e.lambda),
            e.multiplicity.to_string(),
            csv_float(e.relative_sigma_min),
        ]
    });
    ctx.emit(&csv(&["index", "value", "multiplicity", "sigma_min"], rows))
}

fn bcheck(args: BcheckArgs, ctx: &Context) -> Result<()> {
    let (_, g, _) = load(&args.graph, ctx)?;
    if args.ladder.is_empty() {
        return Err(CliError::input("--ladder needs at least one grid size"));
    }
    let op = match args.operator {
        OperatorArg::Laplace => OperatorKind::Laplace,
        OperatorArg::Derivative => OperatorKind::Derivative,
    };
    let table = refinement_study(&g, &args.ladder, op, reference_pair)?;
    let rows = table.iter().map(|r| {
        vec![
            r.points.to_string(),
            csv_float(r.h_max),
            csv_float(r.residual),
            r.order.map(csv_float).unwrap_or_default(),
        ]
    });
    ctx.emit(&csv(&["points", "h_max", "residual", "order"], rows))
}
