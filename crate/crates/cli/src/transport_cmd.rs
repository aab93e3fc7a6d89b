use std::f64::consts::PI;
use std::path::PathBuf;

use bsys::field::re;
use bsys::graph::GraphError;
use bsys::io::{csv, csv_float, GraphDoc};
use bsys::transport::{norm_report, TransportState};
use clap::{Args, Subcommand, ValueEnum};

use crate::error::{CliError, Result};
use crate::{read_json, write_file, Context};

#[derive(Debug, Subcommand)]
pub enum TransportCmd {
    /// Evolves an initial profile to time `t`; prints the norm CSV unless paths are given.
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InitialArg {
    /// `sin(2π(x − a)/ℓ)` on every edge.
    Sine,
    /// A Gaussian bump centred on every edge.
    Bump,
    /// The constant 1.
    Ones,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Graph document whose "bc" is a skew_coupling.
    graph: PathBuf,
    /// Final time; may be negative.
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    /// Grid step; every edge length must be a multiple of it.
    #[arg(long)]
    h: f64,
    #[arg(long, value_enum, default_value_t = InitialArg::Sine)]
    initial: InitialArg,
    /// Trajectory CSV `t,edge,index,re,im`.
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Norm CSV `t,norm,deviation`.
    #[arg(long)]
    norms: Option<PathBuf>,
    /// Record every k-th step in the trajectory (the final state is always recorded).
    #[arg(long, default_value_t = 1)]
    every: usize,
}

pub fn run(cmd: TransportCmd, ctx: &Context) -> Result<()> {
    match cmd {
        TransportCmd::Run(args) => run_transport(args, ctx),
    }
}

fn run_transport(args: RunArgs, ctx: &Context) -> Result<()> {
    if args.every == 0 {
        return Err(CliError::input("--every must be positive"));
    }
    let doc: GraphDoc = read_json(&args.graph)?;
    let g = doc.to_graph()?;
    let spec = doc
        .to_spec(&g)?
        .ok_or_else(|| CliError::input(format!("{}: graph has no \"bc\"", args.graph.display())))?;
    let report = g.report();
    if report.left_count != report.right_count {
        return Err(GraphError::CardinalityMismatch {
            left: report.left_count,
            right: report.right_count,
        }
        .into());
    }
    let l = spec.skew_coupling()?;
    let edges = g.edges().to_vec();
    let initial = args.initial;
    let state = TransportState::new(&g, args.h, l, |e, x| {
        let edge = &edges[e];
        let s = (x - edge.a) / edge.length();
        match initial {
            InitialArg::Sine => re((2.0 * PI * s).sin()),
            InitialArg::Bump => re((-50.0 * (s - 0.5).powi(2)).exp()),
            InitialArg::Ones => re(1.0),
        }
    })?;
    let states = state.trajectory(args.t)?;
    let norms = norm_report(&states);
    let initial_norm = norms.series.first().map_or(0.0, |p| p.1);
    let scale = if initial_norm > 0.0 { initial_norm } else { 1.0 };
    let norm_csv = csv(
        &["t", "norm", "deviation"],
        norms
            .series
            .iter()
            .map(|&(t, n)| vec![csv_float(t), csv_float(n), csv_float((n - initial_norm).abs() / scale)]),
    );
    if let Some(path) = &args.trajectory {
        let last = states.len() - 1;
        let rows = states
            .iter()
            .enumerate()
            .filter(|(k, _)| k % args.every == 0 || *k == last)
            .flat_map(|(_, s)| {
                (0..s.edge_ids().len()).flat_map(move |e| {
                    s.edge_values(e).iter().enumerate().map(move |(j, z)| {
                        vec![csv_float(s.time()), s.edge_ids()[e].clone(), j.to_string(), csv_float(z.re), csv_float(z.im)]
                    })
                })
            });
        write_file(path, &csv(&["t", "edge", "index", "re", "im"], rows))?;
    }
    match &args.norms {
        Some(path) => write_file(path, &norm_csv),
        None if args.trajectory.is_none() => ctx.emit(&norm_csv),
        None => Ok(()),
    }
}
