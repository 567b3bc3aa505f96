use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use selfaffine_cli::commands::{self, PairArgs, SweepArgs};
use selfaffine_cli::config::Overrides;
use selfaffine_cli::{CliError, Record, RunConfig};
use selfaffine_core::render::RenderFormat;

/// Connectedness and tile tests for planar self-affine sets.
///
/// The matrix is [[p,0],[a,q]] and the digits are {0..m-1} x {0..n-1}.
/// Settings come from flags, then the file named by SELFAFFINE_CONFIG, then defaults.
#[derive(Parser)]
#[command(name = "selfaffine", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Enumeration depth (default 12)
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Points per enumeration level (default 1000000)
    #[arg(long, global = true)]
    point_budget: Option<u64>,
    /// Raster side in pixels (default 512)
    #[arg(long, global = true)]
    raster_size: Option<u32>,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory for files written without an explicit path
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
}

#[derive(Args)]
struct Pair {
    #[arg(allow_hyphen_values = true)]
    p: i64,
    #[arg(allow_hyphen_values = true)]
    q: i64,
    /// Lower-left entry: integer, fraction or terminating decimal
    #[arg(allow_hyphen_values = true)]
    a: String,
    m: u32,
    n: u32,
}

impl From<&Pair> for PairArgs {
    fn from(p: &Pair) -> Self {
        PairArgs {
            p: p.p,
            q: p.q,
            a: p.a.clone(),
            m: p.m,
            n: p.n,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form connectedness verdict
    Decide(Pair),
    /// Formula, sequence oracle and geometric graph side by side
    Verify(Pair),
    /// Extremes of the sequence-space functionals with oracle enclosures
    Extremes {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
        m: u32,
    },
    /// Piece adjacency predicates and the chain through all pieces
    Adjacency {
        #[command(flatten)]
        pair: Pair,
        /// Also label the geometric graph edges at this depth
        #[arg(long)]
        graph_depth: Option<u32>,
    },
    /// Tile classification with cardinality and discreteness probes
    Tile {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
    },
    /// Verdicts over an evenly spaced grid of a, written as CSV
    Sweep {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
        m: u32,
        n: u32,
        #[arg(allow_hyphen_values = true)]
        a_min: String,
        #[arg(allow_hyphen_values = true)]
        a_max: String,
        steps: u32,
        /// Add the sequence oracle's verdict
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a one-row-per-verdict phase strip (P5)
        #[arg(long)]
        phase: Option<PathBuf>,
    },
    /// Draw a point cloud of the attractor
    Render {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value = "pgm")]
        format: RenderFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Record, CliError> {
    let g = cli.global;
    let cfg = RunConfig::from_env(&Overrides {
        depth: g.depth,
        point_budget: g.point_budget,
        raster_size: g.raster_size,
        jobs: g.jobs,
        output_dir: g.output_dir,
    })?;
    match &cli.command {
        Command::Decide(pair) => commands::decide(&pair.into()),
        Command::Verify(pair) => commands::verify(&pair.into(), &cfg),
        Command::Extremes { p, q, m } => commands::extremes(*p, *q, *m, &cfg),
        Command::Adjacency { pair, graph_depth } => {
            commands::adjacency(&pair.into(), *graph_depth, &cfg)
        }
        Command::Tile { pair, k_max } => commands::tile(&pair.into(), *k_max, &cfg),
        Command::Sweep {
            p,
            q,
            m,
            n,
            a_min,
            a_max,
            steps,
            oracle,
            out,
            phase,
        } => {
            let args = SweepArgs {
                p: *p,
                q: *q,
                m: *m,
                n: *n,
                a_min: a_min.clone(),
                a_max: a_max.clone(),
                steps: *steps,
                oracle: *oracle,
                out: out.clone(),
                phase: phase.clone(),
            };
            commands::sweep(&args, &cfg, &mut std::io::stderr())
        }
        Command::Render { pair, format, out } => {
            commands::render_cmd(&pair.into(), *format, out.as_deref(), &cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(record) => {
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().write_all(record.to_string().as_bytes());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
