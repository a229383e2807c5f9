use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toric_core::conic::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use toric_core::reduced::ConicForm;

#[derive(Debug, Parser)]
#[command(name = "toric", version, about = "Energy bounds and optimal configurations of particles on toric grids")]
pub struct Cli {
    /// Worker threads for instance-parallel work.
    #[arg(long, global = true, env = "TORIC_THREADS")]
    pub threads: Option<usize>,

    /// Log more (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bounds for one m or a range of m.
    Bound(BoundArgs),
    /// Bounds for m = 1..=n/2 with certified rows marked.
    Table(TableArgs),
    /// Simulated annealing upper bound.
    Anneal(AnnealCmd),
    /// Optimality certificate for a configuration.
    Certify(CertifyArgs),
    /// Lattice configurations that the conic bound proves optimal.
    Sweep(SweepArgs),
    /// Dimensions of the reduced program.
    Dims(DimsArgs),
    /// Draw a configuration or a lattice.
    Render(RenderArgs),
    /// Write the reduced conic program in the plain-text format.
    Export(ExportArgs),
    /// Solve a conic program read from the plain-text format.
    Solve(SolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Md,
    Plain,
    Svg,
    Ascii,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Eigen,
    Sdp,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// Linear program on the face the relaxation lives on.
    Face,
    /// The block program as built.
    Literal,
}

impl From<Form> for ConicForm {
    fn from(f: Form) -> Self {
        match f {
            Form::Face => ConicForm::Face,
            Form::Literal => ConicForm::Literal,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ShapeArgs {
    #[arg(long)]
    pub n1: usize,
    #[arg(long)]
    pub n2: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Relative stopping tolerance of the interior point method.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Interior point iteration limit.
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value_t = Form::Face)]
    pub form: Form,
    /// Merge mirrored classes on square grids.
    #[arg(long)]
    pub fold_square: bool,
}

#[derive(Debug, Clone, Args)]
pub struct AnnealArgs {
    /// Annealing iterations per restart.
    #[arg(long, default_value_t = 1_000_000)]
    pub iters: u64,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, conflicts_with_all = ["m_from", "m_to"], required_unless_present_all = ["m_from", "m_to"])]
    pub m: Option<usize>,
    #[arg(long, requires = "m_to")]
    pub m_from: Option<usize>,
    #[arg(long, requires = "m_from")]
    pub m_to: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::All)]
    pub method: Method,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub anneal: AnnealArgs,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, value_enum, default_value_t = Method::All)]
    pub method: Method,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub anneal: AnnealArgs,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AnnealCmd {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub anneal: AnnealArgs,
    /// plain, csv or ascii.
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// Where to write the best configuration.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Configuration file; without it the best annealed or lattice
    /// configuration is certified.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub anneal: AnnealArgs,
    /// plain or csv.
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Largest first side.
    #[arg(long)]
    pub n1: usize,
    /// Largest second side.
    #[arg(long)]
    pub n2: usize,
    /// Guard on n1 * n2.
    #[arg(long, default_value_t = 2500)]
    pub max_cells: usize,
    /// Keep uncertified instances as well.
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value_t = Form::Face)]
    pub form: Form,
    /// csv only.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DimsArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// plain or csv.
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    /// Lattice generators as "gx,gy;gx,gy".
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub gens: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// ascii or svg.
    #[arg(long, value_enum, default_value_t = Format::Ascii)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = Form::Literal)]
    pub form: Form,
    #[arg(long)]
    pub fold_square: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Conic program file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// plain or csv.
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
