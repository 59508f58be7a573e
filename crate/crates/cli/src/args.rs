use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maxwell_eigen::assembly::{AssemblyOptions, CurlMode, QuadratureOrder};
use maxwell_eigen::bench::{DEFAULT_FDOF_CAP, DEFAULT_MAGNITUDE, DEFAULT_SEED, DEFAULT_WINDOW};
use maxwell_eigen::eigensolver::{Method, SolveOptions};
use maxwell_eigen::mesh::{Domain, ElementKind, Inclusion, NodalBc, Resolution};
use serde::Serialize;

/// Finite-element eigenanalysis of 2D electromagnetic cavities with nodal and edge elements.
#[derive(Debug, Parser)]
#[command(name = "maxwell-eigen", version)]
pub struct Cli {
    /// Worker threads for benchmark matrices and sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mesh generation and manipulation.
    #[command(subcommand)]
    Mesh(MeshCommand),
    /// Solve one cavity problem and match it against the reference values of its domain.
    Solve(SolveArgs),
    /// Run the benchmark matrix of a case: ladder runs, minimum-FDOF sweeps, comparison tables.
    Bench(BenchArgs),
    /// Refine one element kind until the tracked errors fall below a threshold.
    Sweep(SweepArgs),
    /// Compare a normal mesh with a randomly distorted copy.
    DistortStudy(DistortArgs),
}

#[derive(Debug, Subcommand)]
pub enum MeshCommand {
    /// Generate a structured mesh and write it as JSON.
    Gen(MeshGenArgs),
    /// Displace the interior vertices of a JSON mesh.
    Distort(MeshDistortArgs),
}

pub fn parse_kind(s: &str) -> Result<ElementKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

pub fn parse_domain(s: &str) -> Result<Domain, String> {
    s.parse().map_err(|e| format!("{e}"))
}

pub fn parse_inclusion(s: &str) -> Result<Inclusion, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeshSelect {
    /// Domain: square, circle, l_shape, cracked_circle, curved_l, inhomogeneous_l.
    #[arg(long, value_parser = parse_domain)]
    pub domain: Domain,
    /// Element kind: q4, q9, t6, eq4, eq12, et8 (t3, et3 for triangle meshes).
    #[arg(long, value_parser = parse_kind)]
    pub kind: ElementKind,
    /// Primary cell count (cells per side, per half side, per unit radius or rings).
    #[arg(long)]
    pub n: usize,
    /// Secondary cell count (square columns, curved-L angular cells, circle sectors).
    #[arg(long)]
    pub m: Option<usize>,
    /// Dielectric region of the inhomogeneous L: arms, corner, arm_x, arm_y.
    #[arg(long, value_parser = parse_inclusion, default_value = "arms")]
    pub inclusion: Inclusion,
}

impl MeshSelect {
    pub fn resolution(&self) -> Resolution {
        Resolution { n: self.n, m: self.m }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeshGenArgs {
    #[command(flatten)]
    pub select: MeshSelect,
    /// Output file (standard output when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeshDistortArgs {
    /// JSON mesh to distort.
    #[arg(long, visible_alias = "in")]
    pub input: PathBuf,
    /// Largest displacement as a fraction of the shortest adjacent side (at most 0.3).
    #[arg(long, default_value_t = DEFAULT_MAGNITUDE)]
    pub magnitude: f64,
    /// Random seed.
    #[arg(long, env = "MAXWELL_EIGEN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output file (standard output when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BcArg {
    Tangential,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Auto,
    Qz,
    ShiftedCholesky,
    MCholesky,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurlArg {
    Analytic,
    Fd,
}

/// Numerical settings shared by every command that solves.
#[derive(Debug, Clone, Args, Serialize)]
pub struct NumericArgs {
    /// Wall condition of the nodal potential formulation.
    #[arg(long, value_enum, default_value_t = BcArg::Tangential)]
    pub nodal_bc: BcArg,
    /// Relative threshold below which an eigenvalue counts as zero.
    #[arg(long, default_value_t = 1e-8)]
    pub zero_rel_tol: f64,
    /// Relative threshold below which an eigenvalue counts as infinite.
    #[arg(long, default_value_t = 1e-12)]
    pub inf_rel_tol: f64,
    /// Dense eigensolver.
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Largest dense system accepted.
    #[arg(long, default_value_t = 5000)]
    pub n_dense: usize,
    /// Matching window in percent.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: f64,
    /// Edge-element curl evaluation.
    #[arg(long, value_enum, default_value_t = CurlArg::Analytic)]
    pub curl: CurlArg,
    /// Use about twice the default quadrature degree.
    #[arg(long)]
    pub refined_quadrature: bool,
}

impl NumericArgs {
    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            zero_rel_tol: self.zero_rel_tol,
            inf_rel_tol: self.inf_rel_tol,
            method: match self.method {
                MethodArg::Auto => Method::Auto,
                MethodArg::Qz => Method::Qz,
                MethodArg::ShiftedCholesky => Method::ShiftedCholesky,
                MethodArg::MCholesky => Method::MCholesky,
            },
            n_dense: self.n_dense,
            ..SolveOptions::default()
        }
    }

    pub fn assembly_options(&self) -> AssemblyOptions {
        AssemblyOptions {
            curl: match self.curl {
                CurlArg::Analytic => CurlMode::Analytic,
                CurlArg::Fd => CurlMode::FiniteDifference,
            },
            quadrature: if self.refined_quadrature {
                QuadratureOrder::Refined
            } else {
                QuadratureOrder::Default
            },
            ..AssemblyOptions::default()
        }
    }

    pub fn nodal_bc(&self) -> NodalBc {
        match self.nodal_bc {
            BcArg::Tangential => NodalBc::Tangential,
            BcArg::Full => NodalBc::Full,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    pub select: MeshSelect,
    /// Solve on this JSON mesh instead of generating one (domain still selects the
    /// materials and reference values).
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// Number of nonzero eigenvalues printed.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Distort the mesh by this magnitude before solving.
    #[arg(long)]
    pub distort: Option<f64>,
    /// Seed of the distortion.
    #[arg(long, env = "MAXWELL_EIGEN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the reduced K and M as Matrix Market files into this directory.
    #[arg(long)]
    pub dump_matrices: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BenchArgs {
    /// Registered case, or `all`.
    #[arg(long)]
    pub case: String,
    /// Element kinds (comma separated; default: every kind of the case).
    #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
    pub kinds: Vec<ElementKind>,
    /// Ladder rungs run for the aggregate CSV.
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// Error threshold (percent) of the minimum-FDOF sweeps.
    #[arg(long, default_value_t = 5.0)]
    pub threshold: f64,
    /// Number of tracked reference slots in the sweeps.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// First tracked slot, 1-based (default: 2 on non-convex domains, else 1).
    #[arg(long)]
    pub start: Option<usize>,
    /// FDOF cap of the sweeps.
    #[arg(long, default_value_t = DEFAULT_FDOF_CAP)]
    pub fdof_cap: usize,
    /// Skip the minimum-FDOF sweeps.
    #[arg(long)]
    pub no_sweep: bool,
    /// Only write the comparison tables of the published meshes (and the distortion
    /// table where the case defines one).
    #[arg(long)]
    pub tables: bool,
    /// Distortion magnitude of the distortion table.
    #[arg(long, default_value_t = DEFAULT_MAGNITUDE)]
    pub magnitude: f64,
    /// Seed of the distortion table.
    #[arg(long, env = "MAXWELL_EIGEN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Output directory.
    #[arg(long, default_value = "bench_out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub case: String,
    #[arg(long, value_parser = parse_kind)]
    pub kind: ElementKind,
    /// Error threshold in percent.
    #[arg(long, default_value_t = 5.0)]
    pub threshold: f64,
    /// Number of tracked reference slots.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// First tracked slot, 1-based.
    #[arg(long, default_value_t = 1)]
    pub start: usize,
    #[arg(long, default_value_t = DEFAULT_FDOF_CAP)]
    pub fdof_cap: usize,
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Write the JSON result here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistortArgs {
    #[arg(long, default_value = "curved_l")]
    pub case: String,
    #[arg(long, value_parser = parse_kind)]
    pub kind: ElementKind,
    /// Primary cell count (default: the case's distortion mesh).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAGNITUDE)]
    pub magnitude: f64,
    #[arg(long, env = "MAXWELL_EIGEN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Write the JSON result here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
