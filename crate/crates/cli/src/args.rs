use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "vgl", version, about = "Vacuum current response of the 1+1D Dirac field under pure gauge transformations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Sample the finite-box commutator kernel K(w) = <0|[J(z), rho(z + w)]|0>.
    Kernel(KernelArgs),
    /// Induced vacuum current of a gauge profile by the closed, spectral and finite-box routes.
    Response(ResponseArgs),
    /// Run the exact Fock-space checks and emit a report.
    Oracle(OracleArgs),
    /// Error of the spectral and finite-box routes as L and P double per level.
    Converge(ConvergeArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LatticeArgs {
    /// Box length.
    #[arg(long = "L", default_value_t = 10.0)]
    pub length: f64,
    /// Symmetric mode cutoff (default 64, or 2 for the oracle).
    #[arg(long = "rcut")]
    pub r_cut: Option<u32>,
    /// Fermion mass.
    #[arg(long = "m", default_value_t = 1.0)]
    pub mass: f64,
    /// Charge.
    #[arg(long = "q", default_value_t = 1.0)]
    pub charge: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KernelArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Smallest separation (default −L/2).
    #[arg(long, allow_negative_numbers = true)]
    pub wmin: Option<f64>,
    /// Largest separation (default L/2).
    #[arg(long, allow_negative_numbers = true)]
    pub wmax: Option<f64>,
    /// Number of separations.
    #[arg(long, default_value_t = 201)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiKind {
    Gaussian,
    Sinusoid,
    Constant,
    Table,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GaugeArgs {
    /// Gauge profile family.
    #[arg(long, value_enum, default_value_t = ChiKind::Gaussian)]
    pub chi: ChiKind,
    /// Amplitude (the value itself for a constant profile).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub amplitude: f64,
    /// Gaussian width.
    #[arg(long, default_value_t = 0.3)]
    pub width: f64,
    /// Gaussian centre.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub center: f64,
    /// Sinusoid box harmonic n, wavenumber 2πn/L.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub harmonic: i64,
    /// Sinusoid wavenumber; overrides --harmonic.
    #[arg(long, allow_negative_numbers = true)]
    pub wavenumber: Option<f64>,
    /// Two-column CSV (z, chi) on a uniform grid, for --chi table.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralKind {
    Closed,
    Quadrature,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ResponseArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub gauge: GaugeArgs,
    /// Smallest output point (default −L/2).
    #[arg(long, allow_negative_numbers = true)]
    pub zmin: Option<f64>,
    /// Largest output point (default L/2).
    #[arg(long, allow_negative_numbers = true)]
    pub zmax: Option<f64>,
    /// Number of output points.
    #[arg(long, default_value_t = 201)]
    pub nz: usize,
    /// Spectral momentum cutoff (default 2π r_cut / L).
    #[arg(long = "P")]
    pub cutoff: Option<f64>,
    /// Evaluation of the cutoff integral in the spectral route.
    #[arg(long, value_enum, default_value_t = IntegralKind::Closed)]
    pub integral: IntegralKind,
    /// Trapezoid nodes for the finite-box route (default: exact for the mode content).
    #[arg(long)]
    pub quad_nodes: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Simpson intervals for the time integral.
    #[arg(long, default_value_t = 128)]
    pub nt: usize,
    /// Switch-on time of the smoothstep envelope.
    #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
    pub t0: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Number of levels; each doubles L and P (so r_cut grows fourfold).
    #[arg(long, default_value_t = 3)]
    pub levels: u32,
    /// Amplitude of the sinusoid sin(2πz/L₀) of the base box.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub amplitude: f64,
    /// Number of output points over the base box.
    #[arg(long, default_value_t = 201)]
    pub nz: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}
