//! Command-line flags.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use nanotube::spectral::DEFAULT_GRID;

#[derive(Debug, Parser)]
#[command(name = "nanotube", version, about = "Band spectra of zigzag and armchair nanotubes in axial fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Channel bands, flat bands and their union.
    Bands(BandsArgs),
    /// Band edges along a range of field amplitudes, as CSV.
    Sweep(SweepArgs),
    /// Predicted against measured quantity for one asymptotic regime.
    Asym(AsymArgs),
    /// Full finite Hamiltonian against the channel decomposition.
    Verify(VerifyArgs),
    /// Atom coordinates of the armchair tube.
    Geometry(GeometryArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lattice {
    Zigzag,
    Armchair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    #[value(name = "ck_to_zero")]
    CkToZero,
    #[value(name = "small_t")]
    SmallT,
    #[value(name = "large_t_zigzag")]
    LargeTZigzag,
    #[value(name = "large_t_armchair")]
    LargeTArmchair,
    #[value(name = "small_v_armchair")]
    SmallVArmchair,
    #[value(name = "low_energy_window")]
    LowEnergyWindow,
}

/// Where the potential comes from: a JSON file or a seeded sample.
#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("potential_source").required(true).args(["potential", "sample_open_gap"])))]
pub struct PotentialArgs {
    /// JSON array with one period of the potential.
    #[arg(long, value_name = "FILE")]
    pub potential: Option<PathBuf>,
    /// Draw a zero-mean potential of period P_STAR from the open-gap class.
    #[arg(long, value_name = "P_STAR")]
    pub sample_open_gap: Option<usize>,
    /// Seed for sampled potentials.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Lattice, size, potential and coupling.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub lattice: Lattice,
    /// Number of hexagons around the circumference.
    #[arg(long = "N", value_name = "N")]
    pub n_hex: usize,
    #[command(flatten)]
    pub potential: PotentialArgs,
    /// Coupling constant multiplying the potential.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub t: f64,
}

/// Exactly one of: field amplitude, zigzag phase, armchair phases.
#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("field").required(true).args(["amplitude", "phase", "phases"])))]
pub struct FieldArgs {
    /// Field amplitude B.
    #[arg(long = "B", value_name = "B", allow_hyphen_values = true)]
    pub amplitude: Option<f64>,
    /// Zigzag Peierls phase b.
    #[arg(long = "b", value_name = "b", allow_hyphen_values = true)]
    pub phase: Option<f64>,
    /// Armchair phases b1,b2,b3.
    #[arg(long, value_delimiter = ',', num_args = 3, allow_hyphen_values = true)]
    pub phases: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub field: FieldArgs,
    /// τ-grid size of the armchair sweep, a power of two >= 16.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// First field amplitude.
    #[arg(long = "B-from", allow_hyphen_values = true)]
    pub b_from: f64,
    /// Last field amplitude.
    #[arg(long = "B-to", allow_hyphen_values = true)]
    pub b_to: f64,
    /// Number of equally spaced amplitudes, endpoints included.
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AsymArgs {
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    #[command(flatten)]
    pub potential: PotentialArgs,
    /// Coupling constant; the regime default applies when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Channel coefficient c_k.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Gap or band index n.
    #[arg(long)]
    pub n: Option<usize>,
    /// Flat-level index s.
    #[arg(long)]
    pub s: Option<usize>,
    /// Number of hexagons.
    #[arg(long = "N", value_name = "N")]
    pub n_hex: Option<usize>,
    /// Channel index k.
    #[arg(long)]
    pub k: Option<usize>,
    /// Potential index j.
    #[arg(long)]
    pub j: Option<usize>,
    /// Zigzag phase b (low-energy windows).
    #[arg(long = "b", value_name = "b", allow_hyphen_values = true)]
    pub phase: Option<f64>,
    /// Armchair phases b1,b2,b3.
    #[arg(long, value_delimiter = ',', num_args = 3, allow_hyphen_values = true)]
    pub phases: Option<Vec<f64>>,
    /// Relative tolerance; the regime default applies when absent.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Axial cells, a multiple of the period p; default 3p.
    #[arg(long = "L", value_name = "L")]
    pub cells: Option<usize>,
    #[arg(long, default_value_t = nanotube::oracle::ORACLE_TOL)]
    pub tol: f64,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    #[arg(long = "N", value_name = "N")]
    pub n_hex: usize,
    /// Field amplitude B.
    #[arg(long = "B", value_name = "B", default_value_t = 0.0, allow_hyphen_values = true)]
    pub amplitude: f64,
    /// Number of rings to emit.
    #[arg(long, default_value_t = 2)]
    pub rings: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}
