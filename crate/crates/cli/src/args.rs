//! Command-line surface.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "desprox",
    version,
    about = "Descriptive proximity, Hausdorff topology, descriptive dynamics, and waveform energy analytics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Pairwise descriptive and Hausdorff distance matrices over described sets
    Distances(DistancesArgs),
    /// Metric balls over a collection and open-set-algebra verification
    Topology(TopologyArgs),
    /// Orbits, periodic sets, and bounded chaos witness searches
    Dynamics(DynamicsArgs),
    /// Envelope/lobe segmentation, energy dissipation, and stability reports
    Energy(EnergyArgs),
    /// Seeded randomized self-checks of the numerical core
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormArg {
    Euclidean,
    Max,
    L1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeModeArg {
    Analytic,
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegrandArg {
    Envelope,
    Squared,
}

#[derive(clap::Args, Serialize)]
pub struct DistancesArgs {
    /// Described-sets JSON document (one object or an array)
    #[arg(long)]
    pub input: PathBuf,
    /// Optional feature chain JSON: an array of probe-name arrays
    #[arg(long)]
    pub chain: Option<PathBuf>,
    /// Description-equality tolerance; defaults per data (0 for
    /// integer-valued probes, 1e-12 otherwise)
    #[arg(long)]
    pub tau_eq: Option<f64>,
    /// Convergence tolerance for the chain verdict
    #[arg(long, default_value_t = 1e-9)]
    pub tau_conv: f64,
    /// Norm for the pairwise descriptive distance
    #[arg(long, value_enum, default_value_t = NormArg::Euclidean)]
    pub norm: NormArg,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
    /// Directory for report files and the run manifest
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(clap::Args, Serialize)]
pub struct TopologyArgs {
    /// Described-sets JSON document
    #[arg(long)]
    pub input: PathBuf,
    /// Ball radius (a ball is built around every member)
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub tau_eq: Option<f64>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(clap::Args, Serialize)]
pub struct DynamicsArgs {
    /// System definition JSON
    #[arg(long)]
    pub input: PathBuf,
    /// Largest return count scanned for periodicity
    #[arg(long, default_value_t = 8)]
    pub m_max: usize,
    /// Largest iterate scanned by witness searches
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    /// Sensitivity threshold
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// Density radius; defaults to twice the cell width on grids
    #[arg(long)]
    pub radius: Option<f64>,
    /// Seed state for an orbit report
    #[arg(long)]
    pub orbit_from: Option<f64>,
    /// Orbit length (iterations past the seed)
    #[arg(long, default_value_t = 16)]
    pub orbit_len: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(clap::Args, Serialize)]
pub struct EnergyArgs {
    /// Frame manifest JSON: {"frames":[{"id":"19","csv":"frame19.csv"}]}
    #[arg(
        long,
        conflicts_with = "lobe_table",
        required_unless_present = "lobe_table"
    )]
    pub frames: Option<PathBuf>,
    /// Published lobe-area table CSV (header frame,lobe,pos_area,neg_area);
    /// bypasses segmentation
    #[arg(long)]
    pub lobe_table: Option<PathBuf>,
    /// Relaxed-proximity threshold
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = EnvelopeModeArg::Analytic)]
    pub envelope_mode: EnvelopeModeArg,
    #[arg(long, value_enum, default_value_t = IntegrandArg::Envelope)]
    pub integrand: IntegrandArg,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
    /// Directory for per-frame plot CSV and SVG files
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(clap::Args, Serialize)]
pub struct SelftestArgs {
    /// Seed for the randomized check corpora
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
