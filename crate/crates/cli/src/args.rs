//! Command-line surface.

use std::path::PathBuf;

use cfwb_core::{Phase, PipelineMode, WbStructure};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cfwb",
    version,
    about = "Lossless white balance and compression for Bayer raw mosaics",
    after_help = "Exit codes: 0 success, 1 selftest failure, 2 usage, 3 I/O, 4 format.\n\
                  CFWB_THREADS caps the worker pool; RUST_LOG controls diagnostics."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress a PGM mosaic into a .cfl container.
    Encode(EncodeArgs),
    /// Restore the PGM mosaic from a .cfl container.
    Decode(DecodeArgs),
    /// Apply gray-world lossless white balance to a PGM mosaic.
    Wb(WbArgs),
    /// Undo `wb` using its sidecar file.
    Unwb(UnwbArgs),
    /// Report entropy and spectral statistics of a mosaic.
    Analyze(AnalyzeArgs),
    /// Bitrate table with and without white balance, as CSV.
    Bench(BenchArgs),
    /// Run the built-in exhaustive small-range checks.
    Selftest,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PhaseArg {
    Rggb,
    Grbg,
    Gbrg,
    Bggr,
}

impl From<PhaseArg> for Phase {
    fn from(p: PhaseArg) -> Phase {
        match p {
            PhaseArg::Rggb => Phase::Rggb,
            PhaseArg::Grbg => Phase::Grbg,
            PhaseArg::Gbrg => Phase::Gbrg,
            PhaseArg::Bggr => Phase::Bggr,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PipelineArg {
    Direct,
    Demux,
    Mallat,
    CamraA,
    CamraS,
}

impl From<PipelineArg> for PipelineMode {
    fn from(p: PipelineArg) -> PipelineMode {
        match p {
            PipelineArg::Direct => PipelineMode::Direct,
            PipelineArg::Demux => PipelineMode::Demux,
            PipelineArg::Mallat => PipelineMode::Mallat,
            PipelineArg::CamraA => PipelineMode::CamraA,
            PipelineArg::CamraS => PipelineMode::CamraS,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StructureArg {
    Pyramid,
    Sequential,
}

impl From<StructureArg> for WbStructure {
    fn from(s: StructureArg) -> WbStructure {
        match s {
            StructureArg::Pyramid => WbStructure::Pyramid,
            StructureArg::Sequential => WbStructure::Sequential,
        }
    }
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "mallat")]
    pub pipeline: PipelineArg,
    /// Wavelet levels, reduced to what the image size allows.
    #[arg(long, default_value_t = cfwb_core::DEFAULT_LEVELS, value_parser = clap::value_parser!(u8).range(1..=16))]
    pub levels: u8,
    /// Apply gray-world white balance before coding.
    #[arg(long)]
    pub wb: bool,
    #[arg(long, value_enum, requires = "wb")]
    pub wb_structure: Option<StructureArg>,
    #[arg(long, value_enum, default_value = "rggb")]
    pub phase: PhaseArg,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct WbArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "pyramid")]
    pub wb_structure: StructureArg,
    #[arg(long, value_enum, default_value = "rggb")]
    pub phase: PhaseArg,
}

#[derive(Debug, Args)]
pub struct UnwbArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Sidecar written by `wb`; defaults to INPUT with `.wb` appended.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "rggb")]
    pub phase: PhaseArg,
    /// Radial frequency separating low and high bands, in (0, 0.5].
    #[arg(long, default_value_t = 0.1)]
    pub cutoff: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// PGM mosaics to benchmark.
    #[arg(required_unless_present = "synthetic", conflicts_with = "synthetic")]
    pub inputs: Vec<PathBuf>,
    /// Use generated scenes instead of files.
    #[arg(long)]
    pub synthetic: bool,
    /// First scene seed.
    #[arg(long, requires = "synthetic", default_value_t = 0)]
    pub seed: u64,
    /// Number of scenes, seeded consecutively.
    #[arg(long, requires = "synthetic", default_value_t = 10)]
    pub count: u64,
    /// Illuminant tint r,g,b.
    #[arg(long, requires = "synthetic", value_delimiter = ',', default_values_t = [1.0, 1.0, 1.0])]
    pub tint: Vec<f64>,
    /// Scene side length (power of two).
    #[arg(long, requires = "synthetic", default_value_t = 256)]
    pub size: usize,
    #[arg(long, requires = "synthetic", default_value_t = 12, value_parser = clap::value_parser!(u8).range(8..=16))]
    pub bit_depth: u8,
    #[arg(long, value_enum, default_value = "rggb")]
    pub phase: PhaseArg,
    #[arg(long, default_value_t = cfwb_core::DEFAULT_LEVELS, value_parser = clap::value_parser!(u8).range(1..=16))]
    pub levels: u8,
    #[arg(long, value_enum, default_value = "pyramid")]
    pub wb_structure: StructureArg,
}
