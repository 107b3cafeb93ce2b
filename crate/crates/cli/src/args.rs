use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ramlab",
    version,
    about = "Ramification data for elementary abelian p-extensions"
)]
pub struct Cli {
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Breaks, different and discriminant of the maximal exponent-p
    /// kummerian extension.
    Breaks(ShapeArgs),
    /// Check a break profile and report on the extension it describes.
    Profile(ProfileArgs),
    /// Artin-Schreier classes over F_q((pi)).
    As(AsArgs),
    /// Sampled norm congruences for p-primary units.
    Norm(NormArgs),
    /// Tables for the cyclotomic, class-field and non-kummerian examples.
    Tables(TablesArgs),
}

#[derive(Debug, clap::Args)]
pub struct ShapeArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub e1: u64,
    #[arg(long)]
    pub f: u32,
}

#[derive(Debug, clap::Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Comma-separated `upper:dim` pairs, e.g. "1:1,3:1".
    #[arg(long)]
    pub breaks: String,
    /// Include an unramified degree-p part.
    #[arg(long)]
    pub unramified: bool,
}

#[derive(Debug, clap::Args)]
#[command(group(ArgGroup::new("mode").args(["reduce", "report", "oracle"])))]
pub struct AsArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub f: u32,
    /// Series JSON file, or `-` for stdin.
    #[arg(long)]
    pub series: PathBuf,
    /// Canonical representative of each class (default).
    #[arg(long)]
    pub reduce: bool,
    /// Ramification of the extension generated by all series.
    #[arg(long)]
    pub report: bool,
    /// Measure the break of the first series inside K[alpha].
    #[arg(long)]
    pub oracle: bool,
    /// Working precision for the oracle (default 2m + 10).
    #[arg(long)]
    pub oracle_precision: Option<i64>,
}

#[derive(Debug, clap::Args)]
pub struct NormArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub m: u32,
    #[arg(long, default_value_t = 25)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    /// p-adic precision N (default m + 4).
    #[arg(long)]
    pub precision: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Cyclotomic,
    Classfield,
    Nonkummerian,
}

#[derive(Debug, clap::Args)]
pub struct TablesArgs {
    #[arg(long, value_enum)]
    pub kind: TableKind,
    #[arg(long)]
    pub p: u64,
    /// Level m (cyclotomic, classfield).
    #[arg(long)]
    pub m: Option<u64>,
    /// Residual degree (classfield, nonkummerian; default 1).
    #[arg(long)]
    pub f: Option<u32>,
    /// Absolute ramification index of the base field (nonkummerian).
    #[arg(long, conflicts_with = "e1")]
    pub e: Option<u64>,
    /// Alias for --e. Without zeta_p there is no e/(p-1), so the value is the absolute index.
    #[arg(long)]
    pub e1: Option<u64>,
}
