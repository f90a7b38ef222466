use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use porosity_core::rational::parse_rational;
use porosity_core::Rational;

#[derive(Debug, Parser)]
#[command(name = "porosity-lab", version, about = "Porosity ideals of subsets of the positive reals, in exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verdicts, bounds and ratio tables for one family.
    Analyze(AnalyzeArgs),
    /// Blown-up component chains of a family, or the randomized blow-up law
    /// suite when no family is given.
    Blowup(BlowupArgs),
    /// Split a family into 2N+2 completely strongly porous parts.
    Decompose(DecomposeArgs),
    /// Exhaustive checks of the finite ideal theorems.
    VerifyFoundations(FoundationArgs),
    /// The blocks-of-points example separating the two ideals.
    ReproduceExample(ExampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Family descriptor: inline JSON or a path to a JSON file.
    #[arg(long)]
    pub family: String,
    /// Blow-up factors (repeatable); defaults to 2.
    #[arg(long = "q", value_parser = rational)]
    pub q: Vec<Rational>,
    #[arg(long, default_value_t = 32)]
    pub depth: usize,
    /// Largest window M for the I(CSP) test.
    #[arg(long = "M", default_value_t = 8)]
    pub m_max: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct BlowupArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long = "q", value_parser = rational)]
    pub q: Vec<Rational>,
    #[arg(long, default_value_t = 32)]
    pub depth: usize,
    /// Seed for the randomized law suite.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random chains in the law suite.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long = "q", value_parser = rational)]
    pub q: Rational,
    #[arg(long, default_value_t = 32)]
    pub depth: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct FoundationArgs {
    /// Universe size (1 to 4).
    #[arg(long, default_value_t = 3)]
    pub n: u8,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    #[arg(long, value_parser = rational)]
    pub alpha: Rational,
    #[arg(long = "q", value_parser = rational)]
    pub q: Vec<Rational>,
    #[arg(long = "M", default_value_t = 8)]
    pub m_max: u64,
    #[arg(long, default_value_t = 12)]
    pub depth: usize,
    #[command(flatten)]
    pub output: Output,
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
pub fn family_source(arg: &str) -> std::io::Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(PathBuf::from(arg))
    }
}
