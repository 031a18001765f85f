//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::analyze;
use crate::cloud::{default_projections, project, Axes};
use crate::dtw::{distance_matrix, Euclidean};
use crate::fixtures;
use crate::score::{parse_score, Score};

/// Prefix selecting a bundled fixture instead of a file path.
pub const FIXTURE_PREFIX: &str = "fixture:";

#[derive(Debug, Parser)]
#[command(name = "voicelead", version, about = "Voice-leading complexity analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnalyzeFormat {
    Text,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the transition listing or the full analysis report.
    Analyze {
        /// Score file, or `fixture:<name>`.
        score: String,
        #[arg(long, value_enum, default_value_t = AnalyzeFormat::Text)]
        format: AnalyzeFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export 3-D projections of the complexity cloud.
    Cloud {
        score: String,
        /// Three of up, down, constant, crossings, rests. Without it, the
        /// (up,down,constant) and (up,down,crossings) projections are written.
        #[arg(long, value_parser = parse_axes)]
        axes: Option<Axes>,
        #[arg(long, value_enum, default_value_t = ExportFormat::Csv)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pairwise DTW distance matrix of the complexity series.
    Dtw {
        #[arg(required = true, num_args = 2..)]
        scores: Vec<String>,
        /// Divide each distance by the length of its optimal warping path.
        #[arg(long)]
        normalised: bool,
        #[arg(long, value_enum, default_value_t = ExportFormat::Csv)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List or print the bundled example scores.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixturesAction {
    List,
    Cat { name: String },
}

fn parse_axes(s: &str) -> Result<Axes, String> {
    s.parse().map_err(|e: crate::cloud::CloudError| e.to_string())
}

pub fn load_score(arg: &str) -> Result<Score> {
    if let Some(name) = arg.strip_prefix(FIXTURE_PREFIX) {
        return Ok(fixtures::load(name)?);
    }
    let text =
        std::fs::read_to_string(Path::new(arg)).with_context(|| format!("reading {arg}"))?;
    parse_score(&text).with_context(|| format!("parsing {arg}"))
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, data: &[u8]) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, data).with_context(|| format!("writing {}", path.display()))
        }
        None => stdout.write_all(data).context("writing output"),
    }
}

/// Runs one command, writing data to `stdout` unless `--out` is given.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Analyze { score, format, out } => {
            let report = analyze(&load_score(&score)?)?;
            let data = match format {
                AnalyzeFormat::Text => report.listing(),
                AnalyzeFormat::Records => serde_json::to_string_pretty(&report)? + "\n",
            };
            emit(&out, stdout, data.as_bytes())
        }
        Command::Cloud {
            score,
            axes,
            format,
            out,
        } => {
            let report = analyze(&load_score(&score)?)?;
            let axes: Vec<Axes> = axes.map_or_else(|| default_projections().to_vec(), |a| vec![a]);
            let projections: Vec<_> = axes.iter().map(|a| project(&report.cloud, *a)).collect();
            let data = match format {
                ExportFormat::Csv => {
                    let mut buf = Vec::new();
                    for (i, p) in projections.iter().enumerate() {
                        if i > 0 {
                            buf.push(b'\n');
                        }
                        p.write_csv(&mut buf)?;
                    }
                    buf
                }
                ExportFormat::Json if projections.len() == 1 => {
                    serde_json::to_vec_pretty(&projections[0])?
                }
                ExportFormat::Json => serde_json::to_vec_pretty(&projections)?,
            };
            emit(&out, stdout, &data)
        }
        Command::Dtw {
            scores,
            normalised,
            format,
            out,
        } => {
            let corpus = scores
                .iter()
                .map(|s| Ok(analyze(&load_score(s)?)?.series))
                .collect::<Result<Vec<_>>>()?;
            let matrix = distance_matrix(&corpus, &Euclidean)?;
            let data = match format {
                ExportFormat::Csv => {
                    let mut buf = Vec::new();
                    matrix.write_csv(&mut buf, normalised)?;
                    buf
                }
                ExportFormat::Json => serde_json::to_vec_pretty(&matrix)?,
            };
            emit(&out, stdout, &data)
        }
        Command::Fixtures { action } => match action {
            FixturesAction::List => {
                let mut data = fixtures::names()?.join("\n");
                data.push('\n');
                emit(&None, stdout, data.as_bytes())
            }
            FixturesAction::Cat { name } => emit(&None, stdout, fixtures::source(&name)?.as_bytes()),
        },
    }
}
