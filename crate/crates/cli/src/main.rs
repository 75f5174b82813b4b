use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use leaguestats::{run, CliError, Command, Format, Input, ReportRequest};
use leaguestats_core::{Descriptor, KdeConfig};

#[derive(Parser)]
#[command(name = "leaguestats", version, about = "Premier League finance re-ranking, inequality, overlap and PCA reports")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Alternative league tables, one rank column per criterion
    Rerank {
        #[command(flatten)]
        common: Common,
        /// Restrict to one criterion
        #[arg(long, value_parser = parse_descriptor)]
        descriptor: Option<Descriptor>,
    },
    /// Gini and Theil indices per season
    Inequality {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_descriptor)]
        descriptor: Option<Descriptor>,
    },
    /// Density non-overlap of points against each criterion, or overlap of one pair
    Overlap {
        #[command(flatten)]
        common: Common,
        /// Two descriptors, e.g. foreign_spend,profit
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(Descriptor, Descriptor)>,
        /// Rescaling applied before the density estimate
        #[arg(long, value_enum, default_value_t = Kde::ZScore)]
        kde: Kde,
    },
    /// Pearson correlation of points with each criterion
    Correlation {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_descriptor)]
        descriptor: Option<Descriptor>,
    },
    /// Covariance principal components per season
    Pca {
        #[command(flatten)]
        common: Common,
    },
    /// Regenerate every artifact into a directory and check it against the published tables
    Reproduce {
        #[command(flatten)]
        input: InputArgs,
        /// Output directory
        #[arg(long, default_value = "reproduce")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Directory of epl_YYYY_YY.csv files instead of the embedded data
    #[arg(long, env = "LEAGUESTATS_DATA")]
    input: Option<PathBuf>,
    /// Accept seasons without profit or expenditure columns
    #[arg(long)]
    allow_partial: bool,
}

#[derive(Args)]
struct Common {
    /// Season label, e.g. 2009/10 (default: all seasons)
    #[arg(long)]
    season: Option<String>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kde {
    ZScore,
    MinMax,
}

fn parse_descriptor(s: &str) -> Result<Descriptor, String> {
    s.parse().map_err(|e: leaguestats_core::descriptor::UnknownDescriptor| e.to_string())
}

fn parse_pair(s: &str) -> Result<(Descriptor, Descriptor), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected A,B, got '{s}'"))?;
    Ok((parse_descriptor(a)?, parse_descriptor(b)?))
}

fn request(cli: Cli) -> ReportRequest {
    let apply_common = |req: &mut ReportRequest, c: Common| {
        req.season = c.season;
        req.format = match c.format {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
            OutFormat::Svg => Format::Svg,
        };
        req.out = c.out;
        req.input = c.input.input.map_or(Input::Embedded, Input::Dir);
        req.allow_partial = c.input.allow_partial;
    };
    match cli.command {
        Cmd::Rerank { common, descriptor } => {
            let mut req = ReportRequest::new(Command::Rerank);
            apply_common(&mut req, common);
            req.descriptor = descriptor;
            req
        }
        Cmd::Inequality { common, descriptor } => {
            let mut req = ReportRequest::new(Command::Inequality);
            apply_common(&mut req, common);
            req.descriptor = descriptor;
            req
        }
        Cmd::Overlap { common, pair, kde } => {
            let mut req = ReportRequest::new(Command::Overlap);
            apply_common(&mut req, common);
            req.pair = pair;
            req.kde = match kde {
                Kde::ZScore => KdeConfig::z_score(),
                Kde::MinMax => KdeConfig::min_max(),
            };
            req
        }
        Cmd::Correlation { common, descriptor } => {
            let mut req = ReportRequest::new(Command::Correlation);
            apply_common(&mut req, common);
            req.descriptor = descriptor;
            req
        }
        Cmd::Pca { common } => {
            let mut req = ReportRequest::new(Command::Pca);
            apply_common(&mut req, common);
            req
        }
        Cmd::Reproduce { input, out } => {
            let mut req = ReportRequest::new(Command::Reproduce);
            req.input = input.input.map_or(Input::Embedded, Input::Dir);
            req.allow_partial = input.allow_partial;
            req.out = Some(out);
            req
        }
    }
}

fn main() -> ExitCode {
    let req = request(Cli::parse());
    let result = run(&req).and_then(|text| {
        match (&req.out, req.command) {
            (Some(path), c) if c != Command::Reproduce => std::fs::write(path, text)?,
            _ => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &CliError) -> u8 {
    e.exit_code() as u8
}
