//! Report generation behind the `leaguestats` binary.

pub mod calibration;
pub mod report;
pub mod reproduce;
pub mod svg;

use std::fmt;
use std::path::PathBuf;

use leaguestats_core::{Descriptor, Error, KdeConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Rerank,
    Inequality,
    Overlap,
    Correlation,
    Pca,
    Reproduce,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum Input {
    #[default]
    Embedded,
    Dir(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRequest {
    pub command: Command,
    pub season: Option<String>,
    pub descriptor: Option<Descriptor>,
    pub pair: Option<(Descriptor, Descriptor)>,
    pub kde: KdeConfig,
    pub input: Input,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub allow_partial: bool,
}

impl ReportRequest {
    pub fn new(command: Command) -> Self {
        ReportRequest {
            command,
            season: None,
            descriptor: None,
            pair: None,
            kde: KdeConfig::default(),
            input: Input::Embedded,
            format: Format::Csv,
            out: None,
            allow_partial: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad invocation; `flag` is the option at fault.
    Usage { flag: &'static str, message: String },
    Data(Error),
}

impl CliError {
    pub fn usage(flag: &'static str, message: impl Into<String>) -> Self {
        CliError::Usage { flag, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Data(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage { flag, message } => write!(f, "error: {flag}: {message}"),
            CliError::Data(e) => write!(f, "error: {}: {e}", e.name()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.into())
    }
}

pub use report::{load_corpus, run};
