//! Input parsing, report assembly and the seeded corpus runner behind the
//! `ramify` binary.

mod corpus;
mod parse;
mod report;

use thiserror::Error;

pub use corpus::{
    corpus_run, random_laurent, random_staircase, CheckTally, CorpusMode, CorpusParams, CorpusSummary, Counterexample,
};
pub use parse::{parse_poly, ParseError, ParseErrorKind};
pub use report::{random_pole_witness, run_report, InputSpec, Perturbation, Report, SwanValues, Verdicts};

/// Process exit codes of the binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const OPERATIONAL: i32 = 1;
    /// A verdict failed: a counterexample to an identity or bound.
    pub const VERDICT: i32 = 2;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Stage(&'static str, String),
    #[error("{0}")]
    Usage(String),
}
