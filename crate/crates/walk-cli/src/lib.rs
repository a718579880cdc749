//! Implementation of the `walk` binary: flag parsing, run execution, and the
//! CSV/JSON/SVG emitters. Split out as a library so the integration tests can
//! drive configuration parsing and rendering directly.

use std::path::PathBuf;

pub mod config;
pub mod output;
pub mod run;
pub mod svg;

/// Failure modes, each mapped to a distinct process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Help or version output (not an error; exits 0).
    Help(String),
    /// Bad flags or flag combinations (exit 1).
    Usage(String),
    /// Failed reads or writes, tagged with the path (exit 2).
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// A probability-closure invariant failed after computation (exit 3).
    SelfCheck(String),
}
