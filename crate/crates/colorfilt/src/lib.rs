//! File formats, the experiment harness and the `colorfilt` command-line
//! tool built on [`colorfilt_core`].

pub mod cli;
pub mod error;
pub mod harness;
pub mod io;
pub mod report;

pub use error::{Error, Result};
pub use harness::{run_matrix, BenchResult, ExperimentConfig, ImageSource, NoiseId};
pub use report::{emit_csv, emit_json, summarize, Summary};
