//! Library half of the `fef` command-line tool: matrix file I/O, report
//! rendering, parameter sweeps and threshold search. The binary in
//! `main.rs` is a thin argument-parsing layer over these functions.

pub mod error;
pub mod matrix_file;
pub mod report;
pub mod sweep;

pub use error::{CliError, ErrorCode};
