//! Command-line front end for `orbring-core`: run configuration, JSON
//! documents, check suites and seeded sampling.

pub mod cli;
pub mod config;
pub mod document;
pub mod error;
pub mod io;
pub mod multiply;
pub mod sampling;
pub mod suites;

pub use config::{Command, RunConfig};
pub use document::{CheckRecord, CheckReport, Header, RingDocument, Status};
pub use error::AppError;
