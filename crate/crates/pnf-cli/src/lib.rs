//! Library surface of the `pnf` binary: run configuration and the CSV
//! dump formats, exposed so integration tests (and downstream tooling)
//! can parse what `analyze` writes.

pub mod config;
pub mod formats;
