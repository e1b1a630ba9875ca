//! Library surface of the `mrl` binary: config parsing, CSV ingestion,
//! and the CLI error taxonomy. The binary in `main.rs` is a thin shell
//! over these modules.

pub mod config;
pub mod errors;
pub mod io;
