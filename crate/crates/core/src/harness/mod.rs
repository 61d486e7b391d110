//! Config-driven sweeps over the average SNR, the built-in figure presets,
//! and CSV/JSON output.
//!
//! Decibel quantities in configs carry a `_db` suffix and are power
//! decibels, `γ = 10^(dB/10)`. Both branches share the swept average SNR
//! (`γ̄_FSO = γ̄_RF`, η = 1).

mod config;
mod crossing;
mod output;
mod sweep;

use thiserror::Error;

pub use config::{
    CurveSpec, MonteCarloSettings, Overrides, Preset, Quantity, RunConfig, SweepSpec, SweepVariable,
};
pub use crossing::{crossing, crossings, Crossing};
pub use output::{csv_rows, read_csv, read_json, write_csv, write_json, write_outputs, CsvRow, CSV_HEADER};
pub use sweep::{run_sweep, supports, Row, RunRecord};

#[derive(Debug, Error)]
pub enum HarnessError {
    /// The config is unreadable or violates the schema.
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Fatal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    pub(crate) fn config(field: &str, msg: &str) -> Self {
        HarnessError::Config(format!("{field}: {msg}"))
    }

    /// Process exit status: 2 for config errors, 3 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Config(_) => 2,
            _ => 3,
        }
    }
}
