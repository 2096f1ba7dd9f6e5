//! Batch runner and verification suites behind the `qmet` binary.

pub mod config;
pub mod run;
pub mod verify;

pub use config::{BoundSpec, Grid, RawConfig, Scenario, ScenarioConfig, Weight};
pub use run::{parse_csv, run, run_with, to_csv, write_csv, ResultRow, RunReport, CSV_HEADER};
pub use verify::{verify, Check, Suite, VerifyOptions};
