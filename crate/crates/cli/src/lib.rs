//! Scenario files, analysis reports and verification suites for the
//! prequantum groupoid engine.

pub mod analysis;
pub mod builtin;
pub mod error;
pub mod report;
pub mod sampling;
pub mod scenario_file;
pub mod verify;

pub use analysis::{run_analysis, run_verification};
pub use error::{CliError, Result};
pub use report::{emit, AnalysisReport, CheckResult, Format};
pub use scenario_file::{load_scenario, ScenarioFile};
