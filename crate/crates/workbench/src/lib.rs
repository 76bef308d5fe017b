//! Operational surface of `qpforce`: curve export, parameter sweeps, run
//! manifests and the check suite behind the `qpforce` binary.

pub mod check;
pub mod config;
pub mod error;
pub mod export;
pub mod manifest;
pub mod sweep;

pub use check::{check_suite, CheckHooks, CheckItem, CheckReport, Level};
pub use config::{BMode, Diagnostic, SweepConfig};
pub use error::{WbError, WbResult};
pub use export::{export_curves, write_atomic};
pub use manifest::RunManifest;
pub use sweep::{run_sweep, SweepOutput, SweepRecord};

/// Decimal text with 17 significant digits; parses back to the same `f64`.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/workbench.md")]
mod book {}
