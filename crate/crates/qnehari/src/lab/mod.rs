//! Experiment orchestration: named symbol generators, JSON configuration,
//! the norm-comparison experiments, and CSV/JSON report emission.

mod config;
mod experiments;
mod report;

pub use config::{load_config, LabConfig, McSpec, SymbolSpec};
pub use experiments::{
    bilinear_sup, rkt_probe, selftest, theorem1_report, theorem_a_report, ExperimentKind,
};
pub use report::{LabReport, PlotTable, Quantity};

use crate::Result;

/// Run one experiment against a built symbol.
pub fn run_experiment(kind: ExperimentKind, cfg: &LabConfig) -> Result<LabReport> {
    cfg.validate()?;
    let symbol = cfg.symbol.build()?;
    Ok(match kind {
        ExperimentKind::Theorem1 => theorem1_report(&symbol, cfg),
        ExperimentKind::TheoremA => theorem_a_report(&symbol, cfg),
        ExperimentKind::Rkt => rkt_probe(&symbol, cfg),
        ExperimentKind::Selftest => selftest(cfg),
    })
}
