//! Configuration, the registered runs, checkpoints, the time loop with
//! its file outputs, and plot data derived from a finished run.

mod checkpoint;
mod config;
mod registry;
mod report;
mod run;
mod table;

pub use checkpoint::{Checkpoint, FORMAT_VERSION, MAGIC};
pub use config::{desk_resolution, parse_key_values, RunConfig, CONFIG_KEYS};
pub use registry::{registry, RegistryEntry, REGISTRY};
pub use report::{derivative, report, MomentTrend, Plot, ReportSummary, REPORT_DIR};
pub use run::{
    checkpoint_path, norm_column, run, RunSummary, BOUNDS_FILE, CHECKPOINT_DIR, CONFIG_FILE,
    SPECTRA_AVG_COLUMNS, SPECTRA_AVG_FILE, SPECTRA_COLUMNS, SPECTRA_FILE, TIMESERIES_BASE,
    TIMESERIES_FILE,
};
pub use table::Table;
