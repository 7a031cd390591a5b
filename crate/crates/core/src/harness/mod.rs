//! Experiment configuration and the seeded Monte Carlo engine behind the CLI.

mod config;
mod run;

pub use config::{ExperimentConfig, ModelSpec};
pub use run::{
    output_paths, read_sample_csv, replication_seed, resolve_threads, run_cells, run_montecarlo, run_single,
    simulate_replication, simulate_to_dir, write_sample_csv, MonteCarloCell, MonteCarloReport, MonteCarloRow, Outcome,
    SingleRun, CSV_HEADER, THREADS_ENV,
};
