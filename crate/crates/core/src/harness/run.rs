use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::estimators::{IsotropyTest, TestResult};
use crate::field::{sample_locations, simulate_field, CovarianceModel, SpatialSample};
use crate::rng::Seed;

pub const CSV_HEADER: &str = "r,n,reps,rejections,rate,rate_se,mean_statistic,mean_m_hat,degenerate,wall_seconds";

/// Environment variable that overrides the configured thread count.
pub const THREADS_ENV: &str = "ANISO_THREADS";

/// Seed of replication `rep`: locations come from `(seed, rep)`, field values
/// from a derived key on the same stream.
pub fn replication_seed(seed: u64, rep: usize) -> Seed {
    Seed::new(seed, rep as u64)
}

/// Simulates the sample of one replication.
pub fn simulate_replication(model: &CovarianceModel, n: usize, lambda: f64, seed: Seed) -> Result<SpatialSample> {
    let locations = sample_locations(n, lambda, seed)?;
    Ok(simulate_field(model, lambda, locations, seed.derive(1))?.sample)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Outcome {
    Decided(TestResult),
    /// Variance estimate clamped at zero: counted as a non-rejection.
    Degenerate {
        m_hat: f64,
        tau_unclamped: f64,
    },
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleRun {
    pub seed: Seed,
    pub outcome: Outcome,
    pub wall_seconds: f64,
}

/// One replication: fresh locations and field from `seed`, then the test.
pub fn run_single(model: &CovarianceModel, n: usize, test: &IsotropyTest, seed: Seed) -> SingleRun {
    let start = Instant::now();
    let outcome = match simulate_replication(model, n, test.config().lambda, seed).and_then(|s| test.statistics(&s)) {
        Err(e) => Outcome::Failed(e.to_string()),
        Ok(stats) => match test.decide(&stats) {
            Ok(r) => Outcome::Decided(r),
            Err(Error::DegenerateVariance { unclamped }) => Outcome::Degenerate {
                m_hat: stats.m_hat(),
                tau_unclamped: unclamped,
            },
            Err(e) => Outcome::Failed(e.to_string()),
        },
    };
    SingleRun {
        seed,
        outcome,
        wall_seconds: start.elapsed().as_secs_f64(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloRow {
    pub r: f64,
    pub n: usize,
    pub reps: usize,
    pub rejections: usize,
    pub rate: f64,
    pub rate_se: f64,
    /// Mean over decided replications.
    pub mean_statistic: f64,
    /// Mean over decided and degenerate replications.
    pub mean_m_hat: f64,
    pub degenerate: usize,
    pub failed: usize,
    pub wall_seconds: f64,
}

impl MonteCarloRow {
    /// Ordered fold over the replications of one cell.
    pub fn aggregate(r: f64, n: usize, runs: &[SingleRun], wall_seconds: f64) -> Self {
        let reps = runs.len();
        let (mut rejections, mut degenerate, mut failed) = (0, 0, 0);
        let (mut stats, mut m_hats) = (Vec::new(), Vec::new());
        for run in runs {
            match &run.outcome {
                Outcome::Decided(t) => {
                    rejections += t.reject as usize;
                    stats.push(t.statistic);
                    m_hats.push(t.m_hat);
                }
                Outcome::Degenerate { m_hat, .. } => {
                    degenerate += 1;
                    m_hats.push(*m_hat);
                }
                Outcome::Failed(_) => failed += 1,
            }
        }
        let mean = |xs: &[f64]| {
            if xs.is_empty() {
                f64::NAN
            } else {
                xs.iter().sum::<f64>() / xs.len() as f64
            }
        };
        let rate = rejections as f64 / reps as f64;
        MonteCarloRow {
            r,
            n,
            reps,
            rejections,
            rate,
            rate_se: (rate * (1.0 - rate) / reps as f64).sqrt(),
            mean_statistic: mean(&stats),
            mean_m_hat: mean(&m_hats),
            degenerate,
            failed,
            wall_seconds,
        }
    }

    pub fn csv_line(&self, with_wall_time: bool) -> String {
        let wall = if with_wall_time { self.wall_seconds } else { 0.0 };
        format!(
            "{},{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}",
            fmt_r(self.r),
            self.n,
            self.reps,
            self.rejections,
            self.rate,
            self.rate_se,
            self.mean_statistic,
            self.mean_m_hat,
            self.degenerate,
            wall
        )
    }
}

fn fmt_r(r: f64) -> String {
    format!("{r:?}")
}

/// A finished cell: its CSV row plus every replication's outcome.
#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloCell {
    pub row: MonteCarloRow,
    pub runs: Vec<SingleRun>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloReport {
    pub config: ExperimentConfig,
    pub threads: usize,
    pub cells: Vec<MonteCarloCell>,
}

impl MonteCarloReport {
    pub fn rows(&self) -> Vec<&MonteCarloRow> {
        self.cells.iter().map(|c| &c.row).collect()
    }

    pub fn csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for c in &self.cells {
            s.push_str(&c.row.csv_line(self.config.csv_wall_time));
            s.push('\n');
        }
        s
    }
}

/// Thread count: `ANISO_THREADS` if set, else the config, else rayon's default.
pub fn resolve_threads(config: &ExperimentConfig) -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(t),
            _ => Err(Error::Config(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(config.threads.unwrap_or_else(rayon::current_num_threads)),
    }
}

/// Validates the config, resolves the thread count and builds the test, so
/// nothing is simulated or written for a config that cannot run.
fn prepare(config: &ExperimentConfig) -> Result<(usize, IsotropyTest)> {
    config.validate()?;
    let threads = resolve_threads(config)?;
    Ok((threads, IsotropyTest::new(config.test)?))
}

/// Runs every `(r, n)` cell in memory without writing files.
pub fn run_cells(
    config: &ExperimentConfig,
    on_cell: impl FnMut(&MonteCarloCell) -> Result<()>,
) -> Result<MonteCarloReport> {
    let (threads, test) = prepare(config)?;
    run_prepared(config, threads, &test, on_cell)
}

fn run_prepared(
    config: &ExperimentConfig,
    threads: usize,
    test: &IsotropyTest,
    mut on_cell: impl FnMut(&MonteCarloCell) -> Result<()>,
) -> Result<MonteCarloReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
    let mut cells = Vec::new();
    for (r, model) in config.model.models() {
        for &n in &config.n_list {
            let start = Instant::now();
            let runs: Vec<SingleRun> = pool.install(|| {
                (0..config.reps)
                    .into_par_iter()
                    .map(|rep| run_single(&model, n, test, replication_seed(config.seed, rep)))
                    .collect()
            });
            let row = MonteCarloRow::aggregate(r, n, &runs, start.elapsed().as_secs_f64());
            let cell = MonteCarloCell { row, runs };
            on_cell(&cell)?;
            cells.push(cell);
        }
    }
    Ok(MonteCarloReport {
        config: config.clone(),
        threads,
        cells,
    })
}

/// Output files of a Monte Carlo run inside `out_dir`.
pub fn output_paths(out_dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    (
        out_dir.join("montecarlo.csv"),
        out_dir.join("montecarlo.json"),
        out_dir.join("montecarlo.csv.partial"),
    )
}

/// Runs the experiment and writes `montecarlo.csv` and `montecarlo.json` into `out_dir`.
///
/// Rows are appended to `montecarlo.csv.partial` as cells finish; that file is
/// removed after the final outputs are written and survives any I/O failure.
pub fn run_montecarlo(config: &ExperimentConfig, out_dir: &Path) -> Result<MonteCarloReport> {
    let (threads, test) = prepare(config)?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let (csv_path, json_path, partial_path) = output_paths(out_dir);
    // opening the partial file first checks the directory is writable before any work
    let mut partial = File::create(&partial_path).map_err(|e| Error::io(&partial_path, e))?;
    writeln!(partial, "{CSV_HEADER}").map_err(|e| Error::io(&partial_path, e))?;
    let with_wall = config.csv_wall_time;
    let report = run_prepared(config, threads, &test, |cell| {
        let mut f = OpenOptions::new()
            .append(true)
            .open(&partial_path)
            .map_err(|e| Error::io(&partial_path, e))?;
        writeln!(f, "{}", cell.row.csv_line(with_wall)).map_err(|e| Error::io(&partial_path, e))
    })?;
    fs::write(&csv_path, report.csv()).map_err(|e| Error::io(&csv_path, e))?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::io(&json_path, e.into()))?;
    fs::write(&json_path, json).map_err(|e| Error::io(&json_path, e))?;
    fs::remove_file(&partial_path).map_err(|e| Error::io(&partial_path, e))?;
    Ok(report)
}

/// Writes a sample as CSV with header `x,y,z`; values print in shortest round-trip form.
pub fn write_sample_csv(sample: &SpatialSample, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(path, e.into()))?;
    let io = |e: csv::Error| Error::io(path, e.into());
    w.write_record(["x", "y", "z"]).map_err(io)?;
    for (s, z) in sample.locations().iter().zip(sample.values()) {
        w.write_record([s[0].to_string(), s[1].to_string(), z.to_string()])
            .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads an `x,y,z` CSV (header required) into a sample on `[-λ/2, λ/2]²`.
pub fn read_sample_csv(path: &Path, lambda: f64) -> Result<SpatialSample> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::io(path, e.into()))?;
    let headers = rdr.headers().map_err(|e| Error::io(path, e.into()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::invalid(format!("{}: missing column {name:?}", path.display())))
    };
    let (ix, iy, iz) = (col("x")?, col("y")?, col("z")?);
    let (mut locs, mut vals) = (Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::io(path, e.into()))?;
        let num = |i: usize| -> Result<f64> {
            let field = rec.get(i).unwrap_or("").trim();
            field
                .parse()
                .map_err(|_| Error::invalid(format!("{}: row {}: cannot parse {field:?}", path.display(), line + 2)))
        };
        locs.push([num(ix)?, num(iy)?]);
        vals.push(num(iz)?);
    }
    SpatialSample::new(lambda, locs, vals)
}

/// Simulates `reps` samples per `(r, n)` cell with the Monte Carlo seeds and
/// writes them as `field_r{r}_n{n}_rep{k}.csv`; returns the paths written.
pub fn simulate_to_dir(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    config.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let lambda = config.test.lambda;
    let mut written = Vec::new();
    for (r, model) in config.model.models() {
        for &n in &config.n_list {
            for rep in 0..config.reps {
                let sample = simulate_replication(&model, n, lambda, replication_seed(config.seed, rep))?;
                let path = out_dir.join(format!("field_r{}_n{n}_rep{rep:04}.csv", fmt_r(r)));
                write_sample_csv(&sample, &path)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}
