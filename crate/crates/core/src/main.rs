use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use aniso_spec::harness::{self, ExperimentConfig};
use aniso_spec::oracles::{population_m2, population_tau_limits, QuadratureSpec};
use aniso_spec::{CovarianceModel, Error, IsotropyTest, Result, TestConfig};

#[derive(Parser)]
#[command(
    name = "aniso-spec",
    version,
    about = "Frequency-domain isotropy test for irregularly sampled random fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the Monte Carlo samples of a config and write them as x,y,z CSV files.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the isotropy test on one sample file (columns x, y, z).
    Test {
        #[arg(long)]
        data: PathBuf,
        /// Side length of the sampling square; overrides the config value.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the rejection-rate study and write montecarlo.csv / montecarlo.json.
    Montecarlo {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print population D1, D2, M2 and the variance limits for a model as JSON.
    Oracle {
        #[arg(long, value_enum)]
        model: ModelName,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 3.0)]
        nu: f64,
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        /// Cosine taper power used in the variance limits.
        #[arg(long, default_value_t = 3)]
        alpha: u32,
        /// Half-size `a` of the frequency grid bounding the taper weight sums.
        #[arg(long, default_value_t = 80)]
        a: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelName {
    GaussAniso,
    Matern,
}

fn load_config(path: Option<&PathBuf>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::from_path(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::Config(format!("cannot serialize output: {e}")))?;
    println!("{s}");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, out } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let written = harness::simulate_to_dir(&cfg, &out)?;
            eprintln!("wrote {} sample files to {}", written.len(), out.display());
        }
        Command::Test { data, lambda, config } => {
            let mut test: TestConfig = load_config(config.as_ref())?.test;
            if let Some(l) = lambda {
                test.lambda = l;
            }
            let sample = harness::read_sample_csv(&data, test.lambda)?;
            let result = IsotropyTest::new(test)?.run(&sample)?;
            print_json(&result)?;
            eprintln!(
                "n={} T={:.4} z={:.4} p={:.4} -> {}",
                result.n,
                result.statistic,
                result.critical,
                result.p_value,
                if result.reject {
                    "reject isotropy"
                } else {
                    "do not reject isotropy"
                }
            );
        }
        Command::Montecarlo { config, out } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let report = harness::run_montecarlo(&cfg, &out)?;
            for row in report.rows() {
                eprintln!(
                    "r={} n={} rate={:.3} (se {:.3}) degenerate={} failed={} [{:.1}s]",
                    row.r, row.n, row.rate, row.rate_se, row.degenerate, row.failed, row.wall_seconds
                );
            }
        }
        Command::Oracle {
            model,
            r,
            nu,
            ell,
            alpha,
            a,
        } => {
            let model = match model {
                ModelName::GaussAniso => CovarianceModel::gaussian_aniso(r)?,
                ModelName::Matern => CovarianceModel::matern(nu, ell)?,
            };
            let spec = QuadratureSpec::default();
            let taper = aniso_spec::Taper::CosinePower { alpha };
            let m2 = population_m2(&model, &spec)?;
            let tau = population_tau_limits(&model, &taper, a, &spec)?;
            print_json(&json!({
                "model": model,
                "d1": m2.d1,
                "d2": m2.d2,
                "m2": m2.m2,
                "tau_h0_sq": tau.tau_h0_sq,
                "tau_sq": tau.tau_sq,
                "limits": tau,
            }))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
