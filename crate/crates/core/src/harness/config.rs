//! Experiment configuration files.
//!
//! The format is flat TOML: one `key = value` per line, no tables. Keys:
//!
//! | key           | type                  | default         |
//! |---------------|-----------------------|-----------------|
//! | `model`       | `"gauss-aniso"` or `"matern"` | `"gauss-aniso"` |
//! | `r`           | float or float array (gauss-aniso only) | `1.0` |
//! | `nu`, `ell`   | float (matern only)   | `3.0`, `1.0`    |
//! | `n`           | integer or integer array | `[1000, 2000]` |
//! | `reps`        | integer ≥ 1           | `200`           |
//! | `seed`        | integer ≥ 0           | `0`             |
//! | `threads`     | integer ≥ 1, or `"auto"` | `"auto"`     |
//! | `alpha_level` | float in (0, 1)       | `0.05`          |
//! | `a`, `lambda` | integer, float        | `80`, `30.0`    |
//! | `a_r`, `lambda_r` | integer, float    | `800`, `300.0`  |
//! | `taper`       | `"cos"` or `"rect"`   | `"cos"`         |
//! | `alpha`       | integer ≥ 1 (cos only) | `3`            |
//! | `truncate_c0` | bool                  | `true`          |
//! | `csv_wall_time` | bool                | `false`         |

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::estimators::TestConfig;
use crate::field::CovarianceModel;
use crate::taper::Taper;

const KNOWN_KEYS: [&str; 18] = [
    "model",
    "r",
    "nu",
    "ell",
    "n",
    "reps",
    "seed",
    "threads",
    "alpha_level",
    "a",
    "lambda",
    "a_r",
    "lambda_r",
    "taper",
    "alpha",
    "truncate_c0",
    "csv_wall_time",
    "comment",
];

/// Which covariance family to simulate; Gaussian runs may sweep several `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSpec {
    GaussAniso { r: Vec<f64> },
    Matern { nu: f64, ell: f64 },
}

impl ModelSpec {
    /// One model per Monte Carlo row group, with the `r` reported in the CSV.
    /// Matérn fields are isotropic and report `r = 1`.
    pub fn models(&self) -> Vec<(f64, CovarianceModel)> {
        match self {
            ModelSpec::GaussAniso { r } => r.iter().map(|&r| (r, CovarianceModel::GaussianAniso { r })).collect(),
            ModelSpec::Matern { nu, ell } => {
                vec![(1.0, CovarianceModel::Matern { nu: *nu, ell: *ell })]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    /// `None` means rayon's default (all cores); `ANISO_THREADS` overrides both.
    pub threads: Option<usize>,
    pub test: TestConfig,
    /// Write real per-cell wall times into the CSV. Off by default so the CSV is
    /// byte-identical across runs; the JSON report always carries them.
    pub csv_wall_time: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            model: ModelSpec::GaussAniso { r: vec![1.0] },
            n_list: vec![1000, 2000],
            reps: 200,
            seed: 0,
            threads: None,
            test: TestConfig::default(),
            csv_wall_time: false,
        }
    }
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn as_float(key: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        other => Err(cfg_err(format!("{key}: expected a number, got {}", other.type_str()))),
    }
}

fn as_uint(key: &str, v: &Value) -> Result<u64> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        Value::Integer(i) => Err(cfg_err(format!("{key}: must be nonnegative, got {i}"))),
        other => Err(cfg_err(format!("{key}: expected an integer, got {}", other.type_str()))),
    }
}

fn as_str<'a>(key: &str, v: &'a Value) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| cfg_err(format!("{key}: expected a string, got {}", v.type_str())))
}

fn as_list<T>(key: &str, v: &Value, item: impl Fn(&str, &Value) -> Result<T>) -> Result<Vec<T>> {
    match v {
        Value::Array(xs) => xs.iter().map(|x| item(key, x)).collect(),
        single => Ok(vec![item(key, single)?]),
    }
}

fn need(ok: bool, constraint: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(cfg_err(format!("constraint violated: {constraint}")))
    }
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| cfg_err(e.message().to_string()))?;
        let unknown: Vec<&str> = table
            .keys()
            .map(String::as_str)
            .filter(|k| !KNOWN_KEYS.contains(k))
            .collect();
        if !unknown.is_empty() {
            return Err(cfg_err(format!("unknown keys: {}", unknown.join(", "))));
        }
        let get = |k: &str| table.get(k);
        let mut cfg = ExperimentConfig::default();

        let model = get("model")
            .map(|v| as_str("model", v))
            .transpose()?
            .unwrap_or("gauss-aniso");
        cfg.model = match model {
            "gauss-aniso" => {
                for k in ["nu", "ell"] {
                    if table.contains_key(k) {
                        return Err(cfg_err(format!("{k} only applies to model = \"matern\"")));
                    }
                }
                let r = get("r")
                    .map(|v| as_list("r", v, as_float))
                    .transpose()?
                    .unwrap_or(vec![1.0]);
                ModelSpec::GaussAniso { r }
            }
            "matern" => {
                if table.contains_key("r") {
                    return Err(cfg_err("r only applies to model = \"gauss-aniso\""));
                }
                ModelSpec::Matern {
                    nu: get("nu").map(|v| as_float("nu", v)).transpose()?.unwrap_or(3.0),
                    ell: get("ell").map(|v| as_float("ell", v)).transpose()?.unwrap_or(1.0),
                }
            }
            other => {
                return Err(cfg_err(format!(
                    "model: expected \"gauss-aniso\" or \"matern\", got {other:?}"
                )))
            }
        };

        if let Some(v) = get("n") {
            cfg.n_list = as_list("n", v, as_uint)?.into_iter().map(|x| x as usize).collect();
        }
        if let Some(v) = get("reps") {
            cfg.reps = as_uint("reps", v)? as usize;
        }
        if let Some(v) = get("seed") {
            cfg.seed = as_uint("seed", v)?;
        }
        if let Some(v) = get("threads") {
            cfg.threads = match v {
                Value::String(s) if s == "auto" => None,
                v => Some(as_uint("threads", v)? as usize),
            };
        }
        if let Some(v) = get("csv_wall_time") {
            cfg.csv_wall_time = v
                .as_bool()
                .ok_or_else(|| cfg_err(format!("csv_wall_time: expected a bool, got {}", v.type_str())))?;
        }
        if let Some(v) = get("comment") {
            as_str("comment", v)?;
        }

        let t = &mut cfg.test;
        if let Some(v) = get("alpha_level") {
            t.alpha_level = as_float("alpha_level", v)?;
        }
        if let Some(v) = get("a") {
            t.a = as_uint("a", v)? as usize;
        }
        if let Some(v) = get("lambda") {
            t.lambda = as_float("lambda", v)?;
        }
        if let Some(v) = get("a_r") {
            t.a_r = as_uint("a_r", v)? as usize;
        }
        if let Some(v) = get("lambda_r") {
            t.lambda_r = as_float("lambda_r", v)?;
        }
        if let Some(v) = get("truncate_c0") {
            t.truncate_c0 = v
                .as_bool()
                .ok_or_else(|| cfg_err(format!("truncate_c0: expected a bool, got {}", v.type_str())))?;
        }
        let taper = get("taper").map(|v| as_str("taper", v)).transpose()?.unwrap_or("cos");
        let alpha = get("alpha").map(|v| as_uint("alpha", v)).transpose()?;
        t.taper = match (taper, alpha) {
            ("cos", a) => Taper::CosinePower {
                alpha: u32::try_from(a.unwrap_or(3)).map_err(|_| cfg_err("alpha is too large"))?,
            },
            ("rect", None) => Taper::Rectangular,
            ("rect", Some(_)) => return Err(cfg_err("alpha only applies to taper = \"cos\"")),
            (other, _) => return Err(cfg_err(format!("taper: expected \"cos\" or \"rect\", got {other:?}"))),
        };

        cfg.validate()?;
        Ok(cfg)
    }

    /// Range checks; each error names the violated constraint.
    pub fn validate(&self) -> Result<()> {
        match &self.model {
            ModelSpec::GaussAniso { r } => {
                need(!r.is_empty(), "r list nonempty")?;
                need(r.iter().all(|r| r.is_finite() && *r > 0.0), "r > 0")?;
            }
            ModelSpec::Matern { nu, ell } => {
                need(nu.is_finite() && *nu > 0.0, "nu > 0")?;
                need(ell.is_finite() && *ell > 0.0, "ell > 0")?;
            }
        }
        need(!self.n_list.is_empty(), "n list nonempty")?;
        need(self.n_list.iter().all(|&n| n >= 4), "n >= 4")?;
        need(self.reps >= 1, "reps >= 1")?;
        need(self.threads.is_none_or(|t| t >= 1), "threads >= 1")?;
        let t = &self.test;
        need(t.alpha_level > 0.0 && t.alpha_level < 1.0, "0 < alpha_level < 1")?;
        need(t.a >= 1, "a >= 1")?;
        need(t.a_r >= 1, "a_r >= 1")?;
        need(t.lambda.is_finite() && t.lambda > 0.0, "lambda > 0")?;
        need(t.lambda_r.is_finite() && t.lambda_r > 0.0, "lambda_r > 0")?;
        if let Taper::CosinePower { alpha } = t.taper {
            need(alpha >= 1, "alpha >= 1")?;
        }
        Ok(())
    }

    /// Writes the config back in the flat format; `parse` of the output gives an equal config.
    pub fn to_toml_string(&self) -> String {
        fn floats(xs: &[f64]) -> String {
            let items: Vec<String> = xs.iter().map(|x| float(*x)).collect();
            format!("[{}]", items.join(", "))
        }
        fn float(x: f64) -> String {
            // `{:?}` always keeps a decimal point or exponent, so TOML reads a float back
            format!("{x:?}")
        }
        let mut s = String::new();
        match &self.model {
            ModelSpec::GaussAniso { r } => {
                let _ = writeln!(s, "model = \"gauss-aniso\"\nr = {}", floats(r));
            }
            ModelSpec::Matern { nu, ell } => {
                let _ = writeln!(s, "model = \"matern\"\nnu = {}\nell = {}", float(*nu), float(*ell));
            }
        }
        let n: Vec<String> = self.n_list.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(s, "n = [{}]", n.join(", "));
        let _ = writeln!(s, "reps = {}", self.reps);
        let _ = writeln!(s, "seed = {}", self.seed);
        match self.threads {
            Some(t) => {
                let _ = writeln!(s, "threads = {t}");
            }
            None => s.push_str("threads = \"auto\"\n"),
        }
        let t = &self.test;
        let _ = writeln!(s, "alpha_level = {}", float(t.alpha_level));
        let _ = writeln!(s, "a = {}\nlambda = {}", t.a, float(t.lambda));
        let _ = writeln!(s, "a_r = {}\nlambda_r = {}", t.a_r, float(t.lambda_r));
        match t.taper {
            Taper::CosinePower { alpha } => {
                let _ = writeln!(s, "taper = \"cos\"\nalpha = {alpha}");
            }
            Taper::Rectangular => s.push_str("taper = \"rect\"\n"),
        }
        let _ = writeln!(s, "truncate_c0 = {}", t.truncate_c0);
        let _ = writeln!(s, "csv_wall_time = {}", self.csv_wall_time);
        s
    }
}
