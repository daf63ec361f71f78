//! Experiment configuration for `bench`: flat `key=value` lines with dotted
//! section prefixes.
//!
//! ```text
//! problem.source = generate        # or `files` with problem.dir
//! problem.m = 20
//! problem.N = 30
//! problem.density = 1.0
//! problem.seed = 7
//! run.algorithms = gm, rfgm, cd
//! run.max_iters = 2000
//! run.output_dir = out
//! run.metrics = residual, f_gap
//! gm.alpha_mode = constant         # or `interval` with gm.lbar
//! rfgm.c = 0.1
//! rfgm.restart = residual          # fixed | value | residual
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use growthrates_core::solvers::{RestartMode, StepMode};

use crate::error::{CliError, Result};
use crate::io;

pub const SEED_ENV: &str = "GROWTHRATES_SEED";

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    Generate {
        m: usize,
        big_n: usize,
        density: f64,
        seed: u64,
    },
    Files {
        dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Gm { step: StepMode },
    FgmTheta,
    Rfgm { c: Option<f64>, mode: RestartMode, mu: Option<f64> },
    Cd,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Gm { .. } => "gm",
            Algorithm::FgmTheta => "fgm-theta",
            Algorithm::Rfgm { .. } => "rfgm",
            Algorithm::Cd => "cd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMetric {
    Residual,
    FGap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: ProblemSource,
    pub algorithms: Vec<Algorithm>,
    pub max_iters: usize,
    pub output_dir: PathBuf,
    pub metrics: Vec<BenchMetric>,
}

/// Seed from the environment override, if set.
pub fn seed_override() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::usage(format!("{SEED_ENV} must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

struct Entries<'a> {
    path: &'a Path,
    map: BTreeMap<String, (usize, String)>,
}

impl Entries<'_> {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn parsed<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::parse(self.path, line, format!("invalid value {v:?} for `{key}`"))),
        }
    }

    fn required<T: FromStr>(&mut self, key: &str) -> Result<T> {
        self.parsed(key)?
            .ok_or_else(|| CliError::parse(self.path, 1, format!("missing required key `{key}`")))
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = io::read_text(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(path, &text, base, seed_override()?)
    }

    /// Parses a configuration; relative paths are resolved against `base`.
    pub fn parse(path: &Path, text: &str, base: &Path, seed: Option<u64>) -> Result<Self> {
        let mut e = Entries {
            path,
            map: io::parse_key_values(path, text)?,
        };
        let source = match e.take("problem.source") {
            Some((_, s)) if s == "generate" => ProblemSource::Generate {
                m: e.required("problem.m")?,
                big_n: e.required("problem.N")?,
                density: e.parsed("problem.density")?.unwrap_or(1.0),
                seed: match (seed, e.parsed("problem.seed")?) {
                    (Some(s), _) | (None, Some(s)) => s,
                    (None, None) => {
                        return Err(CliError::parse(path, 1, "generated problems need `problem.seed`"))
                    }
                },
            },
            Some((_, s)) if s == "files" => {
                let dir: PathBuf = e.required("problem.dir")?;
                ProblemSource::Files { dir: base.join(dir) }
            }
            Some((line, s)) => {
                return Err(CliError::parse(path, line, format!("unknown problem.source {s:?}")))
            }
            None => return Err(CliError::parse(path, 1, "missing required key `problem.source`")),
        };

        let (alg_line, alg_list) = e
            .take("run.algorithms")
            .ok_or_else(|| CliError::parse(path, 1, "missing required key `run.algorithms`"))?;
        let mut algorithms = Vec::new();
        for name in alg_list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let alg = match name {
                "gm" => Algorithm::Gm {
                    step: gm_step_mode(&mut e)?,
                },
                "fgm-theta" => Algorithm::FgmTheta,
                "rfgm" => Algorithm::Rfgm {
                    c: e.parsed("rfgm.c")?,
                    mode: restart_mode(&mut e)?,
                    mu: e.parsed("rfgm.mu")?,
                },
                "cd" => Algorithm::Cd,
                other => return Err(CliError::parse(path, alg_line, format!("unknown algorithm {other:?}"))),
            };
            if algorithms.iter().any(|a: &Algorithm| a.name() == alg.name()) {
                return Err(CliError::parse(path, alg_line, format!("algorithm {name:?} listed twice")));
            }
            algorithms.push(alg);
        }
        if algorithms.is_empty() {
            return Err(CliError::parse(path, alg_line, "at least one algorithm is required"));
        }

        let max_iters = e.parsed("run.max_iters")?.unwrap_or(1000);
        let output_dir = base.join(e.parsed::<PathBuf>("run.output_dir")?.unwrap_or_else(|| ".".into()));
        let metrics = match e.take("run.metrics") {
            None => vec![BenchMetric::Residual],
            Some((line, list)) => list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|m| match m {
                    "residual" => Ok(BenchMetric::Residual),
                    "f_gap" => Ok(BenchMetric::FGap),
                    other => Err(CliError::parse(path, line, format!("unknown metric {other:?}"))),
                })
                .collect::<Result<_>>()?,
        };

        if let Some((key, (line, _))) = e.map.iter().next() {
            return Err(CliError::parse(path, *line, format!("unknown or unused key `{key}`")));
        }
        Ok(Self {
            source,
            algorithms,
            max_iters,
            output_dir,
            metrics,
        })
    }
}

fn gm_step_mode(e: &mut Entries) -> Result<StepMode> {
    match e.take("gm.alpha_mode") {
        None => Ok(StepMode::ConstantOneOverL),
        Some((_, m)) if m == "constant" => Ok(StepMode::ConstantOneOverL),
        Some((_, m)) if m == "interval" => Ok(StepMode::Interval {
            lbar: e.required("gm.lbar")?,
        }),
        Some((line, m)) => Err(CliError::parse(e.path, line, format!("unknown gm.alpha_mode {m:?}"))),
    }
}

pub fn parse_restart_mode(name: &str) -> Option<RestartMode> {
    match name {
        "fixed" => Some(RestartMode::Fixed),
        "value" => Some(RestartMode::FunctionValue),
        "residual" => Some(RestartMode::Residual),
        _ => None,
    }
}

fn restart_mode(e: &mut Entries) -> Result<RestartMode> {
    match e.take("rfgm.restart") {
        None => Ok(RestartMode::Fixed),
        Some((line, m)) => parse_restart_mode(&m)
            .ok_or_else(|| CliError::parse(e.path, line, format!("unknown rfgm.restart {m:?}"))),
    }
}
