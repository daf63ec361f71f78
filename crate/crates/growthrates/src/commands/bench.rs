use std::fmt::Write as _;
use std::path::PathBuf;
use std::thread;

use clap::Args;
use growthrates_core::linalg;
use growthrates_core::problems::{build_lp_embedding, embed_lp_solution, gen_random_lp};
use growthrates_core::rates::empirical_rate;
use growthrates_core::solvers::{RestartMode, SolverConfig, Status, StepMode, Trace};
use growthrates_core::StructuredProblem;

use super::solve::{run_method, Method, RunSpec};
use super::{emit, load_lp, LoadedProblem, Verdict};
use crate::config::{Algorithm, BenchMetric, ExperimentConfig, ProblemSource};
use crate::error::{CliError, Result};
use crate::io;

pub const CSV_FILE: &str = "bench.csv";
pub const SUMMARY_FILE: &str = "bench_summary.txt";

/// Runs every configured algorithm on one LP and writes aligned residual columns.
#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Experiment configuration (dotted key=value lines)
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
}

fn load(source: &ProblemSource) -> Result<LoadedProblem> {
    match source {
        ProblemSource::Generate { m, big_n, density, seed } => {
            let lp = gen_random_lp(*m, *big_n, *density, *seed)?;
            Ok(LoadedProblem {
                problem: build_lp_embedding(&lp.e, lp.b.as_slice(), lp.c.as_slice(), true)?,
                solution: Some(embed_lp_solution(
                    lp.u_star.as_slice(),
                    lp.v_star.as_slice(),
                    lp.s_star.as_slice(),
                )),
            })
        }
        ProblemSource::Files { dir } => load_lp(dir),
    }
}

fn spec_for(alg: &Algorithm, max_iters: usize) -> RunSpec {
    let base = SolverConfig::default().with_max_iters(max_iters);
    let plain = |method| RunSpec {
        method,
        config: base,
        mu: None,
        c: None,
        restart: RestartMode::Fixed,
    };
    match *alg {
        Algorithm::Gm { step } => RunSpec {
            config: SolverConfig { step_mode: step, ..base },
            ..plain(Method::Gm)
        },
        Algorithm::FgmTheta => plain(Method::FgmTheta),
        Algorithm::Rfgm { c, mode, mu } => RunSpec {
            mu,
            c,
            restart: mode,
            ..plain(Method::Rfgm)
        },
        Algorithm::Cd => plain(Method::Cd),
    }
}

/// Residual `‖Ax − d‖ = √(2(f − f*))`, valid because the embedding has `f* = 0`.
fn residual(f_gap: f64) -> f64 {
    (2.0 * f_gap).max(0.0).sqrt()
}

fn cell(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

pub fn run(args: &BenchArgs) -> Result<Verdict> {
    let cfg = ExperimentConfig::from_file(&args.config)?;
    let loaded = load(&cfg.source)?;
    let p: &StructuredProblem = &loaded.problem;
    if p.f_star().is_none() {
        return Err(CliError::usage(
            "bench needs a solvable LP; supply solution.txt next to the problem files",
        ));
    }
    let x0 = vec![0.0; p.dim()];

    let traces: Vec<Result<Trace>> = thread::scope(|s| {
        let handles: Vec<_> = cfg
            .algorithms
            .iter()
            .map(|alg| {
                let spec = spec_for(alg, cfg.max_iters);
                let x0 = &x0;
                s.spawn(move || run_method(p, x0, &spec))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });
    let traces: Vec<Trace> = traces.into_iter().collect::<Result<_>>()?;

    let r0_sq = traces
        .iter()
        .find_map(|t| t.records[0].dist_sq)
        .or_else(|| loaded.solution.as_ref().map(|x| linalg::dist_sq(&x0, x.as_slice())));
    let envelope = |k: usize, fgm: bool| -> Option<f64> {
        let r2 = r0_sq?;
        let l = p.lipschitz();
        match (k, fgm) {
            (0, _) => None,
            (k, false) => Some(l * r2 / (2.0 * k as f64)),
            (k, true) => Some(2.0 * l * r2 / ((k as f64 + 1.0) * (k as f64 + 1.0))),
        }
    };

    let mut header = vec!["k".to_string()];
    for metric in &cfg.metrics {
        let suffix = metric_suffix(*metric);
        for alg in &cfg.algorithms {
            header.push(format!("{}_{suffix}", alg.name()));
        }
        header.push(format!("env_gm_{suffix}"));
        header.push(format!("env_fgm_{suffix}"));
    }
    let rows = traces.iter().map(|t| t.iterations()).max().unwrap_or(0);
    let mut csv = header.join(",");
    csv.push('\n');
    for k in 0..=rows {
        let mut line = vec![k.to_string()];
        for metric in &cfg.metrics {
            let value = |gap: Option<f64>| match metric {
                BenchMetric::Residual => gap.map(residual),
                BenchMetric::FGap => gap,
            };
            for t in &traces {
                line.push(cell(value(t.records.get(k).and_then(|r| r.f_gap))));
            }
            line.push(cell(value(envelope(k, false))));
            line.push(cell(value(envelope(k, true))));
        }
        csv.push_str(&line.join(","));
        csv.push('\n');
    }
    io::write_text(&cfg.output_dir.join(CSV_FILE), &csv)?;

    let mut summary = String::new();
    let mut clean = true;
    for (alg, t) in cfg.algorithms.iter().zip(&traces) {
        let series: Vec<(usize, f64)> = t
            .records
            .iter()
            .filter_map(|r| r.f_gap.map(|g| (r.k, residual(g))))
            .collect();
        let (r0, (k_end, r_end)) = (series[0].1, *series.last().expect("nonempty trace"));
        let average = (k_end > 0 && r0 > 0.0).then(|| (r_end / r0).powf(1.0 / k_end as f64));
        let fitted = empirical_rate(&series, None).ok();
        clean &= t.status != Status::DescentViolation;
        let name = alg.name();
        let _ = writeln!(summary, "{name}.status={}", t.status.name());
        let _ = writeln!(summary, "{name}.iterations={k_end}");
        let _ = writeln!(summary, "{name}.final_residual={r_end:e}");
        let _ = writeln!(summary, "{name}.average_rate={}", super::fmt_opt(average));
        let _ = writeln!(summary, "{name}.fitted_rate={}", super::fmt_opt(fitted));
        if let Algorithm::Gm { step: StepMode::Interval { lbar } } = alg {
            let _ = writeln!(summary, "{name}.lbar={lbar:e}");
        }
    }
    let _ = writeln!(summary, "lipschitz={:e}", p.lipschitz());
    let _ = writeln!(summary, "r0_sq={}", super::fmt_opt(r0_sq));
    emit(&summary, Some(&cfg.output_dir.join(SUMMARY_FILE)))?;
    Ok(Verdict::from_pass(clean))
}

fn metric_suffix(m: BenchMetric) -> &'static str {
    match m {
        BenchMetric::Residual => "residual",
        BenchMetric::FGap => "f_gap",
    }
}
