use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use growthrates_core::rates::{verify_bound_with_floor, FdmParams, Metric, RateMethod, RateModel};

use super::{emit, fmt_opt, growth_mu, start_point, ProblemArgs, Verdict};
use crate::error::{CliError, Result};
use crate::io;

/// Checks a recorded trace against a theoretical rate.
#[derive(Debug, Clone, Args)]
pub struct RateCheckArgs {
    /// Trace CSV produced by `solve`
    #[arg(long, value_name = "FILE")]
    pub trace: PathBuf,
    /// gm-qs, gm-f, gm-sublinear, fgm-const, fgm-theta, rfgm or fdm
    #[arg(long)]
    pub method: String,
    /// f_gap or dist_sq [default: dist_sq for gm-qs and gm-f, f_gap otherwise]
    #[arg(long)]
    pub metric: Option<String>,
    /// Problem the trace was recorded on; supplies μ and L_f when not given
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub lipschitz: Option<f64>,
    /// ‖x⁰ − x̄⁰‖² [default: from the first trace record]
    #[arg(long)]
    pub dist0_sq: Option<f64>,
    /// f(x⁰) − f* [default: from the first trace record]
    #[arg(long)]
    pub f_gap0: Option<f64>,
    /// Restart fraction of the rfgm model [default: e⁻²]
    #[arg(long)]
    pub c: Option<f64>,
    /// FDM sufficient-decrease constant L [default: L_f]
    #[arg(long)]
    pub fdm_l: Option<f64>,
    /// FDM perturbation constant β [default: 0]
    #[arg(long)]
    pub fdm_beta: Option<f64>,
    /// FDM step bound L̄_f [default: L_f]
    #[arg(long)]
    pub fdm_lbar: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Skip per-step distance checks once the distance falls to this level
    #[arg(long, default_value_t = 0.0)]
    pub floor: f64,
    /// Report output (key=value lines, also printed)
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Per-iteration margins CSV
    #[arg(long, value_name = "FILE")]
    pub margins: Option<PathBuf>,
}

pub fn run(args: &RateCheckArgs) -> Result<Verdict> {
    let method = RateMethod::from_name(&args.method)
        .ok_or_else(|| CliError::usage(format!("unknown rate method {:?}", args.method)))?;
    let metric = match &args.metric {
        Some(name) => Metric::from_name(name).ok_or_else(|| CliError::usage(format!("unknown metric {name:?}")))?,
        None if matches!(method, RateMethod::GmQs | RateMethod::GmF) => Metric::DistSq,
        None => Metric::FGap,
    };
    let trace = io::read_trace(&args.trace)?;

    let problem = if args.problem.lp.is_some() || args.problem.qp.is_some() {
        Some(args.problem.load()?.problem)
    } else {
        None
    };
    let lipschitz = match (args.lipschitz, &problem) {
        (Some(l), _) => l,
        (None, Some(p)) => p.lipschitz(),
        (None, None) => return Err(CliError::usage("--lipschitz or a problem (--lp/--qp) is required")),
    };
    let mu = match (args.mu, &problem) {
        (Some(mu), _) => mu,
        (None, Some(p)) => growth_mu(p, &start_point(p, None)?)?,
        // Sublinear envelopes do not depend on μ.
        (None, None) if matches!(method, RateMethod::GmSublinear | RateMethod::FgmThetaSublinear) => 1.0,
        (None, None) => return Err(CliError::usage("--mu or a problem (--lp/--qp) is required")),
    };

    let first = trace.records[0];
    let mut model = RateModel::new(method, mu, lipschitz);
    if let Some(d) = args.dist0_sq.or(first.dist_sq) {
        model = model.with_dist0_sq(d);
    }
    if let Some(f) = args.f_gap0.or(first.f_gap) {
        model = model.with_f_gap0(f);
    }
    if method == RateMethod::Rfgm {
        let (c, k) = growthrates_core::solvers::restart_parameters(mu, args.c)?;
        model = model.with_restart(c, k);
    }
    if method == RateMethod::Fdm {
        model = model.with_fdm(FdmParams {
            l: args.fdm_l.unwrap_or(lipschitz),
            beta: args.fdm_beta.unwrap_or(0.0),
            lbar: args.fdm_lbar.unwrap_or(lipschitz),
        });
    }

    let report = verify_bound_with_floor(&trace, &model, metric, args.tol, args.floor)?;
    let verdict = Verdict::from_pass(report.passed);
    if let Some(path) = &args.margins {
        let mut csv = String::from("k,margin\n");
        for (k, m) in &report.margins {
            let _ = writeln!(csv, "{k},{m:.16e}");
        }
        io::write_text(path, &csv)?;
    }
    let text = io::format_key_values([
        ("method", method.name().to_string()),
        ("metric", metric.name().to_string()),
        ("mu", format!("{mu:e}")),
        ("lipschitz", format!("{lipschitz:e}")),
        ("checks", report.margins.len().to_string()),
        ("worst_margin", format!("{:e}", report.worst_margin)),
        ("empirical_factor", fmt_opt(report.empirical_factor)),
        ("theoretical_factor", fmt_opt(report.theoretical_factor)),
        ("tolerance", format!("{:e}", report.tolerance)),
        ("verdict", verdict.name().to_string()),
    ]);
    emit(&text, args.report.as_deref())?;
    Ok(verdict)
}
