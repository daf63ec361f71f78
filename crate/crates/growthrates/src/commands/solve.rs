use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use growthrates_core::problems::residual_norm;
use growthrates_core::solvers::{
    cyclic_cd_run, fgm_const_run, fgm_theta_run, run_gm, rfgm_run, RestartMode, SolverConfig, Status, StepMode, Trace,
};
use growthrates_core::StructuredProblem;

use super::{affine_mu, emit, fmt_opt, growth_mu, start_point, ProblemArgs, Verdict};
use crate::error::Result;
use crate::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Gm,
    FgmConst,
    FgmTheta,
    Rfgm,
    Cd,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Gm => "gm",
            Method::FgmConst => "fgm-const",
            Method::FgmTheta => "fgm-theta",
            Method::Rfgm => "rfgm",
            Method::Cd => "cd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RestartArg {
    Fixed,
    Value,
    Residual,
}

impl From<RestartArg> for RestartMode {
    fn from(r: RestartArg) -> Self {
        match r {
            RestartArg::Fixed => RestartMode::Fixed,
            RestartArg::Value => RestartMode::FunctionValue,
            RestartArg::Residual => RestartMode::Residual,
        }
    }
}

/// Parameters shared by `solve` and `bench` runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSpec {
    pub method: Method,
    pub config: SolverConfig,
    pub mu: Option<f64>,
    pub c: Option<f64>,
    pub restart: RestartMode,
}

/// Runs one solver; `μ` is estimated from the problem when the method needs
/// it and none was given. Residual restarts never consult the interval `K`,
/// so they skip the combinatorial Hoffman estimate.
pub fn run_method(p: &StructuredProblem, x0: &[f64], spec: &RunSpec) -> Result<Trace> {
    let mu = |spec: &RunSpec| -> Result<f64> {
        match (spec.mu, spec.restart) {
            (Some(mu), _) => Ok(mu),
            (None, RestartMode::Residual) if spec.method == Method::Rfgm => affine_mu(p),
            (None, _) => growth_mu(p, x0),
        }
    };
    let cfg = &spec.config;
    Ok(match spec.method {
        Method::Gm => run_gm(p, x0, cfg)?,
        Method::FgmConst => fgm_const_run(p, x0, mu(spec)? * p.lipschitz(), cfg)?,
        Method::FgmTheta => fgm_theta_run(p, x0, cfg)?,
        Method::Rfgm => rfgm_run(p, x0, mu(spec)?, spec.c, spec.restart, cfg)?,
        Method::Cd => cyclic_cd_run(p, x0, cfg)?,
    })
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value = "gm")]
    pub method: Method,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    /// Stop once the gradient-map norm reaches this value [default: 1e-10·(1+‖∇f(x⁰)‖)]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Step 1/L̄ with L̄ ≥ L_f instead of 1/L_f
    #[arg(long)]
    pub lbar: Option<f64>,
    /// Growth ratio κ_f/L_f for fgm-const and rfgm [default: estimated from the problem]
    #[arg(long)]
    pub mu: Option<f64>,
    /// Restart fraction for rfgm [default: e⁻²]
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, value_enum, default_value = "fixed")]
    pub restart: RestartArg,
    /// Shorthand for `--restart residual`
    #[arg(long, conflicts_with = "restart")]
    pub restart_on_residual: bool,
    /// Starting point [default: the origin]
    #[arg(long, value_name = "FILE")]
    pub x0: Option<PathBuf>,
    /// Trace CSV output
    #[arg(long, value_name = "FILE")]
    pub trace: Option<PathBuf>,
    /// Summary output (key=value lines, also printed)
    #[arg(long, value_name = "FILE")]
    pub summary: Option<PathBuf>,
}

pub fn run(args: &SolveArgs) -> Result<Verdict> {
    let loaded = args.problem.load()?;
    let p = &loaded.problem;
    let x0 = start_point(p, args.x0.as_deref())?;
    let mut config = SolverConfig::default().with_max_iters(args.max_iters);
    config.stop_grad_map_tol = args.tol;
    if let Some(lbar) = args.lbar {
        config.step_mode = StepMode::Interval { lbar };
    }
    let restart = if args.restart_on_residual {
        RestartMode::Residual
    } else {
        args.restart.into()
    };
    let spec = RunSpec {
        method: args.method,
        config,
        mu: args.mu,
        c: args.c,
        restart,
    };
    let started = Instant::now();
    let trace = run_method(p, &x0, &spec)?;
    let secs = started.elapsed().as_secs_f64();
    if let Some(path) = &args.trace {
        io::write_trace(path, &trace)?;
    }
    let last = trace.records.last().expect("traces hold the starting point");
    let summary = io::format_key_values([
        ("method", args.method.name().to_string()),
        ("status", trace.status.name().to_string()),
        ("iterations", trace.iterations().to_string()),
        ("final_residual", format!("{:e}", residual_norm(p, trace.final_point.as_slice())?)),
        ("final_f_gap", fmt_opt(last.f_gap)),
        ("final_dist_sq", fmt_opt(last.dist_sq)),
        ("grad_map_norm", format!("{:e}", last.grad_map_norm)),
        ("rate_guaranteed", trace.rate_guaranteed.to_string()),
        ("wall_time_s", format!("{secs:.3}")),
    ]);
    emit(&summary, args.summary.as_deref())?;
    Ok(Verdict::from_pass(trace.status != Status::DescentViolation))
}
