use std::path::PathBuf;

use clap::Args;
use growthrates_core::classes::{check_condition, ConditionKind, SamplePlan};
use growthrates_core::problems::structured_constants;

use super::{emit, ProblemArgs, Verdict};
use crate::config::seed_override;
use crate::error::{CliError, Result};
use crate::io;

/// Samples a growth condition on a problem and reports the certificate.
#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// quasi-strong, under-approx, grad-growth, func-growth, error-bound or strong-convex
    #[arg(long)]
    pub kind: String,
    /// Constant to test [default: the structured κ_f of the problem]
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Sample seed; GROWTHRATES_SEED takes precedence
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restrict samples to the sublevel set `f − f* ≤ M`
    #[arg(long, value_name = "M")]
    pub sublevel: Option<f64>,
    /// Certificate output (key=value lines, also printed)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

pub fn run(args: &CertifyArgs) -> Result<Verdict> {
    let kind = ConditionKind::from_name(&args.kind).ok_or_else(|| {
        let names: Vec<&str> = ConditionKind::ALL.iter().map(|k| k.name()).collect();
        CliError::usage(format!("unknown condition {:?}; expected one of {}", args.kind, names.join(", ")))
    })?;
    let p = args.problem.load()?.problem;
    let kappa = match args.kappa {
        Some(k) => k,
        None => structured_constants(&p, args.sublevel)?.kappa,
    };
    let mut plan = SamplePlan::new(args.samples, seed_override()?.unwrap_or(args.seed));
    if let Some(m) = args.sublevel {
        plan = plan.with_sublevel_bound(m);
    }
    let cert = check_condition(kind, &p, kappa, &plan)?;
    let verdict = Verdict::from_pass(cert.passed());
    let text = io::format_key_values([
        ("kind", cert.kind.name().to_string()),
        ("kappa_tested", format!("{:e}", cert.kappa_tested)),
        ("samples", cert.num_samples.to_string()),
        ("worst_violation", format!("{:e}", cert.worst_violation)),
        ("kappa_empirical", format!("{:e}", cert.kappa_empirical)),
        ("seed", cert.seed.to_string()),
        ("verdict", verdict.name().to_string()),
    ]);
    emit(&text, args.out.as_deref())?;
    Ok(verdict)
}
