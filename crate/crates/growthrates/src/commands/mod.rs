pub mod bench;
pub mod certify;
pub mod gen_lp;
pub mod rate_check;
pub mod solve;

use std::path::{Path, PathBuf};

use clap::Args;
use growthrates_core::problems::{
    build_lp_embedding, hoffman_theta, qp_from_psd, structured_constants, sublevel_bound_from_start,
};
use growthrates_core::{DenseVector, Error, StructuredProblem};

use crate::error::{CliError, Result};
use crate::io;

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Violation,
}

impl Verdict {
    pub fn from_pass(passed: bool) -> Self {
        if passed {
            Verdict::Pass
        } else {
            Verdict::Violation
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Violation => "fail",
        }
    }
}

pub const E_FILE: &str = "E.txt";
pub const B_FILE: &str = "b.txt";
pub const C_FILE: &str = "c.txt";
pub const META_FILE: &str = "meta.txt";
pub const SOLUTION_FILE: &str = "solution.txt";
pub const Q_FILE: &str = "Q.txt";
pub const QV_FILE: &str = "q.txt";

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Directory with an LP triple (E.txt, b.txt, c.txt); a solution.txt marks it solvable
    #[arg(long, value_name = "DIR", conflicts_with = "qp")]
    pub lp: Option<PathBuf>,
    /// Directory with a quadratic program (Q.txt, q.txt) for `½xᵀQx + qᵀx`
    #[arg(long, value_name = "DIR")]
    pub qp: Option<PathBuf>,
}

pub struct LoadedProblem {
    pub problem: StructuredProblem,
    /// Known minimiser in the problem's variables, when supplied.
    pub solution: Option<DenseVector>,
}

impl ProblemArgs {
    pub fn load(&self) -> Result<LoadedProblem> {
        match (&self.lp, &self.qp) {
            (Some(dir), None) => load_lp(dir),
            (None, Some(dir)) => {
                let q = io::read_matrix(&dir.join(Q_FILE))?;
                let qv = io::read_vector(&dir.join(QV_FILE))?;
                Ok(LoadedProblem {
                    problem: qp_from_psd(&q, qv.as_slice())?,
                    solution: None,
                })
            }
            _ => Err(CliError::usage("exactly one of --lp or --qp is required")),
        }
    }
}

/// Self-dual embedding of the LP in `dir`.
pub fn load_lp(dir: &Path) -> Result<LoadedProblem> {
    let e = io::read_matrix(&dir.join(E_FILE))?;
    let b = io::read_vector(&dir.join(B_FILE))?;
    let c = io::read_vector(&dir.join(C_FILE))?;
    let solution_path = dir.join(SOLUTION_FILE);
    let solution = if solution_path.exists() {
        Some(io::read_vector(&solution_path)?)
    } else {
        None
    };
    let problem = build_lp_embedding(&e, b.as_slice(), c.as_slice(), solution.is_some())?;
    if let Some(x) = &solution {
        if x.len() != problem.dim() {
            return Err(CliError::parse(
                &solution_path,
                1,
                format!("solution has {} entries, the embedding needs {}", x.len(), problem.dim()),
            ));
        }
    }
    Ok(LoadedProblem { problem, solution })
}

/// Relative growth `μ = κ_f/L_f` of `p`. Problems beyond the Hoffman
/// enumeration limit fall back to the affine constant `θ(A, 0)`, which
/// ignores the constraints and is therefore optimistic.
pub fn growth_mu(p: &StructuredProblem, x0: &[f64]) -> Result<f64> {
    let sublevel = match p.linear_term() {
        Some(_) => Some(sublevel_bound_from_start(p, x0)?.max(f64::MIN_POSITIVE)),
        None => None,
    };
    match structured_constants(p, sublevel) {
        Ok(k) => Ok(k.mu.min(1.0)),
        Err(Error::ScaleLimit { .. }) => affine_mu(p),
        Err(e) => Err(e.into()),
    }
}

/// `σ_g/(θ²(A, 0) L_f)`, ignoring the constraints.
pub fn affine_mu(p: &StructuredProblem) -> Result<f64> {
    let theta = hoffman_theta(p.matrix(), None)?;
    Ok((p.inner().sigma() / (theta * theta * p.lipschitz())).min(1.0))
}

pub fn start_point(p: &StructuredProblem, x0: Option<&Path>) -> Result<Vec<f64>> {
    match x0 {
        None => Ok(vec![0.0; p.dim()]),
        Some(path) => {
            let x = io::read_vector(path)?;
            if x.len() != p.dim() {
                return Err(CliError::usage(format!(
                    "{}: start point has {} entries, the problem has {}",
                    path.display(),
                    x.len(),
                    p.dim()
                )));
            }
            Ok(x.into_inner())
        }
    }
}

/// Writes `text` to `path` when given and echoes it on stdout.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    if let Some(path) = path {
        io::write_text(path, text)?;
    }
    print!("{text}");
    Ok(())
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v:e}")).unwrap_or_else(|| "none".into())
}
