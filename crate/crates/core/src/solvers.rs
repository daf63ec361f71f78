//! Projected gradient, fast gradient (constant momentum, θ-schedule and
//! restarted) and exact cyclic coordinate descent, each producing a [`Trace`].

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, norm, DenseVector};
use crate::problems::{residual_norm, InnerFunction, OptimalSetProjector, StructuredProblem};
use crate::sets::SetProjector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepMode {
    /// `α = 1/L_f`.
    ConstantOneOverL,
    /// `α = 1/L̄` for an overestimate `L̄ ≥ L_f`.
    Interval { lbar: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop once `‖g(x^k)‖` drops to this value; `None` selects
    /// `1e-10·(1 + ‖∇f(x⁰)‖)`.
    pub stop_grad_map_tol: Option<f64>,
    pub step_mode: StepMode,
    pub record_distances: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 1000,
            stop_grad_map_tol: None,
            step_mode: StepMode::ConstantOneOverL,
            record_distances: true,
        }
    }
}

impl SolverConfig {
    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.stop_grad_map_tol = Some(tol);
        self
    }

    fn step(&self, p: &StructuredProblem) -> Result<f64> {
        match self.step_mode {
            StepMode::ConstantOneOverL => Ok(1.0 / p.lipschitz()),
            StepMode::Interval { lbar } => {
                if !(lbar >= p.lipschitz()) || !lbar.is_finite() {
                    return Err(Error::InvalidParameter("interval step needs L̄ ≥ L_f"));
                }
                Ok(1.0 / lbar)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    MaxIters,
    Converged,
    DescentViolation,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::MaxIters => "max-iters",
            Status::Converged => "converged",
            Status::DescentViolation => "descent-violation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub f_gap: Option<f64>,
    pub dist_sq: Option<f64>,
    pub grad_map_norm: f64,
    pub restart: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub status: Status,
    pub final_point: DenseVector,
    /// False when the method's rate theorem does not cover this problem.
    pub rate_guaranteed: bool,
}

impl Trace {
    pub fn iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.k)
    }

    pub fn f_gaps(&self) -> Option<Vec<f64>> {
        self.records.iter().map(|r| r.f_gap).collect()
    }

    pub fn dist_sqs(&self) -> Option<Vec<f64>> {
        self.records.iter().map(|r| r.dist_sq).collect()
    }
}

struct Recorder<'a> {
    p: &'a StructuredProblem,
    set_proj: SetProjector<'a>,
    opt_proj: Option<OptimalSetProjector>,
    tol: f64,
    records: Vec<TraceRecord>,
}

impl<'a> Recorder<'a> {
    fn new(p: &'a StructuredProblem, x0: &[f64], cfg: &SolverConfig) -> Result<Self> {
        let opt_proj = if cfg.record_distances {
            match p.optimal_set_projector() {
                Ok(proj) => Some(proj),
                Err(Error::MissingOptimalSet | Error::ScaleLimit { .. }) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let tol = match cfg.stop_grad_map_tol {
            Some(t) if t >= 0.0 => t,
            Some(_) => return Err(Error::InvalidParameter("stopping tolerance must be nonnegative")),
            None => 1e-10 * (1.0 + p.eval_grad(x0)?.1.norm()),
        };
        Ok(Self {
            p,
            set_proj: p.set().projector()?,
            opt_proj,
            tol,
            records: Vec::new(),
        })
    }

    /// Logs `x` as iterate `k` and reports whether the stopping rule fired.
    fn record(&mut self, k: usize, x: &[f64], value: f64, restart: bool) -> Result<bool> {
        if !value.is_finite() {
            return Err(Error::Diverged { iteration: k });
        }
        let gm = self
            .p
            .gradient_map_with(&self.set_proj, x)
            .map_err(|_| Error::Diverged { iteration: k })?;
        let grad_map_norm = gm.norm();
        let dist_sq = match &self.opt_proj {
            Some(proj) => Some(proj.dist_sq(x)?),
            None => None,
        };
        self.records.push(TraceRecord {
            k,
            f_gap: self.p.f_star().map(|f| value - f),
            dist_sq,
            grad_map_norm,
            restart,
        });
        Ok(grad_map_norm <= self.tol)
    }

    fn finish(self, status: Status, x: Vec<f64>, rate_guaranteed: bool) -> Trace {
        Trace {
            records: self.records,
            status,
            final_point: DenseVector::from_vec_unchecked(x),
            rate_guaranteed,
        }
    }
}

fn feasible_start(p: &StructuredProblem, x0: &[f64]) -> Result<Vec<f64>> {
    if x0.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: x0.len(),
        });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(p.set().project(x0)?.into_inner())
}

fn descent_slack(f: f64) -> f64 {
    1e-12 * (1.0 + libm::fabs(f))
}

fn projected_step(p: &StructuredProblem, proj: &SetProjector<'_>, x: &[f64], alpha: f64) -> Result<Vec<f64>> {
    let (_, grad) = p.eval_grad(x)?;
    let trial: Vec<f64> = x.iter().zip(grad.iter()).map(|(xi, gi)| xi - alpha * gi).collect();
    Ok(proj.project(&trial)?.into_inner())
}

/// One projected gradient step `[x − α∇f(x)]_X`.
pub fn gm_step(p: &StructuredProblem, x: &[f64], alpha: f64) -> Result<DenseVector> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter("step size must be positive"));
    }
    let out = projected_step(p, &p.set().projector()?, x, alpha)?;
    Ok(DenseVector::from_vec_unchecked(out))
}

/// Projected gradient method with the configured step.
pub fn run_gm(p: &StructuredProblem, x0: &[f64], cfg: &SolverConfig) -> Result<Trace> {
    let alpha = cfg.step(p)?;
    let mut x = feasible_start(p, x0)?;
    let proj = p.set().projector()?;
    let mut rec = Recorder::new(p, &x, cfg)?;
    let mut fx = p.value(&x)?;
    if rec.record(0, &x, fx, false)? {
        return Ok(rec.finish(Status::Converged, x, true));
    }
    for k in 1..=cfg.max_iters {
        let next = projected_step(p, &proj, &x, alpha)?;
        let fnext = p.value(&next)?;
        let monotone = fnext <= fx + descent_slack(fx);
        x = next;
        fx = fnext;
        let done = rec.record(k, &x, fx, false)?;
        if !monotone {
            return Ok(rec.finish(Status::DescentViolation, x, true));
        }
        if done {
            return Ok(rec.finish(Status::Converged, x, true));
        }
    }
    Ok(rec.finish(Status::MaxIters, x, true))
}

/// Constant momentum `β = (√L_f − √κ)/(√L_f + √κ)`.
pub fn constant_momentum(kappa: f64, lipschitz: f64) -> Result<f64> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter("kappa must be positive"));
    }
    if kappa > lipschitz {
        return Err(Error::InvalidParameter("kappa must not exceed L_f"));
    }
    let (sl, sk) = (libm::sqrt(lipschitz), libm::sqrt(kappa));
    Ok((sl - sk) / (sl + sk))
}

/// Fast gradient method with constant momentum.
///
/// The linear rate needs all `y^k` to share one projection onto `X*`, which
/// is structural for unconstrained `g(Ax) + cᵀx`; on constrained problems
/// the trace is marked as not guaranteed.
pub fn fgm_const_run(p: &StructuredProblem, x0: &[f64], kappa: f64, cfg: &SolverConfig) -> Result<Trace> {
    let beta = constant_momentum(kappa, p.lipschitz())?;
    fgm_loop(p, x0, cfg, p.set().is_whole_space(), |_| beta)
}

/// `(θ_k, β_k)` with `θ_1 = 1`, `θ_{k+1} = (1 + √(1 + 4θ_k²))/2`, `β_k = (θ_k − 1)/θ_{k+1}`.
pub fn theta_schedule(k: usize) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(Error::InvalidParameter("the momentum schedule starts at k = 1"));
    }
    let mut theta = 1.0;
    for _ in 1..k {
        theta = next_theta(theta);
    }
    Ok((theta, (theta - 1.0) / next_theta(theta)))
}

fn next_theta(theta: f64) -> f64 {
    0.5 * (1.0 + libm::sqrt(1.0 + 4.0 * theta * theta))
}

/// Fast gradient method with the θ-schedule; the step producing `x^{j+1}`
/// extrapolates with `β_{j+1}`, so the first two iterates match GM.
pub fn fgm_theta_run(p: &StructuredProblem, x0: &[f64], cfg: &SolverConfig) -> Result<Trace> {
    let mut theta = 1.0;
    fgm_loop(p, x0, cfg, true, move |_| {
        let next = next_theta(theta);
        let beta = (theta - 1.0) / next;
        theta = next;
        beta
    })
}

fn fgm_loop(
    p: &StructuredProblem,
    x0: &[f64],
    cfg: &SolverConfig,
    rate_guaranteed: bool,
    mut momentum: impl FnMut(usize) -> f64,
) -> Result<Trace> {
    let alpha = cfg.step(p)?;
    let mut x = feasible_start(p, x0)?;
    let proj = p.set().projector()?;
    let mut rec = Recorder::new(p, &x, cfg)?;
    if rec.record(0, &x, p.value(&x)?, false)? {
        return Ok(rec.finish(Status::Converged, x, rate_guaranteed));
    }
    let mut y = x.clone();
    for k in 1..=cfg.max_iters {
        let next = projected_step(p, &proj, &y, alpha)?;
        let beta = momentum(k);
        y = extrapolate(&next, &x, beta);
        x = next;
        if rec.record(k, &x, p.value(&x)?, false)? {
            return Ok(rec.finish(Status::Converged, x, rate_guaranteed));
        }
    }
    Ok(rec.finish(Status::MaxIters, x, rate_guaranteed))
}

/// `x + β(x − x_prev)`, returning `x` unchanged when `β = 0`.
fn extrapolate(x: &[f64], x_prev: &[f64], beta: f64) -> Vec<f64> {
    if beta == 0.0 {
        return x.to_vec();
    }
    x.iter().zip(x_prev).map(|(a, b)| a + beta * (a - b)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestartMode {
    /// Restart every `K` iterations.
    Fixed,
    /// Restart at the first `f(x) − f* ≤ c(f(x^{0,j}) − f*)`, at the latest after `K`.
    FunctionValue,
    /// Restart at the first `‖Ax − d‖ ≤ c‖Ax^{0,j} − d‖`, with no block cap,
    /// so an optimistic `μ` cannot force premature restarts.
    Residual,
}

/// Restart schedule `(c, K)`: `K = ⌈√(4/(cμ))⌉`, and without `c` the
/// optimised choice `c = e⁻²`, `K = ⌈2e/√μ⌉`.
pub fn restart_parameters(mu: f64, c: Option<f64>) -> Result<(f64, usize)> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter("mu must be positive"));
    }
    match c {
        None => {
            let k = libm::ceil(2.0 * core::f64::consts::E / libm::sqrt(mu));
            Ok((libm::exp(-2.0), (k as usize).max(1)))
        }
        Some(c) if c > 0.0 && c < 1.0 => {
            let k = libm::ceil(libm::sqrt(4.0 / (c * mu)));
            Ok((c, (k as usize).max(1)))
        }
        Some(_) => Err(Error::InvalidParameter("restart fraction c must lie in (0, 1)")),
    }
}

/// Restarted fast gradient method: θ-schedule blocks, with `x` and `θ` reset
/// at each restart. Restart iterations are flagged in the trace.
pub fn rfgm_run(
    p: &StructuredProblem,
    x0: &[f64],
    mu: f64,
    c: Option<f64>,
    mode: RestartMode,
    cfg: &SolverConfig,
) -> Result<Trace> {
    let (c, block) = restart_parameters(mu, c)?;
    let f_star = match mode {
        RestartMode::FunctionValue => Some(p.f_star().ok_or(Error::MissingOptimalSet)?),
        _ => None,
    };
    let alpha = cfg.step(p)?;
    let mut x = feasible_start(p, x0)?;
    let proj = p.set().projector()?;
    let mut rec = Recorder::new(p, &x, cfg)?;
    let mut fx = p.value(&x)?;
    if rec.record(0, &x, fx, false)? {
        return Ok(rec.finish(Status::Converged, x, true));
    }
    let block_measure = |x: &[f64], fx: f64| -> Result<f64> {
        match (mode, f_star) {
            (RestartMode::FunctionValue, Some(fs)) => Ok(fx - fs),
            (RestartMode::Residual, _) => residual_norm(p, x),
            _ => Ok(0.0),
        }
    };
    let mut y = x.clone();
    let mut theta = 1.0;
    let mut inner = 0;
    let mut start_measure = block_measure(&x, fx)?;
    for k in 1..=cfg.max_iters {
        let next = projected_step(p, &proj, &y, alpha)?;
        fx = p.value(&next)?;
        inner += 1;
        let restart = (inner >= block && mode != RestartMode::Residual)
            || match mode {
                RestartMode::Fixed => false,
                _ => block_measure(&next, fx)? <= c * start_measure,
            };
        if restart {
            y = next.clone();
            theta = 1.0;
            inner = 0;
            start_measure = block_measure(&next, fx)?;
        } else {
            let t_next = next_theta(theta);
            y = extrapolate(&next, &x, (theta - 1.0) / t_next);
            theta = t_next;
        }
        x = next;
        if rec.record(k, &x, fx, restart)? {
            return Ok(rec.finish(Status::Converged, x, true));
        }
    }
    Ok(rec.finish(Status::MaxIters, x, true))
}

/// Exact cyclic coordinate descent on `½‖Ax − d‖² + cᵀx` over a separable
/// set; one trace step is a full sweep. Each sweep is checked against the
/// sufficient decrease `f(x^{k+1}) ≤ f(x^k) − (L/2)‖x^{k+1} − x^k‖²` with
/// `L = min_i ‖A_i‖²`.
pub fn cyclic_cd_run(p: &StructuredProblem, x0: &[f64], cfg: &SolverConfig) -> Result<Trace> {
    let target = match p.inner() {
        InnerFunction::ShiftedHalfSquaredNorm { target } => target,
        _ => return Err(Error::Unsupported("cyclic coordinate descent needs g = ½‖z − d‖²")),
    };
    if !p.set().is_separable() {
        return Err(Error::Unsupported("cyclic coordinate descent needs a separable set"));
    }
    let a = p.matrix();
    let n = p.dim();
    let columns: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let col_sq: Vec<f64> = columns.iter().map(|col| linalg::norm_sq(col)).collect();
    if col_sq.contains(&0.0) {
        return Err(Error::InvalidParameter("every column of A must be nonzero"));
    }
    let l_min = col_sq.iter().copied().fold(f64::INFINITY, f64::min);
    let c = p.linear_term();
    let bounds: Vec<(f64, f64)> = (0..n)
        .map(|i| p.set().coordinate_bounds(i).unwrap_or((f64::NEG_INFINITY, f64::INFINITY)))
        .collect();

    let mut x = feasible_start(p, x0)?;
    let mut rec = Recorder::new(p, &x, cfg)?;
    let mut fx = p.value(&x)?;
    if rec.record(0, &x, fx, false)? {
        return Ok(rec.finish(Status::Converged, x, true));
    }
    for k in 1..=cfg.max_iters {
        let prev = x.clone();
        let mut r = linalg::sub(&a.mul_vec(&x)?, target);
        for i in 0..n {
            let slope = linalg::dot(&columns[i], &r) + c.map_or(0.0, |c| c[i]);
            let (lo, hi) = bounds[i];
            let t = (x[i] - slope / col_sq[i]).clamp(lo, hi);
            let delta = t - x[i];
            if delta != 0.0 {
                linalg::axpy(delta, &columns[i], &mut r);
                x[i] = t;
            }
        }
        let fnext = p.value(&x)?;
        let step_sq = linalg::dist_sq(&x, &prev);
        let sufficient = fnext <= fx - 0.5 * l_min * step_sq + descent_slack(fx);
        fx = fnext;
        let done = rec.record(k, &x, fx, false)?;
        if !sufficient {
            return Ok(rec.finish(Status::DescentViolation, x, true));
        }
        if done {
            return Ok(rec.finish(Status::Converged, x, true));
        }
    }
    Ok(rec.finish(Status::MaxIters, x, true))
}

/// `‖x − y‖` between consecutive iterates, used by the rate helpers.
pub fn step_length(x: &[f64], y: &[f64]) -> f64 {
    norm(&linalg::sub(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;
    use crate::problems::{
        build_lp_embedding, gen_random_lp, linear_system_qp, structured_constants, OptimalSet,
    };
    use crate::rng::GaussianStream;
    use crate::sets::FeasibleSet;

    fn vecd(v: &[f64]) -> DenseVector {
        DenseVector::new(v.to_vec()).unwrap()
    }

    fn rank_deficient(n: usize, rank: usize, seed: u64) -> StructuredProblem {
        let mut rng = GaussianStream::new(seed);
        let b = DenseMatrix::new(n, rank, rng.take_vec(n * rank)).unwrap();
        let c = DenseMatrix::new(rank, n, rng.take_vec(rank * n)).unwrap();
        let xs = rng.take_vec(n);
        linear_system_qp(b.matmul(&c).unwrap(), &xs).unwrap()
    }

    fn scalar_half_square() -> StructuredProblem {
        StructuredProblem::new(
            DenseMatrix::identity(1),
            InnerFunction::shifted_half_squared_norm(vecd(&[0.0])),
            FeasibleSet::WholeSpace(1),
        )
        .unwrap()
        .with_optimal_set(OptimalSet::new(vecd(&[0.0]), None))
        .unwrap()
    }

    #[test]
    fn gm_step_examples() {
        let p = scalar_half_square();
        assert_eq!(gm_step(&p, &[1.0], 1.0).unwrap().as_slice(), &[0.0]);
        let q = rank_deficient(8, 4, 2);
        let xbar = q.optimal_set_projector().unwrap().project(&[1.0; 8]).unwrap();
        let stepped = gm_step(&q, &xbar, 1.0 / q.lipschitz()).unwrap();
        assert!(linalg::dist_sq(&stepped, &xbar) < 1e-20);
    }

    #[test]
    fn gm_step_descent_bound() {
        let lp = gen_random_lp(4, 7, 1.0, 9).unwrap();
        let p = build_lp_embedding(&lp.e, &lp.b, &lp.c, false).unwrap();
        let l = p.lipschitz();
        let mut rng = GaussianStream::new(10);
        for _ in 0..1000 {
            let x = p.set().project(&rng.take_vec(p.dim())).unwrap();
            let xp = gm_step(&p, &x, 1.0 / l).unwrap();
            let (f, fp) = (p.value(&x).unwrap(), p.value(&xp).unwrap());
            assert!(fp <= f - 0.5 * l * linalg::dist_sq(&x, &xp) + 1e-10 * (1.0 + f.abs()));
        }
    }

    #[test]
    fn gm_identity_qp_converges_in_one_step() {
        let p = linear_system_qp(DenseMatrix::identity(5), &[1.0, -2.0, 3.0, 0.5, 0.0]).unwrap();
        let t = run_gm(&p, &[0.0; 5], &SolverConfig::default().with_max_iters(3)).unwrap();
        assert!(t.records[1].dist_sq.unwrap() <= 1e-20);
        assert_eq!(t.status, Status::Converged);
    }

    #[test]
    fn gm_rank_deficient_per_step_ratio() {
        let p = rank_deficient(20, 10, 3);
        let k = structured_constants(&p, None).unwrap();
        let factor = (1.0 - k.mu) / (1.0 + k.mu);
        let t = run_gm(&p, &[0.0; 20], &SolverConfig::default().with_max_iters(300).with_tol(0.0)).unwrap();
        let d = t.dist_sqs().unwrap();
        let mut checked = 0;
        for w in d.windows(2) {
            if w[0] > 1e-26 {
                assert!(w[1] / w[0] <= factor + 1e-10, "{} > {factor}", w[1] / w[0]);
                checked += 1;
            }
        }
        assert!(checked > 50);
        let f = t.f_gaps().unwrap();
        assert!(f.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }

    #[test]
    fn fgm_with_full_kappa_is_gm() {
        let p = rank_deficient(12, 6, 4);
        let cfg = SolverConfig::default().with_max_iters(50).with_tol(0.0);
        assert_eq!(constant_momentum(p.lipschitz(), p.lipschitz()).unwrap(), 0.0);
        let gm = run_gm(&p, &[1.0; 12], &cfg).unwrap();
        let fgm = fgm_const_run(&p, &[1.0; 12], p.lipschitz(), &cfg).unwrap();
        assert_eq!(gm.records, fgm.records);
        assert_eq!(gm.final_point, fgm.final_point);
        assert!((constant_momentum(1.0, 4.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(fgm_const_run(&p, &[1.0; 12], 2.0 * p.lipschitz(), &cfg).is_err());
    }

    #[test]
    fn theta_schedule_values() {
        assert_eq!(theta_schedule(1).unwrap(), (1.0, 0.0));
        let (t2, _) = theta_schedule(2).unwrap();
        assert!((t2 - (1.0 + libm::sqrt(5.0)) / 2.0).abs() < 1e-15);
        for k in 1..200 {
            assert!(theta_schedule(k).unwrap().0 >= (k as f64 + 1.0) / 2.0);
        }
        assert!(theta_schedule(0).is_err());
    }

    #[test]
    fn fgm_theta_second_iterate_matches_gm() {
        let p = rank_deficient(10, 5, 5);
        let cfg = SolverConfig::default().with_max_iters(2).with_tol(0.0);
        let gm = run_gm(&p, &[0.5; 10], &cfg).unwrap();
        let fgm = fgm_theta_run(&p, &[0.5; 10], &cfg).unwrap();
        assert_eq!(gm.records[..3], fgm.records[..3]);
    }

    #[test]
    fn fgm_theta_fixed_point_and_envelope() {
        let p = rank_deficient(10, 5, 6);
        let xbar = p.optimal_set_projector().unwrap().project(&[0.0; 10]).unwrap();
        let t = fgm_theta_run(&p, &xbar, &SolverConfig::default().with_max_iters(5).with_tol(0.0)).unwrap();
        assert!(t.records.iter().all(|r| r.dist_sq.unwrap() < 1e-24));

        let t = fgm_theta_run(&p, &[0.0; 10], &SolverConfig::default().with_max_iters(200).with_tol(0.0)).unwrap();
        let r2 = t.records[0].dist_sq.unwrap();
        for r in &t.records[1..] {
            let k = r.k as f64;
            assert!(r.f_gap.unwrap() <= 2.0 * p.lipschitz() * r2 / ((k + 1.0) * (k + 1.0)) + 1e-12);
        }
    }

    #[test]
    fn restart_parameter_defaults() {
        let (c, k) = restart_parameters(1.0, None).unwrap();
        assert_eq!(k, 6);
        assert!((c - libm::exp(-2.0)).abs() < 1e-16);
        assert_eq!(restart_parameters(0.01, Some(0.1)).unwrap().1, 64);
        assert!(restart_parameters(0.5, Some(1.5)).is_err());
    }

    #[test]
    fn rfgm_blocks_contract() {
        let p = rank_deficient(16, 8, 7);
        let k = structured_constants(&p, None).unwrap();
        let (c, _) = restart_parameters(k.mu, None).unwrap();
        let t = rfgm_run(&p, &[0.0; 16], k.mu, None, RestartMode::Fixed, &SolverConfig::default().with_max_iters(400).with_tol(0.0))
            .unwrap();
        let f0 = t.records[0].f_gap.unwrap();
        let restarts: Vec<f64> = t.records.iter().filter(|r| r.restart).map(|r| r.f_gap.unwrap()).collect();
        assert!(restarts.len() >= 3);
        let mut bound = f0;
        for f in restarts.iter().take(10) {
            bound *= c;
            assert!(*f <= bound * (1.0 + 1e-8) + 1e-25, "{f} > {bound}");
        }
    }

    #[test]
    fn rfgm_residual_mode_restarts_early() {
        let lp = gen_random_lp(4, 6, 1.0, 2).unwrap();
        let p = build_lp_embedding(&lp.e, &lp.b, &lp.c, true).unwrap();
        let cfg = SolverConfig::default().with_max_iters(300).with_tol(0.0);
        let t = rfgm_run(&p, &[0.0; 16], 1e-4, Some(0.1), RestartMode::Residual, &cfg).unwrap();
        assert!(t.records.iter().any(|r| r.restart));
        let fixed = rfgm_run(&p, &[0.0; 16], 1e-4, Some(0.1), RestartMode::Fixed, &cfg).unwrap();
        assert!(t.records.iter().filter(|r| r.restart).count() >= fixed.records.iter().filter(|r| r.restart).count());
        let unknown = build_lp_embedding(&lp.e, &lp.b, &lp.c, false).unwrap();
        assert!(rfgm_run(&unknown, &[0.0; 16], 0.1, None, RestartMode::FunctionValue, &cfg).is_err());
    }

    #[test]
    fn cyclic_cd_diagonal_and_scalar() {
        let a = DenseMatrix::diag(&[1.0, 2.0, 3.0]).unwrap();
        let p = StructuredProblem::new(a, InnerFunction::shifted_half_squared_norm(vecd(&[1.0, 1.0, 1.0])), FeasibleSet::WholeSpace(3))
            .unwrap()
            .with_optimal_set(OptimalSet::new(vecd(&[1.0, 1.0, 1.0]), None))
            .unwrap();
        let t = cyclic_cd_run(&p, &[0.0; 3], &SolverConfig::default()).unwrap();
        assert!(t.records[1].f_gap.unwrap() <= 1e-30);
        assert_eq!(t.status, Status::Converged);

        let t = cyclic_cd_run(&scalar_half_square(), &[4.0], &SolverConfig::default()).unwrap();
        assert_eq!(t.records[1].f_gap, Some(0.0));
    }

    #[test]
    fn cyclic_cd_on_lp_is_monotone() {
        let lp = gen_random_lp(5, 8, 1.0, 11).unwrap();
        let p = build_lp_embedding(&lp.e, &lp.b, &lp.c, true).unwrap();
        let t = cyclic_cd_run(&p, &[0.0; 21], &SolverConfig::default().with_max_iters(200)).unwrap();
        assert_ne!(t.status, Status::DescentViolation);
        let f = t.f_gaps().unwrap();
        assert!(f.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(f.last().unwrap() < &f[0]);
    }

    #[test]
    fn cyclic_cd_rejects_zero_column() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.0]]).unwrap();
        let p = StructuredProblem::new(a, InnerFunction::shifted_half_squared_norm(vecd(&[1.0])), FeasibleSet::WholeSpace(2)).unwrap();
        assert!(cyclic_cd_run(&p, &[0.0, 0.0], &SolverConfig::default()).is_err());
    }

    #[test]
    fn interval_step_validates_overestimate() {
        let p = rank_deficient(6, 3, 12);
        let mut cfg = SolverConfig::default().with_max_iters(20);
        cfg.step_mode = StepMode::Interval { lbar: 0.5 * p.lipschitz() };
        assert!(run_gm(&p, &[0.0; 6], &cfg).is_err());
        cfg.step_mode = StepMode::Interval { lbar: 2.0 * p.lipschitz() };
        let t = run_gm(&p, &[0.0; 6], &cfg).unwrap();
        assert_ne!(t.status, Status::DescentViolation);
    }

    #[test]
    fn start_on_solution_stops_immediately() {
        let lp = gen_random_lp(3, 5, 1.0, 4).unwrap();
        let p = build_lp_embedding(&lp.e, &lp.b, &lp.c, true).unwrap();
        let x = crate::problems::embed_lp_solution(&lp.u_star, &lp.v_star, &lp.s_star);
        let t = run_gm(&p, &x, &SolverConfig::default().with_tol(1e-8)).unwrap();
        assert_eq!(t.iterations(), 0);
        assert_eq!(t.status, Status::Converged);
    }
}
