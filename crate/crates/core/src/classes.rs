//! Sampled certificates for the relaxed strong-convexity conditions and the
//! conversions between their constants.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm_sq, DenseVector};
use crate::problems::{OptimalSetProjector, StructuredProblem};
use crate::rng::GaussianStream;

/// Absolute slack under which a sampled violation still counts as a pass.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Sampling radii cycled through by sample index.
pub const SAMPLE_RADII: [f64; 3] = [0.1, 1.0, 10.0];

const TINY_DISTANCE_SQ: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionKind {
    /// `f* ≥ f(x) + ⟨∇f(x), x̄ − x⟩ + κ/2 ‖x − x̄‖²`.
    QuasiStrong,
    /// `f(x) ≥ f* + ⟨∇f(x̄), x − x̄⟩ + κ/2 ‖x − x̄‖²`.
    UnderApprox,
    /// `⟨∇f(x) − ∇f(x̄), x − x̄⟩ ≥ κ ‖x − x̄‖²`.
    GradGrowth,
    /// `f(x) − f* ≥ κ/2 ‖x − x̄‖²`.
    FuncGrowth,
    /// `‖g(x)‖ ≥ κ ‖x − x̄‖` with `g` the gradient mapping.
    ErrorBound,
    /// `f(y) ≥ f(x) + ⟨∇f(x), y − x⟩ + κ/2 ‖y − x‖²`, tested on consecutive sample pairs.
    StrongConvexLower,
}

impl ConditionKind {
    pub const ALL: [ConditionKind; 6] = [
        ConditionKind::QuasiStrong,
        ConditionKind::UnderApprox,
        ConditionKind::GradGrowth,
        ConditionKind::FuncGrowth,
        ConditionKind::ErrorBound,
        ConditionKind::StrongConvexLower,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionKind::QuasiStrong => "quasi-strong",
            ConditionKind::UnderApprox => "under-approx",
            ConditionKind::GradGrowth => "grad-growth",
            ConditionKind::FuncGrowth => "func-growth",
            ConditionKind::ErrorBound => "error-bound",
            ConditionKind::StrongConvexLower => "strong-convex",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassCertificate {
    pub kind: ConditionKind,
    pub kappa_tested: f64,
    pub num_samples: usize,
    /// Largest `κ·(rhs) − (lhs)` over the samples; positive means failure by that margin.
    pub worst_violation: f64,
    /// Smallest per-sample κ-ratio, i.e. the largest κ every sample supports.
    pub kappa_empirical: f64,
    pub seed: u64,
}

impl ClassCertificate {
    pub fn passed(&self) -> bool {
        self.worst_violation <= VIOLATION_TOL
    }
}

/// How certificate points are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePlan {
    pub samples: usize,
    pub seed: u64,
    /// Pull samples back into `{f − f* ≤ M}` when set.
    pub sublevel_bound: Option<f64>,
}

impl SamplePlan {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            sublevel_bound: None,
        }
    }

    pub fn with_sublevel_bound(mut self, m: f64) -> Self {
        self.sublevel_bound = Some(m);
        self
    }
}

/// `L_f (x − [x − ∇f(x)/L_f]_X)`.
pub fn gradient_map(p: &StructuredProblem, x: &[f64]) -> Result<DenseVector> {
    p.gradient_map(x)
}

/// Feasible sample points: Gaussian perturbations of `[0]_{X*}` at radii
/// 0.1, 1 and 10 (by index), projected onto `X`. Each sample uses its own
/// stream, so the set is independent of evaluation order.
///
/// With a sublevel bound `M`, a point with `f − f* > M` is moved along the
/// segment towards the centre until `f − f* = uM` for a uniform `u`.
pub fn draw_samples(p: &StructuredProblem, plan: &SamplePlan) -> Result<Vec<DenseVector>> {
    let proj = p.optimal_set_projector()?;
    let f_star = p.f_star().ok_or(Error::MissingOptimalSet)?;
    let center = proj.project(&alloc::vec![0.0; p.dim()])?;
    let set_proj = p.set().projector()?;
    if let Some(m) = plan.sublevel_bound {
        if !(m > 0.0) {
            return Err(Error::InvalidParameter("sublevel bound must be positive"));
        }
    }
    let mut out = Vec::with_capacity(plan.samples);
    for i in 0..plan.samples {
        let mut rng = GaussianStream::split(plan.seed, i as u64);
        let radius = SAMPLE_RADII[i % SAMPLE_RADII.len()];
        let raw: Vec<f64> = center.iter().map(|c| c + radius * rng.next_gaussian()).collect();
        let mut x = set_proj.project(&raw)?;
        if let Some(m) = plan.sublevel_bound {
            if p.value(&x)? - f_star > m {
                let level = m * rng.next_uniform();
                x = pull_to_level(p, &center, &x, f_star + level)?;
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// Point on `[from, to]` whose value is `target`, with `f(from) ≤ target < f(to)`.
fn pull_to_level(p: &StructuredProblem, from: &[f64], to: &[f64], target: f64) -> Result<DenseVector> {
    let at = |t: f64| -> Vec<f64> { from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect() };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if p.value(&at(mid))? <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(DenseVector::from_vec_unchecked(at(lo)))
}

/// Certifies `kind` at `kappa` on the sample set described by `plan`.
pub fn check_condition(
    kind: ConditionKind,
    p: &StructuredProblem,
    kappa: f64,
    plan: &SamplePlan,
) -> Result<ClassCertificate> {
    let points = draw_samples(p, plan)?;
    let mut cert = check_condition_at(kind, p, kappa, &points)?;
    cert.seed = plan.seed;
    Ok(cert)
}

/// Certifies `kind` at `kappa` on explicit points.
pub fn check_condition_at(
    kind: ConditionKind,
    p: &StructuredProblem,
    kappa: f64,
    points: &[DenseVector],
) -> Result<ClassCertificate> {
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter("kappa must be a finite nonnegative number"));
    }
    let ctx = Context::new(p)?;
    let mut worst = f64::NEG_INFINITY;
    let mut kappa_emp = f64::INFINITY;
    let mut record = |lhs: f64, weight: f64| {
        worst = worst.max(kappa * weight - lhs);
        if weight > 0.0 {
            kappa_emp = kappa_emp.min(lhs / weight);
        }
    };
    let mut num = 0;
    if kind == ConditionKind::StrongConvexLower {
        for pair in points.windows(2) {
            let (x, y) = (&pair[0], &pair[1]);
            let (fx, gx) = p.eval_grad(x)?;
            let fy = p.value(y)?;
            let diff = linalg::sub(y, x);
            let d = norm_sq(&diff);
            let lhs = fy - fx - dot(&gx, &diff);
            record(lhs, if d > TINY_DISTANCE_SQ { 0.5 * d } else { 0.0 });
            num += 1;
        }
    } else {
        for x in points {
            let (lhs, weight) = ctx.sides(kind, x)?;
            record(lhs, weight);
            num += 1;
        }
    }
    if !worst.is_finite() && num > 0 {
        return Err(Error::NonFinite);
    }
    Ok(ClassCertificate {
        kind,
        kappa_tested: kappa,
        num_samples: num,
        worst_violation: if num == 0 { 0.0 } else { worst },
        kappa_empirical: kappa_emp,
        seed: 0,
    })
}

struct Context<'a> {
    p: &'a StructuredProblem,
    proj: OptimalSetProjector,
    f_star: f64,
}

impl<'a> Context<'a> {
    fn new(p: &'a StructuredProblem) -> Result<Self> {
        let proj = p.optimal_set_projector()?;
        let f_star = p.f_star().ok_or(Error::MissingOptimalSet)?;
        Ok(Self { p, proj, f_star })
    }

    /// `(lhs, w)` such that the condition reads `lhs ≥ κ·w`; `w = 0` marks
    /// points on `X*`, where every condition is trivially an equality.
    fn sides(&self, kind: ConditionKind, x: &[f64]) -> Result<(f64, f64)> {
        let xbar = self.proj.project(x)?;
        let diff = linalg::sub(x, &xbar);
        let d = norm_sq(&diff);
        let live = d > TINY_DISTANCE_SQ;
        let half = if live { 0.5 * d } else { 0.0 };
        Ok(match kind {
            ConditionKind::QuasiStrong => {
                let (fx, gx) = self.p.eval_grad(x)?;
                (self.f_star - fx + dot(&gx, &diff), half)
            }
            ConditionKind::UnderApprox => {
                let fx = self.p.value(x)?;
                let (_, gbar) = self.p.eval_grad(&xbar)?;
                (fx - self.f_star - dot(&gbar, &diff), half)
            }
            ConditionKind::GradGrowth => {
                let (_, gx) = self.p.eval_grad(x)?;
                let (_, gbar) = self.p.eval_grad(&xbar)?;
                (dot(&linalg::sub(&gx, &gbar), &diff), if live { d } else { 0.0 })
            }
            ConditionKind::FuncGrowth => (self.p.value(x)? - self.f_star, half),
            ConditionKind::ErrorBound => {
                let g = self.p.gradient_map(x)?;
                (g.norm(), if live { libm::sqrt(d) } else { 0.0 })
            }
            ConditionKind::StrongConvexLower => unreachable!("handled pairwise"),
        })
    }
}

/// Converts a class constant along one of the paper's implications.
///
/// Supported edges: quasi-strong to gradient growth, under-approximation or
/// functional growth, gradient growth to under-approximation, and
/// under-approximation to functional growth (all preserving `κ`);
/// under-approximation to gradient growth (`κ/2`); error bound to functional
/// growth (`κ²/L_f`); functional growth to error bound
/// (`κ/(1 + μ + √(1 + μ))` with `μ = κ/L_f`).
pub fn convert_constant(from: ConditionKind, to: ConditionKind, kappa: f64, lipschitz: f64) -> Result<f64> {
    use ConditionKind::*;
    if !(kappa > 0.0) || !(lipschitz > 0.0) {
        return Err(Error::InvalidParameter("kappa and L_f must be positive"));
    }
    let mu = kappa / lipschitz;
    match (from, to) {
        (a, b) if a == b => Ok(kappa),
        (QuasiStrong, GradGrowth | UnderApprox | FuncGrowth) => Ok(kappa),
        (GradGrowth, UnderApprox) | (UnderApprox, FuncGrowth) | (GradGrowth, FuncGrowth) => Ok(kappa),
        (UnderApprox, GradGrowth) => Ok(kappa / 2.0),
        (ErrorBound, FuncGrowth) => Ok(mu * kappa),
        (FuncGrowth, ErrorBound) => Ok(kappa / (1.0 + mu + libm::sqrt(1.0 + mu))),
        _ => Err(Error::Unsupported("no implication between these classes")),
    }
}

/// Functional-growth constant implied by a per-step distance contraction
/// `β` of the gradient method: `L_f (1 − β)²`.
pub fn contraction_to_qfg(beta: f64, lipschitz: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter("contraction factor must lie in (0, 1)"));
    }
    if !(lipschitz > 0.0) {
        return Err(Error::InvalidParameter("L_f must be positive"));
    }
    let gap = 1.0 - beta;
    Ok(lipschitz * gap * gap)
}
