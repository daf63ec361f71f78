//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use growthrates_core::classes::{
    check_condition, check_condition_at, contraction_to_qfg, convert_constant, ClassCertificate, ConditionKind,
    SamplePlan,
};
use growthrates_core::linalg::{self, svd, DenseMatrix, DenseVector};
use growthrates_core::problems::{
    build_lp_embedding, embed_lp_solution, gen_random_lp, hoffman_theta, linear_system_qp, qp_from_psd,
    residual_norm, structured_constants, InnerFunction, OptimalSet, StructuredProblem,
};
use growthrates_core::rates::{
    bound_curve, empirical_rate, gm_qs_value_factor, theoretical_factor, FdmParams, RateMethod, RateModel,
};
use growthrates_core::rng::GaussianStream;
use growthrates_core::sets::FeasibleSet;
use growthrates_core::solvers::{
    cyclic_cd_run, fgm_const_run, fgm_theta_run, gm_step, restart_parameters, rfgm_run, run_gm, RestartMode,
    SolverConfig, Status, Trace,
};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn gaussian(rows: usize, cols: usize, rng: &mut GaussianStream) -> DenseMatrix {
    DenseMatrix::new(rows, cols, rng.take_vec(rows * cols)).unwrap()
}

fn dvec(v: Vec<f64>) -> DenseVector {
    DenseVector::new(v).unwrap()
}

/// `min ½‖Ax − Ax_s‖²` with `A` of size `n×n` and the given rank, so `f* = 0`.
fn rank_deficient(n: usize, rank: usize, seed: u64) -> StructuredProblem {
    let mut rng = GaussianStream::new(seed);
    let a = gaussian(n, rank, &mut rng).matmul(&gaussian(rank, n, &mut rng)).unwrap();
    let xs = rng.take_vec(n);
    linear_system_qp(a, &xs).unwrap()
}

/// `min ½‖Ax − d‖²` over `[−1, 1]ⁿ` with a consistent `d` reached in the interior.
fn box_instance(seed: u64) -> StructuredProblem {
    let (m, n) = (4, 8);
    let mut rng = GaussianStream::new(seed);
    let a = gaussian(m, n, &mut rng);
    let xs: Vec<f64> = (0..n).map(|_| rng.next_uniform() - 0.5).collect();
    let d = dvec(a.mul_vec(&xs).unwrap());
    let set = FeasibleSet::boxed(vec![-1.0; n], vec![1.0; n]).unwrap();
    StructuredProblem::new(a, InnerFunction::shifted_half_squared_norm(d.clone()), set)
        .unwrap()
        .with_optimal_set(OptimalSet::new(d, None))
        .unwrap()
}

/// `min ½‖Ax − d‖² + cᵀx` over `ℝⁿ₊` with a planted KKT point: `c` is chosen
/// so that `∇f(x*)` is nonnegative and complementary to `x*`.
fn class_f_instance(seed: u64) -> StructuredProblem {
    let (m, n, rank) = (6, 10, 4);
    let mut rng = GaussianStream::new(seed);
    let a = gaussian(m, rank, &mut rng).matmul(&gaussian(rank, n, &mut rng)).unwrap();
    let d = rng.take_vec(m);
    let mut xstar = vec![0.0; n];
    let mut slack = vec![0.0; n];
    for i in 0..n {
        if i % 2 == 0 {
            xstar[i] = 0.5 + rng.next_uniform();
        } else {
            slack[i] = 0.5 + rng.next_uniform();
        }
    }
    let t = a.mul_vec(&xstar).unwrap();
    let grad_g = linalg::sub(&t, &d);
    let mut c = a.tr_mul_vec(&grad_g).unwrap();
    for (ci, si) in c.iter_mut().zip(&slack) {
        *ci = si - *ci;
    }
    let s_star = linalg::dot(&c, &xstar);
    StructuredProblem::new(a, InnerFunction::shifted_half_squared_norm(dvec(d)), FeasibleSet::NonnegOrthant(n))
        .unwrap()
        .with_linear_term(dvec(c))
        .unwrap()
        .with_optimal_set(OptimalSet::new(dvec(t), Some(s_star)))
        .unwrap()
}

/// Small class-F instance with a diagonally dominant `A`, `Ax* = d` and
/// `c = ∇f(x*)` supported off the support of `x*`, keeping the growth
/// constant of moderate size.
fn mild_class_f_instance(seed: u64) -> StructuredProblem {
    let n = 4;
    let mut rng = GaussianStream::new(seed);
    let mut a = gaussian(n, n, &mut rng).scaled(0.3);
    for i in 0..n {
        a.set(i, i, a.get(i, i) + 1.0);
    }
    let mut xstar = vec![0.0; n];
    let mut c = vec![0.0; n];
    for i in 0..n {
        if i % 2 == 0 {
            xstar[i] = 0.5 + rng.next_uniform();
        } else {
            c[i] = 0.5 + rng.next_uniform();
        }
    }
    let t = a.mul_vec(&xstar).unwrap();
    StructuredProblem::new(a, InnerFunction::shifted_half_squared_norm(dvec(t.clone())), FeasibleSet::NonnegOrthant(n))
        .unwrap()
        .with_linear_term(dvec(c))
        .unwrap()
        .with_optimal_set(OptimalSet::new(dvec(t), Some(0.0)))
        .unwrap()
}

fn start_point(p: &StructuredProblem, seed: u64, scale: f64) -> Vec<f64> {
    let raw: Vec<f64> = GaussianStream::new(seed).take_vec(p.dim()).iter().map(|v| scale * v).collect();
    p.set().project(&raw).unwrap().into_inner()
}

fn exhaustive(max_iters: usize) -> SolverConfig {
    SolverConfig::default().with_max_iters(max_iters).with_tol(0.0)
}

/// Values of a column up to (excluding) the first one at or below `floor`.
fn above_floor(series: &[(usize, f64)], floor: f64) -> Vec<(usize, f64)> {
    series.iter().copied().take_while(|&(_, v)| v > floor).collect()
}

fn f_gap_series(t: &Trace) -> Vec<(usize, f64)> {
    t.records.iter().map(|r| (r.k, r.f_gap.unwrap())).collect()
}

fn residual_series(t: &Trace) -> Vec<(usize, f64)> {
    t.records.iter().map(|r| (r.k, (2.0 * r.f_gap.unwrap()).max(0.0).sqrt())).collect()
}

/// Per-step distance ratios are resolved to ~1e-10 only while the distance
/// stays well above the round-off level of `Ax − t`.
const DIST_FLOOR: f64 = 1e-16;

/// Smallest gap `½‖Ax − t*‖²` that double precision resolves: the residual
/// carries round-off of a few ulps of `‖t*‖`.
fn resolution_floor(p: &StructuredProblem) -> f64 {
    let r = 8.0 * f64::EPSILON * linalg::norm(p.optimal_set().unwrap().t_star.as_slice());
    0.5 * r * r
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let mut worst = f64::INFINITY;
    let mut steps = 0;
    for seed in 0..10 {
        let p = rank_deficient(20, 10, 100 + seed);
        let k = structured_constants(&p, None).unwrap();
        let q = theoretical_factor(&RateModel::new(RateMethod::GmQs, k.mu, k.lipschitz)).unwrap();
        let t = run_gm(&p, &start_point(&p, 200 + seed, 1.0), &exhaustive(400)).unwrap();
        for w in t.records.windows(2) {
            let (d0, d1) = (w[0].dist_sq.unwrap(), w[1].dist_sq.unwrap());
            if d0 > DIST_FLOOR {
                worst = worst.min(q + 1e-10 - d1 / d0);
                steps += 1;
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    Outcome::new(
        worst >= 0.0 && secs < 5.0,
        format!("{steps} steps, worst slack {worst:.3e}, {secs:.2}s"),
    )
}

fn criterion_2() -> Outcome {
    let mut worst = f64::INFINITY;
    for seed in 0..10 {
        let p = rank_deficient(20, 10, 100 + seed);
        let k = structured_constants(&p, None).unwrap();
        let t = run_gm(&p, &start_point(&p, 200 + seed, 1.0), &exhaustive(400)).unwrap();
        let r2 = t.records[0].dist_sq.unwrap();
        for r in &t.records[1..] {
            let bound = 0.5 * k.lipschitz * r2 * gm_qs_value_factor(k.mu, r.k);
            let f = r.f_gap.unwrap();
            worst = worst.min((bound * (1.0 + 1e-9) - f) / bound.max(f64::MIN_POSITIVE));
        }
    }
    Outcome::new(worst >= 0.0, format!("worst relative slack {worst:.3e}"))
}

fn criterion_3() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut rate_ok = true;
    let mut detail = String::new();
    for seed in 0..10u64 {
        let mut rng = GaussianStream::new(300 + seed);
        let b = gaussian(15, 30, &mut rng);
        let q = b.transpose().matmul(&b).unwrap();
        let xs = rng.take_vec(30);
        let qv: Vec<f64> = q.mul_vec(&xs).unwrap().iter().map(|v| -v).collect();
        let p = qp_from_psd(&q, &qv).unwrap();
        let s = svd(&q).unwrap();
        let inv_cond = s.sigma_min_nonzero().unwrap() / s.sigma_max();
        let kappa = inv_cond * p.lipschitz();
        let t = fgm_const_run(&p, &rng.take_vec(30), kappa, &exhaustive(500)).unwrap();
        let f0 = t.records[0].f_gap.unwrap();
        let floor = resolution_floor(&p);
        for r in &t.records {
            let bound = libm::pow(1.0 - inv_cond.sqrt(), r.k as f64) * 2.0 * f0;
            if bound > floor {
                worst = worst.min((bound * (1.0 + 1e-8) - r.f_gap.unwrap()) / bound);
            }
        }
        let series = above_floor(&f_gap_series(&t), 1e-24 * f0);
        let fitted = empirical_rate(&series, None).unwrap();
        let target = 1.0 - 0.9 * inv_cond.sqrt();
        if fitted > target {
            rate_ok = false;
            detail = format!(", seed {seed}: fitted {fitted:.4} > {target:.4}");
        }
    }
    Outcome::new(
        worst >= 0.0 && rate_ok,
        format!("worst relative slack {worst:.3e}{detail}"),
    )
}

fn criterion_4() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut blocks = 0;
    let mut instances: Vec<(StructuredProblem, f64, Vec<f64>)> = Vec::new();
    for seed in 0..10 {
        let p = mild_class_f_instance(420 + seed);
        let x0 = start_point(&p, 430 + seed, 0.5);
        let m = p.value(&x0).unwrap() - p.f_star().unwrap();
        let mu = structured_constants(&p, Some(m)).unwrap().mu;
        instances.push((p, mu, x0));
    }
    for (p, mu, x0) in &instances {
        let (c, k) = restart_parameters(*mu, None).unwrap();
        let t = rfgm_run(p, x0, *mu, None, RestartMode::Fixed, &exhaustive(10 * k)).unwrap();
        let f0 = t.records[0].f_gap.unwrap();
        let restarts: Vec<f64> = t.records.iter().filter(|r| r.restart).map(|r| r.f_gap.unwrap()).collect();
        let mut bound = f0;
        for p_idx in 0..10 {
            bound *= c;
            // A run that stops at an exact minimiser keeps a zero gap for all later blocks.
            let gap = match restarts.get(p_idx) {
                Some(&g) => g,
                None if t.status == Status::Converged => t.records.last().unwrap().f_gap.unwrap(),
                None => f64::INFINITY,
            };
            worst = worst.min((bound * (1.0 + 1e-8) - gap) / bound);
            blocks += 1;
        }
    }
    let ks: Vec<String> = instances.iter().map(|(_, mu, _)| restart_parameters(*mu, None).unwrap().1.to_string()).collect();
    Outcome::new(
        worst >= 0.0,
        format!("{blocks} restarts, K in [{}], worst relative slack {worst:.3e}", ks.join(" ")),
    )
}

fn chain_instances() -> Vec<StructuredProblem> {
    let mut out: Vec<StructuredProblem> = (0..10).map(|s| rank_deficient(20, 10, 500 + s)).collect();
    out.extend((0..10).map(|s| box_instance(520 + s)));
    out
}

fn criterion_5() -> Outcome {
    let mut qualifying = 0;
    let mut failures = Vec::new();
    for (i, p) in chain_instances().iter().enumerate() {
        let k = structured_constants(p, None).unwrap();
        let plan = SamplePlan::new(10_000, 600 + i as u64);
        let qs = check_condition(ConditionKind::QuasiStrong, p, k.kappa, &plan).unwrap();
        if !qs.passed() {
            failures.push(format!("instance {i}: quasi-strong fails at κ"));
            continue;
        }
        qualifying += 1;
        for kind in [ConditionKind::GradGrowth, ConditionKind::UnderApprox, ConditionKind::FuncGrowth] {
            let cert = check_condition(kind, p, k.kappa, &plan).unwrap();
            if !cert.passed() {
                failures.push(format!("instance {i}: {} violated by {:.3e}", kind.name(), cert.worst_violation));
            }
        }
        let f = check_condition(ConditionKind::FuncGrowth, p, 0.0, &plan).unwrap();
        let eb_kappa =
            convert_constant(ConditionKind::FuncGrowth, ConditionKind::ErrorBound, f.kappa_empirical, p.lipschitz()).unwrap();
        let eb = check_condition(ConditionKind::ErrorBound, p, eb_kappa, &plan).unwrap();
        if !eb.passed() {
            failures.push(format!("instance {i}: error bound violated by {:.3e}", eb.worst_violation));
        }
    }
    Outcome::new(
        qualifying == 20 && failures.is_empty(),
        format!("{qualifying}/20 quasi-strong instances{}", summarize(&failures)),
    )
}

fn summarize(failures: &[String]) -> String {
    if failures.is_empty() {
        String::new()
    } else {
        format!("; {}", failures.join("; "))
    }
}

fn criterion_6() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut instances = chain_instances();
    instances.extend((0..5).map(|s| class_f_instance(700 + s)));
    for (i, p) in instances.iter().enumerate() {
        let plan = SamplePlan::new(10_000, 650 + i as u64);
        let points = growthrates_core::classes::draw_samples(p, &plan).unwrap();
        let l = p.lipschitz();
        let eb = check_condition_at(ConditionKind::ErrorBound, p, 0.0, &points).unwrap();
        let to_f = convert_constant(ConditionKind::ErrorBound, ConditionKind::FuncGrowth, eb.kappa_empirical, l).unwrap();
        let f_cert = check_condition_at(ConditionKind::FuncGrowth, p, to_f, &points).unwrap();
        let f = check_condition_at(ConditionKind::FuncGrowth, p, 0.0, &points).unwrap();
        let to_eb = convert_constant(ConditionKind::FuncGrowth, ConditionKind::ErrorBound, f.kappa_empirical, l).unwrap();
        let eb_cert = check_condition_at(ConditionKind::ErrorBound, p, to_eb, &points).unwrap();
        worst = worst.max(f_cert.worst_violation).max(eb_cert.worst_violation);
    }
    Outcome::new(worst <= 1e-9, format!("25 instances, worst violation {worst:.3e}"))
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut tightest = f64::INFINITY;
    let mut over = f64::NEG_INFINITY;
    for seed in 0..10u64 {
        let mut rng = GaussianStream::new(800 + seed);
        let a = gaussian(5, 9, &mut rng);
        let x0 = rng.take_vec(9);
        let b = a.mul_vec(&x0).unwrap();
        let theta = hoffman_theta(&a, None).unwrap();
        let s = svd(&a).unwrap();
        let v_min = s.v_col(s.rank() - 1).to_vec();
        let proj = linalg::AffineProjector::new(a.clone(), b.clone()).unwrap();
        let mut best_tight = 0.0f64;
        for i in 0..10_000 {
            let noise = rng.take_vec(9);
            let x: Vec<f64> = if i % 2 == 0 {
                x0.iter().zip(&noise).map(|(o, z)| o + 5.0 * z).collect()
            } else {
                let step = 0.1 + 10.0 * rng.next_uniform();
                x0.iter().zip(&v_min).zip(&noise).map(|((o, v), z)| o + step * v + 1e-6 * z).collect()
            };
            let dist = proj.dist_sq(&x).unwrap().sqrt();
            let resid = linalg::norm(&linalg::sub(&a.mul_vec(&x).unwrap(), &b));
            let ratio = dist / resid;
            over = over.max(ratio / theta - 1.0);
            if ratio > theta * (1.0 + 1e-12) {
                ok = false;
            }
            if i % 2 == 1 {
                best_tight = best_tight.max(ratio);
            }
        }
        tightest = tightest.min(best_tight / theta);
        if best_tight < theta * (1.0 - 1e-3) {
            ok = false;
        }
    }
    Outcome::new(
        ok,
        format!("min tight ratio/θ {tightest:.6}, max ratio/θ − 1 {over:.3e}"),
    )
}

fn example_one() -> StructuredProblem {
    StructuredProblem::new(
        DenseMatrix::from_rows(&[[1.0, 0.0]]).unwrap(),
        InnerFunction::shifted_half_squared_norm(dvec(vec![0.0])),
        FeasibleSet::NonnegOrthant(2),
    )
    .unwrap()
    .with_linear_term(dvec(vec![0.0, 1.0]))
    .unwrap()
    .with_optimal_set(OptimalSet::new(dvec(vec![0.0]), Some(0.0)))
    .unwrap()
}

fn criterion_8() -> Outcome {
    let p = example_one();
    let mut parts = Vec::new();
    let mut ok = true;
    for m in [1.0, 4.0, 100.0] {
        let plan = SamplePlan::new(10_000, 900).with_sublevel_bound(m);
        let kappa = f64::min(1.0, 1.0 / m);
        let cert = check_condition(ConditionKind::FuncGrowth, &p, kappa, &plan).unwrap();
        ok &= cert.passed();
        parts.push(format!("M={m}: κ={kappa} {}", verdict(&cert)));
        if m > 1.0 {
            let doubled = check_condition(ConditionKind::FuncGrowth, &p, 2.0 * kappa, &plan).unwrap();
            ok &= !doubled.passed();
            parts.push(format!(
                "κ={} {} (sampled κ {:.4})",
                2.0 * kappa,
                if doubled.passed() { "passes, expected failure" } else { "fails" },
                doubled.kappa_empirical
            ));
        }
    }
    Outcome::new(ok, parts.join("; "))
}

fn verdict(cert: &ClassCertificate) -> &'static str {
    if cert.passed() {
        "passes"
    } else {
        "fails"
    }
}

fn criterion_9() -> Outcome {
    let lp = gen_random_lp(10, 15, 1.0, 9).unwrap();
    let p = build_lp_embedding(&lp.e, &lp.b, &lp.c, true).unwrap();
    let a = p.matrix();
    let l_min = a.column_norms().iter().map(|c| c * c).fold(f64::INFINITY, f64::min);
    let cycles = 3000;
    let one = exhaustive(1);
    let mut x = vec![0.0; p.dim()];
    let mut worst_decrease = f64::INFINITY;
    let mut gaps = vec![p.value(&x).unwrap()];
    for _ in 0..cycles {
        let t = cyclic_cd_run(&p, &x, &one).unwrap();
        if t.status == Status::DescentViolation {
            worst_decrease = f64::NEG_INFINITY;
        }
        let next = t.final_point.into_inner();
        let (f0, f1) = (p.value(&x).unwrap(), p.value(&next).unwrap());
        let needed = 0.5 * l_min * linalg::dist_sq(&next, &x);
        worst_decrease = worst_decrease.min(f0 - f1 - needed + 1e-12 * (1.0 + f0));
        gaps.push(f1);
        x = next;
    }
    let full = cyclic_cd_run(&p, &vec![0.0; p.dim()], &exhaustive(cycles)).unwrap();
    let same = full.final_point.as_slice() == x.as_slice();
    let theta = hoffman_theta(a, None).unwrap();
    let kappa = 1.0 / (theta * theta);
    let n = p.dim() as f64;
    let model = RateModel::new(RateMethod::Fdm, kappa / p.lipschitz(), p.lipschitz())
        .with_f_gap0(gaps[0])
        .with_fdm(FdmParams {
            l: l_min,
            beta: 1.0 + p.lipschitz() * n.sqrt(),
            lbar: 1.0,
        });
    let mut worst_env = f64::INFINITY;
    for (k, g) in gaps.iter().enumerate().skip(1) {
        let bound = bound_curve(&model, k).unwrap();
        worst_env = worst_env.min((bound - g) / bound);
    }
    Outcome::new(
        worst_decrease >= 0.0 && worst_env >= 0.0 && same,
        format!(
            "{cycles} cycles, decrease slack {worst_decrease:.3e}, envelope slack {worst_env:.3e}, factor {:.10}",
            theoretical_factor(&model).unwrap()
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for seed in 0..5u64 {
        let lp = gen_random_lp(20, 30, 1.0, 1000 + seed).unwrap();
        let p = build_lp_embedding(&lp.e, &lp.b, &lp.c, true).unwrap();
        let x0 = vec![0.0; p.dim()];
        let xstar = embed_lp_solution(&lp.u_star, &lp.v_star, &lp.s_star);
        let r2 = linalg::dist_sq(&x0, &xstar);
        let mu = structured_constants(&p, None).map(|k| k.mu).unwrap_or_else(|_| {
            let theta = hoffman_theta(p.matrix(), None).unwrap();
            1.0 / (theta * theta * p.lipschitz())
        });
        let iters = 10_000;
        let gm = run_gm(&p, &x0, &exhaustive(iters)).unwrap();
        let cd = cyclic_cd_run(&p, &x0, &exhaustive(iters)).unwrap();
        let fgm = fgm_theta_run(&p, &x0, &exhaustive(iters)).unwrap();
        let rfgm = rfgm_run(&p, &x0, mu, Some(0.1), RestartMode::Residual, &exhaustive(iters)).unwrap();
        let r0 = residual_norm(&p, &x0).unwrap();
        // Average per-iteration contraction of the residual over the whole run.
        let rate = |t: &Trace| {
            let series = residual_series(t);
            let &(k, r) = series.last().unwrap();
            libm::pow(r / r0, 1.0 / k as f64)
        };
        let (r_gm, r_cd, r_rfgm) = (rate(&gm), rate(&cd), rate(&rfgm));
        ok &= r_rfgm < r_gm && r_rfgm < r_cd;
        let l = p.lipschitz();
        let mut env_ok = true;
        for r in &gm.records[1..] {
            env_ok &= r.f_gap.unwrap() <= l * r2 / (2.0 * r.k as f64);
        }
        for r in &fgm.records[1..] {
            let k = r.k as f64;
            env_ok &= r.f_gap.unwrap() <= 2.0 * l * r2 / ((k + 1.0) * (k + 1.0));
        }
        ok &= env_ok;
        parts.push(format!(
            "seed {seed}: rfgm {r_rfgm:.5} gm {r_gm:.5} cd {r_cd:.5}{}",
            if env_ok { "" } else { " envelope violated" }
        ));
    }
    Outcome::new(ok, parts.join("; "))
}

fn criterion_11() -> Outcome {
    let mut instances: Vec<(StructuredProblem, Vec<f64>)> = Vec::new();
    for seed in 0..5 {
        let p = rank_deficient(12, 6, 1100 + seed);
        let x0 = start_point(&p, 1110 + seed, 1.0);
        instances.push((p, x0));
    }
    for seed in 0..5 {
        let p = class_f_instance(1120 + seed);
        let x0 = start_point(&p, 1130 + seed, 2.0);
        instances.push((p, x0));
    }
    let mut worst = f64::NEG_INFINITY;
    let mut tested = 0;
    for (p, x0) in &instances {
        let proj = p.optimal_set_projector().unwrap();
        let alpha = 1.0 / p.lipschitz();
        let mut points = vec![dvec(x0.clone())];
        for _ in 0..200 {
            let next = gm_step(p, points.last().unwrap(), alpha).unwrap();
            points.push(next);
        }
        let dists: Vec<f64> = points.iter().map(|x| proj.dist_sq(x).unwrap()).collect();
        let beta = dists
            .windows(2)
            .filter(|w| w[0] > DIST_FLOOR)
            .map(|w| (w[1] / w[0]).sqrt())
            .fold(0.0f64, f64::max);
        if !(beta > 0.0 && beta < 1.0) {
            continue;
        }
        let kappa = contraction_to_qfg(beta, p.lipschitz()).unwrap();
        let cert = check_condition_at(ConditionKind::FuncGrowth, p, kappa, &points).unwrap();
        worst = worst.max(cert.worst_violation);
        tested += 1;
    }
    Outcome::new(
        tested == instances.len() && worst <= 1e-7,
        format!("{tested} traces, worst violation {worst:.3e}"),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("GM quasi-strong per-step contraction", criterion_1),
        ("GM function-value bound", criterion_2),
        ("FGM constant momentum on PSD linear systems", criterion_3),
        ("R-FGM block contraction", criterion_4),
        ("inclusion chain of the growth classes", criterion_5),
        ("constant conversions between error bound and functional growth", criterion_6),
        ("Hoffman constant tightness", criterion_7),
        ("Example 1 functional growth constants", criterion_8),
        ("cyclic coordinate descent as a feasible descent method", criterion_9),
        ("LP ordering of R-FGM against GM and CD, sublinear envelopes", criterion_10),
        ("linear GM convergence implies functional growth", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let out = run();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        if !out.passed {
            failed += 1;
        }
        println!(
            "{tag} [{:>2}] {name}: {} ({:.1}s)",
            i + 1,
            out.detail,
            started.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
