//! Structured objectives `f(x) = g(Ax) + cᵀx` over simple feasible sets, their
//! optimal-set descriptions and the constants `L_f`, `κ_f`, `μ_f`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{
    self, dot, norm, spectral_norm, sub, svd, AffineProjector, DenseMatrix, DenseVector,
};
use crate::rng::GaussianStream;
use crate::sets::{ConeSegment, FeasibleSet, Polyhedron, PolyhedronProjector, SetProjector};

/// Largest inequality block `hoffman_theta` will enumerate.
pub const HOFFMAN_ROW_LIMIT: usize = 20;

/// The smooth, strongly convex inner function `g`.
#[derive(Debug, Clone, PartialEq)]
pub enum InnerFunction {
    /// `g(z) = ½‖z − d‖²`, so `σ_g = L_g = 1`.
    ShiftedHalfSquaredNorm { target: DenseVector },
    /// `g(z) = ½zᵀHz + hᵀz` with `H` symmetric positive definite.
    QuadraticForm {
        hessian: DenseMatrix,
        linear: DenseVector,
        sigma: f64,
        lipschitz: f64,
    },
}

impl InnerFunction {
    pub fn shifted_half_squared_norm(target: DenseVector) -> Self {
        InnerFunction::ShiftedHalfSquaredNorm { target }
    }

    pub fn quadratic_form(hessian: DenseMatrix, linear: DenseVector) -> Result<Self> {
        let n = hessian.rows();
        if hessian.cols() != n || n == 0 {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: hessian.cols(),
            });
        }
        if linear.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: linear.len(),
            });
        }
        let (lo, hi) = symmetric_eigen_range(&hessian)?;
        if lo <= linalg::RANK_RTOL * hi {
            return Err(Error::InvalidParameter("quadratic form must be positive definite"));
        }
        Ok(InnerFunction::QuadraticForm {
            hessian,
            linear,
            sigma: lo,
            lipschitz: hi,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            InnerFunction::ShiftedHalfSquaredNorm { target } => target.len(),
            InnerFunction::QuadraticForm { linear, .. } => linear.len(),
        }
    }

    pub fn sigma(&self) -> f64 {
        match self {
            InnerFunction::ShiftedHalfSquaredNorm { .. } => 1.0,
            InnerFunction::QuadraticForm { sigma, .. } => *sigma,
        }
    }

    pub fn lipschitz(&self) -> f64 {
        match self {
            InnerFunction::ShiftedHalfSquaredNorm { .. } => 1.0,
            InnerFunction::QuadraticForm { lipschitz, .. } => *lipschitz,
        }
    }

    pub fn value(&self, z: &[f64]) -> f64 {
        match self {
            InnerFunction::ShiftedHalfSquaredNorm { target } => 0.5 * linalg::dist_sq(z, target),
            InnerFunction::QuadraticForm { hessian, linear, .. } => {
                let hz = hessian.mul_vec(z).expect("dimension checked");
                0.5 * dot(z, &hz) + dot(linear, z)
            }
        }
    }

    pub fn grad(&self, z: &[f64]) -> Vec<f64> {
        match self {
            InnerFunction::ShiftedHalfSquaredNorm { target } => sub(z, target),
            InnerFunction::QuadraticForm { hessian, linear, .. } => {
                let mut hz = hessian.mul_vec(z).expect("dimension checked");
                linalg::axpy(1.0, linear, &mut hz);
                hz
            }
        }
    }
}

/// Smallest and largest eigenvalue of a symmetric matrix.
fn symmetric_eigen_range(h: &DenseMatrix) -> Result<(f64, f64)> {
    let n = h.rows();
    let scale = h.data().iter().fold(0.0f64, |m, x| m.max(libm::fabs(*x)));
    for i in 0..n {
        for j in 0..i {
            if libm::fabs(h.get(i, j) - h.get(j, i)) > 1e-12 * scale {
                return Err(Error::InvalidParameter("matrix is not symmetric"));
            }
        }
    }
    let s = svd(h)?;
    // For symmetric H the singular pairs share vectors up to sign; vᵀHv recovers λ.
    let eig: Vec<f64> = (0..s.singular_values().len())
        .map(|k| {
            let v = s.v_col(k);
            dot(v, &h.mul_vec(v).expect("square"))
        })
        .collect();
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// `X* = {x ∈ X : Ax = t*, cᵀx = s*}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSet {
    pub t_star: DenseVector,
    pub s_star: Option<f64>,
}

impl OptimalSet {
    pub fn new(t_star: DenseVector, s_star: Option<f64>) -> Self {
        Self { t_star, s_star }
    }
}

/// Which relaxed strong-convexity class a computed `κ_f` certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionClass {
    QuasiStrong,
    GradGrowth,
    FuncGrowth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemConstants {
    pub lipschitz: f64,
    pub kappa: f64,
    pub mu: f64,
    pub class: FunctionClass,
    pub hoffman_theta: f64,
}

/// `min_{x ∈ X} g(Ax) + cᵀx` together with whatever is known about its optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredProblem {
    a: DenseMatrix,
    c: Option<DenseVector>,
    g: InnerFunction,
    set: FeasibleSet,
    lipschitz: f64,
    optimal_set: Option<OptimalSet>,
    f_star: Option<f64>,
}

impl StructuredProblem {
    pub fn new(a: DenseMatrix, g: InnerFunction, set: FeasibleSet) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Empty);
        }
        if g.dim() != a.rows() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: g.dim(),
            });
        }
        if set.dim() != a.cols() {
            return Err(Error::DimensionMismatch {
                expected: a.cols(),
                found: set.dim(),
            });
        }
        let norm_a = spectral_norm(&a)?;
        if norm_a == 0.0 {
            return Err(Error::DegenerateMatrix);
        }
        let lipschitz = g.lipschitz() * norm_a * norm_a;
        Ok(Self {
            a,
            c: None,
            g,
            set,
            lipschitz,
            optimal_set: None,
            f_star: None,
        })
    }

    pub fn with_linear_term(mut self, c: DenseVector) -> Result<Self> {
        if c.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: c.len(),
            });
        }
        self.c = if c.iter().all(|&x| x == 0.0) { None } else { Some(c) };
        self.optimal_set = None;
        self.f_star = None;
        Ok(self)
    }

    /// Records `X*` and `f* = g(t*) + s*`, then checks that the described set is
    /// nonempty and stationary. The check is skipped when `X*` has more
    /// inequality rows than the exact projector supports.
    pub fn with_optimal_set(mut self, opt: OptimalSet) -> Result<Self> {
        if opt.t_star.len() != self.a.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.a.rows(),
                found: opt.t_star.len(),
            });
        }
        if self.c.is_some() && opt.s_star.is_none() {
            return Err(Error::InvalidParameter("linear term requires s* in the optimal set"));
        }
        let f_star = self.g.value(&opt.t_star) + opt.s_star.unwrap_or(0.0);
        self.optimal_set = Some(opt);
        self.f_star = Some(f_star);
        match self.optimal_set_projector() {
            Ok(proj) => {
                let xbar = proj.project(&vec![0.0; self.dim()])?;
                let gm = self.gradient_map(&xbar)?;
                let (_, grad) = self.eval_grad(&xbar)?;
                if norm(&gm) > 1e-7 * (1.0 + norm(&grad)) {
                    return Err(Error::InvalidParameter("optimal-set description is not stationary"));
                }
            }
            Err(Error::ScaleLimit { .. }) => {}
            Err(e) => return Err(e),
        }
        Ok(self)
    }

    /// Records `f*` without an optimal-set description.
    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star = Some(f_star);
        self
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn linear_term(&self) -> Option<&DenseVector> {
        self.c.as_ref()
    }

    pub fn inner(&self) -> &InnerFunction {
        &self.g
    }

    pub fn set(&self) -> &FeasibleSet {
        &self.set
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn optimal_set(&self) -> Option<&OptimalSet> {
        self.optimal_set.as_ref()
    }

    pub fn f_star(&self) -> Option<f64> {
        self.f_star
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let ax = self.a.mul_vec(x)?;
        let lin = self.c.as_ref().map_or(0.0, |c| dot(c, x));
        Ok(self.g.value(&ax) + lin)
    }

    /// `(f(x), ∇f(x))` with `∇f(x) = Aᵀ∇g(Ax) + c`.
    pub fn eval_grad(&self, x: &[f64]) -> Result<(f64, DenseVector)> {
        self.check_dim(x)?;
        let ax = self.a.mul_vec(x)?;
        let mut grad = self.a.tr_mul_vec(&self.g.grad(&ax))?;
        let mut value = self.g.value(&ax);
        if let Some(c) = &self.c {
            linalg::axpy(1.0, c, &mut grad);
            value += dot(c, x);
        }
        let grad = DenseVector::from_vec_unchecked(grad);
        if !value.is_finite() || !grad.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok((value, grad))
    }

    /// `L_f (x − [x − ∇f(x)/L_f]_X)`.
    pub fn gradient_map(&self, x: &[f64]) -> Result<DenseVector> {
        self.gradient_map_with(&self.set.projector()?, x)
    }

    pub(crate) fn gradient_map_with(&self, proj: &SetProjector<'_>, x: &[f64]) -> Result<DenseVector> {
        let (_, grad) = self.eval_grad(x)?;
        if self.set.is_whole_space() {
            return Ok(grad);
        }
        let step = 1.0 / self.lipschitz;
        let trial: Vec<f64> = x.iter().zip(grad.iter()).map(|(xi, gi)| xi - step * gi).collect();
        let plus = proj.project(&trial)?;
        Ok(DenseVector::from_vec_unchecked(
            x.iter().zip(plus.iter()).map(|(xi, pi)| self.lipschitz * (xi - pi)).collect(),
        ))
    }

    /// Equality and inequality blocks describing `X*`.
    fn optimal_set_system(&self) -> Result<(DenseMatrix, Vec<f64>, Polyhedron)> {
        let opt = self.optimal_set.as_ref().ok_or(Error::MissingOptimalSet)?;
        let set_poly = self.set.as_polyhedron();
        let mut eq = self.a.clone();
        let mut rhs = opt.t_star.to_vec();
        if let (Some(c), Some(s)) = (&self.c, opt.s_star) {
            eq = eq.vstack(&DenseMatrix::new(1, c.len(), c.to_vec())?)?;
            rhs.push(s);
        }
        let (a_eq, b_eq) = set_poly.eq();
        eq = eq.vstack(a_eq)?;
        rhs.extend_from_slice(b_eq);
        Ok((eq, rhs, set_poly))
    }

    /// Exact projector onto `X*`.
    pub fn optimal_set_projector(&self) -> Result<OptimalSetProjector> {
        let (eq, rhs, set_poly) = self.optimal_set_system()?;
        let (c, d) = set_poly.ineq();
        if c.rows() == 0 {
            return Ok(OptimalSetProjector::Affine(AffineProjector::new(eq, rhs)?));
        }
        let poly = Polyhedron::new(c.clone(), d.to_vec(), eq, rhs)?;
        Ok(OptimalSetProjector::Polyhedral(PolyhedronProjector::new(poly)?))
    }
}

/// Projection onto a problem's optimal set.
#[derive(Debug)]
pub enum OptimalSetProjector {
    Affine(AffineProjector),
    Polyhedral(PolyhedronProjector),
}

impl OptimalSetProjector {
    pub fn project(&self, x: &[f64]) -> Result<DenseVector> {
        match self {
            OptimalSetProjector::Affine(p) => p.project(x),
            OptimalSetProjector::Polyhedral(p) => Ok(p.project(x)?.point),
        }
    }

    /// `‖x − [x]_{X*}‖²`.
    pub fn dist_sq(&self, x: &[f64]) -> Result<f64> {
        match self {
            OptimalSetProjector::Affine(p) => p.dist_sq(x),
            OptimalSetProjector::Polyhedral(p) => Ok(linalg::dist_sq(x, &p.project(x)?.point)),
        }
    }
}

pub fn eval_grad(p: &StructuredProblem, x: &[f64]) -> Result<(f64, DenseVector)> {
    p.eval_grad(x)
}

/// Hoffman constant of `{x : Ax = b, Cx ≤ d}` in the Euclidean norm.
///
/// Without inequalities this is `1/σ_min(A)`. Otherwise every index set `I`
/// with `|I| = r − rank(A)` and `rank [A; C_I] = r` is visited, where
/// `r = rank [A; C]`, and the largest `1/σ_min([A; C_I])` is returned.
pub fn hoffman_theta(a: &DenseMatrix, c: Option<&DenseMatrix>) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::Empty);
    }
    if a.is_zero() {
        return Err(Error::DegenerateMatrix);
    }
    let c = match c {
        Some(c) if c.rows() > 0 => c,
        _ => return Ok(1.0 / linalg::sigma_min_nonzero(a)?),
    };
    if c.cols() != a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            found: c.cols(),
        });
    }
    if c.rows() > HOFFMAN_ROW_LIMIT {
        return Err(Error::ScaleLimit {
            what: "Hoffman inequality rows",
            size: c.rows(),
            limit: HOFFMAN_ROW_LIMIT,
        });
    }
    let p = linalg::rank(a)?;
    let r = linalg::rank(&a.vstack(c)?)?;
    let k = r - p;
    let mut subset: Vec<usize> = (0..k).collect();
    let mut theta: Option<f64> = None;
    loop {
        let stacked = a.vstack(&c.select_rows(&subset))?;
        let s = svd(&stacked)?;
        if s.rank() == r {
            if let Some(smin) = s.sigma_min_nonzero() {
                let t = 1.0 / smin;
                theta = Some(theta.map_or(t, |best: f64| best.max(t)));
            }
        }
        if !crate::sets::next_combination(&mut subset, c.rows()) {
            break;
        }
    }
    theta.ok_or(Error::DegenerateMatrix)
}

/// `L_f`, `κ_f` and `μ_f` for a structured problem.
///
/// * `c = 0`: quasi-strong convexity with `κ_f = σ_g / θ²(A, C)` (`θ(A, 0)` on ℝⁿ).
/// * `c ≠ 0`, `X = ℝⁿ`: quadratic gradient growth with `κ_f = σ_g / θ²(A, 0)`.
/// * `c ≠ 0`, constrained: quadratic functional growth on the sublevel set
///   `f − f* ≤ M`, `κ_f = σ_g / (θ²(A, c, C)(1 + Mσ_g + 2c_g²))`, `c_g = ‖∇g(t*)‖`.
pub fn structured_constants(
    p: &StructuredProblem,
    sublevel_bound: Option<f64>,
) -> Result<ProblemConstants> {
    let sigma_g = p.g.sigma();
    let set_poly = p.set.as_polyhedron();
    let (a_eq, _) = set_poly.eq();
    let (c_ineq, _) = set_poly.ineq();
    let ineq = (c_ineq.rows() > 0).then_some(c_ineq);
    let base = p.a.vstack(a_eq)?;

    let (theta, kappa, class) = match &p.c {
        None => {
            let theta = hoffman_theta(&base, ineq)?;
            (theta, sigma_g / (theta * theta), FunctionClass::QuasiStrong)
        }
        Some(_) if p.set.is_whole_space() => {
            let theta = hoffman_theta(&p.a, None)?;
            (theta, sigma_g / (theta * theta), FunctionClass::GradGrowth)
        }
        Some(c) => {
            let m = sublevel_bound
                .ok_or(Error::InvalidParameter("class-F constant needs a sublevel bound M"))?;
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::InvalidParameter("sublevel bound must be positive"));
            }
            let opt = p.optimal_set.as_ref().ok_or(Error::MissingOptimalSet)?;
            let c_g = norm(&p.g.grad(&opt.t_star));
            let with_c = p
                .a
                .vstack(&DenseMatrix::new(1, c.len(), c.to_vec())?)?
                .vstack(a_eq)?;
            let theta = hoffman_theta(&with_c, ineq)?;
            let kappa = sigma_g / (theta * theta * (1.0 + m * sigma_g + 2.0 * c_g * c_g));
            (theta, kappa, FunctionClass::FuncGrowth)
        }
    };
    Ok(ProblemConstants {
        lipschitz: p.lipschitz,
        kappa,
        mu: kappa / p.lipschitz,
        class,
        hoffman_theta: theta,
    })
}

/// `M = f(x⁰) − f*`, the usual sublevel bound for descent methods.
pub fn sublevel_bound_from_start(p: &StructuredProblem, x0: &[f64]) -> Result<f64> {
    let f_star = p.f_star.ok_or(Error::MissingOptimalSet)?;
    Ok(p.value(x0)? - f_star)
}

/// Self-dual embedding of the LP `min cᵀu s.t. Eu = b, u ≥ 0` as
/// `min ½‖Ax − d‖²` over `x = (u, v, s) ∈ ℝᴺ₊ × ℝᵐ × ℝᴺ₊`.
///
/// With `known_solvable` the optimal set `{Ax = d} ∩ K` and `f* = 0` are recorded.
pub fn build_lp_embedding(
    e: &DenseMatrix,
    b: &[f64],
    c: &[f64],
    known_solvable: bool,
) -> Result<StructuredProblem> {
    let (m, big_n) = (e.rows(), e.cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: b.len(),
        });
    }
    if c.len() != big_n {
        return Err(Error::DimensionMismatch {
            expected: big_n,
            found: c.len(),
        });
    }
    let n = 2 * big_n + m;
    let rows = big_n + m + 1;
    let mut a = DenseMatrix::zeros(rows, n);
    for i in 0..big_n {
        for j in 0..m {
            a.set(i, big_n + j, e.get(j, i));
        }
        a.set(i, big_n + m + i, 1.0);
    }
    for j in 0..m {
        for i in 0..big_n {
            a.set(big_n + j, i, e.get(j, i));
        }
    }
    for i in 0..big_n {
        a.set(big_n + m, i, c[i]);
    }
    for j in 0..m {
        a.set(big_n + m, big_n + j, -b[j]);
    }
    let mut d = c.to_vec();
    d.extend_from_slice(b);
    d.push(0.0);
    let d = DenseVector::new(d)?;
    let set = FeasibleSet::ProductCone(vec![
        ConeSegment::NonnegOrthant(big_n),
        ConeSegment::Free(m),
        ConeSegment::NonnegOrthant(big_n),
    ]);
    let p = StructuredProblem::new(a, InnerFunction::shifted_half_squared_norm(d.clone()), set)?;
    if known_solvable {
        p.with_optimal_set(OptimalSet::new(d, None))
    } else {
        Ok(p)
    }
}

/// Concatenates a primal-dual triple into the embedding variable `(u, v, s)`.
pub fn embed_lp_solution(u: &[f64], v: &[f64], s: &[f64]) -> DenseVector {
    let mut x = u.to_vec();
    x.extend_from_slice(v);
    x.extend_from_slice(s);
    DenseVector::from_vec_unchecked(x)
}

/// A random LP with a planted primal-dual solution.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomLp {
    pub e: DenseMatrix,
    pub b: DenseVector,
    pub c: DenseVector,
    pub u_star: DenseVector,
    pub v_star: DenseVector,
    pub s_star: DenseVector,
}

/// Gaussian LP data with `m` rows and `N` columns.
///
/// The solution is drawn first: `u* ≥ 0` and `s* ≥ 0` with complementary
/// supports and a free `v*`; then `b = Eu*` and `c = Eᵀv* + s*`, so the
/// duality gap is zero and the embedding has optimal value 0.
pub fn gen_random_lp(m: usize, big_n: usize, density: f64, seed: u64) -> Result<RandomLp> {
    if m == 0 || m >= big_n {
        return Err(Error::InvalidParameter("random LP needs 0 < m < N"));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidParameter("density must lie in (0, 1]"));
    }
    let mut rng = GaussianStream::new(seed);
    let mut data = Vec::with_capacity(m * big_n);
    for _ in 0..m * big_n {
        let value = rng.next_gaussian();
        let keep = density >= 1.0 || rng.next_uniform() < density;
        data.push(if keep { value } else { 0.0 });
    }
    let e = DenseMatrix::new(m, big_n, data)?;
    let mut u = vec![0.0; big_n];
    let mut s = vec![0.0; big_n];
    for i in 0..big_n {
        let magnitude = libm::fabs(rng.next_gaussian());
        if rng.next_uniform() < 0.5 {
            u[i] = magnitude;
        } else {
            s[i] = magnitude;
        }
    }
    let v = rng.take_vec(m);
    let b = e.mul_vec(&u)?;
    let mut c = e.tr_mul_vec(&v)?;
    linalg::axpy(1.0, &s, &mut c);
    Ok(RandomLp {
        e,
        b: DenseVector::new(b)?,
        c: DenseVector::new(c)?,
        u_star: DenseVector::new(u)?,
        v_star: DenseVector::new(v)?,
        s_star: DenseVector::new(s)?,
    })
}

/// `min ½‖L x − L x_s‖²` over ℝⁿ: the linear system `Qx + q = 0` with `Q = LᵀL`,
/// `q = −Q x_s`, shifted so that `f* = 0`.
pub fn linear_system_qp(l: DenseMatrix, x_s: &[f64]) -> Result<StructuredProblem> {
    let t = DenseVector::new(l.mul_vec(x_s)?)?;
    let n = l.cols();
    StructuredProblem::new(l, InnerFunction::shifted_half_squared_norm(t.clone()), FeasibleSet::WholeSpace(n))?
        .with_optimal_set(OptimalSet::new(t, None))
}

/// `½xᵀQx + qᵀx` for symmetric `Q ⪰ 0` with `q ∈ range(Q)`, factored as
/// `Q = L_Qᵀ L_Q` from the eigendecomposition. The returned objective differs
/// from the original by the constant `½x_sᵀQx_s`, so `f* = 0`.
pub fn qp_from_psd(q_mat: &DenseMatrix, q_vec: &[f64]) -> Result<StructuredProblem> {
    let n = q_mat.rows();
    if q_mat.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: q_mat.cols(),
        });
    }
    if q_vec.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: q_vec.len(),
        });
    }
    let s = svd(q_mat)?;
    let r = s.rank();
    let mut l = DenseMatrix::zeros(r, n);
    for k in 0..r {
        let v = s.v_col(k);
        let lambda = dot(v, &q_mat.mul_vec(v)?);
        if lambda < 0.0 {
            return Err(Error::InvalidParameter("Q must be positive semidefinite"));
        }
        let root = libm::sqrt(lambda);
        for j in 0..n {
            l.set(k, j, root * v[j]);
        }
    }
    let neg_q: Vec<f64> = q_vec.iter().map(|x| -x).collect();
    let x_s = s.pinv_apply(&neg_q);
    let resid = norm(&sub(&q_mat.mul_vec(&x_s)?, &neg_q));
    if resid > 1e-9 * (1.0 + norm(q_vec)) {
        return Err(Error::InfeasibleAffine { residual: resid });
    }
    linear_system_qp(l, &x_s)
}

/// `½‖Ax + b‖²` over ℝⁿ, so that `L_f = σ²_max(A)` and `κ_f = σ²_min(A)`.
pub fn least_squares(a: DenseMatrix, b: &[f64]) -> Result<StructuredProblem> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let target: Vec<f64> = b.iter().map(|x| -x).collect();
    let s = svd(&a)?;
    let x_ls = s.pinv_apply(&target);
    let t_star = DenseVector::new(a.mul_vec(&x_ls)?)?;
    let n = a.cols();
    StructuredProblem::new(
        a,
        InnerFunction::shifted_half_squared_norm(DenseVector::new(target)?),
        FeasibleSet::WholeSpace(n),
    )?
    .with_optimal_set(OptimalSet::new(t_star, None))
}

/// `‖Ax − d‖` for the shifted-norm inner function, `‖∇f(x)‖` otherwise.
pub fn residual_norm(p: &StructuredProblem, x: &[f64]) -> Result<f64> {
    match &p.g {
        InnerFunction::ShiftedHalfSquaredNorm { target } => {
            Ok(libm::sqrt(linalg::dist_sq(&p.a.mul_vec(x)?, target)))
        }
        InnerFunction::QuadraticForm { .. } => Ok(norm(&p.eval_grad(x)?.1)),
    }
}
