//! Feasible sets and their exact Euclidean projections.

use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, sub, AffineProjector, DenseMatrix, DenseVector};

/// Largest number of inequality rows `project_polyhedron` will enumerate.
pub const POLYHEDRON_ROW_LIMIT: usize = 25;

/// One block of a product cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeSegment {
    NonnegOrthant(usize),
    Free(usize),
}

impl ConeSegment {
    pub fn len(&self) -> usize {
        match *self {
            ConeSegment::NonnegOrthant(n) | ConeSegment::Free(n) => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `{x : C x ≤ d, A_eq x = b_eq}`. Either block may have zero rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    ineq: DenseMatrix,
    ineq_rhs: Vec<f64>,
    eq: DenseMatrix,
    eq_rhs: Vec<f64>,
}

impl Polyhedron {
    pub fn new(
        ineq: DenseMatrix,
        ineq_rhs: Vec<f64>,
        eq: DenseMatrix,
        eq_rhs: Vec<f64>,
    ) -> Result<Self> {
        let dim = ineq.cols().max(eq.cols());
        for (m, rhs) in [(&ineq, &ineq_rhs), (&eq, &eq_rhs)] {
            if m.rows() != rhs.len() {
                return Err(Error::DimensionMismatch {
                    expected: m.rows(),
                    found: rhs.len(),
                });
            }
            if m.rows() > 0 && m.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.cols(),
                });
            }
            if rhs.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        let ineq = if ineq.rows() == 0 { DenseMatrix::zeros(0, dim) } else { ineq };
        let eq = if eq.rows() == 0 { DenseMatrix::zeros(0, dim) } else { eq };
        Ok(Self {
            ineq,
            ineq_rhs,
            eq,
            eq_rhs,
        })
    }

    pub fn dim(&self) -> usize {
        self.ineq.cols()
    }

    pub fn ineq(&self) -> (&DenseMatrix, &[f64]) {
        (&self.ineq, &self.ineq_rhs)
    }

    pub fn eq(&self) -> (&DenseMatrix, &[f64]) {
        (&self.eq, &self.eq_rhs)
    }
}

/// The feasible set `X` of a problem.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    WholeSpace(usize),
    NonnegOrthant(usize),
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Polyhedron(Polyhedron),
    ProductCone(Vec<ConeSegment>),
}

impl FeasibleSet {
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.iter().chain(&upper).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::InvalidParameter("box lower bound exceeds upper bound"));
        }
        Ok(FeasibleSet::Box { lower, upper })
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::WholeSpace(n) | FeasibleSet::NonnegOrthant(n) => *n,
            FeasibleSet::Box { lower, .. } => lower.len(),
            FeasibleSet::Polyhedron(p) => p.dim(),
            FeasibleSet::ProductCone(segs) => segs.iter().map(ConeSegment::len).sum(),
        }
    }

    pub fn is_whole_space(&self) -> bool {
        matches!(self, FeasibleSet::WholeSpace(_))
    }

    /// Whether the projection acts coordinate by coordinate.
    pub fn is_separable(&self) -> bool {
        !matches!(self, FeasibleSet::Polyhedron(_))
    }

    /// Coordinate interval `[lo, hi]` of a separable set.
    pub fn coordinate_bounds(&self, i: usize) -> Option<(f64, f64)> {
        match self {
            FeasibleSet::WholeSpace(_) => Some((f64::NEG_INFINITY, f64::INFINITY)),
            FeasibleSet::NonnegOrthant(_) => Some((0.0, f64::INFINITY)),
            FeasibleSet::Box { lower, upper } => Some((lower[i], upper[i])),
            FeasibleSet::ProductCone(segs) => {
                let mut start = 0;
                for s in segs {
                    if i < start + s.len() {
                        return Some(match s {
                            ConeSegment::NonnegOrthant(_) => (0.0, f64::INFINITY),
                            ConeSegment::Free(_) => (f64::NEG_INFINITY, f64::INFINITY),
                        });
                    }
                    start += s.len();
                }
                None
            }
            FeasibleSet::Polyhedron(_) => None,
        }
    }

    /// The set written as `{x : C x ≤ d, A_eq x = b_eq}`.
    pub fn as_polyhedron(&self) -> Polyhedron {
        let n = self.dim();
        let unit_rows = |indices: &[usize], sign: f64| {
            let mut m = DenseMatrix::zeros(indices.len(), n);
            for (r, &i) in indices.iter().enumerate() {
                m.set(r, i, sign);
            }
            m
        };
        let empty = || (DenseMatrix::zeros(0, n), Vec::new());
        let (ineq, ineq_rhs, eq, eq_rhs) = match self {
            FeasibleSet::WholeSpace(_) => {
                let (c, d) = empty();
                let (a, b) = empty();
                (c, d, a, b)
            }
            FeasibleSet::NonnegOrthant(_) => {
                let idx: Vec<usize> = (0..n).collect();
                let (a, b) = empty();
                (unit_rows(&idx, -1.0), vec![0.0; n], a, b)
            }
            FeasibleSet::Box { lower, upper } => {
                let idx: Vec<usize> = (0..n).collect();
                let c = unit_rows(&idx, 1.0)
                    .vstack(&unit_rows(&idx, -1.0))
                    .expect("same width");
                let mut d = upper.clone();
                d.extend(lower.iter().map(|l| -l));
                let (a, b) = empty();
                (c, d, a, b)
            }
            FeasibleSet::ProductCone(segs) => {
                let mut idx = Vec::new();
                let mut start = 0;
                for s in segs {
                    if let ConeSegment::NonnegOrthant(len) = *s {
                        idx.extend(start..start + len);
                    }
                    start += s.len();
                }
                let (a, b) = empty();
                let k = idx.len();
                (unit_rows(&idx, -1.0), vec![0.0; k], a, b)
            }
            FeasibleSet::Polyhedron(p) => return p.clone(),
        };
        Polyhedron::new(ineq, ineq_rhs, eq, eq_rhs).expect("consistent by construction")
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let p = self.as_polyhedron();
        let (c, d) = p.ineq();
        let (a, b) = p.eq();
        let ineq_ok = (0..c.rows()).all(|i| dot(c.row(i), x) - d[i] <= tol);
        let eq_ok = (0..a.rows()).all(|i| libm::fabs(dot(a.row(i), x) - b[i]) <= tol);
        ineq_ok && eq_ok
    }

    /// Euclidean projection `[x]_X`.
    pub fn project(&self, x: &[f64]) -> Result<DenseVector> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        match self {
            FeasibleSet::Polyhedron(p) => Ok(PolyhedronProjector::new(p.clone())?.project(x)?.point),
            _ => {
                let mut out = x.to_vec();
                self.clip_in_place(&mut out);
                Ok(DenseVector::from_vec_unchecked(out))
            }
        }
    }

    fn clip_in_place(&self, x: &mut [f64]) {
        for (i, xi) in x.iter_mut().enumerate() {
            let (lo, hi) = self.coordinate_bounds(i).expect("separable set");
            *xi = xi.clamp(lo, hi);
        }
    }

    /// A reusable projector; polyhedral sets cache their face factorizations.
    pub fn projector(&self) -> Result<SetProjector<'_>> {
        Ok(match self {
            FeasibleSet::Polyhedron(p) => SetProjector::Polyhedral(PolyhedronProjector::new(p.clone())?),
            _ => SetProjector::Separable(self),
        })
    }
}

/// Projection onto a fixed feasible set, reusable across many points.
#[derive(Debug)]
pub enum SetProjector<'a> {
    Separable(&'a FeasibleSet),
    Polyhedral(PolyhedronProjector),
}

impl SetProjector<'_> {
    pub fn project(&self, x: &[f64]) -> Result<DenseVector> {
        match self {
            SetProjector::Separable(s) => s.project(x),
            SetProjector::Polyhedral(p) => Ok(p.project(x)?.point),
        }
    }
}

/// Result of an exact polyhedral projection.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralProjection {
    pub point: DenseVector,
    /// Inequality rows held active at the optimum (the first certified subset).
    pub active: Vec<usize>,
    /// Stationarity residual `‖x − z − Mᵀλ‖` of the certificate.
    pub kkt_residual: f64,
}

const KKT_TOL: f64 = 1e-8;

/// Exact projector onto a polyhedron by active-set enumeration.
///
/// Subsets are visited by increasing size, then lexicographically; the first
/// one whose equality-constrained projection is feasible with nonnegative
/// multipliers is the KKT point and therefore the projection. Faces that
/// certified earlier calls are tried first, most recent first, then subsets of
/// the rows that are nearly tight at an approximate projection, and only then
/// all subsets. Every returned point passes the same KKT check; the point is
/// unique, so the search order only changes the reported active set.
#[derive(Debug)]
pub struct PolyhedronProjector {
    poly: Polyhedron,
    row_norms: Vec<f64>,
    faces: RefCell<Vec<(Vec<usize>, AffineProjector)>>,
}

const FACE_CACHE: usize = 64;
const GUIDED_LIMIT: usize = 14;
const HILDRETH_PASSES: usize = 20_000;

impl PolyhedronProjector {
    pub fn new(poly: Polyhedron) -> Result<Self> {
        let rows = poly.ineq.rows();
        if rows > POLYHEDRON_ROW_LIMIT {
            return Err(Error::ScaleLimit {
                what: "polyhedron inequality rows",
                size: rows,
                limit: POLYHEDRON_ROW_LIMIT,
            });
        }
        let row_norms = (0..rows).map(|i| norm(poly.ineq.row(i))).collect();
        Ok(Self {
            poly,
            row_norms,
            faces: RefCell::new(Vec::new()),
        })
    }

    pub fn polyhedron(&self) -> &Polyhedron {
        &self.poly
    }

    fn build_face(&self, subset: &[usize]) -> Option<AffineProjector> {
        let (c, d) = self.poly.ineq();
        let (a, b) = self.poly.eq();
        let m = a.vstack(&c.select_rows(subset)).expect("same width");
        if m.rows() == 0 {
            return None;
        }
        let mut rhs = b.to_vec();
        rhs.extend(subset.iter().map(|&i| d[i]));
        AffineProjector::new(m, rhs).ok()
    }

    /// Checks whether the candidate for `subset` satisfies the KKT conditions.
    fn try_subset(&self, subset: &[usize], face: Option<&AffineProjector>, x: &[f64]) -> Option<(Vec<f64>, f64)> {
        let (c, d) = self.poly.ineq();
        let p_eq = self.poly.eq().0.rows();
        let (z, kkt) = if p_eq + subset.len() > 0 {
            let face = face?;
            let z = face.project(x).ok()?.into_inner();
            let diff = sub(x, &z);
            let lambda = face.svd().pinv_transpose_apply(&diff);
            let scale = 1.0 + norm(&diff);
            // Inequality multipliers must be nonnegative.
            let mult_ok = subset
                .iter()
                .enumerate()
                .all(|(k, &row)| lambda[p_eq + k] * self.row_norms[row] >= -1e-9 * scale);
            if !mult_ok {
                return None;
            }
            let mt_lambda = face.matrix().tr_mul_vec(&lambda).ok()?;
            (z, norm(&sub(&diff, &mt_lambda)))
        } else {
            (x.to_vec(), 0.0)
        };
        let zn = norm(&z);
        let feasible = (0..c.rows()).all(|i| {
            dot(c.row(i), &z) - d[i] <= 1e-9 * (1.0 + libm::fabs(d[i]) + self.row_norms[i] * zn)
        });
        (feasible && kkt <= KKT_TOL * (1.0 + norm(x))).then_some((z, kkt))
    }

    pub fn project(&self, x: &[f64]) -> Result<PolyhedralProjection> {
        let n = self.poly.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        {
            let mut faces = self.faces.borrow_mut();
            let hit = faces
                .iter()
                .enumerate()
                .rev()
                .find_map(|(pos, (subset, face))| self.try_subset(subset, Some(face), x).map(|r| (pos, r)));
            if let Some((pos, (z, kkt))) = hit {
                let entry = faces.remove(pos);
                let active = entry.0.clone();
                faces.push(entry);
                return Ok(PolyhedralProjection {
                    point: DenseVector::from_vec_unchecked(z),
                    active,
                    kkt_residual: kkt,
                });
            }
        }
        let near = self.near_active(x);
        if near.len() <= GUIDED_LIMIT {
            if let Some(found) = self.enumerate(&near, x) {
                return Ok(found);
            }
        }
        let all: Vec<usize> = (0..self.poly.ineq.rows()).collect();
        self.enumerate(&all, x).ok_or(Error::Infeasible)
    }

    /// Tries every subset of `pool` by size, then lexicographically.
    fn enumerate(&self, pool: &[usize], x: &[f64]) -> Option<PolyhedralProjection> {
        for size in 0..=pool.len() {
            let mut pick: Vec<usize> = (0..size).collect();
            loop {
                let subset: Vec<usize> = pick.iter().map(|&i| pool[i]).collect();
                let face = self.build_face(&subset);
                if let Some((z, kkt)) = self.try_subset(&subset, face.as_ref(), x) {
                    if let Some(face) = face {
                        let mut faces = self.faces.borrow_mut();
                        if faces.len() == FACE_CACHE {
                            faces.remove(0);
                        }
                        faces.push((subset.clone(), face));
                    }
                    return Some(PolyhedralProjection {
                        point: DenseVector::from_vec_unchecked(z),
                        active: subset,
                        kkt_residual: kkt,
                    });
                }
                if !next_combination(&mut pick, pool.len()) {
                    break;
                }
            }
        }
        None
    }

    /// Inequality rows that are nearly tight at an approximate projection
    /// computed by dual coordinate ascent (Hildreth's method).
    fn near_active(&self, x: &[f64]) -> Vec<usize> {
        let (c, d) = self.poly.ineq();
        let (a, b) = self.poly.eq();
        let rows: Vec<(&[f64], f64, bool)> = (0..a.rows())
            .map(|i| (a.row(i), b[i], false))
            .chain((0..c.rows()).map(|i| (c.row(i), d[i], true)))
            .collect();
        let sq: Vec<f64> = rows.iter().map(|(r, _, _)| dot(r, r)).collect();
        let mut z = x.to_vec();
        let mut mu = vec![0.0; rows.len()];
        let scale = 1.0 + norm(x);
        for _ in 0..HILDRETH_PASSES {
            let mut change = 0.0f64;
            for (i, (row, rhs, ineq)) in rows.iter().enumerate() {
                if sq[i] == 0.0 {
                    continue;
                }
                let mut next = mu[i] + (dot(row, &z) - rhs) / sq[i];
                if *ineq {
                    next = next.max(0.0);
                }
                let delta = next - mu[i];
                if delta != 0.0 {
                    for (zj, rj) in z.iter_mut().zip(row.iter()) {
                        *zj -= delta * rj;
                    }
                    mu[i] = next;
                    change = change.max(libm::fabs(delta) * libm::sqrt(sq[i]));
                }
            }
            if change <= 1e-14 * scale {
                break;
            }
        }
        let zn = norm(&z);
        (0..c.rows())
            .filter(|&i| dot(c.row(i), &z) - d[i] >= -1e-7 * (1.0 + libm::fabs(d[i]) + self.row_norms[i] * zn))
            .collect()
    }
}

/// Advances `subset` to the next size-k combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact projection onto `{x : C x ≤ d, A_eq x = b_eq}`.
pub fn project_polyhedron(
    c: &DenseMatrix,
    d: &[f64],
    a_eq: &DenseMatrix,
    b_eq: &[f64],
    x: &[f64],
) -> Result<DenseVector> {
    let poly = Polyhedron::new(c.clone(), d.to_vec(), a_eq.clone(), b_eq.to_vec())?;
    Ok(PolyhedronProjector::new(poly)?.project(x)?.point)
}
