//! Theoretical rates of the solvers and their comparison with measured traces.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::solvers::Trace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMethod {
    /// Gradient method on a quasi-strongly convex objective.
    GmQs,
    /// Gradient method under quadratic functional growth.
    GmF,
    /// Gradient method without growth: `L_f R²/(2k)`.
    GmSublinear,
    FgmConst,
    FgmThetaSublinear,
    Rfgm,
    Fdm,
}

impl RateMethod {
    pub fn name(self) -> &'static str {
        match self {
            RateMethod::GmQs => "gm-qs",
            RateMethod::GmF => "gm-f",
            RateMethod::GmSublinear => "gm-sublinear",
            RateMethod::FgmConst => "fgm-const",
            RateMethod::FgmThetaSublinear => "fgm-theta",
            RateMethod::Rfgm => "rfgm",
            RateMethod::Fdm => "fdm",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            RateMethod::GmQs,
            RateMethod::GmF,
            RateMethod::GmSublinear,
            RateMethod::FgmConst,
            RateMethod::FgmThetaSublinear,
            RateMethod::Rfgm,
            RateMethod::Fdm,
        ]
        .into_iter()
        .find(|m| m.name() == name)
    }
}

/// Starting quantity the bounds scale with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateInit {
    /// `‖x⁰ − x̄⁰‖²`.
    pub dist0_sq: Option<f64>,
    /// `f(x⁰) − f*`.
    pub f_gap0: Option<f64>,
}

/// Parameters of the feasible descent method: sufficient decrease `L`,
/// perturbation bound `β` and step bound `L̄_f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdmParams {
    pub l: f64,
    pub beta: f64,
    pub lbar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateModel {
    pub method: RateMethod,
    pub mu: f64,
    pub lipschitz: f64,
    pub init: RateInit,
    /// Restart fraction `c` and interval `K`.
    pub restart: Option<(f64, usize)>,
    /// Defaults to `L = L̄_f = L_f`, `β = 0`.
    pub fdm: Option<FdmParams>,
}

impl RateModel {
    pub fn new(method: RateMethod, mu: f64, lipschitz: f64) -> Self {
        Self {
            method,
            mu,
            lipschitz,
            init: RateInit {
                dist0_sq: None,
                f_gap0: None,
            },
            restart: None,
            fdm: None,
        }
    }

    pub fn with_dist0_sq(mut self, d: f64) -> Self {
        self.init.dist0_sq = Some(d);
        self
    }

    pub fn with_f_gap0(mut self, f: f64) -> Self {
        self.init.f_gap0 = Some(f);
        self
    }

    pub fn with_restart(mut self, c: f64, k: usize) -> Self {
        self.restart = Some((c, k));
        self
    }

    pub fn with_fdm(mut self, params: FdmParams) -> Self {
        self.fdm = Some(params);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::InvalidParameter("mu must be positive"));
        }
        if !(self.lipschitz > 0.0) || !self.lipschitz.is_finite() {
            return Err(Error::InvalidParameter("L_f must be positive"));
        }
        for v in [self.init.dist0_sq, self.init.f_gap0].into_iter().flatten() {
            if !(v >= 0.0) {
                return Err(Error::InvalidParameter("initial gap must be nonnegative"));
            }
        }
        Ok(())
    }

    fn dist0_sq(&self) -> Result<f64> {
        self.init
            .dist0_sq
            .ok_or(Error::InvalidParameter("bound needs the initial distance to X*"))
    }

    fn f_gap0(&self) -> Result<f64> {
        self.init
            .f_gap0
            .ok_or(Error::InvalidParameter("bound needs the initial function gap"))
    }
}

/// Per-iteration contraction factor of a linearly convergent method.
pub fn theoretical_factor(m: &RateModel) -> Result<f64> {
    m.validate()?;
    let mu = m.mu;
    let bounded_mu = || {
        if mu > 1.0 {
            Err(Error::InvalidParameter("this rate needs mu ≤ 1"))
        } else {
            Ok(())
        }
    };
    match m.method {
        RateMethod::GmQs => {
            bounded_mu()?;
            Ok((1.0 - mu) / (1.0 + mu))
        }
        RateMethod::GmF => Ok(1.0 / (1.0 + mu)),
        RateMethod::FgmConst => {
            bounded_mu()?;
            Ok(1.0 - libm::sqrt(mu))
        }
        RateMethod::Rfgm => match m.restart {
            Some((c, k)) if c > 0.0 && c < 1.0 && k > 0 => Ok(libm::pow(c, 1.0 / k as f64)),
            Some(_) => Err(Error::InvalidParameter("restart needs c in (0, 1) and K ≥ 1")),
            None => Ok(libm::exp(-libm::sqrt(mu) / core::f64::consts::E)),
        },
        RateMethod::Fdm => {
            let l_f = m.lipschitz;
            let FdmParams { l, beta, lbar } = m.fdm.unwrap_or(FdmParams {
                l: l_f,
                beta: 0.0,
                lbar: l_f,
            });
            let kappa = mu * l_f;
            let denom = 4.0 * (l_f + lbar + beta * lbar) * (l_f + lbar + beta * lbar);
            Ok(1.0 / (1.0 + l * kappa / denom))
        }
        RateMethod::GmSublinear | RateMethod::FgmThetaSublinear => {
            Err(Error::Unsupported("sublinear method has no contraction factor"))
        }
    }
}

/// `μ/((1 − μ)^{−k} − 1)`, continuous as `μ → 0` where it tends to `1/k`.
pub fn gm_qs_value_factor(mu: f64, k: usize) -> f64 {
    if mu >= 1.0 {
        return 0.0;
    }
    let growth = libm::expm1(-(k as f64) * libm::log1p(-mu));
    mu / growth
}

/// `min_{t=0..k−1} 1/((1 + μ)^t (k − t))`.
pub fn gm_f_interpolated_factor(mu: f64, k: usize) -> f64 {
    let log_base = libm::log1p(mu);
    (0..k)
        .map(|t| libm::exp(-(t as f64) * log_base) / (k - t) as f64)
        .fold(f64::INFINITY, f64::min)
}

/// Upper bound on `f(x^k) − f*` at iteration `k ≥ 1`.
pub fn bound_curve(m: &RateModel, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("bound curves start at k = 1"));
    }
    m.validate()?;
    let half_lr2 = || -> Result<f64> { Ok(0.5 * m.lipschitz * m.dist0_sq()?) };
    let kf = k as f64;
    match m.method {
        RateMethod::GmQs => {
            let q = theoretical_factor(m)?;
            let stepwise = libm::pow(q, (k - 1) as f64);
            Ok(half_lr2()? * gm_qs_value_factor(m.mu, k).min(stepwise))
        }
        RateMethod::GmF => Ok(half_lr2()? * gm_f_interpolated_factor(m.mu, k)),
        RateMethod::GmSublinear => Ok(half_lr2()? / kf),
        RateMethod::FgmThetaSublinear => Ok(4.0 * half_lr2()? / ((kf + 1.0) * (kf + 1.0))),
        RateMethod::FgmConst => Ok(libm::pow(theoretical_factor(m)?, kf) * 2.0 * m.f_gap0()?),
        RateMethod::Rfgm | RateMethod::Fdm => Ok(libm::pow(theoretical_factor(m)?, kf) * m.f_gap0()?),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    FGap,
    DistSq,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::FGap => "f_gap",
            Metric::DistSq => "dist_sq",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "f_gap" => Some(Metric::FGap),
            "dist_sq" => Some(Metric::DistSq),
            _ => None,
        }
    }
}

/// `(k, value)` pairs of a trace column.
pub fn metric_series(t: &Trace, metric: Metric) -> Result<Vec<(usize, f64)>> {
    t.records
        .iter()
        .map(|r| {
            let v = match metric {
                Metric::FGap => r.f_gap,
                Metric::DistSq => r.dist_sq,
            };
            v.map(|v| (r.k, v)).ok_or(Error::InvalidParameter("metric column is absent from the trace"))
        })
        .collect()
}

/// Per-step factor `r` from a least-squares fit of `log v_k ≈ a + k log r`.
///
/// The default window is the middle 60% of the series. A window reaching
/// nonpositive values is cut just before the first one.
pub fn empirical_rate(series: &[(usize, f64)], window: Option<(usize, usize)>) -> Result<f64> {
    let n = series.len();
    let (lo, hi) = window.unwrap_or((n / 5, n - n / 5));
    if lo >= hi || hi > n {
        return Err(Error::InvalidParameter("empty or out-of-range window"));
    }
    let mut slice = &series[lo..hi];
    if let Some(bad) = slice.iter().position(|&(_, v)| !(v > 0.0) || !v.is_finite()) {
        slice = &slice[..bad];
    }
    if slice.len() < 2 {
        return Err(Error::InvalidParameter("fewer than two positive values in the window"));
    }
    let m = slice.len() as f64;
    let mean_k = slice.iter().map(|&(k, _)| k as f64).sum::<f64>() / m;
    let mean_y = slice.iter().map(|&(_, v)| libm::log(v)).sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(k, v) in slice {
        let dk = k as f64 - mean_k;
        sxy += dk * (libm::log(v) - mean_y);
        sxx += dk * dk;
    }
    Ok(libm::exp(sxy / sxx))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub method: RateMethod,
    pub metric: Metric,
    /// `(k, margin)`; positive margins mean the bound holds with room.
    pub margins: Vec<(usize, f64)>,
    pub worst_margin: f64,
    pub empirical_factor: Option<f64>,
    pub theoretical_factor: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares a trace with the model's bound.
///
/// * Distances for the gradient method are checked per step:
///   margin `q − d_{k+1}/d_k`, skipping `d_k ≤ floor`.
/// * Function gaps are checked against the envelope at every `k ≥ 1` with
///   margin `(bound − f)/max(bound, 1e-14·f₀)`; the restarted method is
///   checked at restart records only, against `c^p f₀`.
pub fn verify_bound(t: &Trace, m: &RateModel, metric: Metric, tol: f64) -> Result<RateReport> {
    verify_bound_with_floor(t, m, metric, tol, 0.0)
}

pub fn verify_bound_with_floor(
    t: &Trace,
    m: &RateModel,
    metric: Metric,
    tol: f64,
    floor: f64,
) -> Result<RateReport> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter("tolerance must be nonnegative"));
    }
    m.validate()?;
    let series = metric_series(t, metric)?;
    let factor = theoretical_factor(m).ok();
    let mut margins = Vec::new();
    match (metric, m.method) {
        (Metric::DistSq, RateMethod::GmQs | RateMethod::GmF) => {
            let q = theoretical_factor(m)?;
            for w in series.windows(2) {
                let ((_, d0), (k1, d1)) = (w[0], w[1]);
                if d0 > floor {
                    margins.push((k1, q - d1 / d0));
                }
            }
        }
        (Metric::DistSq, _) => {
            return Err(Error::Unsupported("distance bounds exist only for the gradient method"));
        }
        (Metric::FGap, RateMethod::Rfgm) => {
            let (c, _) = m
                .restart
                .unwrap_or((libm::exp(-2.0), 0));
            let f0 = m.f_gap0()?;
            let mut bound = f0;
            for (r, &(k, v)) in t.records.iter().zip(&series) {
                if r.restart {
                    bound *= c;
                    margins.push((k, relative_margin(bound, v, f0)));
                }
            }
        }
        (Metric::FGap, _) => {
            let scale0 = m
                .init
                .f_gap0
                .or(m.init.dist0_sq.map(|d| 0.5 * m.lipschitz * d))
                .unwrap_or(1.0);
            for &(k, v) in series.iter().filter(|(k, _)| *k >= 1) {
                margins.push((k, relative_margin(bound_curve(m, k)?, v, scale0)));
            }
        }
    }
    let worst_margin = margins.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
    Ok(RateReport {
        method: m.method,
        metric,
        passed: margins.is_empty() || worst_margin >= -tol,
        worst_margin,
        margins,
        empirical_factor: empirical_rate(&series, None).ok(),
        theoretical_factor: factor,
        tolerance: tol,
    })
}

fn relative_margin(bound: f64, value: f64, scale0: f64) -> f64 {
    (bound - value) / bound.max(1e-14 * scale0).max(f64::MIN_POSITIVE)
}
