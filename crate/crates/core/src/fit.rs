//! Empirical-Bayes point estimate of `(alpha, theta)`: maximize the EPPF of
//! the observed multiplicities over a box, by a coarse grid followed by a
//! compass-search polish.

use crate::error::{Error, Result};
use crate::params::{PDParams, PartitionData};
use crate::prior::eppf_log;

/// Search box. `theta` ranges over `[-alpha + theta_margin, theta_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitBounds {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub theta_margin: f64,
    pub theta_max: f64,
}

impl Default for FitBounds {
    fn default() -> Self {
        FitBounds { alpha_min: 0.01, alpha_max: 0.99, theta_margin: 0.01, theta_max: 50.0 }
    }
}

impl FitBounds {
    fn validate(&self) -> Result<()> {
        let ok = self.alpha_min > 0.0
            && self.alpha_max < 1.0
            && self.alpha_min < self.alpha_max
            && self.theta_margin > 0.0
            && self.theta_max > -self.alpha_min + self.theta_margin;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("fit box {self:?} is not strictly inside the domain")))
        }
    }

    fn theta_min(&self, alpha: f64) -> f64 {
        -alpha + self.theta_margin
    }

    fn clamp(&self, alpha: f64, theta: f64) -> (f64, f64) {
        let a = alpha.clamp(self.alpha_min, self.alpha_max);
        (a, theta.clamp(self.theta_min(a), self.theta_max))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryEdge {
    AlphaLower,
    AlphaUpper,
    ThetaLower,
    ThetaUpper,
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub params: PDParams,
    pub log_likelihood: f64,
    /// Best value over the coarse grid; the polish never ends below it.
    pub grid_best: f64,
    /// Box edges the maximizer sits on (within the search tolerance).
    pub boundary: Vec<BoundaryEdge>,
    /// Accepted points `(alpha, theta, loglik)` of the polish, in order.
    pub path: Vec<(f64, f64, f64)>,
    pub evaluations: usize,
}

const GRID_ALPHA: usize = 41;
const GRID_THETA: usize = 41;

pub fn fit_params(data: &PartitionData, bounds: FitBounds, tol: f64) -> Result<FitResult> {
    bounds.validate()?;
    if data.k() < 2 {
        return Err(Error::Unidentifiable(
            "at least two species are needed to fit (alpha, theta)".into(),
        ));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut evaluations = 0usize;
    let mut objective = |a: f64, t: f64| -> f64 {
        evaluations += 1;
        // clamped points are always valid
        let p = PDParams::new(a, t).expect("clamped point inside domain");
        eppf_log(&p, data)
    };

    // Grid: alpha uniform, theta + alpha geometric so small theta is resolved.
    let mut best = (f64::NAN, f64::NAN, f64::NEG_INFINITY);
    for i in 0..GRID_ALPHA {
        let a = bounds.alpha_min + (bounds.alpha_max - bounds.alpha_min) * i as f64 / (GRID_ALPHA - 1) as f64;
        let lo = bounds.theta_margin;
        let hi = bounds.theta_max + a;
        for j in 0..GRID_THETA {
            let shifted = lo * (hi / lo).powf(j as f64 / (GRID_THETA - 1) as f64);
            let (a, t) = bounds.clamp(a, shifted - a);
            let v = objective(a, t);
            if v > best.2 {
                best = (a, t, v);
            }
        }
    }
    let grid_best = best.2;

    let mut path = vec![best];
    let mut step_a = (bounds.alpha_max - bounds.alpha_min) / (GRID_ALPHA - 1) as f64;
    let mut step_t = (bounds.theta_max.abs() + 1.0) / (GRID_THETA - 1) as f64;
    let directions = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)];
    while step_a > tol || step_t > tol {
        let mut improved = false;
        for &(da, dt) in &directions {
            let (a, t) = bounds.clamp(best.0 + da * step_a, best.1 + dt * step_t);
            if (a, t) == (best.0, best.1) {
                continue;
            }
            let v = objective(a, t);
            if v > best.2 {
                best = (a, t, v);
                path.push(best);
                improved = true;
                break;
            }
        }
        if !improved {
            step_a *= 0.5;
            step_t *= 0.5;
        }
    }

    let (a, t, ll) = best;
    let near = |x: f64, edge: f64| (x - edge).abs() <= 2.0 * tol;
    let mut boundary = Vec::new();
    if near(a, bounds.alpha_min) {
        boundary.push(BoundaryEdge::AlphaLower);
    }
    if near(a, bounds.alpha_max) {
        boundary.push(BoundaryEdge::AlphaUpper);
    }
    if near(t, bounds.theta_min(a)) {
        boundary.push(BoundaryEdge::ThetaLower);
    }
    if near(t, bounds.theta_max) {
        boundary.push(BoundaryEdge::ThetaUpper);
    }
    Ok(FitResult {
        params: PDParams::new(a, t)?,
        log_likelihood: ll,
        grid_best,
        boundary,
        path,
        evaluations,
    })
}
