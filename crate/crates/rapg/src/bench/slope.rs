//! Convergence-rate measurement: least-squares slope of the log objective
//! gap over the trailing iterations, and the condition-number transform that
//! the scaling study regresses against.

use crate::error::{Error, Result};
use crate::solvers::{RapgParams, TraceRow};

/// Result of fitting log(F(x_k) - F*) against k on the trace tail.
#[derive(Clone, Copy, Debug)]
pub struct SlopeFit {
    /// Fitted slope s.
    pub s: f64,
    /// Approximate condition number (theta L - rho) xi / (mu - rho).
    pub kappa: f64,
    /// 1 / (1 - e^s): proportional to sqrt(kappa) for the accelerated
    /// method and to kappa for the baseline.
    pub transformed: f64,
    /// Number of tail points used.
    pub points: usize,
}

/// Plain least squares slope and intercept of y against x.
pub fn least_squares_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Fits the last 20% of the iteration trace. Needs at least 50 iterations
/// and 10 tail points, and a strictly positive gap on every fitted point.
pub fn fit_slope(rows: &[TraceRow], f_star: f64, params: &RapgParams) -> Result<SlopeFit> {
    if rows.len() < 50 {
        return Err(Error::InsufficientTail { points: rows.len(), needed: 50 });
    }
    let start = rows.len() - (rows.len() as f64 * 0.2).ceil() as usize;
    let tail = &rows[start..];
    if tail.len() < 10 {
        return Err(Error::InsufficientTail { points: tail.len(), needed: 10 });
    }
    let mut xs = Vec::with_capacity(tail.len());
    let mut ys = Vec::with_capacity(tail.len());
    for row in tail {
        let gap = row.f - f_star;
        if !(gap > 0.0) {
            return Err(Error::NonPositiveGap);
        }
        xs.push(row.k as f64);
        ys.push(gap.ln());
    }
    let (s, _) = least_squares_line(&xs, &ys);
    let kappa = (params.theta_l() - params.rho) * params.xi / (params.mu - params.rho);
    let transformed = 1.0 / (1.0 - s.exp());
    Ok(SlopeFit {
        s,
        kappa,
        transformed,
        points: tail.len(),
    })
}
