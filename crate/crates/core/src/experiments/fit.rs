use super::sweep::ResultRow;
use crate::error::{FrameError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateModel {
    /// `err ~ C theta^{-n}`; fits log(err) against n.
    Exponential,
    /// `err ~ C n^{-k}`; fits log(err) against log(n).
    Algebraic,
}

impl RateModel {
    fn abscissa(self, n: usize) -> f64 {
        match self {
            RateModel::Exponential => n as f64,
            RateModel::Algebraic => (n as f64).ln(),
        }
    }
}

/// Degree range used for a fit; `n_max = None` means "up to where the plateau starts".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FitWindow {
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    /// `theta` for the exponential model, `k` for the algebraic one.
    pub exponent: f64,
    pub slope: f64,
    pub intercept: f64,
    /// RMS misfit of log(err) about the line.
    pub residual: f64,
    pub r_squared: f64,
    pub points: usize,
    pub n_range: (usize, usize),
}

/// `(n, uniform_error)` pairs from rows that completed.
pub fn points_from_rows(rows: &[ResultRow]) -> Vec<(usize, f64)> {
    rows.iter().filter(|r| r.status.is_ok()).map(|r| (r.n, r.uniform_error)).collect()
}

/// Median error of the last three points; the level the error settles at.
pub fn final_level(points: &[(usize, f64)]) -> Option<f64> {
    if points.len() < 3 {
        return None;
    }
    let mut tail: Vec<f64> = points[points.len() - 3..].iter().map(|p| p.1).collect();
    tail.sort_by(f64::total_cmp);
    Some(tail[1])
}

struct Line {
    slope: f64,
    intercept: f64,
    residual: f64,
    r_squared: f64,
}

fn least_squares(xy: &[(f64, f64)]) -> Line {
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let sse: f64 = xy.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Line { slope, intercept, residual: (sse / k).sqrt(), r_squared: if syy > 0.0 { 1.0 - sse / syy } else { 1.0 } }
}

fn log_points(points: &[(usize, f64)], model: RateModel) -> Vec<(f64, f64)> {
    points.iter().filter(|p| p.1.is_finite() && p.1 > 0.0).map(|&(n, e)| (model.abscissa(n), e.ln())).collect()
}

/// Plateau level, if the error has stopped decaying.
///
/// The last third of the points (at least three) is compared with the rest: a
/// plateau is present when the tail decays at less than a fifth of the earlier
/// rate, or grows. Its level is [`final_level`]; points within a factor 5 of it
/// count as plateau points.
pub fn detect_plateau(points: &[(usize, f64)], model: RateModel) -> Option<f64> {
    let xy = log_points(points, model);
    if xy.len() < 6 {
        return None;
    }
    let split = xy.len() - (xy.len() / 3).max(3);
    let head = least_squares(&xy[..split]).slope;
    let tail = least_squares(&xy[split..]).slope;
    if head < 0.0 && tail > 0.2 * head {
        final_level(points)
    } else {
        None
    }
}

/// Least-squares rate over the pre-plateau window.
///
/// With an explicit `n_max` the window must not reach into the plateau (any
/// error within 10x of the plateau level is a window error); without one, the
/// window stops before such points.
pub fn fit_rate(points: &[(usize, f64)], model: RateModel, window: FitWindow) -> Result<RateFit> {
    let plateau = detect_plateau(points, model);
    let lo = window.n_min.unwrap_or(0);
    let hi = window.n_max.unwrap_or(usize::MAX);
    let mut chosen: Vec<(usize, f64)> = Vec::new();
    for &(n, e) in points.iter().filter(|p| p.0 >= lo && p.0 <= hi) {
        if let Some(level) = plateau {
            if e <= 10.0 * level {
                if window.n_max.is_some() {
                    return Err(FrameError::Window(format!(
                        "n = {n} has error {e:.3e}, within 10x of the plateau {level:.3e}"
                    )));
                }
                break;
            }
        }
        chosen.push((n, e));
    }
    let xy = log_points(&chosen, model);
    if xy.len() < 4 {
        return Err(FrameError::Window(format!("need at least 4 pre-plateau points, have {}", xy.len())));
    }
    let line = least_squares(&xy);
    let exponent = match model {
        RateModel::Exponential => (-line.slope).exp(),
        RateModel::Algebraic => -line.slope,
    };
    Ok(RateFit {
        exponent,
        slope: line.slope,
        intercept: line.intercept,
        residual: line.residual,
        r_squared: line.r_squared,
        points: xy.len(),
        n_range: (chosen[0].0, chosen[chosen.len() - 1].0),
    })
}
