//! Jacobi polynomials, their orthogonality constants, and the frame functions
//! obtained by stretching them onto an extended interval `[-gamma, gamma]`.
//!
//! Polynomials use the classical normalization `P_i(1) = binom(i + alpha, i)`.

use statrs::function::gamma::ln_gamma;

use crate::accurate::dot2;
use crate::error::{FrameError, Result};

/// The `(alpha, beta)` pair of the weight `(1 - x)^alpha (1 + x)^beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) || alpha <= -1.0 || beta <= -1.0 {
            return Err(FrameError::Parameter(format!(
                "Jacobi parameters must satisfy alpha, beta > -1 (got alpha = {alpha}, beta = {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Legendre weight, `alpha = beta = 0`.
    pub fn legendre() -> Self {
        Self { alpha: 0.0, beta: 0.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `max(alpha, beta)`, which governs sup-norm growth.
    pub fn mu(&self) -> f64 {
        self.alpha.max(self.beta)
    }

    /// The weight `(1 - x)^alpha (1 + x)^beta` on `[-1, 1]`.
    pub fn weight(&self, x: f64) -> f64 {
        (1.0 - x).powf(self.alpha) * (1.0 + x).powf(self.beta)
    }
}

/// Coefficients of `P_k = ((b_k x + c_k) P_{k-1} - d_k P_{k-2}) / a_k` for `k >= 2`.
#[inline]
fn recurrence(k: usize, a: f64, b: f64) -> (f64, f64, f64, f64) {
    let k = k as f64;
    let s = 2.0 * k + a + b;
    let lead = 2.0 * k * (k + a + b) * (s - 2.0);
    let slope = (s - 1.0) * s * (s - 2.0);
    let shift = (s - 1.0) * (a * a - b * b);
    let back = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    (lead, slope, shift, back)
}

#[inline]
fn degree_one(x: f64, a: f64, b: f64) -> f64 {
    (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0)
}

/// `P_i^{(alpha, beta)}(x)` by forward three-term recurrence.
pub fn jacobi_eval(i: usize, params: &JacobiParams, x: f64) -> f64 {
    let (a, b) = (params.alpha, params.beta);
    if i == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = degree_one(x, a, b);
    for k in 2..=i {
        let (lead, slope, shift, back) = recurrence(k, a, b);
        let next = ((slope * x + shift) * cur - back * prev) / lead;
        prev = cur;
        cur = next;
    }
    cur
}

/// Writes `P_0(x), ..., P_{out.len()-1}(x)` into `out`.
pub fn jacobi_eval_into(params: &JacobiParams, x: f64, out: &mut [f64]) {
    let (a, b) = (params.alpha, params.beta);
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = degree_one(x, a, b);
    for k in 2..out.len() {
        let (lead, slope, shift, back) = recurrence(k, a, b);
        out[k] = ((slope * x + shift) * out[k - 1] - back * out[k - 2]) / lead;
    }
}

/// `[P_0(x), ..., P_n(x)]` in a single recurrence pass.
pub fn jacobi_eval_all(n: usize, params: &JacobiParams, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    jacobi_eval_into(params, x, &mut out);
    out
}

/// `ln h_i`, the log of the squared weighted norm of `P_i` on `[-1, 1]`.
pub fn ln_norm_constant(i: usize, params: &JacobiParams) -> f64 {
    let (a, b) = (params.alpha, params.beta);
    let ln2 = std::f64::consts::LN_2;
    if i == 0 {
        // (a + b + 1) Gamma(a + b + 1) = Gamma(a + b + 2) keeps a + b = -1 finite.
        return (a + b + 1.0) * ln2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0);
    }
    let k = i as f64;
    (a + b + 1.0) * ln2 + ln_gamma(k + a + 1.0) + ln_gamma(k + b + 1.0)
        - (2.0 * k + a + b + 1.0).ln()
        - ln_gamma(k + 1.0)
        - ln_gamma(k + a + b + 1.0)
}

/// `h_i^{(alpha, beta)} = int_{-1}^{1} P_i(x)^2 (1 - x)^alpha (1 + x)^beta dx`.
pub fn norm_constant(i: usize, params: &JacobiParams) -> Result<f64> {
    let h = ln_norm_constant(i, params).exp();
    if h.is_finite() && h > 0.0 {
        Ok(h)
    } else {
        Err(FrameError::Overflow { degree: i, alpha: params.alpha, beta: params.beta })
    }
}

/// Largest `|P_i(x)|` over 4097 Chebyshev–Lobatto points of `[-1, 1]`.
pub fn sup_norm_growth_check(params: &JacobiParams, i: usize) -> f64 {
    const POINTS: usize = 4097;
    let step = std::f64::consts::PI / (POINTS - 1) as f64;
    (0..POINTS).map(|k| jacobi_eval(i, params, (k as f64 * step).cos()).abs()).fold(0.0, f64::max)
}

/// Orthonormal Jacobi polynomials of `[-gamma, gamma]`, truncated at degree `n`:
/// `phi_i(x) = P_i(x / gamma) / sqrt(gamma h_i)`.
#[derive(Debug, Clone)]
pub struct FrameSystem {
    params: JacobiParams,
    gamma: f64,
    max_degree: usize,
    scale: Vec<f64>,
}

impl FrameSystem {
    pub fn new(params: JacobiParams, gamma: f64, max_degree: usize) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(FrameError::Parameter(format!("extension factor gamma must exceed 1 (got {gamma})")));
        }
        Self::build(params, gamma, max_degree)
    }

    /// Like [`FrameSystem::new`] but admits `gamma = 1`, the plain orthonormal basis of `[-1, 1]`.
    pub fn with_unit_extension(params: JacobiParams, gamma: f64, max_degree: usize) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 1.0) {
            return Err(FrameError::Parameter(format!("gamma must be at least 1 (got {gamma})")));
        }
        Self::build(params, gamma, max_degree)
    }

    fn build(params: JacobiParams, gamma: f64, max_degree: usize) -> Result<Self> {
        let scale = (0..=max_degree)
            .map(|i| {
                let s = (-0.5 * (gamma.ln() + ln_norm_constant(i, &params))).exp();
                if s.is_finite() && s > 0.0 {
                    Ok(s)
                } else {
                    Err(FrameError::Overflow { degree: i, alpha: params.alpha, beta: params.beta })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, gamma, max_degree, scale })
    }

    pub fn params(&self) -> &JacobiParams {
        &self.params
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Number of frame functions, `n + 1`.
    pub fn len(&self) -> usize {
        self.max_degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `1 / sqrt(gamma h_i)` for each degree.
    pub fn scales(&self) -> &[f64] {
        &self.scale
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if x.abs() <= self.gamma {
            Ok(())
        } else {
            Err(FrameError::Domain { x, limit: self.gamma })
        }
    }

    /// `phi_i(x)` for `|x| <= gamma`.
    pub fn frame_eval(&self, i: usize, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        if i > self.max_degree {
            return Err(FrameError::Parameter(format!(
                "degree {i} exceeds the system's maximum degree {}",
                self.max_degree
            )));
        }
        Ok(jacobi_eval(i, &self.params, x / self.gamma) * self.scale[i])
    }

    /// Fills `out` (length `n + 1`) with `phi_0(x), ..., phi_n(x)`; no domain check.
    pub fn frame_row_into(&self, x: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.len());
        jacobi_eval_into(&self.params, x / self.gamma, out);
        for (v, s) in out.iter_mut().zip(&self.scale) {
            *v *= s;
        }
    }

    pub fn frame_row(&self, x: f64) -> Result<Vec<f64>> {
        self.check_domain(x)?;
        let mut out = vec![0.0; self.len()];
        self.frame_row_into(x, &mut out);
        Ok(out)
    }

    /// `sum_i c_i phi_i(x)`; `coeffs` may be shorter than `n + 1`.
    pub fn combine(&self, coeffs: &[f64], x: f64) -> Result<f64> {
        self.check_domain(x)?;
        if coeffs.len() > self.len() {
            return Err(FrameError::Shape { expected: self.len(), got: coeffs.len() });
        }
        let mut row = vec![0.0; coeffs.len()];
        if !row.is_empty() {
            jacobi_eval_into(&self.params, x / self.gamma, &mut row);
        }
        Ok(dot2(row.iter().zip(&self.scale).zip(coeffs).map(|((p, s), c)| (p * s, *c))))
    }
}
