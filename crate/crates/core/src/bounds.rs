//! Computable constants and error-bound evaluators for regularized frame
//! approximation.
//!
//! The theory bounds the uniform error by `c sqrt(m+1)` times a rate term plus
//! an epsilon term. The numerical constants (`c`, and `c_{k,gamma}`,
//! `c'_{k,gamma}` for finitely smooth functions) are never pinned down, so they
//! are caller inputs; every evaluator reports whether the defaults were used.
//! The suprema that define the stability constants are only estimated from
//! below by Monte Carlo sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FrameError, Result};
use crate::frame::{FrameConfig, FrameSolver};
use crate::orthopoly::{norm_constant, FrameSystem};
use crate::par::Execution;
use crate::sampling::dense_nodes;

/// Points used when maximising over `[-gamma, gamma]`.
pub const FRAME_CONSTANT_POINTS: usize = 8193;

/// `gamma + sqrt(gamma^2 - 1)`: parameter of the Bernstein ellipse whose
/// major semi-axis is `gamma`.
pub fn tau(gamma: f64) -> f64 {
    gamma + (gamma * gamma - 1.0).sqrt()
}

/// Bernstein ellipse `E_theta = {(z + 1/z)/2 : 1 <= |z| <= theta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinEllipse {
    theta: f64,
}

impl BernsteinEllipse {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta.is_finite() && theta > 1.0) {
            return Err(FrameError::Parameter(format!("Bernstein parameter must exceed 1 (got {theta})")));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Semi-axes `((theta + 1/theta)/2, (theta - 1/theta)/2)`.
    pub fn semi_axes(&self) -> (f64, f64) {
        let t = self.theta;
        (0.5 * (t + 1.0 / t), 0.5 * (t - 1.0 / t))
    }

    /// Largest ellipse avoiding a singularity at `z`: `theta = |z + sqrt(z^2 - 1)|`
    /// with the branch chosen so that `theta >= 1`.
    pub fn through_point(re: f64, im: f64) -> Result<Self> {
        // |z - 1| + |z + 1| = theta + 1/theta
        let s = ((re - 1.0).hypot(im) + (re + 1.0).hypot(im)) / 2.0;
        Self::new(s + (s * s - 1.0).sqrt())
    }
}

/// `max_{|x| <= gamma} (sum_{i<=n} phi_i(x)^2)^{1/2}`, maximised over Chebyshev–Lobatto
/// points of `[-gamma, gamma]` (dense near the endpoints, where the sum peaks).
pub fn frame_constant(sys: &FrameSystem) -> f64 {
    frame_constant_with(sys, Execution::default())
}

pub fn frame_constant_with(sys: &FrameSystem, exec: Execution) -> f64 {
    let step = std::f64::consts::PI / (FRAME_CONSTANT_POINTS - 1) as f64;
    let gamma = sys.gamma();
    exec.max_range(FRAME_CONSTANT_POINTS, |k| {
        let mut row = vec![0.0; sys.len()];
        sys.frame_row_into(gamma * (k as f64 * step).cos(), &mut row);
        row.iter().map(|v| v * v).sum::<f64>().sqrt()
    })
}

/// `sqrt(gamma h_0)`: bounds the weighted `L^2` norm on `[-gamma, gamma]` by the sup norm.
pub fn sup_to_l2_constant(sys: &FrameSystem) -> f64 {
    (sys.gamma() * h0(sys)).sqrt()
}

fn h0(sys: &FrameSystem) -> f64 {
    norm_constant(0, sys.params()).expect("h_0 is finite for valid parameters")
}

/// Result of the linear-oversampling test `m >= 36 n log(1/eps) / sqrt(gamma^2 - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OversamplingCheck {
    pub satisfied: bool,
    pub required_m: usize,
    /// Side condition `n >= sqrt(gamma^2 - 1) log(1/eps)`.
    pub degree_condition: bool,
    pub min_degree: f64,
}

pub fn oversampling_check(config: &FrameConfig) -> Result<OversamplingCheck> {
    oversampling_requirement(config.n(), config.sys().gamma(), config.epsilon()).map(|mut c| {
        c.satisfied = config.m() >= c.required_m;
        c
    })
}

pub fn oversampling_requirement(n: usize, gamma: f64, epsilon: f64) -> Result<OversamplingCheck> {
    let e_inv = (-1.0f64).exp();
    if !(epsilon > 0.0 && epsilon <= e_inv * (1.0 + 1e-12)) {
        return Err(FrameError::Parameter(format!("oversampling condition needs epsilon in (0, 1/e] (got {epsilon})")));
    }
    if gamma.is_nan() || gamma <= 1.0 {
        return Err(FrameError::Parameter(format!("oversampling condition needs gamma > 1 (got {gamma})")));
    }
    let log_inv = -epsilon.ln();
    let root = (gamma * gamma - 1.0).sqrt();
    let exact = 36.0 * n as f64 * log_inv / root;
    // Relative slack absorbs rounding in log and sqrt at exact integers.
    let required_m = (exact * (1.0 - 1e-12)).ceil().max(0.0) as usize;
    let min_degree = root * log_inv;
    Ok(OversamplingCheck {
        satisfied: false,
        required_m,
        degree_condition: n as f64 >= min_degree * (1.0 - 1e-12),
        min_degree,
    })
}

/// `eps' = sqrt(2) c_frame eps`, the tolerance under which the stability theory applies.
pub fn effective_epsilon(sys: &FrameSystem, epsilon: f64) -> f64 {
    std::f64::consts::SQRT_2 * frame_constant(sys) * epsilon
}

/// Which side of `mu = -1/2` the parameters fall on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuRegime {
    /// `mu >= -1/2` (the sup-norm asymptotics use strict `>`; the boundary value
    /// gives the same power `n^{1/2}` either way).
    AtLeastMinusHalf,
    BelowMinusHalf,
}

impl MuRegime {
    pub fn of(sys: &FrameSystem) -> Self {
        if sys.params().mu() >= -0.5 {
            MuRegime::AtLeastMinusHalf
        } else {
            MuRegime::BelowMinusHalf
        }
    }
}

/// Growth factor multiplying epsilon in the analytic bounds: `n^{mu+1}` or `n^{1/2}`.
fn analytic_growth(sys: &FrameSystem, n: usize) -> f64 {
    let n = n as f64;
    match MuRegime::of(sys) {
        MuRegime::AtLeastMinusHalf => n.powf(sys.params().mu() + 1.0),
        MuRegime::BelowMinusHalf => n.sqrt(),
    }
}

/// Which geometric constant a bound picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantChoice {
    /// `4 / (theta - 1)`, used when the ratio constant is `<= 1`.
    First,
    /// The `h_0`-dependent constant, used when the ratio constant is `> 1`.
    Second,
}

/// A bound of the form `prefactor * (rate_term + epsilon_term)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundTerms {
    pub prefactor: f64,
    pub rate_term: f64,
    pub epsilon_term: f64,
    pub mu_regime: MuRegime,
    /// True when every unknown numerical constant was left at its default of 1.
    pub default_constants: bool,
}

impl BoundTerms {
    pub fn total(&self) -> f64 {
        self.prefactor * (self.rate_term + self.epsilon_term)
    }

    /// True once the epsilon term dominates and the bound has stopped decreasing in `n`.
    pub fn epsilon_dominated(&self) -> bool {
        self.epsilon_term >= self.rate_term
    }
}

/// Analytic-function bound together with the constants it used.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticBound {
    pub terms: BoundTerms,
    pub first_constant: f64,
    pub second_constant: f64,
    pub ratio_constant: f64,
    pub choice: ConstantChoice,
}

/// `G_1 = 4 / (theta - 1)`.
pub fn g1(theta: f64) -> f64 {
    4.0 / (theta - 1.0)
}

/// `G_2 = 2 theta sqrt(h_0) / (theta - tau)`.
pub fn g2(theta: f64, sys: &FrameSystem) -> f64 {
    2.0 * theta * h0(sys).sqrt() / (theta - tau(sys.gamma()))
}

/// `G_3 = G_2 / G_1 = theta (theta - 1) sqrt(h_0) / (2 (theta - tau))`.
pub fn g3(theta: f64, sys: &FrameSystem) -> f64 {
    theta * (theta - 1.0) * h0(sys).sqrt() / (2.0 * (theta - tau(sys.gamma())))
}

/// `H_1 = 4 / (theta - 1)`.
pub fn h1(theta: f64) -> f64 {
    4.0 / (theta - 1.0)
}

/// `H_2 = 2 tau sqrt(h_0) / (tau - theta)`.
pub fn h2(theta: f64, sys: &FrameSystem) -> f64 {
    let t = tau(sys.gamma());
    2.0 * t * h0(sys).sqrt() / (t - theta)
}

/// `H_3 = H_2 / H_1 = tau (theta - 1) sqrt(h_0) / (2 (tau - theta))`.
pub fn h3(theta: f64, sys: &FrameSystem) -> f64 {
    let t = tau(sys.gamma());
    t * (theta - 1.0) * h0(sys).sqrt() / (2.0 * (t - theta))
}

/// Error bound for `f` analytic inside a Bernstein ellipse that covers
/// `[-gamma, gamma]` (`theta > tau`):
/// `c sqrt(m+1) ||f||_E G (theta^{-n} + n^{mu+1} eps)`.
pub fn analytic_bound_outer(
    ellipse: BernsteinEllipse,
    config: &FrameConfig,
    f_sup: f64,
    c: f64,
) -> Result<AnalyticBound> {
    let sys = config.sys();
    let theta = ellipse.theta();
    let t = tau(sys.gamma());
    if theta <= t {
        return Err(FrameError::Regime(format!("theta = {theta} does not exceed tau = {t}; use analytic_bound_inner")));
    }
    let (first, second, ratio) = (g1(theta), g2(theta, sys), g3(theta, sys));
    let (choice, constant) =
        if ratio <= 1.0 { (ConstantChoice::First, first) } else { (ConstantChoice::Second, second) };
    let n = config.n();
    Ok(AnalyticBound {
        terms: BoundTerms {
            prefactor: c * ((config.m() + 1) as f64).sqrt() * f_sup * constant,
            rate_term: theta.powi(-(n as i32)),
            epsilon_term: analytic_growth(sys, n) * config.epsilon(),
            mu_regime: MuRegime::of(sys),
            default_constants: c == 1.0,
        },
        first_constant: first,
        second_constant: second,
        ratio_constant: ratio,
        choice,
    })
}

/// Error bound for `f` analytic only in a smaller ellipse (`1 < theta < tau`):
/// `c sqrt(m+1) ||f||_E H (theta^{-n} + (1 + n^{mu+1}) eps^{log theta / log tau})`.
pub fn analytic_bound_inner(
    ellipse: BernsteinEllipse,
    config: &FrameConfig,
    f_sup: f64,
    c: f64,
) -> Result<AnalyticBound> {
    let sys = config.sys();
    let theta = ellipse.theta();
    let t = tau(sys.gamma());
    if theta >= t {
        return Err(FrameError::Regime(format!("theta = {theta} is not below tau = {t}; use analytic_bound_outer")));
    }
    let (first, second, ratio) = (h1(theta), h2(theta, sys), h3(theta, sys));
    let (choice, constant) =
        if ratio <= 1.0 { (ConstantChoice::First, first) } else { (ConstantChoice::Second, second) };
    let n = config.n();
    Ok(AnalyticBound {
        terms: BoundTerms {
            prefactor: c * ((config.m() + 1) as f64).sqrt() * f_sup * constant,
            rate_term: theta.powi(-(n as i32)),
            epsilon_term: (1.0 + analytic_growth(sys, n)) * config.epsilon().powf(limiting_exponent(theta, t)),
            mu_regime: MuRegime::of(sys),
            default_constants: c == 1.0,
        },
        first_constant: first,
        second_constant: second,
        ratio_constant: ratio,
        choice,
    })
}

/// `log theta / log tau`: the power of epsilon reachable when the analyticity
/// region does not cover the extended interval.
pub fn limiting_exponent(theta: f64, tau: f64) -> f64 {
    theta.ln() / tau.ln()
}

/// Unknown constants of the finite-smoothness bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessConstants {
    pub c: f64,
    pub c_k: f64,
    pub c_k_prime: f64,
}

impl Default for SmoothnessConstants {
    fn default() -> Self {
        Self { c: 1.0, c_k: 1.0, c_k_prime: 1.0 }
    }
}

/// Error bound for `f in C^k`:
/// `4 c_k c'_k c sqrt(m+1) ||f||_{C^k} (n^{-k} + sqrt(h_0)/(4 c'_k) n^mu eps)`,
/// with `n^{1/2}` replacing `n^mu` when `mu < -1/2`.
pub fn differentiable_bound(k: u32, config: &FrameConfig, f_norm: f64, consts: SmoothnessConstants) -> BoundTerms {
    let sys = config.sys();
    let n = config.n().max(1) as f64;
    let growth = match MuRegime::of(sys) {
        MuRegime::AtLeastMinusHalf => n.powf(sys.params().mu()),
        MuRegime::BelowMinusHalf => n.sqrt(),
    };
    BoundTerms {
        prefactor: 4.0 * consts.c_k * consts.c_k_prime * consts.c * ((config.m() + 1) as f64).sqrt() * f_norm,
        rate_term: n.powi(-(k as i32)),
        epsilon_term: h0(sys).sqrt() / (4.0 * consts.c_k_prime) * growth * config.epsilon(),
        mu_regime: MuRegime::of(sys),
        default_constants: consts == SmoothnessConstants::default(),
    }
}

/// General bound `2 c sqrt(m+1) (||f - p|| + sqrt(gamma h_0)/2 c_frame eps ||p||_{[-gamma,gamma]})`
/// for a chosen comparison polynomial `p`.
///
/// The displayed form of this bound omits the `sqrt(gamma)` factor and replaces
/// `c_frame` by its growth order; that variant is returned as `displayed_epsilon_term`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralBound {
    pub terms: BoundTerms,
    pub displayed_epsilon_term: f64,
}

pub fn general_bound(config: &FrameConfig, best_error: f64, p_sup_extended: f64, c: f64) -> GeneralBound {
    let sys = config.sys();
    let root_h0 = h0(sys).sqrt();
    let eps = config.epsilon();
    GeneralBound {
        terms: BoundTerms {
            prefactor: 2.0 * c * ((config.m() + 1) as f64).sqrt(),
            rate_term: best_error,
            epsilon_term: (sys.gamma()).sqrt() * root_h0 / 2.0 * frame_constant(sys) * eps * p_sup_extended,
            mu_regime: MuRegime::of(sys),
            default_constants: c == 1.0,
        },
        displayed_epsilon_term: root_h0 / 2.0 * analytic_growth(sys, config.n()) * eps * p_sup_extended,
    }
}

/// `c sqrt(m+1)`, the condition-number ceiling under the oversampling assumption.
pub fn condition_bound(config: &FrameConfig, c: f64) -> f64 {
    c * ((config.m() + 1) as f64).sqrt()
}

/// Snapshot of the constants and regime flags for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub m: usize,
    pub gamma: f64,
    pub epsilon: f64,
    pub c_frame: f64,
    pub sup_to_l2: f64,
    pub epsilon_prime: f64,
    pub tau: f64,
    pub mu_regime: MuRegime,
    pub oversampling: Option<OversamplingCheck>,
    pub analytic: Option<AnalyticBound>,
    /// The theory's numerical constants were not supplied.
    pub unknown_constants: bool,
    /// The general bound's displayed and derived forms differ by `sqrt(gamma)`.
    pub sqrt_gamma_discrepancy: bool,
}

/// Collects the report; `theta`, when given, selects the outer or inner analytic bound
/// (with `||f||_E = 1`).
pub fn bound_report(config: &FrameConfig, theta: Option<f64>, c: Option<f64>) -> Result<BoundReport> {
    let sys = config.sys();
    let c_frame = frame_constant(sys);
    let t = tau(sys.gamma());
    let cval = c.unwrap_or(1.0);
    let analytic = match theta {
        Some(th) if th > t => Some(analytic_bound_outer(BernsteinEllipse::new(th)?, config, 1.0, cval)?),
        Some(th) if th < t => Some(analytic_bound_inner(BernsteinEllipse::new(th)?, config, 1.0, cval)?),
        Some(th) => return Err(FrameError::Regime(format!("theta = {th} equals tau; neither analytic bound applies"))),
        None => None,
    };
    Ok(BoundReport {
        n: config.n(),
        m: config.m(),
        gamma: sys.gamma(),
        epsilon: config.epsilon(),
        c_frame,
        sup_to_l2: sup_to_l2_constant(sys),
        epsilon_prime: std::f64::consts::SQRT_2 * c_frame * config.epsilon(),
        tau: t,
        mu_regime: MuRegime::of(sys),
        oversampling: oversampling_check(config).ok(),
        analytic,
        unknown_constants: c.is_none(),
        sqrt_gamma_discrepancy: true,
    })
}

/// Grid sizes used by the Monte-Carlo estimators.
const MC_POINTS: usize = 2001;

fn random_coeffs(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

fn sup_on(sys: &FrameSystem, coeffs: &[f64], nodes: &[f64], row: &mut [f64]) -> f64 {
    nodes
        .iter()
        .map(|&x| {
            sys.frame_row_into(x, row);
            row.iter().zip(coeffs).map(|(a, b)| a * b).sum::<f64>().abs()
        })
        .fold(0.0, f64::max)
}

/// Monte-Carlo LOWER bound on
/// `C(m, n, gamma, eps) = sup { ||p||_{[-1,1]} : p in P_n, ||p||_{m,inf} <= 1, ||p||_{[-gamma,gamma]} <= 1/eps }`.
///
/// Each trial draws uniform random frame coefficients, rescales the polynomial
/// onto the feasible set, and records its sup on `[-1, 1]`; the constant
/// `min(1, 1/eps)` is always included. The true supremum is not computed.
pub fn quantity_c_estimate(config: &FrameConfig, epsilon: f64, trials: usize, seed: u64) -> f64 {
    let sys = config.sys();
    let grid = config.grid();
    let inner = dense_nodes(-1.0, 1.0, MC_POINTS);
    let outer = dense_nodes(-sys.gamma(), sys.gamma(), MC_POINTS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut row = vec![0.0; sys.len()];
    let constant = if epsilon > 0.0 { (1.0 / epsilon).min(1.0) } else { 1.0 };
    let mut best = constant;
    for _ in 0..trials {
        let c = random_coeffs(&mut rng, sys.len());
        let on_grid = sup_on(sys, &c, grid.nodes(), &mut row);
        let on_outer = sup_on(sys, &c, &outer, &mut row);
        if on_grid == 0.0 || on_outer == 0.0 {
            continue;
        }
        let mut scale = 1.0 / on_grid;
        if epsilon > 0.0 {
            scale = scale.min(1.0 / (epsilon * on_outer));
        }
        best = best.max(scale * sup_on(sys, &c, &inner, &mut row));
    }
    best
}

/// Monte-Carlo LOWER bound on
/// `C_1 = sup { ||p||_{[-1,1]} : p in span{zeta_i : sigma_i > eps}, ||p||_{m,inf} <= 1 }`,
/// with the `[-1, 1]` sup taken over `eval_points` equispaced points.
pub fn c1_estimate(solver: &FrameSolver, trials: usize, seed: u64, eval_points: usize) -> f64 {
    let config = solver.config();
    let sys = config.sys();
    let fact = solver.factorization();
    let r = fact.kept_count();
    if r == 0 {
        return 0.0;
    }
    let grid = config.grid();
    let inner = dense_nodes(-1.0, 1.0, eval_points);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut row = vec![0.0; sys.len()];
    let v = fact.right_vectors();
    let mut best: f64 = 0.0;
    for _ in 0..trials {
        let w = random_coeffs(&mut rng, r);
        let mut c = vec![0.0; sys.len()];
        for (i, wi) in w.iter().enumerate() {
            for (j, cj) in c.iter_mut().enumerate() {
                *cj += wi * v[(j, i)];
            }
        }
        let on_grid = sup_on(sys, &c, grid.nodes(), &mut row);
        if on_grid > 0.0 {
            best = best.max(sup_on(sys, &c, &inner, &mut row) / on_grid);
        }
    }
    best
}
