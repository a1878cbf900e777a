use std::time::Instant;

use super::corpus::FunctionId;
use crate::error::{FrameError, Result};
use crate::frame::{FrameConfig, FrameSolver};
use crate::orthopoly::JacobiParams;
use crate::par::Execution;
use crate::sampling::sup_norm_dense_with;

/// One sweep: every combination of the parameter lists, for each `n` in the range.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub functions: Vec<FunctionId>,
    pub params: Vec<(f64, f64)>,
    pub gammas: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub etas: Vec<f64>,
    pub n_start: usize,
    pub n_stop: usize,
    pub n_step: usize,
    /// Points of the equispaced grid on which the uniform error is measured.
    pub grid_size: usize,
    /// Points used by the condition-number estimate.
    pub condition_points: usize,
    /// Carried into the output for reproducibility; the sweep itself draws no random numbers.
    pub seed: u64,
    /// Record wall-clock time per row; off gives byte-identical reruns.
    pub timing: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            functions: vec![FunctionId::F1],
            params: vec![(1.0 / 3.0, 0.5)],
            gammas: vec![2.0],
            epsilons: vec![1e-14],
            etas: vec![4.0],
            n_start: 2,
            n_stop: 120,
            n_step: 2,
            grid_size: crate::sampling::ERROR_GRID_POINTS,
            condition_points: 2000,
            seed: 0,
            timing: true,
        }
    }
}

/// A single parameter combination of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamTuple {
    pub function: FunctionId,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub eta: f64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(FrameError::Parameter(msg));
        if self.functions.is_empty() || self.params.is_empty() || self.gammas.is_empty() {
            return bad("sweep needs at least one function, (alpha, beta) pair and gamma".into());
        }
        if self.epsilons.is_empty() || self.etas.is_empty() {
            return bad("sweep needs at least one epsilon and eta".into());
        }
        for &(a, b) in &self.params {
            JacobiParams::new(a, b)?;
        }
        if let Some(g) = self.gammas.iter().find(|g| !(**g > 1.0 && g.is_finite())) {
            return bad(format!("gamma must exceed 1 (got {g})"));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(**e >= 0.0 && e.is_finite())) {
            return bad(format!("epsilon must be >= 0 (got {e})"));
        }
        if let Some(e) = self.etas.iter().find(|e| !(**e > 1.0 && e.is_finite())) {
            return bad(format!("eta must exceed 1 (got {e})"));
        }
        if self.n_step == 0 || self.n_start > self.n_stop {
            return bad(format!("empty n-range {}..={} step {}", self.n_start, self.n_stop, self.n_step));
        }
        if self.grid_size < 2 || self.condition_points < 2 {
            return bad("error and condition grids need at least 2 points".into());
        }
        Ok(())
    }

    pub fn degrees(&self) -> Vec<usize> {
        (self.n_start..=self.n_stop).step_by(self.n_step.max(1)).collect()
    }

    /// Parameter combinations in output order.
    pub fn tuples(&self) -> Vec<ParamTuple> {
        let mut out = Vec::new();
        for &function in &self.functions {
            for &(alpha, beta) in &self.params {
                for &gamma in &self.gammas {
                    for &epsilon in &self.epsilons {
                        for &eta in &self.etas {
                            out.push(ParamTuple { function, alpha, beta, gamma, epsilon, eta });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    Failed(String),
}

impl RowStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RowStatus::Ok)
    }
}

/// One convergence measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub function: FunctionId,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub n: usize,
    pub m: usize,
    pub uniform_error: f64,
    pub sigma_min: f64,
    pub kept_count: usize,
    pub condition_estimate: f64,
    pub wall_time_ms: f64,
    pub status: RowStatus,
}

impl ResultRow {
    pub fn tuple(&self) -> ParamTuple {
        ParamTuple {
            function: self.function,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            epsilon: self.epsilon,
            eta: self.eta,
        }
    }
}

struct Measured {
    m: usize,
    uniform_error: f64,
    sigma_min: f64,
    kept_count: usize,
    condition_estimate: f64,
}

fn measure(t: &ParamTuple, n: usize, spec: &ExperimentSpec, exec: Execution) -> Result<Measured> {
    let params = JacobiParams::new(t.alpha, t.beta)?;
    let config = FrameConfig::with_oversampling(params, t.gamma, n, t.eta, t.epsilon)?;
    let solver = FrameSolver::new(&config)?;
    let f = t.function.function();
    let approx = solver.approximate_fn(|x| f.eval(x))?;
    let sys = config.sys();
    let coeffs = approx.coeffs();
    let uniform_error = sup_norm_dense_with(
        exec,
        |x| f.eval(x) - sys.combine(coeffs, x).unwrap_or(f64::NAN),
        -1.0,
        1.0,
        spec.grid_size,
    )?;
    let fact = solver.factorization();
    Ok(Measured {
        m: config.m(),
        uniform_error,
        sigma_min: fact.sigma_min(),
        kept_count: fact.kept_count(),
        condition_estimate: solver.condition_estimate(spec.condition_points, exec)?,
    })
}

/// Runs every (tuple, n) job; rows come back sorted by tuple, then `n`,
/// whatever order the jobs finish in. Failures are recorded per row.
pub fn run_sweep(spec: &ExperimentSpec, exec: Execution) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let degrees = spec.degrees();
    let jobs: Vec<(ParamTuple, usize)> =
        spec.tuples().into_iter().flat_map(|t| degrees.iter().map(move |&n| (t, n))).collect();
    Ok(exec.map(&jobs, |(t, n)| {
        let start = Instant::now();
        let outcome = measure(t, *n, spec, exec);
        let wall_time_ms = if spec.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
        let row = |m, uniform_error, sigma_min, kept_count, condition_estimate, status| ResultRow {
            function: t.function,
            alpha: t.alpha,
            beta: t.beta,
            gamma: t.gamma,
            epsilon: t.epsilon,
            eta: t.eta,
            n: *n,
            m,
            uniform_error,
            sigma_min,
            kept_count,
            condition_estimate,
            wall_time_ms,
            status,
        };
        match outcome {
            Ok(r) => row(r.m, r.uniform_error, r.sigma_min, r.kept_count, r.condition_estimate, RowStatus::Ok),
            Err(e) => row(
                crate::frame::oversampled_m(t.eta, *n),
                f64::NAN,
                f64::NAN,
                0,
                f64::NAN,
                RowStatus::Failed(e.to_string()),
            ),
        }
    }))
}
