//! The regularized frame approximation itself: design matrix, truncated SVD,
//! the coefficient solve, the singular-polynomial form of the same operator,
//! and an estimate of its uniform condition number.

use nalgebra::DMatrix;

use crate::accurate::dot2;
use crate::error::{FrameError, Result};
use crate::orthopoly::{FrameSystem, JacobiParams};
use crate::par::Execution;
use crate::sampling::{dense_nodes, discrete_inner, make_grid, EquispacedGrid, SampleVector};

/// A complete problem description: frame system (alpha, beta, gamma, n),
/// number of grid intervals `m`, and truncation tolerance `epsilon`.
#[derive(Debug, Clone)]
pub struct FrameConfig {
    sys: FrameSystem,
    m: usize,
    epsilon: f64,
    eta: Option<f64>,
}

/// `round(eta * n)` with halves rounded up, never below 1.
pub fn oversampled_m(eta: f64, n: usize) -> usize {
    ((eta * n as f64 + 0.5).floor() as usize).max(1)
}

impl FrameConfig {
    pub fn new(sys: FrameSystem, m: usize, epsilon: f64) -> Result<Self> {
        if m == 0 || m < sys.max_degree() {
            return Err(FrameError::Parameter(format!(
                "need m >= max(n, 1) for a least-squares fit (m = {m}, n = {})",
                sys.max_degree()
            )));
        }
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(FrameError::Parameter(format!("epsilon must be finite and >= 0 (got {epsilon})")));
        }
        Ok(Self { sys, m, epsilon, eta: None })
    }

    /// Builds the config with `m = round(eta * n)`.
    pub fn with_oversampling(params: JacobiParams, gamma: f64, n: usize, eta: f64, epsilon: f64) -> Result<Self> {
        if !(eta.is_finite() && eta > 1.0) {
            return Err(FrameError::Parameter(format!("oversampling ratio eta must exceed 1 (got {eta})")));
        }
        let sys = FrameSystem::new(params, gamma, n)?;
        let mut cfg = Self::new(sys, oversampled_m(eta, n), epsilon)?;
        cfg.eta = Some(eta);
        Ok(cfg)
    }

    pub fn sys(&self) -> &FrameSystem {
        &self.sys
    }

    pub fn n(&self) -> usize {
        self.sys.max_degree()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn eta(&self) -> Option<f64> {
        self.eta
    }

    pub fn grid(&self) -> EquispacedGrid {
        make_grid(self.m).expect("m >= 1 by construction")
    }

    /// Same problem with a different truncation tolerance.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        let mut cfg = Self::new(self.sys.clone(), self.m, epsilon)?;
        cfg.eta = self.eta;
        Ok(cfg)
    }
}

/// `A[k][j] = sqrt(2/(m+1)) phi_j(x_k)`.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    entries: DMatrix<f64>,
    config: FrameConfig,
}

impl DesignMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn config(&self) -> &FrameConfig {
        &self.config
    }
}

pub fn assemble(config: &FrameConfig) -> Result<DesignMatrix> {
    let grid = config.grid();
    let sys = config.sys();
    let rows = grid.len();
    let cols = sys.len();
    let scale = (2.0 / rows as f64).sqrt();
    let mut entries = DMatrix::<f64>::zeros(rows, cols);
    let mut row = vec![0.0; cols];
    for (k, &x) in grid.nodes().iter().enumerate() {
        sys.frame_row_into(x, &mut row);
        for (j, v) in row.iter().enumerate() {
            let a = scale * v;
            if !a.is_finite() {
                return Err(FrameError::Assembly { row: k, col: j });
            }
            entries[(k, j)] = a;
        }
    }
    Ok(DesignMatrix { entries, config: config.clone() })
}

/// Thin SVD `A = U diag(sigma) V^T` with singular values sorted descending,
/// plus the tolerance that splits kept (`sigma_i > epsilon`) from discarded directions.
#[derive(Debug, Clone)]
pub struct TruncatedFactorization {
    u: DMatrix<f64>,
    sigma: Vec<f64>,
    v: DMatrix<f64>,
    epsilon: f64,
    kept: usize,
}

impl TruncatedFactorization {
    pub fn left_vectors(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.sigma
    }

    /// Columns are the right singular vectors `v_i`.
    pub fn right_vectors(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Indices `i` with `sigma_i > epsilon`; always a prefix since `sigma` is sorted.
    pub fn kept(&self) -> std::ops::Range<usize> {
        0..self.kept
    }

    pub fn kept_count(&self) -> usize {
        self.kept
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma.last().copied().unwrap_or(0.0)
    }

    /// Re-truncate the same decomposition at another tolerance.
    pub fn retruncate(&self, epsilon: f64) -> Self {
        let mut out = self.clone();
        out.epsilon = epsilon;
        out.kept = self.sigma.iter().take_while(|&&s| s > epsilon).count();
        out
    }

    /// `V Sigma^{eps,+} U^T rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        self.solve_scaled(rhs, 1.0)
    }

    /// `V Sigma^{eps,+} U^T (scale * rhs)`, with the scale applied after the
    /// (compensated) inner products so `rhs` itself is never rounded.
    pub fn solve_scaled(&self, rhs: &[f64], scale: f64) -> Result<Vec<f64>> {
        if rhs.len() != self.u.nrows() {
            return Err(FrameError::Shape { expected: self.u.nrows(), got: rhs.len() });
        }
        let weights: Vec<f64> = self
            .kept()
            .map(|i| scale * dot2(self.u.column(i).iter().copied().zip(rhs.iter().copied())) / self.sigma[i])
            .collect();
        Ok(self.combine_right(&weights))
    }

    /// `sum_i weights[i] v_i` over the leading columns of `V`.
    fn combine_right(&self, weights: &[f64]) -> Vec<f64> {
        (0..self.v.nrows()).map(|j| dot2(weights.iter().enumerate().map(|(i, w)| (*w, self.v[(j, i)])))).collect()
    }
}

pub fn factorize(a: &DesignMatrix, epsilon: f64) -> Result<TruncatedFactorization> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(FrameError::Parameter(format!("epsilon must be finite and >= 0 (got {epsilon})")));
    }
    let m = a.entries();
    let svd = faer::Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
        .thin_svd()
        .map_err(|e| FrameError::Numerical(format!("SVD did not converge: {e:?}")))?;
    let (u, s, vf) = (svd.U(), svd.S(), svd.V());
    let r = s.dim();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));

    let cols = m.ncols();
    let mut sorted_u = DMatrix::<f64>::zeros(m.nrows(), r);
    let mut v = DMatrix::<f64>::zeros(cols, cols);
    let mut sigma = Vec::with_capacity(r);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..m.nrows() {
            sorted_u[(k, dst)] = u[(k, src)];
        }
        for k in 0..cols {
            v[(k, dst)] = vf[(k, src)];
        }
        sigma.push(s[src].max(0.0));
    }
    if sigma.iter().any(|s| !s.is_finite()) {
        return Err(FrameError::Numerical("non-finite singular value".into()));
    }
    let kept = sigma.iter().take_while(|&&s| s > epsilon).count();
    Ok(TruncatedFactorization { u: sorted_u, sigma, v, epsilon, kept })
}

/// `sum_i a_i phi_i`, the regularized frame approximation of some function.
#[derive(Debug, Clone)]
pub struct FrameApproximant {
    coeffs: Vec<f64>,
    config: FrameConfig,
}

impl FrameApproximant {
    pub fn new(coeffs: Vec<f64>, config: FrameConfig) -> Result<Self> {
        if coeffs.len() != config.sys().len() {
            return Err(FrameError::Shape { expected: config.sys().len(), got: coeffs.len() });
        }
        Ok(Self { coeffs, config })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn config(&self) -> &FrameConfig {
        &self.config
    }

    /// Value at `x`; points in `(1, gamma]` are accepted for diagnostics.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.config.sys().combine(&self.coeffs, x)
    }
}

pub fn evaluate(approx: &FrameApproximant, x: f64) -> Result<f64> {
    approx.evaluate(x)
}

fn check_grid(config: &FrameConfig, samples: &SampleVector) -> Result<()> {
    if samples.grid().m() != config.m() {
        return Err(FrameError::Shape { expected: config.m() + 1, got: samples.values().len() });
    }
    Ok(())
}

/// Design matrix plus its truncated factorization, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct FrameSolver {
    config: FrameConfig,
    design: DesignMatrix,
    fact: TruncatedFactorization,
}

impl FrameSolver {
    pub fn new(config: &FrameConfig) -> Result<Self> {
        let design = assemble(config)?;
        let fact = factorize(&design, config.epsilon())?;
        Ok(Self { config: config.clone(), design, fact })
    }

    pub fn config(&self) -> &FrameConfig {
        &self.config
    }

    pub fn design(&self) -> &DesignMatrix {
        &self.design
    }

    pub fn factorization(&self) -> &TruncatedFactorization {
        &self.fact
    }

    pub fn approximate(&self, samples: &SampleVector) -> Result<FrameApproximant> {
        check_grid(&self.config, samples)?;
        let scale = (2.0 / samples.values().len() as f64).sqrt();
        let coeffs = self.fact.solve_scaled(samples.values(), scale)?;
        FrameApproximant::new(coeffs, self.config.clone())
    }

    /// Samples `f` on the config's grid and approximates it.
    pub fn approximate_fn(&self, f: impl Fn(f64) -> f64) -> Result<FrameApproximant> {
        self.approximate(&SampleVector::from_fn(&self.config.grid(), f))
    }

    pub fn condition_estimate(&self, eval_points: usize, exec: Execution) -> Result<f64> {
        condition_estimate_from(&self.config, &self.fact, eval_points, exec)
    }
}

/// `a^eps = V Sigma^{eps,+} U^T b` with `b_k = sqrt(2/(m+1)) f(x_k)`.
pub fn approximate(config: &FrameConfig, samples: &SampleVector) -> Result<FrameApproximant> {
    FrameSolver::new(config)?.approximate(samples)
}

/// `zeta_i = sum_j (v_i)_j phi_j`, orthonormal on `[-gamma, gamma]` and
/// discretely orthogonal with `<zeta_i, zeta_i>_{m,2} = sigma_i^2`.
#[derive(Debug, Clone)]
pub struct SingularPolynomial {
    pub index: usize,
    pub coeffs: Vec<f64>,
    pub sigma: f64,
}

impl SingularPolynomial {
    pub fn evaluate(&self, sys: &FrameSystem, x: f64) -> Result<f64> {
        sys.combine(&self.coeffs, x)
    }

    pub fn sample(&self, sys: &FrameSystem, grid: &EquispacedGrid) -> Result<SampleVector> {
        let values = grid.nodes().iter().map(|&x| sys.combine(&self.coeffs, x)).collect::<Result<Vec<_>>>()?;
        SampleVector::new(grid.clone(), values)
    }
}

pub fn singular_poly(fact: &TruncatedFactorization, sys: &FrameSystem, i: usize) -> Result<SingularPolynomial> {
    if i >= sys.len() || i >= fact.sigma.len() {
        return Err(FrameError::Parameter(format!("singular index {i} exceeds n = {}", sys.max_degree())));
    }
    Ok(SingularPolynomial { index: i, coeffs: fact.v.column(i).iter().copied().collect(), sigma: fact.sigma[i] })
}

/// The same operator written as `sum_{sigma_i > eps} <f, zeta_i>_{m,2} / sigma_i^2 zeta_i`,
/// i.e. the discrete orthogonal projection onto the kept singular polynomials.
///
/// On the grid `zeta_i(x_k) = sqrt((m+1)/2) sigma_i u_i[k]`, so the inner products
/// are taken against `u_i`. Sampling `zeta_i` as a polynomial instead leaves an
/// absolute error near machine precision that the `1/sigma_i^2` factor amplifies
/// beyond use once `sigma_i` drops below about `1e-4`.
pub fn project_via_singular(
    fact: &TruncatedFactorization,
    config: &FrameConfig,
    samples: &SampleVector,
) -> Result<FrameApproximant> {
    if samples.grid().m() != config.m() {
        return Err(FrameError::Shape { expected: config.m() + 1, got: samples.values().len() });
    }
    let sys = config.sys();
    let grid = samples.grid();
    let lift = ((config.m() + 1) as f64 / 2.0).sqrt();
    let mut weights = Vec::with_capacity(fact.kept_count());
    for i in fact.kept() {
        let zeta = singular_poly(fact, sys, i)?;
        let u = SampleVector::new(grid.clone(), fact.u.column(i).iter().copied().collect())?;
        let inner = lift * zeta.sigma * discrete_inner(samples, &u)?;
        weights.push(inner / (zeta.sigma * zeta.sigma));
    }
    FrameApproximant::new(fact.combine_right(&weights), config.clone())
}

/// Induced (discrete sup -> uniform) norm of the linear map samples -> approximant,
/// maximised over `eval_points` equispaced points of `[-1, 1]`:
/// `max_x sum_k |sqrt(2/(m+1)) (phi(x)^T V Sigma^{eps,+} U^T)_k|`.
/// A lower bound on the condition number that tightens as `eval_points` grows.
pub fn condition_estimate(config: &FrameConfig, eval_points: usize) -> Result<f64> {
    FrameSolver::new(config)?.condition_estimate(eval_points, Execution::default())
}

const CONDITION_CHUNK: usize = 128;

pub fn condition_estimate_from(
    config: &FrameConfig,
    fact: &TruncatedFactorization,
    eval_points: usize,
    exec: Execution,
) -> Result<f64> {
    if eval_points < 2 {
        return Err(FrameError::Parameter("condition estimate needs at least 2 evaluation points".into()));
    }
    let r = fact.kept_count();
    if r == 0 {
        return Ok(0.0);
    }
    let rows = config.m() + 1;
    let scale = (2.0 / rows as f64).sqrt();
    // W = V_r Sigma_r^{-1} U_r^T, (n+1) x (m+1)
    let mut vs = fact.v.columns(0, r).into_owned();
    for i in 0..r {
        vs.column_mut(i).scale_mut(scale / fact.sigma[i]);
    }
    let w = &vs * fact.u.columns(0, r).transpose();
    let sys = config.sys();
    let nodes = dense_nodes(-1.0, 1.0, eval_points);
    let chunks = nodes.len().div_ceil(CONDITION_CHUNK);
    let value = exec.max_range(chunks, |c| {
        let block = &nodes[c * CONDITION_CHUNK..((c + 1) * CONDITION_CHUNK).min(nodes.len())];
        let mut phi = DMatrix::<f64>::zeros(block.len(), sys.len());
        let mut row = vec![0.0; sys.len()];
        for (k, &x) in block.iter().enumerate() {
            sys.frame_row_into(x, &mut row);
            phi.row_mut(k).copy_from_slice(&row);
        }
        let rows = phi * &w;
        rows.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(f64::NEG_INFINITY, |a, b| {
            if a.is_nan() || b.is_nan() {
                f64::NAN
            } else {
                a.max(b)
            }
        })
    });
    if value.is_finite() {
        Ok(value)
    } else {
        Err(FrameError::Numerical("non-finite condition estimate".into()))
    }
}
