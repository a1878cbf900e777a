//! Equispaced grids on `[-1, 1]`, the discrete semi-inner product over them,
//! and continuous norms (dense-grid sup norms, weighted `L^2` norms on the
//! extended interval).

use crate::accurate::dot2;
use crate::error::{FrameError, Result};
use crate::orthopoly::FrameSystem;
use crate::par::Execution;
use crate::quadrature::gauss_jacobi;

/// Default size of the grid used to measure uniform errors on `[-1, 1]`.
pub const ERROR_GRID_POINTS: usize = 10_000;

/// The `m + 1` nodes `x_k = -1 + 2k/m`, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct EquispacedGrid {
    m: usize,
    nodes: Vec<f64>,
}

impl EquispacedGrid {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(FrameError::Parameter("equispaced grid needs m >= 1".into()));
        }
        let mf = m as f64;
        // Integer numerator keeps the grid exactly symmetric about 0.
        let nodes = (0..=m).map(|k| (2.0 * k as f64 - mf) / mf).collect();
        Ok(Self { m, nodes })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of nodes, `m + 1`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub fn make_grid(m: usize) -> Result<EquispacedGrid> {
    EquispacedGrid::new(m)
}

/// Function values on an equispaced grid, stored unscaled.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleVector {
    grid: EquispacedGrid,
    values: Vec<f64>,
}

impl SampleVector {
    pub fn new(grid: EquispacedGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(FrameError::Shape { expected: grid.len(), got: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: &EquispacedGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self { grid: grid.clone(), values }
    }

    pub fn grid(&self) -> &EquispacedGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn same_grid(&self, other: &SampleVector) -> Result<()> {
        if self.grid.m() == other.grid.m() {
            Ok(())
        } else {
            Err(FrameError::Shape { expected: self.grid.len(), got: other.grid.len() })
        }
    }
}

/// `<f, g>_{m,2} = 2/(m+1) sum_k f(x_k) g(x_k)`.
pub fn discrete_inner(f: &SampleVector, g: &SampleVector) -> Result<f64> {
    f.same_grid(g)?;
    let scale = 2.0 / f.values.len() as f64;
    Ok(scale * dot2(f.values.iter().copied().zip(g.values.iter().copied())))
}

pub fn discrete_norm2(f: &SampleVector) -> f64 {
    let scale = 2.0 / f.values.len() as f64;
    (scale * f.values.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

pub fn discrete_sup(f: &SampleVector) -> f64 {
    f.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Weighted `L^2` norm on `[-gamma, gamma]` of `sum_i c_i phi_i`; the frame
/// functions are orthonormal there, so this is the Euclidean norm of `c`.
pub fn weighted_l2_norm_extended(coeffs: &[f64], _sys: &FrameSystem) -> f64 {
    coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// The same norm by Gauss–Jacobi quadrature with `4(n + 1)` nodes, evaluating
/// the polynomial pointwise. Independent of the orthonormality argument.
pub fn weighted_l2_norm_quadrature(coeffs: &[f64], sys: &FrameSystem) -> Result<f64> {
    if coeffs.len() > sys.len() {
        return Err(FrameError::Shape { expected: sys.len(), got: coeffs.len() });
    }
    weighted_l2_norm_fn(|x| sys.combine(coeffs, x).unwrap_or(f64::NAN), sys, 4 * coeffs.len().max(1))
}

/// `(int_{-gamma}^{gamma} f(x)^2 w(x / gamma) dx)^{1/2}` with a `nodes`-point
/// Gauss–Jacobi rule in the scaled variable.
pub fn weighted_l2_norm_fn(f: impl Fn(f64) -> f64, sys: &FrameSystem, nodes: usize) -> Result<f64> {
    let rule = gauss_jacobi(nodes, sys.params())?;
    let gamma = sys.gamma();
    let sq = gamma * rule.integrate(|t| f(gamma * t).powi(2));
    if sq.is_finite() {
        Ok(sq.sqrt())
    } else {
        Err(FrameError::Numerical("weighted norm quadrature produced a non-finite value".into()))
    }
}

/// `points` equispaced nodes of `[a, b]`, endpoints included.
pub fn dense_nodes(a: f64, b: f64, points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points).map(|k| if k + 1 == points { b } else { a + (b - a) * (k as f64 / last) }).collect()
}

/// `max |f|` over `points` equispaced nodes of `[a, b]`.
pub fn sup_norm_dense(f: impl Fn(f64) -> f64 + Sync + Send, a: f64, b: f64, points: usize) -> Result<f64> {
    sup_norm_dense_with(Execution::Sequential, f, a, b, points)
}

pub fn sup_norm_dense_with(
    exec: Execution,
    f: impl Fn(f64) -> f64 + Sync + Send,
    a: f64,
    b: f64,
    points: usize,
) -> Result<f64> {
    if points < 2 {
        return Err(FrameError::Parameter("dense sup norm needs at least 2 points".into()));
    }
    let nodes = dense_nodes(a, b, points);
    let values = exec.map(&nodes, |&x| f(x));
    let mut best: f64 = 0.0;
    for (x, v) in nodes.iter().zip(values) {
        if !v.is_finite() {
            return Err(FrameError::Evaluation { x: *x });
        }
        best = best.max(v.abs());
    }
    Ok(best)
}
