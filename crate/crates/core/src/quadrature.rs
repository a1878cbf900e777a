//! Gauss rules on `[-1, 1]`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{FrameError, Result};
use crate::orthopoly::{ln_norm_constant, JacobiParams};

/// Nodes (ascending) and weights of a quadrature rule.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `count`-point Gauss–Legendre rule by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(count: usize) -> Result<Rule> {
    if count == 0 {
        return Err(FrameError::Parameter("quadrature needs at least one node".into()));
    }
    let n = count as f64;
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    for k in 0..count.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=count {
                let j = j as f64;
                let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = -x;
        nodes[count - 1 - k] = x;
        weights[k] = w;
        weights[count - 1 - k] = w;
    }
    Ok(Rule { nodes, weights })
}

/// `count`-point Gauss–Jacobi rule for the weight `(1 - x)^alpha (1 + x)^beta`,
/// from the eigen-decomposition of the symmetric Jacobi matrix.
pub fn gauss_jacobi(count: usize, params: &JacobiParams) -> Result<Rule> {
    if count == 0 {
        return Err(FrameError::Parameter("quadrature needs at least one node".into()));
    }
    let (a, b) = (params.alpha(), params.beta());
    let mut jm = DMatrix::<f64>::zeros(count, count);
    for k in 0..count {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        jm[(k, k)] = if k == 0 { (b - a) / (a + b + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        if k + 1 < count {
            let j = kf + 1.0;
            let s = 2.0 * j + a + b;
            let off2 = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
            } else {
                4.0 * j * (j + a) * (j + b) * (j + a + b) / (s * s * (s + 1.0) * (s - 1.0))
            };
            jm[(k, k + 1)] = off2.sqrt();
            jm[(k + 1, k)] = off2.sqrt();
        }
    }
    let eig = SymmetricEigen::try_new(jm, 1e-15, 10_000)
        .ok_or_else(|| FrameError::Numerical("Jacobi matrix eigen-decomposition did not converge".into()))?;
    let mass = ln_norm_constant(0, params).exp();
    let mut pairs: Vec<(f64, f64)> =
        (0..count).map(|i| (eig.eigenvalues[i], mass * eig.eigenvectors[(0, i)].powi(2))).collect();
    pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
    Ok(Rule { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() })
}
