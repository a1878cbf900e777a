use std::fmt;
use std::str::FromStr;

use crate::error::FrameError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunctionId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
}

impl FunctionId {
    pub const ALL: [FunctionId; 9] = [
        FunctionId::F1,
        FunctionId::F2,
        FunctionId::F3,
        FunctionId::F4,
        FunctionId::F5,
        FunctionId::F6,
        FunctionId::F7,
        FunctionId::F8,
        FunctionId::F9,
    ];

    pub fn name(self) -> &'static str {
        ["f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9"][self as usize]
    }

    pub fn function(self) -> TestFunction {
        corpus()[self as usize]
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionId {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FunctionId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| FrameError::Parameter(format!("unknown test function '{s}' (expected f1..f9)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionKind {
    /// Analytic inside the Bernstein ellipse with this parameter.
    Analytic { theta: f64 },
    /// Best polynomial approximations decay like `n^{-rate}`.
    Differentiable { rate: f64 },
}

#[derive(Clone, Copy)]
pub struct TestFunction {
    pub id: FunctionId,
    pub kind: FunctionKind,
    pub formula: &'static str,
    eval: fn(f64) -> f64,
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn theta(&self) -> Option<f64> {
        match self.kind {
            FunctionKind::Analytic { theta } => Some(theta),
            FunctionKind::Differentiable { .. } => None,
        }
    }

    pub fn rate_exponent(&self) -> Option<f64> {
        match self.kind {
            FunctionKind::Differentiable { rate } => Some(rate),
            FunctionKind::Analytic { .. } => None,
        }
    }
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .field("formula", &self.formula)
            .finish()
    }
}

fn f1(x: f64) -> f64 {
    1.0 / (1.0 + x * x)
}
fn f2(x: f64) -> f64 {
    1.0 / (1.0 + 4.0 * x * x)
}
fn f3(x: f64) -> f64 {
    1.0 / (10.0 - 9.0 * x)
}
// Real on [-1, 1]; branch points at +-sqrt(10)/3 as for 25 sqrt(9x^2 - 10).
fn f4(x: f64) -> f64 {
    25.0 * (10.0 - 9.0 * x * x).sqrt()
}
fn f5(x: f64) -> f64 {
    x.abs()
}
fn f6(x: f64) -> f64 {
    x.sin().abs().powi(3)
}
fn f7(x: f64) -> f64 {
    (x - 0.5).abs().powi(5)
}
fn f8(x: f64) -> f64 {
    (x - 0.25).abs().powf(1.5)
}
fn f9(x: f64) -> f64 {
    (x + 0.5).abs().powi(7)
}

/// The nine test functions, indexed `f1..f9`.
pub fn corpus() -> [TestFunction; 9] {
    use FunctionKind::*;
    let analytic = |theta| Analytic { theta };
    let smooth = |rate| Differentiable { rate };
    [
        TestFunction { id: FunctionId::F1, kind: analytic(1.0 + 2f64.sqrt()), formula: "1/(1+x^2)", eval: f1 },
        TestFunction { id: FunctionId::F2, kind: analytic((1.0 + 5f64.sqrt()) / 2.0), formula: "1/(1+4x^2)", eval: f2 },
        TestFunction {
            id: FunctionId::F3,
            kind: analytic((10.0 + 19f64.sqrt()) / 9.0),
            formula: "1/(10-9x)",
            eval: f3,
        },
        TestFunction {
            id: FunctionId::F4,
            kind: analytic((10.0f64 / 9.0).sqrt() + 1.0 / 3.0),
            formula: "25 sqrt(10-9x^2)",
            eval: f4,
        },
        TestFunction { id: FunctionId::F5, kind: smooth(1.0), formula: "|x|", eval: f5 },
        TestFunction { id: FunctionId::F6, kind: smooth(3.0), formula: "|sin x|^3", eval: f6 },
        TestFunction { id: FunctionId::F7, kind: smooth(5.0), formula: "|x-1/2|^5", eval: f7 },
        TestFunction { id: FunctionId::F8, kind: smooth(1.5), formula: "|x-1/4|^(3/2)", eval: f8 },
        TestFunction { id: FunctionId::F9, kind: smooth(7.0), formula: "|x+1/2|^7", eval: f9 },
    ]
}
