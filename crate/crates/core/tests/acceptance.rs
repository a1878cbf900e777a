//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use framefit::bounds::{bound_report, frame_constant, g1, g2, g3, h1, h2, h3, sup_to_l2_constant, tau};
use framefit::experiments::{
    detect_plateau, final_level, fit_rate, points_from_rows, run_sweep, ExperimentSpec, FitWindow, FunctionId,
    RateModel, ResultRow,
};
use framefit::frame::{assemble, factorize, project_via_singular, singular_poly, FrameConfig, FrameSolver};
use framefit::quadrature::gauss_jacobi;
use framefit::sampling::{discrete_inner, discrete_norm2, sup_norm_dense, weighted_l2_norm_extended, SampleVector};
use framefit::{jacobi_eval, norm_constant, Execution, FrameSystem, JacobiParams};

const LEGACY: (f64, f64) = (1.0 / 3.0, 0.5);
const MODERATE_PARAMS: [(f64, f64); 3] = [LEGACY, (-1.0 / 3.0, -2.0 / 3.0), (2.0, 2.5)];
const DENSE: usize = 10_000;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

fn params(ab: (f64, f64)) -> JacobiParams {
    JacobiParams::new(ab.0, ab.1).unwrap()
}

fn sweep(function: FunctionId, ab: (f64, f64), gamma: f64, n_stop: usize) -> Vec<ResultRow> {
    let spec = ExperimentSpec {
        functions: vec![function],
        params: vec![ab],
        gammas: vec![gamma],
        epsilons: vec![1e-14],
        etas: vec![4.0],
        n_start: 2,
        n_stop,
        n_step: 2,
        timing: false,
        ..ExperimentSpec::default()
    };
    let rows = run_sweep(&spec, Execution::default()).unwrap();
    assert!(rows.iter().all(|r| r.status.is_ok()), "sweep rows failed for {function}");
    rows
}

/// Plateau level: the detected plateau, falling back to the median of the last three errors.
fn plateau(rows: &[ResultRow], model: RateModel) -> f64 {
    let pts = points_from_rows(rows);
    detect_plateau(&pts, model).or_else(|| final_level(&pts)).unwrap()
}

fn orthogonality() -> Outcome {
    let sets = [LEGACY, (-1.0 / 3.0, -2.0 / 3.0), (2.0, 2.5), (0.0, 20.0)];
    let mut worst: f64 = 0.0;
    for ab in sets {
        let p = params(ab);
        let rule = gauss_jacobi(32, &p).unwrap();
        let h: Vec<f64> = (0..=20).map(|i| norm_constant(i, &p).unwrap()).collect();
        for i in 0..=20 {
            for j in 0..=i {
                let integral = rule.integrate(|x| jacobi_eval(i, &p, x) * jacobi_eval(j, &p, x));
                let expected = if i == j { h[i] } else { 0.0 };
                worst = worst.max((integral - expected).abs() / (h[i] * h[j]).sqrt());
            }
        }
    }
    Outcome::new(worst <= 1e-9, format!("max relative deviation {worst:.2e} (tol 1e-9)"))
}

fn singular_value_profile() -> Outcome {
    let mut log_ratio = Vec::new();
    let mut crossed_at = None;
    for n in (2..=60).step_by(2) {
        let config = FrameConfig::with_oversampling(params(LEGACY), 2.0, n, 4.0, 0.0).unwrap();
        let fact = factorize(&assemble(&config).unwrap(), 0.0).unwrap();
        let sv = fact.singular_values();
        let ratio = sv[sv.len() - 1] / sv[0];
        if ratio < 1e-14 && crossed_at.is_none() {
            crossed_at = Some(n);
        }
        log_ratio.push((n as f64, ratio));
    }
    // Pre-roundoff window: ratios still two orders above double precision roundoff.
    let window: Vec<(f64, f64)> = log_ratio.iter().filter(|p| p.1 > 1e-13).map(|&(n, r)| (n, r.ln())).collect();
    let r2 = r_squared(&window);
    let crossed = crossed_at.is_some_and(|n| n <= 40);
    Outcome::new(
        crossed && r2 >= 0.95 && window.len() >= 4,
        format!(
            "sigma_min/sigma_max < 1e-14 first at n = {} (need <= 40), R^2 = {r2:.4} over {} pre-roundoff points (need >= 0.95)",
            crossed_at.map_or("never".into(), |n| n.to_string()),
            window.len()
        ),
    )
}

fn r_squared(xy: &[(f64, f64)]) -> f64 {
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    sxy * sxy / (sxx * syy)
}

fn analytic_rate() -> Outcome {
    let rows = sweep(FunctionId::F1, LEGACY, 1.2, 120);
    let fit = fit_rate(&points_from_rows(&rows), RateModel::Exponential, FitWindow::default()).unwrap();
    let theta = 1.0 + 2f64.sqrt();
    let level = plateau(&rows, RateModel::Exponential);
    let in_band = fit.exponent >= 0.85 * theta && fit.exponent <= 1.15 * theta;
    Outcome::new(
        in_band && level <= 1e-9,
        format!(
            "theta_hat = {:.4} over n = {}..{} (band [{:.4}, {:.4}]), plateau {level:.2e} (need <= 1e-9)",
            fit.exponent,
            fit.n_range.0,
            fit.n_range.1,
            0.85 * theta,
            1.15 * theta
        ),
    )
}

fn gamma_tradeoff() -> Outcome {
    let narrow = plateau(&sweep(FunctionId::F3, LEGACY, 1.2, 120), RateModel::Exponential);
    let wide = plateau(&sweep(FunctionId::F3, LEGACY, 2.5, 120), RateModel::Exponential);
    Outcome::new(narrow < wide, format!("f3 plateau {narrow:.2e} at gamma 1.2 vs {wide:.2e} at gamma 2.5"))
}

fn algebraic_rates() -> Outcome {
    let bands = [(FunctionId::F5, 0.7, 1.3), (FunctionId::F7, 4.2, 5.8), (FunctionId::F8, 1.2, 1.8)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (f, lo, hi) in bands {
        let rows = sweep(f, LEGACY, 2.0, 120);
        let fit = fit_rate(&points_from_rows(&rows), RateModel::Algebraic, FitWindow::default()).unwrap();
        let ok = fit.exponent >= lo && fit.exponent <= hi;
        pass &= ok;
        parts.push(format!(
            "{f} k_hat = {:.3} in [{lo}, {hi}] {} (n = {}..{})",
            fit.exponent,
            if ok { "yes" } else { "NO" },
            fit.n_range.0,
            fit.n_range.1
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn large_parameter_degradation() -> Outcome {
    let base = sweep(FunctionId::F1, LEGACY, 2.5, 120);
    let large = sweep(FunctionId::F1, (0.0, 20.0), 2.5, 120);
    let ratio = plateau(&large, RateModel::Exponential) / plateau(&base, RateModel::Exponential);
    let errs: Vec<f64> = large.iter().map(|r| r.uniform_error).collect();
    let tail = &errs[errs.len() - errs.len() / 3..];
    let non_decreasing = tail.windows(2).all(|w| w[1] >= w[0]);
    Outcome::new(
        ratio >= 1e2 || non_decreasing,
        format!("plateau ratio (0,20) / (1/3,1/2) = {ratio:.1} (need >= 100), tail non-decreasing: {non_decreasing}"),
    )
}

fn random_coeffs(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let c: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
    let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    c.into_iter().map(|v| v / norm).collect()
}

fn operator_properties() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fig1 = |n: usize, eps: f64| FrameConfig::with_oversampling(params(LEGACY), 2.0, n, 4.0, eps).unwrap();

    // Linearity. Where the coefficient map is well conditioned the check is absolute;
    // once tiny singular values are kept the coefficients grow like 1/sigma and
    // rounding of the combined samples alone moves them by ~1e-16 of that size, so
    // the tolerance is taken relative to the largest coefficient.
    let (f, g) = (FunctionId::F1.function(), FunctionId::F5.function());
    let (a, b) = (0.7, -1.3);
    let mut lin: f64 = 0.0;
    for n in [10, 20, 40, 60] {
        let config = fig1(n, 1e-14);
        let solver = FrameSolver::new(&config).unwrap();
        let qf = solver.approximate_fn(|x| f.eval(x)).unwrap();
        let qg = solver.approximate_fn(|x| g.eval(x)).unwrap();
        let qc = solver.approximate_fn(|x| a * f.eval(x) + b * g.eval(x)).unwrap();
        let sup = |c: &[f64]| c.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        let scale = if n == 10 { 1.0 } else { (a.abs() * sup(qf.coeffs()) + b.abs() * sup(qg.coeffs())).max(1.0) };
        let worst = qc
            .coeffs()
            .iter()
            .zip(qf.coeffs().iter().zip(qg.coeffs()))
            .map(|(c, (x, y))| (c - (a * x + b * y)).abs())
            .fold(0.0, f64::max);
        lin = lin.max(worst / scale);
    }
    if lin > 1e-12 {
        failures.push(format!("linearity {lin:.2e}"));
    }

    // Exact reproduction where nothing is truncated.
    let mut repro: f64 = 0.0;
    for n in [4, 10, 16] {
        let config = fig1(n, 1e-14);
        let solver = FrameSolver::new(&config).unwrap();
        assert!(solver.factorization().sigma_min() > 1e-14);
        for _ in 0..5 {
            let c = random_coeffs(&mut rng, n + 1);
            let sys = config.sys();
            let q = solver.approximate_fn(|x| sys.combine(&c, x).unwrap()).unwrap();
            let err =
                sup_norm_dense(|x| q.evaluate(x).unwrap() - sys.combine(&c, x).unwrap(), -1.0, 1.0, DENSE).unwrap();
            repro = repro.max(err);
        }
    }
    if repro > 1e-8 {
        failures.push(format!("reproduction {repro:.2e}"));
    }

    // Residual bound on truncated configurations.
    let mut residual_slack = f64::INFINITY;
    for (n, eps) in [(40, 1e-14), (60, 1e-10), (60, 1e-6)] {
        let config = fig1(n, eps);
        let solver = FrameSolver::new(&config).unwrap();
        let sys = config.sys();
        for _ in 0..10 {
            let c = random_coeffs(&mut rng, n + 1);
            let samples = SampleVector::from_fn(&config.grid(), |x| sys.combine(&c, x).unwrap());
            let q = solver.approximate(&samples).unwrap();
            let diff = SampleVector::from_fn(&config.grid(), |x| sys.combine(&c, x).unwrap() - q.evaluate(x).unwrap());
            let bound = eps * weighted_l2_norm_extended(&c, sys) + 1e-12;
            residual_slack = residual_slack.min(bound - discrete_norm2(&diff));
        }
    }
    if residual_slack < 0.0 {
        failures.push(format!("residual bound slack {residual_slack:.2e}"));
    }

    // Two routes to the same operator.
    let mut two_path: f64 = 0.0;
    for n in [20, 40, 60] {
        let config = fig1(n, 1e-14);
        let solver = FrameSolver::new(&config).unwrap();
        let samples = SampleVector::from_fn(&config.grid(), |x| f.eval(x));
        let direct = solver.approximate(&samples).unwrap();
        let projected = project_via_singular(solver.factorization(), &config, &samples).unwrap();
        let norm = weighted_l2_norm_extended(direct.coeffs(), config.sys());
        let diff: Vec<f64> = direct.coeffs().iter().zip(projected.coeffs()).map(|(x, y)| x - y).collect();
        two_path = two_path.max(weighted_l2_norm_extended(&diff, config.sys()) / norm);
    }
    if two_path > 1e-10 {
        failures.push(format!("two-path {two_path:.2e}"));
    }

    // Singular polynomials: orthonormal on [-gamma, gamma], orthogonal on the grid.
    let config = fig1(30, 1e-14);
    let solver = FrameSolver::new(&config).unwrap();
    let sys = config.sys();
    let rule = gauss_jacobi(64, sys.params()).unwrap();
    let fact = solver.factorization();
    let zetas: Vec<_> = fact.kept().map(|i| singular_poly(fact, sys, i).unwrap()).collect();
    let sampled: Vec<_> = zetas.iter().map(|z| z.sample(sys, &config.grid()).unwrap()).collect();
    let (mut cont, mut disc): (f64, f64) = (0.0, 0.0);
    for i in 0..zetas.len() {
        for j in 0..=i {
            let gamma = sys.gamma();
            let c = gamma
                * rule.integrate(|t| {
                    zetas[i].evaluate(sys, gamma * t).unwrap() * zetas[j].evaluate(sys, gamma * t).unwrap()
                });
            let d = discrete_inner(&sampled[i], &sampled[j]).unwrap();
            let delta = if i == j { 1.0 } else { 0.0 };
            cont = cont.max((c - delta).abs());
            disc = disc.max((d - delta * zetas[i].sigma * zetas[i].sigma).abs());
        }
    }
    if cont > 1e-8 || disc > 1e-8 {
        failures.push(format!("zeta orthogonality continuous {cont:.2e} discrete {disc:.2e}"));
    }

    let detail = format!(
        "linearity {lin:.1e}, reproduction {repro:.1e}, residual slack {residual_slack:.1e}, two-path {two_path:.1e}, zeta {cont:.1e}/{disc:.1e}"
    );
    Outcome::new(
        failures.is_empty(),
        if failures.is_empty() { detail } else { format!("{detail}; failing: {}", failures.join(", ")) },
    )
}

fn bound_inequalities() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    // Sup-norm and weighted-norm comparisons on random polynomials.
    let sets = [LEGACY, (-1.0 / 3.0, -2.0 / 3.0), (2.0, 2.5), (5.0, 10.0), (0.0, 20.0)];
    let mut slack: f64 = f64::INFINITY;
    for ab in sets {
        for gamma in [1.2, 2.0, 2.5] {
            let sys = FrameSystem::new(params(ab), gamma, 60).unwrap();
            let c_frame = frame_constant(&sys);
            let lower = sup_to_l2_constant(&sys);
            for _ in 0..100 {
                let n = rng.random_range(0..=60);
                let c: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let l2 = weighted_l2_norm_extended(&c, &sys);
                let sup = sup_norm_dense(|x| sys.combine(&c, x).unwrap(), -gamma, gamma, 4 * DENSE).unwrap();
                slack = slack.min((c_frame * l2 - sup) / sup);
                slack = slack.min((lower * sup - l2) / l2);
            }
        }
    }
    if slack < -1e-8 {
        failures.push(format!("norm inequalities slack {slack:.2e}"));
    }

    // Closed forms against their defining ratios.
    let mut identity: f64 = 0.0;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    for gamma in [1.2, 1.5, 2.0, 2.5, 4.0] {
        let sys = FrameSystem::new(params(LEGACY), gamma, 20).unwrap();
        let t = tau(gamma);
        identity = identity.max(rel(t, gamma + (gamma * gamma - 1.0).sqrt()));
        let outer = t + 0.75;
        let inner = 1.0 + 0.5 * (t - 1.0);
        identity = identity.max(rel(g3(outer, &sys), g2(outer, &sys) / g1(outer)));
        identity = identity.max(rel(h3(inner, &sys), h2(inner, &sys) / h1(inner)));
        let config = FrameConfig::with_oversampling(params(LEGACY), gamma, 20, 4.0, 1e-14).unwrap();
        let report = bound_report(&config, None, None).unwrap();
        identity = identity.max(rel(report.epsilon_prime, std::f64::consts::SQRT_2 * report.c_frame * 1e-14));
    }
    if identity > 1e-14 {
        failures.push(format!("identities {identity:.2e}"));
    }

    // Condition estimate against 10 sqrt(m+1) over the standard sweeps.
    let mut configs: Vec<((f64, f64), f64)> = Vec::new();
    for ab in MODERATE_PARAMS {
        for gamma in [1.2, 1.5, 2.0, 2.5] {
            configs.push((ab, gamma));
        }
    }
    for gamma in [4.0, 8.0, 15.0, 30.0] {
        configs.push((LEGACY, gamma));
    }
    let mut worst = (0.0, (0.0, 0.0), 0.0, 0);
    let mut per_gamma: Vec<(f64, f64)> = Vec::new();
    for (ab, gamma) in configs {
        for n in (2..=120).step_by(2) {
            let config = FrameConfig::with_oversampling(params(ab), gamma, n, 4.0, 1e-14).unwrap();
            let kappa = FrameSolver::new(&config).unwrap().condition_estimate(2000, Execution::default()).unwrap();
            let ratio = kappa / ((config.m() + 1) as f64).sqrt();
            if ratio > worst.0 {
                worst = (ratio, ab, gamma, n);
            }
            match per_gamma.iter_mut().find(|g| g.0 == gamma) {
                Some(g) => g.1 = g.1.max(ratio),
                None => per_gamma.push((gamma, ratio)),
            }
        }
    }
    if worst.0 > 10.0 {
        failures.push(format!(
            "condition {:.2} sqrt(m+1) at (alpha, beta) = ({:.4}, {:.4}), gamma = {}, n = {}",
            worst.0, worst.1 .0, worst.1 .1, worst.2, worst.3
        ));
    }

    let by_gamma: Vec<String> = per_gamma.iter().map(|(g, r)| format!("{g}: {r:.2}")).collect();
    let detail = format!(
        "norm slack {slack:.1e}, identities {identity:.1e}, max condition / sqrt(m+1) = {:.2} (need <= 10; by gamma {})",
        worst.0,
        by_gamma.join(", ")
    );
    Outcome::new(
        failures.is_empty(),
        if failures.is_empty() { detail } else { format!("{detail}; failing: {}", failures.join(", ")) },
    )
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check, u64); 8] = [
        ("1 orthogonality of Jacobi polynomials", orthogonality, 5),
        ("2 singular value profile", singular_value_profile, 30),
        ("3 f1 exponential rate and plateau", analytic_rate, 60),
        ("4 gamma trade-off for f3", gamma_tradeoff, 60),
        ("5 algebraic rates f5 f7 f8", algebraic_rates, 120),
        ("6 large-parameter degradation", large_parameter_degradation, 60),
        ("7 operator properties", operator_properties, 60),
        ("8 norm inequalities, identities, conditioning", bound_inequalities, 60),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(limit);
        let pass = outcome.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.1} s, limit {limit} s]",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
