//! Convergence sweeps for Jacobi frame approximation, written as CSV.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use framefit::experiments::{
    emit_csv, emit_singular_profile, fit_rate, points_from_rows, run_sweep, write_csv, ExperimentSpec, FitWindow,
    FunctionId, RateModel, ResultRow,
};
use framefit::par::with_thread_cap;
use framefit::{Execution, FrameError, JacobiParams};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARAMETER: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FitModel {
    Exp,
    Alg,
}

/// Approximate the test functions from equispaced samples with Jacobi frames
/// and record uniform errors, singular values and condition estimates.
#[derive(Debug, Parser)]
#[command(name = "framefit", version)]
struct Cli {
    /// Test function (f1..f9) or `all`; repeatable.
    #[arg(long = "function", default_value = "f1")]
    functions: Vec<String>,
    /// Jacobi alpha; repeatable, paired with --beta. Accepts fractions such as 1/3.
    #[arg(long = "alpha", value_parser = parse_real)]
    alphas: Vec<f64>,
    /// Jacobi beta; repeatable, paired with --alpha.
    #[arg(long = "beta", value_parser = parse_real)]
    betas: Vec<f64>,
    /// Extension factor gamma > 1; repeatable.
    #[arg(long = "gamma", value_parser = parse_real)]
    gammas: Vec<f64>,
    /// Truncation tolerance; repeatable.
    #[arg(long = "epsilon", value_parser = parse_real)]
    epsilons: Vec<f64>,
    /// Oversampling ratio, m = round(eta n); repeatable.
    #[arg(long = "eta", value_parser = parse_real)]
    etas: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 120)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    n_step: usize,
    /// Equispaced points used to measure the uniform error.
    #[arg(long, default_value_t = 10_000)]
    grid_size: usize,
    /// Points used by the condition-number estimate.
    #[arg(long, default_value_t = 2000)]
    condition_points: usize,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the singular-value profile (n,index,sigma) of the first
    /// (alpha, beta, gamma, eta) combination to this path.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Fit a convergence rate per parameter combination and print it to stderr.
    #[arg(long, value_enum)]
    fit: Option<FitModel>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run on a single thread.
    #[arg(long)]
    sequential: bool,
    /// Write 0 for wall_time_ms so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

fn parse_real(s: &str) -> Result<f64, String> {
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{s}': {e}"));
    match s.split_once('/') {
        Some((num, den)) => Ok(parse(num)? / parse(den)?),
        None => parse(s),
    }
}

fn build_spec(cli: &Cli) -> Result<ExperimentSpec, FrameError> {
    let mut functions = Vec::new();
    for f in &cli.functions {
        if f.eq_ignore_ascii_case("all") {
            functions.extend(FunctionId::ALL);
        } else {
            functions.push(f.parse()?);
        }
    }
    functions.dedup();
    let defaults = ExperimentSpec::default();
    let params = match (cli.alphas.len(), cli.betas.len()) {
        (0, 0) => defaults.params.clone(),
        (a, b) if a == b => cli.alphas.iter().copied().zip(cli.betas.iter().copied()).collect(),
        (1, _) => cli.betas.iter().map(|&b| (cli.alphas[0], b)).collect(),
        (_, 1) => cli.alphas.iter().map(|&a| (a, cli.betas[0])).collect(),
        (0, _) => cli.betas.iter().map(|&b| (defaults.params[0].0, b)).collect(),
        (_, 0) => cli.alphas.iter().map(|&a| (a, defaults.params[0].1)).collect(),
        (a, b) => {
            return Err(FrameError::Parameter(format!("{a} --alpha values cannot be paired with {b} --beta values")))
        }
    };
    let or = |given: &Vec<f64>, fallback: &Vec<f64>| if given.is_empty() { fallback.clone() } else { given.clone() };
    let spec = ExperimentSpec {
        functions,
        params,
        gammas: or(&cli.gammas, &defaults.gammas),
        epsilons: or(&cli.epsilons, &defaults.epsilons),
        etas: or(&cli.etas, &defaults.etas),
        n_start: cli.n_min,
        n_stop: cli.n_max,
        n_step: cli.n_step,
        grid_size: cli.grid_size,
        condition_points: cli.condition_points,
        seed: cli.seed,
        timing: !cli.no_timing,
    };
    spec.validate()?;
    Ok(spec)
}

fn report_fits(rows: &[ResultRow], model: FitModel) {
    let model = match model {
        FitModel::Exp => RateModel::Exponential,
        FitModel::Alg => RateModel::Algebraic,
    };
    let mut start = 0;
    while start < rows.len() {
        let t = rows[start].tuple();
        let end = start + rows[start..].iter().take_while(|r| r.tuple() == t).count();
        let label = format!(
            "{} alpha={} beta={} gamma={} epsilon={:e} eta={}",
            t.function, t.alpha, t.beta, t.gamma, t.epsilon, t.eta
        );
        match fit_rate(&points_from_rows(&rows[start..end]), model, FitWindow::default()) {
            Ok(fit) => eprintln!(
                "{label}: rate {:.6} over n = {}..{} ({} points, rms residual {:.3e})",
                fit.exponent, fit.n_range.0, fit.n_range.1, fit.points, fit.residual
            ),
            Err(e) => eprintln!("{label}: {e}"),
        }
        start = end;
    }
}

fn run(cli: &Cli) -> Result<Vec<ResultRow>, (u8, FrameError)> {
    let spec = build_spec(cli).map_err(|e| (EXIT_PARAMETER, e))?;
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let threads = std::env::var("FRAMEFIT_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok());
    let failure = |e: FrameError| (EXIT_FAILURE, e);

    if let Some(path) = &cli.profile {
        let (alpha, beta) = spec.params[0];
        let params = JacobiParams::new(alpha, beta).map_err(|e| (EXIT_PARAMETER, e))?;
        with_thread_cap(threads, || emit_singular_profile(params, spec.gammas[0], spec.etas[0], &spec.degrees(), path))
            .map_err(failure)?;
    }
    let rows = with_thread_cap(threads, || run_sweep(&spec, exec)).map_err(|e| (EXIT_PARAMETER, e))?;
    match &cli.out {
        Some(path) => emit_csv(&rows, path).map_err(failure)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_csv(&rows, &mut lock)
                .map_err(|e| failure(FrameError::Numerical(format!("writing CSV to stdout: {e}"))))?;
            lock.flush().ok();
        }
    }
    if let Some(model) = cli.fit {
        report_fits(&rows, model);
    }
    Ok(rows)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rows) => {
            let failed = rows.iter().filter(|r| !r.status.is_ok()).count();
            if failed > 0 {
                eprintln!("framefit: {failed} of {} rows failed", rows.len());
                ExitCode::from(EXIT_PARTIAL)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err((code, e)) => {
            eprintln!("framefit: {e}");
            ExitCode::from(code)
        }
    }
}
