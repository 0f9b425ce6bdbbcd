use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use levy_expfun::harness::{run_experiment, write_report, ExperimentConfig};
use levy_expfun::models::{sample_example1, sample_example2, ExpJumpSubordinator, GeometricCompoundPoisson};
use levy_expfun::{
    build_grid, estimate_laplace_exponent, estimate_tilted_fourier, estimate_triplet,
    invert_levy_density, select_v_max, FrequencyGrid, GridMode, KernelSpec, RateParameters,
    SampleSet, TripletEstimate, WeightFunction,
};
use serde_json::json;

use crate::{EstimateArgs, ExperimentArgs, Failure, GridArgs, InvertArgs, ModelKind, SimulateArgs, SEED_ENV};

type CmdResult = Result<(), Failure>;

fn env_seed() -> Result<Option<u64>, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::config(format!("{SEED_ENV} must be an unsigned integer, got '{text}'"))),
        Err(_) => Ok(None),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 3,
        message: format!("{}: {e}", path.display()),
    }
}

fn read_samples(path: &Path) -> Result<SampleSet, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let samples = SampleSet::read_csv(text.as_bytes(), path.display().to_string())?;
    samples.require_estimable()?;
    Ok(samples)
}

fn write_file(path: &Path, bytes: &[u8]) -> CmdResult {
    fs::write(path, bytes).map_err(|e| io_failure(path, e))
}

pub fn simulate(args: &SimulateArgs) -> CmdResult {
    if args.n == 0 {
        return Err(Failure::config("--n must be at least 1"));
    }
    let seed = match args.seed {
        Some(s) => s,
        None => env_seed()?.unwrap_or(0),
    };
    let samples = match args.model {
        ModelKind::ExpJump => {
            let m = ExpJumpSubordinator::new(args.c, args.a, args.b)?;
            sample_example1(&m, args.n, seed)?
        }
        ModelKind::Geometric => {
            let m = GeometricCompoundPoisson::new(args.q, args.lambda, args.alpha)?;
            sample_example2(&m, args.n, args.tol, seed)?
        }
    };
    let mut buf = Vec::new();
    samples.write_csv(&mut buf)?;
    write_file(&args.out, &buf)?;
    println!(
        "wrote {} samples ({}, seed {seed}, mean {:.6}) to {}",
        samples.len(),
        samples.label,
        samples.mean(),
        args.out.display()
    );
    Ok(())
}

fn read_weights(path: &Path) -> Result<Vec<f64>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let mut values = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(w) => values.push(w),
            // a header line
            Err(_) if k == 0 => {}
            Err(_) => {
                return Err(Failure::config(format!(
                    "{}: cannot parse weight '{field}' on line {}",
                    path.display(),
                    k + 1
                )))
            }
        }
    }
    Ok(values)
}

struct Window {
    v_max: f64,
    rule: serde_json::Value,
}

fn window(grid: &GridArgs, n: usize) -> Result<Window, Failure> {
    match grid.gamma {
        Some(gamma) => {
            let rates = match grid.kappa {
                Some(kappa) => RateParameters::new(gamma, 1.0, kappa)?,
                None => RateParameters::with_default_kappa(gamma, 1.0)?,
            };
            Ok(Window {
                v_max: select_v_max(n, &rates)?,
                rule: json!({"rule": "rates", "gamma": rates.gamma, "kappa": rates.kappa}),
            })
        }
        None => Ok(Window {
            v_max: grid.v_max,
            rule: json!({"rule": "fixed", "value": grid.v_max}),
        }),
    }
}

struct Fit {
    triplet: TripletEstimate,
    window: Window,
}

fn fit(samples: &SampleSet, grid: &GridArgs) -> Result<Fit, Failure> {
    let window = window(grid, samples.len())?;
    let one: FrequencyGrid = build_grid(grid.u, grid.epsilon, window.v_max, grid.grid_points, GridMode::OneSided)?;
    let weights = match &grid.weights_file {
        Some(path) => WeightFunction::from_table(&one, read_weights(path)?)?,
        None => WeightFunction::uniform(&one)?,
    };
    let table = estimate_laplace_exponent(samples, &one)?;
    let triplet = estimate_triplet(&table, &weights)?;
    Ok(Fit { triplet, window })
}

pub fn estimate(args: &EstimateArgs) -> CmdResult {
    let samples = read_samples(&args.input)?;
    let Fit { triplet, window } = fit(&samples, &args.grid)?;
    let result = json!({
        "c_hat": triplet.c_hat,
        "a_hat": triplet.a_hat,
        "grid": {
            "u": triplet.grid.u,
            "epsilon": triplet.grid.epsilon,
            "v_max": triplet.grid.v_max,
            "grid_points": triplet.grid.len(),
            "v_max_rule": window.rule,
            "weights": if args.grid.weights_file.is_some() { "user_table" } else { "uniform" },
        },
        "diagnostics": {
            "n": samples.len(),
            "sample_mean": samples.mean(),
            "sample_min": samples.values.iter().copied().fold(f64::INFINITY, f64::min),
            "sample_max": samples.values.iter().copied().fold(0.0, f64::max),
        },
    });
    let mut text = serde_json::to_string_pretty(&result).map_err(levy_expfun::Error::from)?;
    text.push('\n');
    println!(
        "n = {}, V = {}, {} grid points: c_hat = {:.6}, a_hat = {:.6}",
        samples.len(),
        window.v_max,
        triplet.grid.len(),
        triplet.c_hat,
        triplet.a_hat
    );
    match &args.out {
        Some(path) => {
            write_file(path, text.as_bytes())?;
            println!("wrote {}", path.display());
        }
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| io_failure(Path::new("<stdout>"), e))?;
        }
    }
    Ok(())
}

pub fn invert(args: &InvertArgs) -> CmdResult {
    if args.x_points == 0 || !(args.x_max > args.x_min) {
        return Err(Failure::config("x grid needs --x-points >= 1 and --x-max > --x-min"));
    }
    if !(args.jump_scale > 0.0 && args.jump_scale.is_finite()) {
        return Err(Failure::config("--jump-scale must be positive"));
    }
    let samples = read_samples(&args.input)?;
    let Fit { triplet, window } = fit(&samples, &args.grid)?;
    let sym = build_grid(args.grid.u, args.grid.epsilon, window.v_max, args.grid.grid_points, GridMode::Symmetric)?;
    let table = estimate_laplace_exponent(&samples, &sym)?;
    let fourier = estimate_tilted_fourier(&table, &triplet)?;
    let h = args.bandwidth.unwrap_or(1.0 / window.v_max);
    let dx = (args.x_max - args.x_min) / args.x_points as f64;
    let xs: Vec<f64> = (1..=args.x_points).map(|k| args.x_min + dx * k as f64).collect();
    let jumps: Vec<f64> = xs.iter().map(|x| x * args.jump_scale).collect();
    let mut est = invert_levy_density(&fourier, &KernelSpec::default(), h, &jumps)?;
    if args.clip {
        est = est.clipped();
    }

    let mut w = String::new();
    w.push_str("x,nu_real,nu_imag\n");
    for (k, x) in xs.iter().enumerate() {
        w.push_str(&format!(
            "{x},{},{}\n",
            est.values_real[k] * args.jump_scale,
            est.values_imag[k] * args.jump_scale
        ));
    }
    write_file(&args.out, w.as_bytes())?;
    println!(
        "c_hat = {:.6}, a_hat = {:.6}, V = {}, h = {h}, h V = {:.3}; wrote {} points to {}",
        triplet.c_hat,
        triplet.a_hat,
        window.v_max,
        est.bandwidth_times_v_max,
        xs.len(),
        args.out.display()
    );
    Ok(())
}

pub fn experiment(args: &ExperimentArgs) -> CmdResult {
    let text = fs::read_to_string(&args.config).map_err(|e| io_failure(&args.config, e))?;
    let mut config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| Failure::config(format!("{}: {e}", args.config.display())))?;
    if let Some(seed) = env_seed()? {
        config.master_seed = seed;
    }
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    let dir: PathBuf = args
        .output_dir
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results"));
    config.output_dir = Some(dir.clone());
    config.validate()?;

    let report = run_experiment(&config)?;
    let files = write_report(&report, &dir)?;

    for s in &report.summaries {
        let fmt = |q: Option<levy_expfun::harness::Quartiles>| {
            q.map(|q| format!("{:.5} [{:.5}, {:.5}]", q.median, q.q1, q.q3))
                .unwrap_or_else(|| "-".into())
        };
        println!(
            "n = {:>8}: c_hat {} | a_hat {} | {} failed",
            s.n,
            fmt(s.c),
            fmt(s.a),
            s.failures
        );
    }
    for c in &report.psi_curves {
        println!("psi curve n = {}: sup |psi_hat - psi| = {:.4e}", c.n, c.sup_error);
    }
    for c in &report.levy_curves {
        println!(
            "levy recovery n = {}: L2 error {}",
            c.n,
            c.l2_error.map(|e| format!("{e:.4e}")).unwrap_or_else(|| "-".into())
        );
    }
    println!("wrote {} files to {}", files.len(), dir.display());
    Ok(())
}
