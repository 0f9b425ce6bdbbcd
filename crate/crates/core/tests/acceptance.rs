//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Tolerances marked "pilot" were frozen from seeded pilot runs; the
//! observed pilot values are quoted next to each bound.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use levy_expfun::harness::*;
use levy_expfun::models::*;
use levy_expfun::*;
use rand_distr::{Beta as BetaDist, Distribution};
use statrs::distribution::{Beta, ContinuousCDF};

const SEED: u64 = 20240611;

// criterion 1
const IDENTITY_TOL: f64 = 1e-10;
// criterion 2
const KS_FACTOR: f64 = 1.63;
const MC_SE_FACTOR: f64 = 3.0;
// criterion 3, pilot: sup error 0.010..0.046 over 10 seeds at n = 1e4
const PSI_SUP_TOL: f64 = 0.06;
// criterion 4, pilot medians over 4 seeds: c within 6e-4 of 1.8, a within 0.026 of 0.7
const C_MEDIAN_BAND: f64 = 0.005;
const A_MEDIAN_BAND: f64 = 0.05;
// criterion 5
const ROUND_TRIP_TOL: f64 = 1e-12;
// criterion 6, pilot: exact-input L2 error 0.2846, estimated 0.43..0.51 over 8 seeds
const EXACT_L2_BOUND: f64 = 0.30;
const IMAG_FRACTION: f64 = 1e-2;
const ESTIMATED_L2_FACTOR: f64 = 3.0;
// criterion 7: 30-digit evaluation of exp(-exp(-1/0.45)/0.5)
const KERNEL_AT_HALF: f64 = 0.80514246147569646;
// criterion 8
const SCALE_REL_TOL: f64 = 1e-12;
const LINEARITY_REL_TOL: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit_secs: u64) -> (bool, String) {
    let ok = elapsed <= Duration::from_secs(limit_secs);
    (ok, format!("{:.2}s (limit {limit_secs}s)", elapsed.as_secs_f64()))
}

fn paper_ex1() -> ExpJumpSubordinator {
    ExpJumpSubordinator::new(1.8, 0.7, 0.2).unwrap()
}

fn paper_ex2() -> GeometricCompoundPoisson {
    GeometricCompoundPoisson::new(0.5, 1.0, 0.1).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let beta_law = paper_ex1();
    let gamma_law = ExpJumpSubordinator::new(0.0, 0.7, 0.2).unwrap();
    let mut worst_abs: f64 = 0.0;
    let mut worst_rel: f64 = 0.0;
    for k in 0..100 {
        let s = Complex64::new(30.0, -30.0 + 60.0 * k as f64 / 99.0);
        for m in [&beta_law, &gamma_law] {
            let r = moment_identity_residual(|z| m.mellin(z), |z| m.psi(z).unwrap(), s);
            let rel = r / m.mellin(s).norm();
            if m.c > 0.0 {
                worst_abs = worst_abs.max(r);
            }
            worst_rel = worst_rel.max(rel);
        }
    }
    let (fast, t) = within(start.elapsed(), 1);
    check(
        worst_abs < IDENTITY_TOL && worst_rel < IDENTITY_TOL && fast,
        format!("Beta law max residual {worst_abs:.2e}, max relative residual (Beta and Gamma) {worst_rel:.2e}, {t}"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let n = 10_000;
    let s = sample_example1(&paper_ex1(), n, SEED).unwrap();
    let law = Beta::new(1.2, 7.0 / 18.0).unwrap();
    let mut x = s.values.clone();
    x.sort_by(f64::total_cmp);
    let nf = n as f64;
    let ks = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let f = law.cdf(1.8 * xi);
            (f - i as f64 / nf).abs().max(((i + 1) as f64 / nf - f).abs())
        })
        .fold(0.0, f64::max);
    let ks_bound = KS_FACTOR / nf.sqrt();

    let m = paper_ex2();
    let s2 = sample_example2(&m, 100_000, DEFAULT_SERIES_TOL, SEED).unwrap();
    let mean = s2.mean();
    let var = s2.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (s2.len() - 1) as f64;
    let se = (var / s2.len() as f64).sqrt();
    let target = 1.0 / m.psi(Complex64::new(1.0, 0.0)).unwrap().re;
    let (fast, t) = within(start.elapsed(), 10);
    check(
        ks <= ks_bound && (mean - target).abs() <= MC_SE_FACTOR * se && fast,
        format!(
            "KS {ks:.4} <= {ks_bound:.4}; example 2 mean {mean:.4} vs 1/psi(1) = {target:.4} ({:.2} SE); {t}",
            (mean - target).abs() / se
        ),
    )
}

fn psi_sup_error(n: usize) -> f64 {
    let m = paper_ex2();
    let s = sample_example2(&m, n, DEFAULT_SERIES_TOL, SEED).unwrap();
    let g = build_grid(1.0, 0.1, 5.0, 201, GridMode::Symmetric).unwrap();
    let t = estimate_laplace_exponent(&s, &g).unwrap();
    t.points()
        .zip(&t.values)
        .filter(|(z, _)| z.im.abs() <= 3.0 + 1e-12)
        .map(|(z, p)| (p - m.psi(z).unwrap()).norm())
        .fold(0.0, f64::max)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let small = psi_sup_error(10_000);
    let large = psi_sup_error(100_000);
    let (fast, t) = within(start.elapsed(), 30);
    check(
        small < PSI_SUP_TOL && large < small && fast,
        format!("sup error {small:.4} at n=1e4 (< {PSI_SUP_TOL}), {large:.4} at n=1e5; {t}"),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let config = ExperimentConfig::from_json(&format!(
        r#"{{"model": {{"kind": "exp_jump", "c": 1.8, "a": 0.7, "b": 0.2}},
            "n_values": [500, 5000, 50000], "runs": 25,
            "grid": {{"u": 30.0, "v_max": {{"rule": "fixed", "value": 30.0}}}},
            "master_seed": {SEED}}}"#
    ))
    .unwrap();
    let report = run_parameter_experiment(&config).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for s in &report.summaries {
        let (c, a) = (s.c.unwrap().median, s.a.unwrap().median);
        pass &= s.failures == 0 && (c - 1.8).abs() <= C_MEDIAN_BAND && (a - 0.7).abs() <= A_MEDIAN_BAND;
        parts.push(format!(
            "n={} c~{c:.4} a~{a:.3} mae({:.1e},{:.1e})",
            s.n,
            s.c_mae.unwrap(),
            s.a_mae.unwrap()
        ));
    }
    for w in report.summaries.windows(2) {
        pass &= w[1].c_mae.unwrap() <= w[0].c_mae.unwrap();
        pass &= w[1].a_mae.unwrap() <= w[0].a_mae.unwrap();
    }
    let (fast, t) = within(start.elapsed(), 120);
    check(pass && fast, format!("{}; {t}", parts.join("; ")))
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    // example 1 against the closed form a b / (b + u + i v)
    let m = paper_ex1();
    let one = build_grid(30.0, 0.1, 30.0, 201, GridMode::OneSided).unwrap();
    let sym = build_grid(30.0, 0.1, 30.0, 201, GridMode::Symmetric).unwrap();
    let exact = TripletEstimate {
        c_hat: m.c,
        a_hat: m.a,
        grid: one.clone(),
        weights: WeightFunction::uniform(&one).unwrap(),
    };
    let table = LaplaceExponentTable::analytic(sym.clone(), |s| m.psi(s)).unwrap();
    let f = estimate_tilted_fourier(&table, &exact).unwrap();
    for (v, value) in sym.frequencies().zip(&f.values) {
        worst = worst.max((value - m.tilted_fourier(30.0, v)).norm());
    }
    // example 2 against lambda - psi
    let m2 = paper_ex2();
    let sym2 = build_grid(1.0, 0.1, 5.0, 201, GridMode::Symmetric).unwrap();
    let exact2 = TripletEstimate { c_hat: 0.0, a_hat: m2.lambda, ..exact };
    let table2 = LaplaceExponentTable::analytic(sym2.clone(), |s| m2.psi(s)).unwrap();
    let f2 = estimate_tilted_fourier(&table2, &exact2).unwrap();
    for (v, value) in sym2.frequencies().zip(&f2.values) {
        worst = worst.max((value - m2.tilted_fourier(1.0, v).unwrap()).norm());
    }
    check(worst <= ROUND_TRIP_TOL, format!("max deviation {worst:.2e} over 402 grid points"))
}

fn levy_config(source: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(&format!(
        r#"{{"model": {{"kind": "geometric_compound_poisson", "q": 0.5, "lambda": 1.0, "alpha": 0.1}},
            "n_values": [10000], "runs": 1, "psi_source": "{source}",
            "experiments": ["levy_recovery"], "curve_sizes": [10000],
            "grid": {{"u": 1.0, "v_max": {{"rule": "fixed", "value": 5.0}}}},
            "x_grid": {{"start": 0.2, "end": 3.0, "points": 281}},
            "master_seed": {SEED}}}"#
    ))
    .unwrap()
}

fn criterion_6() -> Outcome {
    let exact = run_levy_recovery(&levy_config("analytic"), 10_000).unwrap();
    let estimated = run_levy_recovery(&levy_config("empirical"), 10_000).unwrap();
    let e_exact = exact.l2_error.unwrap();
    let e_est = estimated.l2_error.unwrap();
    let peak = exact.rows.iter().map(|r| r.nu_real).fold(0.0, f64::max);
    let imag = exact.rows.iter().map(|r| r.nu_imag.abs()).fold(0.0, f64::max);
    let imag_est = estimated.rows.iter().map(|r| r.nu_imag.abs()).fold(0.0, f64::max);
    check(
        e_exact < EXACT_L2_BOUND
            && imag < IMAG_FRACTION * peak
            && imag_est < IMAG_FRACTION * peak
            && e_est <= ESTIMATED_L2_FACTOR * e_exact,
        format!(
            "exact-input L2 {e_exact:.4} (< {EXACT_L2_BOUND}), max |Im| {imag:.1e} / {imag_est:.1e} vs peak {peak:.3}, \
             estimated L2 {e_est:.4} (<= {:.4})",
            ESTIMATED_L2_FACTOR * e_exact
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    for x in [0.0, 0.05, -0.05] {
        pass &= flat_top_kernel(x) == 1.0;
    }
    for x in [1.0, -1.0, 2.0, -2.0] {
        pass &= flat_top_kernel(x) == 0.0;
    }
    let half = flat_top_kernel(0.5);
    pass &= (half - KERNEL_AT_HALF).abs() <= 1e-15 && flat_top_kernel(-0.5) == half;
    check(pass, format!("K(0)=K(+-0.05)=1, K(+-1)=K(+-2)=0, K(+-0.5)={half:.17}"))
}

fn criterion_8() -> Outcome {
    let m = paper_ex1();
    let s = sample_example1(&m, 2000, SEED).unwrap();
    let mut notes = Vec::new();

    // conjugate symmetry of moments and psi_hat, bit for bit
    let mut conj_ok = true;
    for v in [0.5, 3.0, 17.0, 30.0] {
        let p = empirical_complex_moment(&s, Complex64::new(30.0, v)).unwrap();
        let q = empirical_complex_moment(&s, Complex64::new(30.0, -v)).unwrap();
        conj_ok &= p == q.conj();
    }
    let sym = build_grid(30.0, 0.1, 30.0, 201, GridMode::Symmetric).unwrap();
    let t = estimate_laplace_exponent(&s, &sym).unwrap();
    let k = t.values.len();
    conj_ok &= (0..k).all(|i| t.values[i] == t.values[k - 1 - i].conj());
    notes.push(format!("conjugate symmetry {}", if conj_ok { "exact" } else { "broken" }));

    // E[(kA)^s] = k^s E[A^s]
    let factor = 3.7;
    let scaled = SampleSet::new(s.values.iter().map(|x| x * factor).collect(), "scaled", None).unwrap();
    let mut worst_scale: f64 = 0.0;
    for z in [Complex64::new(30.0, 12.0), Complex64::new(1.0, -4.0), Complex64::new(-2.0, 0.3)] {
        let lhs = empirical_complex_moment(&scaled, z).unwrap();
        let rhs = empirical_complex_moment(&s, z).unwrap() * (z * factor.ln()).exp();
        worst_scale = worst_scale.max((lhs - rhs).norm() / rhs.norm());
    }
    notes.push(format!("scale equivariance {worst_scale:.1e}"));

    // bit-identical reruns
    let again = sample_example1(&m, 2000, SEED).unwrap();
    let mut det_ok = s.values.iter().zip(&again.values).all(|(a, b)| a.to_bits() == b.to_bits());
    let config = levy_config("empirical");
    det_ok &= run_experiment(&config).unwrap() == run_experiment(&config).unwrap();
    notes.push(format!("reruns {}", if det_ok { "identical" } else { "differ" }));

    // linearity of c_hat and a_hat in the table entries
    let one = build_grid(30.0, 0.1, 30.0, 201, GridMode::OneSided).unwrap();
    let w = WeightFunction::uniform(&one).unwrap();
    let t1 = estimate_laplace_exponent(&s, &one).unwrap();
    let t2 = LaplaceExponentTable::analytic(one.clone(), |z| m.psi(z)).unwrap();
    let (x, y) = (0.3, -1.7);
    let mix = LaplaceExponentTable::new(
        one.clone(),
        t1.values.iter().zip(&t2.values).map(|(p, q)| x * p + y * q).collect(),
        TableSource::Empirical,
    )
    .unwrap();
    let e1 = estimate_triplet(&t1, &w).unwrap();
    let e2 = estimate_triplet(&t2, &w).unwrap();
    let em = estimate_triplet(&mix, &w).unwrap();
    let dc = (em.c_hat - (x * e1.c_hat + y * e2.c_hat)).abs() / em.c_hat.abs();
    let da = (em.a_hat - (x * e1.a_hat + y * e2.a_hat)).abs() / em.a_hat.abs();
    notes.push(format!("linearity {:.1e}", dc.max(da)));

    check(
        conj_ok && det_ok && worst_scale <= SCALE_REL_TOL && dc.max(da) <= LINEARITY_REL_TOL,
        notes.join(", "),
    )
}

fn criterion_9() -> Outcome {
    let mut notes = Vec::new();

    let rates = RateParameters::with_default_kappa(0.4, 1.0).unwrap();
    let scaled: Vec<f64> = [1_000, 10_000, 100_000, 1_000_000]
        .iter()
        .map(|&n| lambda_n(n, &rates).unwrap().scaled)
        .collect();
    let decreasing = scaled.windows(2).all(|w| w[1] < w[0]);
    notes.push(format!(
        "Lambda_n sqrt(log n / n) at kappa={} = [{}]",
        rates.kappa,
        scaled.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(", ")
    ));

    // exponential decay: example 1 with c = 0, A ~ Gamma(b + 1, rate a)
    let gamma_law = ExpJumpSubordinator::new(0.0, 0.7, 0.2).unwrap();
    let s = sample_example1(&gamma_law, 10_000, SEED).unwrap();
    let low_probe: Vec<f64> = (1..=12).map(|k| 0.25 * k as f64).collect();
    let gamma_hat = fit_mellin_decay(&s, 1.0, &low_probe);
    notes.push(format!("gamma_hat(example 1, c=0) = {gamma_hat:.3?}"));
    let positive = matches!(gamma_hat, Ok(g) if g > 0.0);

    // polynomial decay: A ~ Beta(1, 2), |E[A^(iv)]| ~ 2 / v^2
    let mut rng = seeded_rng(SEED);
    let law = BetaDist::new(1.0, 2.0).unwrap();
    let values: Vec<f64> = (0..1_000_000)
        .map(|_| loop {
            let x: f64 = law.sample(&mut rng);
            if x > 0.0 {
                break x;
            }
        })
        .collect();
    let poly = SampleSet::new(values, "beta(1,2)", None).unwrap();
    let high_probe: Vec<f64> = (2..=20).map(|k| k as f64).collect();
    let flagged = fit_mellin_decay(&poly, 0.0, &high_probe);
    notes.push(format!("Beta(1,2) law: {}", match &flagged {
        Err(e) => e.to_string(),
        Ok(g) => format!("not flagged, gamma_hat = {g:.3}"),
    }));
    let flag_ok = matches!(flagged, Err(Error::NonDecayingMoments { .. }));

    check(decreasing && positive && flag_ok, notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("moment identity for the analytic Mellin transform", criterion_1),
        ("sampler fidelity", criterion_2),
        ("Laplace exponent accuracy, example 2", criterion_3),
        ("parameter recovery over 25 runs, example 1", criterion_4),
        ("exact-input round trip of the tilted transform", criterion_5),
        ("Levy density recovery, example 2", criterion_6),
        ("flat-top kernel values", criterion_7),
        ("symmetry and determinism", criterion_8),
        ("rate and decay diagnostics", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        if !outcome.pass {
            failures += 1;
        }
        println!(
            "criterion {}: {} [{name}] {}",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
