use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::experiments::{ExperimentReport, ParameterSummary};
use crate::error::Result;

#[derive(Serialize)]
struct RunRow<'a> {
    run: usize,
    v_max: f64,
    c_hat: Option<f64>,
    a_hat: Option<f64>,
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct SummaryRow {
    n: usize,
    successes: usize,
    failures: usize,
    c_q1: Option<f64>,
    c_median: Option<f64>,
    c_q3: Option<f64>,
    c_mae: Option<f64>,
    a_q1: Option<f64>,
    a_median: Option<f64>,
    a_q3: Option<f64>,
    a_mae: Option<f64>,
}

impl From<&ParameterSummary> for SummaryRow {
    fn from(s: &ParameterSummary) -> Self {
        Self {
            n: s.n,
            successes: s.successes,
            failures: s.failures,
            c_q1: s.c.map(|q| q.q1),
            c_median: s.c.map(|q| q.median),
            c_q3: s.c.map(|q| q.q3),
            c_mae: s.c_mae,
            a_q1: s.a.map(|q| q.q1),
            a_median: s.a.map(|q| q.median),
            a_q3: s.a.map(|q| q.q3),
            a_mae: s.a_mae,
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    crate_version: &'a str,
    files: &'a [String],
    report: ManifestBody<'a>,
}

#[derive(Serialize)]
struct ManifestBody<'a> {
    config: &'a super::config::ExperimentConfig,
    summaries: &'a [ParameterSummary],
    rate_diagnostics: &'a [super::diagnostics::RateDiagnostic],
    decay_diagnostics: &'a [super::experiments::DecayDiagnostic],
    psi_curves: Vec<CurveInfo>,
    levy_curves: Vec<LevyInfo>,
}

#[derive(Serialize)]
struct CurveInfo {
    n: usize,
    u: f64,
    v_max: f64,
    sup_error: f64,
}

#[derive(Serialize)]
struct LevyInfo {
    n: usize,
    v_max: f64,
    bandwidth: f64,
    c_hat: f64,
    a_hat: f64,
    l2_error: Option<f64>,
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `{experiment}_{model}_{n}.csv` tables, `summary_{model}.csv` and
/// `manifest.json` into `dir`. Returns the file names in writing order.
///
/// Output is a pure function of the report: no timestamps or host data.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let model = report.config.model.name();
    let mut names = Vec::new();

    for &n in &report.config.n_values {
        if report.runs.iter().all(|r| r.n != n) {
            continue;
        }
        let name = format!("parameters_{model}_{n}.csv");
        write_rows(
            &dir.join(&name),
            report.runs.iter().filter(|r| r.n == n).map(|r| RunRow {
                run: r.run,
                v_max: r.v_max,
                c_hat: r.c_hat,
                a_hat: r.a_hat,
                error: r.error.as_deref(),
            }),
        )?;
        names.push(name);
    }
    if !report.summaries.is_empty() {
        let name = format!("summary_{model}.csv");
        write_rows(&dir.join(&name), report.summaries.iter().map(SummaryRow::from))?;
        names.push(name);
    }
    for curve in &report.psi_curves {
        let name = format!("psi_curve_{model}_{}.csv", curve.n);
        write_rows(&dir.join(&name), &curve.rows)?;
        names.push(name);
    }
    for curve in &report.levy_curves {
        let name = format!("levy_recovery_{model}_{}.csv", curve.n);
        write_rows(&dir.join(&name), &curve.rows)?;
        names.push(name);
    }

    let manifest = Manifest {
        crate_version: &report.crate_version,
        files: &names,
        report: ManifestBody {
            config: &report.config,
            summaries: &report.summaries,
            rate_diagnostics: &report.rate_diagnostics,
            decay_diagnostics: &report.decay_diagnostics,
            psi_curves: report
                .psi_curves
                .iter()
                .map(|c| CurveInfo { n: c.n, u: c.u, v_max: c.v_max, sup_error: c.sup_error })
                .collect(),
            levy_curves: report
                .levy_curves
                .iter()
                .map(|c| LevyInfo {
                    n: c.n,
                    v_max: c.v_max,
                    bandwidth: c.bandwidth,
                    c_hat: c.c_hat,
                    a_hat: c.a_hat,
                    l2_error: c.l2_error,
                })
                .collect(),
        },
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(dir.join("manifest.json"), text)?;

    let mut paths: Vec<PathBuf> = names.iter().map(|n| dir.join(n)).collect();
    paths.push(dir.join("manifest.json"));
    Ok(paths)
}
