//! Batch report commands. Each command writes plot-ready CSV/JSON files into
//! an output directory together with a `manifest.json` listing them.
//! Output depends only on the inputs and flags, so re-running a command
//! reproduces the files byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::arx::{self, ArxModel, FitOptions, FitReport};
use crate::error::{Error, Result};
use crate::ingest::{self, Diagnostic};
use crate::interpolate::{self, InterpMethod};
use crate::stats::{self, AcfEstimator, HistogramSpec};
use crate::types::{Dataset, SiteId, WindVar};

pub const MANIFEST_NAME: &str = "manifest.json";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub command: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Manifest {
    pub toolkit: String,
    pub version: String,
    pub command: String,
    pub files: Vec<ManifestEntry>,
}

/// Collects emitted files and writes the manifest last.
pub struct Bundle {
    out_dir: PathBuf,
    command: String,
    files: Vec<ManifestEntry>,
}

impl Bundle {
    pub fn new(out_dir: impl AsRef<Path>, command: impl Into<String>) -> Result<Self> {
        let out_dir = out_dir.as_ref().to_path_buf();
        fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
        Ok(Bundle {
            out_dir,
            command: command.into(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.out_dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.files.push(ManifestEntry {
            path: name.to_string(),
            command: self.command.clone(),
        });
        Ok(())
    }

    pub fn finish(self) -> Result<Manifest> {
        let manifest = Manifest {
            toolkit: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.command,
            files: self.files,
        };
        let path = self.out_dir.join(MANIFEST_NAME);
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n";
        fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
        Ok(manifest)
    }
}

/// Loads a dataset directory and optionally fills missing days.
pub fn load_dataset(dir: &Path, fill: Option<InterpMethod>) -> Result<(Dataset, Vec<Diagnostic>)> {
    let loaded = ingest::read_dataset_dir(dir)?;
    let ds = match fill {
        Some(method) => interpolate::fill_missing(&loaded.dataset, method)?,
        None => loaded.dataset,
    };
    Ok((ds, loaded.warnings))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| ingest::MISSING_TOKEN.to_string(), |x| x.to_string())
}

fn require_complete(ds: &Dataset) -> Result<()> {
    match ds.series().iter().find(|s| s.absent_count() > 0) {
        Some(s) => Err(Error::IncompleteSeries {
            site: s.site().to_string(),
            count: s.absent_count(),
        }),
        None => Ok(()),
    }
}

fn linear_histogram_csv(h: &stats::Histogram) -> String {
    let mut out = String::from("bin,lo,hi,count,freq\n");
    for (i, (c, f)) in h.counts.iter().zip(&h.freqs).enumerate() {
        let (lo, hi) = h.spec.bin_bounds(i);
        writeln!(out, "{i},{lo},{hi},{c},{f}").unwrap();
    }
    out
}

fn rose_csv(h: &stats::Histogram) -> String {
    let mut out = String::from("sector,label,center_deg,lo_deg,hi_deg,count,freq\n");
    for (i, (c, f)) in h.counts.iter().zip(&h.freqs).enumerate() {
        let (lo, hi) = h.spec.bin_bounds(i);
        let center = h.spec.bin_center(i);
        let label = stats::compass_point(center);
        writeln!(out, "{i},{label},{center},{lo},{hi},{c},{f}").unwrap();
    }
    out
}

/// Per-site speed histograms, 16-sector wind roses and moment summaries.
pub fn stats_report(ds: &Dataset, out_dir: &Path, command: &str) -> Result<Manifest> {
    require_complete(ds)?;
    let mut bundle = Bundle::new(out_dir, command)?;
    let max_of = |var: WindVar| -> Result<f64> {
        let mut max = f64::NEG_INFINITY;
        for s in ds.series() {
            for v in s.complete_values(var)? {
                max = max.max(v);
            }
        }
        Ok(max)
    };
    let avg_spec = HistogramSpec::speed(max_of(WindVar::Avg)?);
    let gust_spec = HistogramSpec::speed(max_of(WindVar::Gust)?);

    let mut summary = String::from("site,variable,n,mean,std,min,max,mode\n");
    for s in ds.series() {
        let site = s.site();
        for (var, spec) in [(WindVar::Avg, avg_spec), (WindVar::Gust, gust_spec)] {
            let xs = s.complete_values(var)?;
            let h = stats::histogram(&xs, spec)?;
            bundle.write(&format!("{site}_{var}_hist.csv"), &linear_histogram_csv(&h))?;
            let m = stats::summarize(&xs)?;
            let (lo, hi) = spec.bin_bounds(h.mode_bin());
            writeln!(
                summary,
                "{site},{var},{},{},{},{},{},{lo}-{hi}",
                m.n, m.mean, m.std, m.min, m.max
            )
            .unwrap();
        }
        let dirs = s.complete_values(WindVar::Dir)?;
        let rose = stats::histogram(&dirs, HistogramSpec::wind_rose())?;
        bundle.write(&format!("{site}_dir_rose.csv"), &rose_csv(&rose))?;
        let m = stats::summarize(&dirs)?;
        let dominant = stats::compass_point(rose.spec.bin_center(rose.mode_bin()));
        writeln!(
            summary,
            "{site},dir,{},{},{},{},{},{dominant}",
            m.n, m.mean, m.std, m.min, m.max
        )
        .unwrap();
    }
    bundle.write("summary.csv", &summary)?;
    bundle.finish()
}

/// Dominant wind-rose sector of each site, for quick inspection.
pub fn dominant_directions(ds: &Dataset) -> Result<Vec<(SiteId, &'static str)>> {
    ds.series()
        .iter()
        .map(|s| {
            let rose = stats::histogram(
                &s.complete_values(WindVar::Dir)?,
                HistogramSpec::wind_rose(),
            )?;
            Ok((
                s.site().clone(),
                stats::compass_point(rose.spec.bin_center(rose.mode_bin())),
            ))
        })
        .collect()
}

/// ACF of one series next to the ACF of its seeded Gaussian comparator.
pub fn acf_report(
    ds: &Dataset,
    site: &SiteId,
    var: WindVar,
    max_lag: Option<usize>,
    seed: u64,
    estimator: AcfEstimator,
    out_dir: &Path,
    command: &str,
) -> Result<Manifest> {
    let xs = ds.complete_series(site, var)?;
    let max_lag = max_lag.unwrap_or(xs.len().saturating_sub(1));
    let acf = stats::autocorrelation_with(&xs, max_lag, estimator)?;
    let comparator = stats::gaussian_walk_comparator(&xs, seed)?;
    let cacf = stats::autocorrelation_with(&comparator, max_lag, estimator)?;
    let mut out = String::from("lag,r,comparator_r\n");
    for ((lag, r), c) in acf.lags.iter().zip(&acf.values).zip(&cacf.values) {
        writeln!(out, "{lag},{r},{c}").unwrap();
    }
    let mut bundle = Bundle::new(out_dir, command)?;
    bundle.write(&format!("acf_{site}_{var}.csv"), &out)?;
    bundle.finish()
}

/// Variable-pair correlations per site and the cross-site matrix of `var`.
pub fn xcorr_report(ds: &Dataset, var: WindVar, out_dir: &Path, command: &str) -> Result<Manifest> {
    require_complete(ds)?;
    let mut bundle = Bundle::new(out_dir, command)?;
    let mut pairs = String::from("site,pair,r,p,band,n\n");
    for row in stats::variable_pairs(ds)? {
        for (name, c) in [
            ("avg/gust", row.avg_gust),
            ("avg/dir", row.avg_dir),
            ("gust/dir", row.gust_dir),
        ] {
            writeln!(
                pairs,
                "{},{name},{},{},{},{}",
                row.site, c.r, c.p_two_tailed, c.band, c.n
            )
            .unwrap();
        }
    }
    bundle.write("variable_pairs.csv", &pairs)?;

    let matrix = stats::cross_site_matrix(ds, var)?;
    let mut cross = String::from("site_a,site_b,r,p,band,n\n");
    for i in 0..matrix.sites.len() {
        for j in i..matrix.sites.len() {
            let c = matrix.get(i, j);
            writeln!(
                cross,
                "{},{},{},{},{},{}",
                matrix.sites[i], matrix.sites[j], c.r, c.p_two_tailed, c.band, c.n
            )
            .unwrap();
        }
    }
    bundle.write(&format!("cross_site_{var}.csv"), &cross)?;
    bundle.finish()
}

/// Per-method fill value at one day plus leave-one-out scores over the
/// whole series, computed on the raw (unfilled) data.
pub fn interp_report(
    raw: &Dataset,
    site: &SiteId,
    var: WindVar,
    day: Option<usize>,
    out_dir: &Path,
    command: &str,
) -> Result<Manifest> {
    let xs = raw.variable_series(site, var)?;
    let mut out = String::from("method,day,value,loo_rmse,scored,skipped\n");
    for method in [InterpMethod::Ma2, InterpMethod::Ma4, InterpMethod::QS] {
        // a method that cannot reach the day leaves its cell empty
        let value = match day {
            Some(t) if var.is_circular() => {
                inapplicable_as_none(interpolate::interpolate_direction_at(&xs, t, method))?
            }
            Some(t) => inapplicable_as_none(interpolate::interpolate_at(&xs, t, method))?,
            None => None,
        };
        let day_label = day.map_or_else(String::new, |t| raw.date(t).to_string());
        match inapplicable_as_none(interpolate::loo_cv_rmse(&xs, method))? {
            Some(loo) => writeln!(
                out,
                "{},{day_label},{},{},{},{}",
                method.label(),
                fmt_opt(value),
                loo.rmse,
                loo.scored,
                loo.skipped
            ),
            None => writeln!(
                out,
                "{},{day_label},{},,0,{}",
                method.label(),
                fmt_opt(value),
                xs.len()
            ),
        }
        .unwrap();
    }
    let mut bundle = Bundle::new(out_dir, command)?;
    bundle.write(&format!("interp_{site}_{var}.csv"), &out)?;
    bundle.finish()
}

fn inapplicable_as_none<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(
            Error::InsufficientNeighbors { .. }
            | Error::InsufficientPoints { .. }
            | Error::Extrapolation { .. }
            | Error::NoApplicablePoints(_),
        ) => Ok(None),
        Err(e) => Err(e),
    }
}

fn model_stem(model: &ArxModel) -> String {
    let (m, k) = model.orders();
    format!("{}_{}_m{m}_k{k}", model.target(), model.var())
}

/// Per-day replay table: date, observed, one-step prediction, residual.
pub fn replay_csv(
    ds: &Dataset,
    first_day: usize,
    observed: &[Option<f64>],
    predicted: &[f64],
) -> String {
    let mut out = String::from("date,observed,predicted,residual\n");
    for (i, (o, p)) in observed.iter().zip(predicted).enumerate() {
        let residual = o.map(|o| o - p);
        writeln!(
            out,
            "{},{},{p},{}",
            ds.date(first_day + i),
            fmt_opt(*o),
            fmt_opt(residual)
        )
        .unwrap();
    }
    out
}

#[derive(Serialize)]
struct FitJson<'a> {
    target: &'a SiteId,
    inputs: Vec<&'a SiteId>,
    var: WindVar,
    m: usize,
    k: usize,
    intercept: bool,
    window: arx::RegressorWindow,
    holdout: usize,
    label: &'a str,
    fitness: f64,
    rmse: f64,
    fpe: f64,
    rss: f64,
    n_params: usize,
    n_samples: usize,
    first_day: usize,
    poles: Option<arx::PoleReport>,
}

fn fit_json(model: &ArxModel, report: &FitReport, opts: &FitOptions) -> String {
    let (m, k) = model.orders();
    let json = FitJson {
        target: model.target(),
        inputs: model.input_sites().collect(),
        var: model.var(),
        m,
        k,
        intercept: opts.intercept,
        window: opts.window,
        holdout: opts.holdout,
        label: &report.label,
        fitness: report.fitness,
        rmse: report.rmse,
        fpe: report.fpe,
        rss: report.rss,
        n_params: report.n_params,
        n_samples: report.n_samples,
        first_day: report.first_day,
        poles: report.poles,
    };
    serde_json::to_string_pretty(&json).expect("fit report serialises") + "\n"
}

fn write_fit(
    bundle: &mut Bundle,
    ds: &Dataset,
    model: &ArxModel,
    report: &FitReport,
    opts: &FitOptions,
) -> Result<()> {
    let stem = model_stem(model);
    bundle.write(&format!("model_{stem}.arx"), &model.to_text())?;
    bundle.write(&format!("fit_{stem}.json"), &fit_json(model, report, opts))?;
    let observed: Vec<Option<f64>> = report.observed.iter().map(|&v| Some(v)).collect();
    bundle.write(
        &format!("replay_{stem}.csv"),
        &replay_csv(ds, report.first_day, &observed, &report.predicted),
    )
}

/// Fits one ARX configuration and writes model, scores and replay table.
#[allow(clippy::too_many_arguments)]
pub fn fit_report(
    ds: &Dataset,
    target: &SiteId,
    inputs: &[SiteId],
    var: WindVar,
    m: usize,
    k: usize,
    opts: &FitOptions,
    out_dir: &Path,
    command: &str,
) -> Result<(Manifest, ArxModel, FitReport)> {
    let (model, report) = arx::fit_with(ds, target, inputs, var, m, k, opts)?;
    let mut bundle = Bundle::new(out_dir, command)?;
    write_fit(&mut bundle, ds, &model, &report, opts)?;
    Ok((bundle.finish()?, model, report))
}

/// Fits every `(m, k)` pair and writes the FPE-ranked table and each model.
#[allow(clippy::too_many_arguments)]
pub fn scan_report(
    ds: &Dataset,
    target: &SiteId,
    inputs: &[SiteId],
    var: WindVar,
    m_set: &[usize],
    k_set: &[usize],
    out_dir: &Path,
    command: &str,
) -> Result<(Manifest, Vec<arx::ScanRow>)> {
    let rows = arx::order_scan(ds, target, inputs, var, m_set, k_set)?;
    let mut bundle = Bundle::new(out_dir, command)?;
    let mut table = String::from("rank,m,k,n_params,fitness,rmse,fpe\n");
    for (rank, row) in rows.iter().enumerate() {
        let r = &row.report;
        writeln!(
            table,
            "{},{},{},{},{},{},{}",
            rank + 1,
            row.m,
            row.k,
            r.n_params,
            r.fitness,
            r.rmse,
            r.fpe
        )
        .unwrap();
    }
    bundle.write(&format!("scan_{target}_{var}.csv"), &table)?;
    for row in &rows {
        write_fit(
            &mut bundle,
            ds,
            &row.model,
            &row.report,
            &FitOptions::default(),
        )?;
    }
    Ok((bundle.finish()?, rows))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Forecast {
    pub label: String,
    pub target: SiteId,
    pub var: WindVar,
    pub date: String,
    pub prediction: f64,
    /// Observed value on the forecast day, when the dataset has it.
    pub observed: Option<f64>,
    pub replay_rmse: Option<f64>,
}

/// Replays a model over the dataset and predicts the target on the latest
/// day from the window ending there: target history up to the day before,
/// inputs up to and including the latest day.
pub fn forecast(
    model: &ArxModel,
    ds: &Dataset,
) -> Result<(Forecast, usize, Vec<Option<f64>>, Vec<f64>)> {
    let var = model.var();
    let y = ds
        .variable_series(model.target(), var)
        .map_err(|e| Error::ModelMismatch(e.to_string()))?;
    let u = model
        .input_sites()
        .map(|s| ds.variable_series(s, var))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::ModelMismatch(e.to_string()))?;
    let (m, k) = model.orders();
    let first = model.first_predictable();
    let n = ds.n_days();
    if n <= first {
        return Err(Error::InsufficientData {
            samples: n,
            params: first + 1,
        });
    }

    let predict = |t: usize| -> Option<f64> {
        let y_hist: Option<Vec<f64>> = y[t - m..t].iter().copied().collect();
        let windows: Option<Vec<Vec<f64>>> = u
            .iter()
            .map(|s| s[t + 1 - k..=t].iter().copied().collect())
            .collect();
        let (y_hist, windows) = (y_hist?, windows?);
        let refs: Vec<&[f64]> = windows.iter().map(Vec::as_slice).collect();
        model.predict_one_step(&y_hist, &refs).ok()
    };

    let mut observed = Vec::new();
    let mut predicted = Vec::new();
    let mut replay_first = None;
    for t in first..n {
        match predict(t) {
            Some(p) => {
                replay_first.get_or_insert(t);
                observed.push(y[t]);
                predicted.push(p);
            }
            None if replay_first.is_none() => continue,
            None => {
                return Err(Error::IncompleteSeries {
                    site: model.target().to_string(),
                    count: 1,
                })
            }
        }
    }
    let replay_first = replay_first.ok_or_else(|| Error::InsufficientData {
        samples: 0,
        params: model.n_params(),
    })?;
    if replay_first + predicted.len() != n {
        return Err(Error::InsufficientData {
            samples: predicted.len(),
            params: model.n_params(),
        });
    }

    let scored: (Vec<f64>, Vec<f64>) = observed
        .iter()
        .zip(&predicted)
        .filter_map(|(o, p)| o.map(|o| (o, *p)))
        .unzip();
    let replay_rmse = crate::metrics::rmse(&scored.0, &scored.1).ok();
    let f = Forecast {
        label: model.label(),
        target: model.target().clone(),
        var,
        date: ds.date(n - 1).to_string(),
        prediction: *predicted.last().expect("non-empty replay"),
        observed: y[n - 1],
        replay_rmse,
    };
    Ok((f, replay_first, observed, predicted))
}

pub fn forecast_report(
    model: &ArxModel,
    ds: &Dataset,
    out_dir: &Path,
    command: &str,
) -> Result<(Manifest, Forecast)> {
    let (f, first, observed, predicted) = forecast(model, ds)?;
    let stem = model_stem(model);
    let mut bundle = Bundle::new(out_dir, command)?;
    bundle.write(
        &format!("replay_{stem}.csv"),
        &replay_csv(ds, first, &observed, &predicted),
    )?;
    bundle.write(
        &format!("forecast_{stem}.json"),
        &(serde_json::to_string_pretty(&f).expect("forecast serialises") + "\n"),
    )?;
    Ok((bundle.finish()?, f))
}

pub fn read_model(path: &Path) -> Result<ArxModel> {
    fs::read_to_string(path)
        .map_err(|e| Error::io(path, e))?
        .parse()
}
