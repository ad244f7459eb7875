//! ARX models: an output regressed on its own past and on current and past
//! values of other sites' series.
//!
//! The output kernel is stored as the coefficients of the monic polynomial
//! `A(z) = 1 + a1 z^-1 + ... + am z^-m`, so one-step prediction reads
//!
//! ```text
//! yhat(t) = -a1 y(t-1) - ... - am y(t-m) + sum_s (b_s0 u_s(t) + ... + b_s(k-1) u_s(t-k+1))
//! ```
//!
//! User-facing labels keep the "ARMA(m,k)" naming customary for these
//! spatio-temporal regressors.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics;
use crate::types::{Dataset, SiteId, WindVar};

pub use crate::metrics::{fitness, fpe, rmse};

/// Polynomial in the delay operator `z^-1`; `coeffs[n]` multiplies `z^-n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayPolynomial {
    pub coeffs: Vec<f64>,
}

impl DelayPolynomial {
    /// `sum_n coeffs[n] * x[t - n]`. Requires `t >= degree`.
    pub fn apply(&self, x: &[f64], t: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * x[t - n])
            .sum()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArxModel {
    target: SiteId,
    var: WindVar,
    a: Vec<f64>,
    input_order: usize,
    inputs: Vec<(SiteId, Vec<f64>)>,
    offset: Option<f64>,
}

impl ArxModel {
    /// `a` holds `a1..am`; each input carries `b0..b(k-1)` with the same `k`.
    pub fn new(
        target: SiteId,
        var: WindVar,
        a: Vec<f64>,
        inputs: Vec<(SiteId, Vec<f64>)>,
    ) -> Result<Self> {
        let k = inputs.first().map_or(0, |(_, b)| b.len());
        for (i, (site, b)) in inputs.iter().enumerate() {
            if b.len() != k {
                return Err(Error::InvalidArgument(format!(
                    "input '{site}' has {} taps, expected {k}",
                    b.len()
                )));
            }
            if *site == target {
                return Err(Error::InvalidArgument(format!(
                    "target '{site}' cannot also be an input"
                )));
            }
            if inputs[..i].iter().any(|(s, _)| s == site) {
                return Err(Error::DuplicateSite(site.to_string()));
            }
        }
        if !inputs.is_empty() && k == 0 {
            return Err(Error::InvalidArgument(
                "input order must be at least 1".into(),
            ));
        }
        Ok(ArxModel {
            target,
            var,
            a,
            input_order: k,
            inputs,
            offset: None,
        })
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = Some(offset);
        self
    }

    pub fn target(&self) -> &SiteId {
        &self.target
    }

    pub fn var(&self) -> WindVar {
        self.var
    }

    /// `a1..am` of the monic output polynomial.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn inputs(&self) -> &[(SiteId, Vec<f64>)] {
        &self.inputs
    }

    pub fn input_sites(&self) -> impl Iterator<Item = &SiteId> {
        self.inputs.iter().map(|(s, _)| s)
    }

    pub fn offset(&self) -> Option<f64> {
        self.offset
    }

    /// `(m, k)`.
    pub fn orders(&self) -> (usize, usize) {
        (self.a.len(), self.input_order)
    }

    pub fn n_params(&self) -> usize {
        self.a.len() + self.input_order * self.inputs.len() + usize::from(self.offset.is_some())
    }

    pub fn label(&self) -> String {
        let (m, k) = self.orders();
        format!("ARMA({m},{k})")
    }

    pub fn a_polynomial(&self) -> DelayPolynomial {
        let mut coeffs = Vec::with_capacity(self.a.len() + 1);
        coeffs.push(1.0);
        coeffs.extend_from_slice(&self.a);
        DelayPolynomial { coeffs }
    }

    pub fn b_polynomials(&self) -> Vec<DelayPolynomial> {
        self.inputs
            .iter()
            .map(|(_, b)| DelayPolynomial { coeffs: b.clone() })
            .collect()
    }

    /// One-step prediction from explicit histories.
    ///
    /// `y_hist` holds the last `m` outputs oldest first (`y(t-m)..y(t-1)`);
    /// `u_hist[s]` holds the last `k` values of input `s` oldest first and
    /// ending at the current day (`u(t-k+1)..u(t)`).
    pub fn predict_one_step(&self, y_hist: &[f64], u_hist: &[&[f64]]) -> Result<f64> {
        let (m, k) = self.orders();
        if y_hist.len() != m {
            return Err(Error::HistoryLength(format!(
                "expected {m} past outputs, got {}",
                y_hist.len()
            )));
        }
        if u_hist.len() != self.inputs.len() {
            return Err(Error::HistoryLength(format!(
                "expected {} input histories, got {}",
                self.inputs.len(),
                u_hist.len()
            )));
        }
        let mut yhat = self.offset.unwrap_or(0.0);
        for (i, a) in self.a.iter().enumerate() {
            yhat -= a * y_hist[m - 1 - i];
        }
        for ((site, b), u) in self.inputs.iter().zip(u_hist) {
            if u.len() != k {
                return Err(Error::HistoryLength(format!(
                    "expected {k} values for input '{site}', got {}",
                    u.len()
                )));
            }
            for (j, bj) in b.iter().enumerate() {
                yhat += bj * u[k - 1 - j];
            }
        }
        Ok(yhat)
    }

    /// First day index with a full history under this model's orders.
    pub fn first_predictable(&self) -> usize {
        let (m, k) = self.orders();
        m.max(k.saturating_sub(1))
    }

    /// One-step prediction at day `t` of whole series.
    pub fn predict_at(&self, y: &[f64], u: &[&[f64]], t: usize) -> Result<f64> {
        let (m, k) = self.orders();
        if t < self.first_predictable() || t >= y.len() + 1 {
            return Err(Error::HistoryLength(format!(
                "day {t} lacks a full history for {}",
                self.label()
            )));
        }
        let windows: Vec<&[f64]> = u
            .iter()
            .map(|s| {
                s.get(t + 1 - k..t + 1).ok_or_else(|| {
                    Error::HistoryLength(format!("input series ends before day {t}"))
                })
            })
            .collect::<Result<_>>()?;
        self.predict_one_step(&y[t - m..t], &windows)
    }

    /// Prediction at day `t` through the polynomial form
    /// `A(z) y(t) = B(z) u(t)`, i.e. `yhat(t) = y(t) - A(z)y(t) + sum B_s(z)u_s(t)`.
    /// Needs `y(t)` itself, so `t < y.len()`.
    pub fn predict_polynomial_form(&self, y: &[f64], u: &[&[f64]], t: usize) -> Result<f64> {
        if t < self.first_predictable() || t >= y.len() || u.len() != self.inputs.len() {
            return Err(Error::HistoryLength(format!(
                "day {t} lacks a full history for {}",
                self.label()
            )));
        }
        let mut yhat = y[t] - self.a_polynomial().apply(y, t) + self.offset.unwrap_or(0.0);
        for (poly, series) in self.b_polynomials().iter().zip(u) {
            yhat += poly.apply(series, t);
        }
        Ok(yhat)
    }

    /// Roots of `z^m A(z)`; empty for a pure input model.
    pub fn poles(&self) -> Vec<nalgebra::Complex<f64>> {
        let m = self.a.len();
        if m == 0 {
            return Vec::new();
        }
        let mut companion = DMatrix::<f64>::zeros(m, m);
        for (j, a) in self.a.iter().enumerate() {
            companion[(0, j)] = -a;
        }
        for i in 1..m {
            companion[(i, i - 1)] = 1.0;
        }
        companion.complex_eigenvalues().iter().copied().collect()
    }

    pub fn pole_report(&self) -> Option<PoleReport> {
        let poles = self.poles();
        if poles.is_empty() {
            return None;
        }
        let max_modulus = poles.iter().map(|p| p.norm()).fold(0.0, f64::max);
        Some(PoleReport {
            max_modulus,
            stable: max_modulus < 1.0,
        })
    }

    /// Versioned plain-text form; values are written in shortest
    /// round-trip notation.
    pub fn to_text(&self) -> String {
        let (m, k) = self.orders();
        let mut out = String::new();
        writeln!(out, "{MODEL_MAGIC} {MODEL_VERSION}").unwrap();
        writeln!(out, "target {}", self.target).unwrap();
        writeln!(out, "var {}", self.var).unwrap();
        writeln!(out, "orders {m} {k}").unwrap();
        let names: Vec<&str> = self.inputs.iter().map(|(s, _)| s.as_str()).collect();
        writeln!(out, "inputs {}", names.join(" ").trim_end()).unwrap();
        if let Some(c) = self.offset {
            writeln!(out, "offset {c}").unwrap();
        }
        writeln!(out, "a {}", join_values(&self.a)).unwrap();
        for (site, b) in &self.inputs {
            writeln!(out, "b {site} {}", join_values(b)).unwrap();
        }
        out.lines()
            .map(|l| l.trim_end().to_string() + "\n")
            .collect()
    }
}

const MODEL_MAGIC: &str = "windkit-arx";
const MODEL_VERSION: u32 = 1;

fn join_values(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::ModelFormat {
        line,
        message: message.into(),
    }
}

fn parse_values(line: usize, words: &[&str]) -> Result<Vec<f64>> {
    words
        .iter()
        .map(|w| {
            w.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format_err(line, format!("bad coefficient '{w}'")))
        })
        .collect()
}

impl FromStr for ArxModel {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (no, first) = lines
            .next()
            .ok_or_else(|| format_err(1, "empty model file"))?;
        let expected = format!("{MODEL_MAGIC} {MODEL_VERSION}");
        if first != expected {
            return Err(format_err(no, format!("expected header '{expected}'")));
        }

        let mut target = None;
        let mut var = None;
        let mut orders = None;
        let mut input_names: Option<Vec<SiteId>> = None;
        let mut offset = None;
        let mut a = None;
        let mut b: Vec<(SiteId, Vec<f64>)> = Vec::new();

        for (no, line) in lines {
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "target" if words.len() == 2 => target = Some(SiteId::new(words[1])?),
                "var" if words.len() == 2 => var = Some(words[1].parse::<WindVar>()?),
                "orders" if words.len() == 3 => {
                    let parse = |w: &str| {
                        w.parse::<usize>()
                            .map_err(|_| format_err(no, format!("bad order '{w}'")))
                    };
                    orders = Some((parse(words[1])?, parse(words[2])?));
                }
                "inputs" => {
                    input_names = Some(
                        words[1..]
                            .iter()
                            .map(|w| SiteId::new(*w))
                            .collect::<Result<_>>()?,
                    )
                }
                "offset" if words.len() == 2 => offset = Some(parse_values(no, &words[1..])?[0]),
                "a" => a = Some(parse_values(no, &words[1..])?),
                "b" if words.len() >= 2 => {
                    b.push((SiteId::new(words[1])?, parse_values(no, &words[2..])?))
                }
                other => {
                    return Err(format_err(
                        no,
                        format!("unexpected line starting '{other}'"),
                    ))
                }
            }
        }

        let missing = |what: &str| format_err(0, format!("missing '{what}' line"));
        let target = target.ok_or_else(|| missing("target"))?;
        let var = var.ok_or_else(|| missing("var"))?;
        let (m, k) = orders.ok_or_else(|| missing("orders"))?;
        let input_names = input_names.ok_or_else(|| missing("inputs"))?;
        let a = a.ok_or_else(|| missing("a"))?;
        if a.len() != m {
            return Err(format_err(
                0,
                format!("orders say m={m} but 'a' has {}", a.len()),
            ));
        }
        let listed: Vec<&SiteId> = b.iter().map(|(s, _)| s).collect();
        if listed.len() != input_names.len()
            || listed.iter().zip(&input_names).any(|(x, y)| *x != y)
        {
            return Err(format_err(0, "'b' lines must follow the 'inputs' order"));
        }
        if let Some((site, taps)) = b.iter().find(|(_, t)| t.len() != k) {
            return Err(format_err(
                0,
                format!(
                    "orders say k={k} but input '{site}' has {} taps",
                    taps.len()
                ),
            ));
        }
        let model = ArxModel::new(target, var, a, b)?;
        Ok(match offset {
            Some(c) => model.with_offset(c),
            None => model,
        })
    }
}

/// Pole summary of the fitted output polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleReport {
    pub max_modulus: f64,
    /// All poles strictly inside the unit circle.
    pub stable: bool,
}

/// Which days enter the regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegressorWindow {
    /// Only days with a complete history.
    #[default]
    DropIncomplete,
    /// Every day, with history before the first day taken as zero.
    ZeroPadded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FitOptions {
    /// Fit a constant term alongside the kernels.
    pub intercept: bool,
    pub window: RegressorWindow,
    /// Trailing regression rows kept out of the fit and used for scoring.
    /// Zero scores in-sample.
    pub holdout: usize,
}

/// Scores of a model over its evaluation rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub label: String,
    pub fitness: f64,
    pub rmse: f64,
    /// Akaike FPE of the training rows.
    pub fpe: f64,
    pub rss: f64,
    pub n_params: usize,
    /// Training rows.
    pub n_samples: usize,
    /// Day index of the first evaluation row; rows are consecutive.
    pub first_day: usize,
    pub observed: Vec<f64>,
    pub predicted: Vec<f64>,
    pub residuals: Vec<f64>,
    pub poles: Option<PoleReport>,
}

fn padded(series: &[f64], from: isize, to: usize) -> Vec<f64> {
    (from..to as isize)
        .map(|i| if i < 0 { 0.0 } else { series[i as usize] })
        .collect()
}

fn predict_row(model: &ArxModel, y: &[f64], u: &[&[f64]], t: usize) -> Result<f64> {
    if t >= model.first_predictable() {
        return model.predict_at(y, u, t);
    }
    let (m, k) = model.orders();
    let y_hist = padded(y, t as isize - m as isize, t);
    let windows: Vec<Vec<f64>> = u
        .iter()
        .map(|s| padded(s, t as isize + 1 - k as isize, t + 1))
        .collect();
    let refs: Vec<&[f64]> = windows.iter().map(Vec::as_slice).collect();
    model.predict_one_step(&y_hist, &refs)
}

/// Least-squares ARX fit on in-memory series.
///
/// `inputs` pairs each exogenous site with its series; all series must have
/// the same length as `y`.
pub fn fit_series(
    target: SiteId,
    var: WindVar,
    y: &[f64],
    inputs: &[(SiteId, &[f64])],
    m: usize,
    k: usize,
    opts: &FitOptions,
) -> Result<(ArxModel, FitReport)> {
    for (site, u) in inputs {
        if u.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: y.len(),
                right: u.len(),
            });
        }
        if *site == target {
            return Err(Error::InvalidArgument(format!(
                "target '{site}' cannot also be an input"
            )));
        }
    }
    if !inputs.is_empty() && k == 0 {
        return Err(Error::InvalidArgument(
            "input order must be at least 1".into(),
        ));
    }
    let k = if inputs.is_empty() { 0 } else { k };
    let n_params = m + k * inputs.len() + usize::from(opts.intercept);
    if n_params == 0 {
        return Err(Error::InvalidArgument(
            "model has no free parameters".into(),
        ));
    }

    let first = match opts.window {
        RegressorWindow::DropIncomplete => m.max(k.saturating_sub(1)),
        RegressorWindow::ZeroPadded => 0,
    };
    let rows = y.len().saturating_sub(first);
    let train_rows = rows.saturating_sub(opts.holdout);
    if train_rows <= n_params || (opts.holdout > 0 && opts.holdout < 2) {
        return Err(Error::InsufficientData {
            samples: train_rows,
            params: n_params,
        });
    }

    let mut labels: Vec<String> = (1..=m).map(|i| format!("a{i}")).collect();
    for (site, _) in inputs {
        labels.extend((0..k).map(|j| format!("b[{site}]{j}")));
    }
    if opts.intercept {
        labels.push("offset".into());
    }

    let at = |s: &[f64], i: isize| if i < 0 { 0.0 } else { s[i as usize] };
    let mut x = DMatrix::<f64>::zeros(train_rows, n_params);
    let mut rhs = DVector::<f64>::zeros(train_rows);
    for r in 0..train_rows {
        let t = (first + r) as isize;
        let mut c = 0;
        for i in 1..=m as isize {
            x[(r, c)] = -at(y, t - i);
            c += 1;
        }
        for (_, u) in inputs {
            for j in 0..k as isize {
                x[(r, c)] = at(u, t - j);
                c += 1;
            }
        }
        if opts.intercept {
            x[(r, c)] = 1.0;
        }
        rhs[r] = y[t as usize];
    }

    let theta = solve_least_squares(x, &rhs, &labels)?;
    let a = theta.as_slice()[..m].to_vec();
    let b = inputs
        .iter()
        .enumerate()
        .map(|(s, (site, _))| {
            let start = m + s * k;
            (site.clone(), theta.as_slice()[start..start + k].to_vec())
        })
        .collect();
    let mut model = ArxModel::new(target, var, a, b)?;
    if opts.intercept {
        model = model.with_offset(theta[n_params - 1]);
    }

    let u_refs: Vec<&[f64]> = inputs.iter().map(|(_, u)| *u).collect();
    let predict_range = |from: usize, to: usize| -> Result<(Vec<f64>, Vec<f64>)> {
        let observed = y[from..to].to_vec();
        let predicted = (from..to)
            .map(|t| predict_row(&model, y, &u_refs, t))
            .collect::<Result<Vec<f64>>>()?;
        Ok((observed, predicted))
    };

    let (train_obs, train_pred) = predict_range(first, first + train_rows)?;
    let train_rss: f64 = train_obs
        .iter()
        .zip(&train_pred)
        .map(|(o, p)| (o - p) * (o - p))
        .sum();
    let fpe = metrics::fpe(train_rss, train_rows, n_params)?;

    let (eval_first, observed, predicted) = if opts.holdout == 0 {
        (first, train_obs, train_pred)
    } else {
        let from = first + train_rows;
        let (o, p) = predict_range(from, y.len())?;
        (from, o, p)
    };
    let residuals: Vec<f64> = observed
        .iter()
        .zip(&predicted)
        .map(|(o, p)| o - p)
        .collect();
    let report = FitReport {
        label: model.label(),
        fitness: metrics::fitness(&observed, &predicted)?,
        rmse: metrics::rmse(&observed, &predicted)?,
        fpe,
        rss: residuals.iter().map(|e| e * e).sum(),
        n_params,
        n_samples: train_rows,
        first_day: eval_first,
        observed,
        predicted,
        residuals,
        poles: model.pole_report(),
    };
    Ok((model, report))
}

/// SVD least squares; a singular value below `max(rows, cols) * eps * s_max`
/// is treated as rank deficiency and reported with the columns involved.
fn solve_least_squares(
    x: DMatrix<f64>,
    rhs: &DVector<f64>,
    labels: &[String],
) -> Result<DVector<f64>> {
    let (rows, cols) = x.shape();
    let svd = x.svd(true, true);
    let s_max = svd.singular_values.max();
    let tol = rows.max(cols) as f64 * f64::EPSILON * s_max;
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let mut collinear = vec![false; cols];
    let mut deficient = s_max == 0.0;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= tol {
            deficient = true;
            let row = v_t.row(i);
            let peak = row.amax();
            for (j, v) in row.iter().enumerate() {
                if v.abs() > 1e-6 * peak {
                    collinear[j] = true;
                }
            }
        }
    }
    if deficient {
        let columns = if s_max == 0.0 {
            labels.to_vec()
        } else {
            labels
                .iter()
                .zip(&collinear)
                .filter(|(_, &c)| c)
                .map(|(l, _)| l.clone())
                .collect()
        };
        return Err(Error::RankDeficient { columns });
    }
    svd.solve(rhs, tol)
        .map_err(|e| Error::InvalidArgument(format!("least-squares solve failed: {e}")))
}

/// Fits `target` on `inputs` from a complete dataset.
pub fn fit(
    ds: &Dataset,
    target: &SiteId,
    inputs: &[SiteId],
    var: WindVar,
    m: usize,
    k: usize,
) -> Result<(ArxModel, FitReport)> {
    fit_with(ds, target, inputs, var, m, k, &FitOptions::default())
}

pub fn fit_with(
    ds: &Dataset,
    target: &SiteId,
    inputs: &[SiteId],
    var: WindVar,
    m: usize,
    k: usize,
    opts: &FitOptions,
) -> Result<(ArxModel, FitReport)> {
    let y = ds.complete_series(target, var)?;
    let columns = inputs
        .iter()
        .map(|s| ds.complete_series(s, var))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(SiteId, &[f64])> = inputs
        .iter()
        .cloned()
        .zip(columns.iter().map(Vec::as_slice))
        .collect();
    fit_series(target.clone(), var, &y, &pairs, m, k, opts)
}

/// Every other site of the dataset, in dataset order.
pub fn other_sites(ds: &Dataset, target: &SiteId) -> Vec<SiteId> {
    ds.sites().filter(|s| *s != target).cloned().collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub m: usize,
    pub k: usize,
    #[serde(skip)]
    pub model: ArxModel,
    pub report: FitReport,
}

/// Fits every `(m, k)` combination; rows come back sorted by FPE, ties by
/// `(m, k)`.
pub fn order_scan(
    ds: &Dataset,
    target: &SiteId,
    inputs: &[SiteId],
    var: WindVar,
    m_set: &[usize],
    k_set: &[usize],
) -> Result<Vec<ScanRow>> {
    let grid: Vec<(usize, usize)> = m_set
        .iter()
        .flat_map(|&m| k_set.iter().map(move |&k| (m, k)))
        .collect();
    let mut rows = grid
        .par_iter()
        .map(|&(m, k)| {
            fit(ds, target, inputs, var, m, k).map(|(model, report)| ScanRow {
                m,
                k,
                model,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|x, y| {
        x.report
            .fpe
            .total_cmp(&y.report.fpe)
            .then((x.m, x.k).cmp(&(y.m, y.k)))
    });
    Ok(rows)
}

/// The published ARMA(7,5) model for Lesvos/Thermi average speed, with
/// Chios, Kos, Lesvos/Petra and Samos as inputs.
pub fn lesvos_thermi_reference_model() -> ArxModel {
    let site = |s: &str| SiteId::new(s).expect("static site id");
    ArxModel::new(
        site("lesvos_thermi"),
        WindVar::Avg,
        vec![-0.125, -0.081, -0.199, 0.231, 0.036, -0.059, 0.019],
        vec![
            (site("chios"), vec![0.780, -0.105, -0.111, -0.039, 0.217]),
            (site("kos"), vec![0.333, -0.186, 0.179, -0.121, -0.034]),
            (
                site("lesvos_petra"),
                vec![0.083, 0.029, 0.033, -0.028, -0.008],
            ),
            (site("samos"), vec![0.020, -0.069, 0.002, 0.058, -0.029]),
        ],
    )
    .expect("static model is well formed")
}
