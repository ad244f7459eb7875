//! Correlation structure and distribution summaries of wind series.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::types::{wrap_degrees, Dataset, SiteId, WindVar};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1 denominator).
pub fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() as f64 - 1.0)).sqrt()
}

fn is_constant(xs: &[f64]) -> bool {
    xs.iter().all(|&x| x == xs[0])
}

/// Pearson coefficient of two equal-length slices; `None` when either side
/// has zero spread.
fn pearson_r(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// How each lag is normalised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcfEstimator {
    /// Pearson correlation of the two overlapping windows, each with its own
    /// mean and deviation.
    #[default]
    Segment,
    /// Classical estimator: one global mean, normalised by the lag-0 sum.
    GlobalMean,
}

/// Auto-correlation over lags `-K..=K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcfResult {
    pub lags: Vec<i64>,
    pub values: Vec<f64>,
}

impl AcfResult {
    pub fn max_lag(&self) -> usize {
        self.lags.len() / 2
    }

    pub fn at(&self, lag: i64) -> Option<f64> {
        let idx = lag + self.max_lag() as i64;
        usize::try_from(idx)
            .ok()
            .and_then(|i| self.values.get(i).copied())
    }
}

pub fn autocorrelation(xs: &[f64], max_lag: usize) -> Result<AcfResult> {
    autocorrelation_with(xs, max_lag, AcfEstimator::Segment)
}

/// Normalised auto-correlation at lags `-max_lag..=max_lag`.
///
/// With the segment estimator a lag whose overlapping windows have no
/// spread (for instance the single-point windows at `max_lag = n - 1`)
/// carries no measurable dependence and is reported as 0.
pub fn autocorrelation_with(
    xs: &[f64],
    max_lag: usize,
    estimator: AcfEstimator,
) -> Result<AcfResult> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    if max_lag > n - 1 {
        return Err(Error::LagOutOfRange { max_lag, len: n });
    }
    if is_constant(xs) {
        return Err(Error::ZeroVariance);
    }

    let positive: Vec<f64> = match estimator {
        AcfEstimator::Segment => (0..=max_lag)
            .map(|k| {
                if k == 0 {
                    1.0
                } else {
                    pearson_r(&xs[..n - k], &xs[k..]).unwrap_or(0.0)
                }
            })
            .collect(),
        AcfEstimator::GlobalMean => {
            let m = mean(xs);
            let dev: Vec<f64> = xs.iter().map(|x| x - m).collect();
            let c0: f64 = dev.iter().map(|d| d * d).sum();
            (0..=max_lag)
                .map(|k| {
                    if k == 0 {
                        1.0
                    } else {
                        let ck: f64 = dev[..n - k].iter().zip(&dev[k..]).map(|(a, b)| a * b).sum();
                        (ck / c0).clamp(-1.0, 1.0)
                    }
                })
                .collect()
        }
    };

    let k = max_lag as i64;
    let lags = (-k..=k).collect();
    let values = positive
        .iter()
        .rev()
        .chain(positive.iter().skip(1))
        .copied()
        .collect();
    Ok(AcfResult { lags, values })
}

/// Significance band of a correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignificanceBand {
    /// p <= 0.05
    Strong,
    /// 0.05 < p <= 0.1
    Weak,
    #[serde(rename = "none")]
    NotSignificant,
}

impl SignificanceBand {
    pub fn from_p(p: f64) -> Self {
        if p <= 0.05 {
            SignificanceBand::Strong
        } else if p <= 0.1 {
            SignificanceBand::Weak
        } else {
            SignificanceBand::NotSignificant
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignificanceBand::Strong => "strong",
            SignificanceBand::Weak => "weak",
            SignificanceBand::NotSignificant => "none",
        }
    }
}

impl fmt::Display for SignificanceBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrResult {
    pub r: f64,
    pub n: usize,
    pub p_two_tailed: f64,
    pub band: SignificanceBand,
}

impl CorrResult {
    fn unit(n: usize) -> Self {
        CorrResult {
            r: 1.0,
            n,
            p_two_tailed: 0.0,
            band: SignificanceBand::Strong,
        }
    }
}

/// Two-tailed p-value of a Pearson coefficient under the Student-t test
/// with `n - 2` degrees of freedom.
pub fn correlation_p_value(r: f64, n: usize) -> f64 {
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    let t = r.abs() * (df / (1.0 - r * r)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
    (2.0 * dist.sf(t)).min(1.0)
}

/// Pearson correlation with a two-tailed t-test.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<CorrResult> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::TooShort { needed: 3, got: n });
    }
    let r = pearson_r(xs, ys).ok_or(Error::ZeroVariance)?;
    let p = correlation_p_value(r, n);
    Ok(CorrResult {
        r,
        n,
        p_two_tailed: p,
        band: SignificanceBand::from_p(p),
    })
}

/// Upper triangle (diagonal included) of a site-by-site correlation table.
#[derive(Debug, Clone, Serialize)]
pub struct CorrMatrix {
    pub var: WindVar,
    pub sites: Vec<SiteId>,
    /// Row-major upper triangle: `(0,0), (0,1), ..., (1,1), ...`.
    cells: Vec<CorrResult>,
}

impl CorrMatrix {
    /// Cell for sites `i` and `j` in either order.
    pub fn get(&self, i: usize, j: usize) -> &CorrResult {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let n = self.sites.len();
        // row i starts after sum_{r<i} (n - r) cells
        let start = i * n - i * i.saturating_sub(1) / 2;
        &self.cells[start + (j - i)]
    }

    /// Off-diagonal pairs `(i, j, cell)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &CorrResult)> + '_ {
        let n = self.sites.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j, self.get(i, j))))
    }
}

/// Lag-0 correlation of one variable between every pair of sites.
pub fn cross_site_matrix(ds: &Dataset, var: WindVar) -> Result<CorrMatrix> {
    let sites: Vec<SiteId> = ds.sites().cloned().collect();
    let columns = sites
        .iter()
        .map(|s| ds.complete_series(s, var))
        .collect::<Result<Vec<_>>>()?;
    let n = ds.n_days();
    let mut cells = Vec::with_capacity(sites.len() * (sites.len() + 1) / 2);
    for i in 0..sites.len() {
        cells.push(CorrResult::unit(n));
        for j in i + 1..sites.len() {
            cells.push(pearson(&columns[i], &columns[j])?);
        }
    }
    Ok(CorrMatrix { var, sites, cells })
}

/// Per-site correlations between the three wind variables.
#[derive(Debug, Clone, Serialize)]
pub struct VariablePairs {
    pub site: SiteId,
    pub avg_gust: CorrResult,
    pub avg_dir: CorrResult,
    pub gust_dir: CorrResult,
}

/// Direction enters as raw degrees, i.e. as a linear variable.
pub fn variable_pairs(ds: &Dataset) -> Result<Vec<VariablePairs>> {
    ds.series()
        .iter()
        .map(|s| {
            let avg = s.complete_values(WindVar::Avg)?;
            let gust = s.complete_values(WindVar::Gust)?;
            let dir = s.complete_values(WindVar::Dir)?;
            Ok(VariablePairs {
                site: s.site().clone(),
                avg_gust: pearson(&avg, &gust)?,
                avg_dir: pearson(&avg, &dir)?,
                gust_dir: pearson(&gust, &dir)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HistogramKind {
    Linear,
    /// Bearings binned modulo 360, first sector centred on North.
    Polar,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramSpec {
    pub kind: HistogramKind,
    pub bins: usize,
    pub lo: f64,
    pub hi: f64,
}

impl HistogramSpec {
    pub fn linear(bins: usize, lo: f64, hi: f64) -> Self {
        HistogramSpec {
            kind: HistogramKind::Linear,
            bins,
            lo,
            hi,
        }
    }

    pub fn polar(bins: usize) -> Self {
        HistogramSpec {
            kind: HistogramKind::Polar,
            bins,
            lo: 0.0,
            hi: 360.0,
        }
    }

    /// 16-sector wind rose.
    pub fn wind_rose() -> Self {
        Self::polar(16)
    }

    /// 2 km/h bins from 0 up past `max_kmh`.
    pub fn speed(max_kmh: f64) -> Self {
        let width = 2.0;
        let bins = ((max_kmh.max(0.0) / width).floor() as usize) + 1;
        Self::linear(bins, 0.0, bins as f64 * width)
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    fn validate(&self) -> Result<()> {
        if self.bins == 0 {
            return Err(Error::InvalidHistogram("zero bins".into()));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::InvalidHistogram(format!(
                "bad range [{}, {})",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    /// `[lo, hi)` bounds of bin `i`. Polar sector 0 straddles North and
    /// starts at a negative bearing.
    pub fn bin_bounds(&self, i: usize) -> (f64, f64) {
        let w = self.width();
        match self.kind {
            HistogramKind::Linear => (self.lo + i as f64 * w, self.lo + (i + 1) as f64 * w),
            HistogramKind::Polar => (i as f64 * w - w / 2.0, i as f64 * w + w / 2.0),
        }
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        let (lo, hi) = self.bin_bounds(i);
        (lo + hi) / 2.0
    }

    fn bin_of(&self, x: f64) -> Option<usize> {
        if !x.is_finite() {
            return None;
        }
        let w = self.width();
        match self.kind {
            HistogramKind::Linear => {
                if x < self.lo || x >= self.hi {
                    return None;
                }
                Some((((x - self.lo) / w).floor() as usize).min(self.bins - 1))
            }
            HistogramKind::Polar => {
                let theta = wrap_degrees(x);
                Some(((theta + w / 2.0) / w).floor() as usize % self.bins)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub spec: HistogramSpec,
    pub counts: Vec<usize>,
    /// Normalised frequencies over in-range values.
    pub freqs: Vec<f64>,
    /// Values outside a linear range (or non-finite), excluded from `freqs`.
    pub overflow: usize,
}

impl Histogram {
    /// Bin with the largest frequency (first one on ties).
    pub fn mode_bin(&self) -> usize {
        let mut best = 0;
        for (i, &c) in self.counts.iter().enumerate() {
            if c > self.counts[best] {
                best = i;
            }
        }
        best
    }
}

pub fn histogram(xs: &[f64], spec: HistogramSpec) -> Result<Histogram> {
    spec.validate()?;
    if xs.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let mut counts = vec![0usize; spec.bins];
    let mut overflow = 0;
    for &x in xs {
        match spec.bin_of(x) {
            Some(i) => counts[i] += 1,
            None => overflow += 1,
        }
    }
    let total = xs.len() - overflow;
    if total == 0 {
        return Err(Error::InvalidHistogram(
            "no value falls inside the histogram range".into(),
        ));
    }
    let freqs = counts.iter().map(|&c| c as f64 / total as f64).collect();
    Ok(Histogram {
        spec,
        counts,
        freqs,
        overflow,
    })
}

const COMPASS_16: [&str; 16] = [
    "N", "NNE", "NE", "ENE", "E", "ESE", "SE", "SSE", "S", "SSW", "SW", "WSW", "W", "WNW", "NW",
    "NNW",
];

/// Compass point name of a bearing, on the 16-point rose.
pub fn compass_point(deg: f64) -> &'static str {
    let theta = wrap_degrees(deg);
    COMPASS_16[((theta + 11.25) / 22.5).floor() as usize % 16]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

pub fn summarize(xs: &[f64]) -> Result<Summary> {
    if xs.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: xs.len(),
        });
    }
    Ok(Summary {
        n: xs.len(),
        mean: mean(xs),
        std: std_dev(xs),
        min: xs.iter().copied().fold(f64::INFINITY, f64::min),
        max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Seeded i.i.d. Gaussian series with the same length, sample mean and
/// sample standard deviation as `xs`.
///
/// The raw draws are standardised to exactly zero mean and unit deviation
/// before rescaling, so the moments match by construction.
pub fn gaussian_walk_comparator(xs: &[f64], seed: u64) -> Result<Vec<f64>> {
    if xs.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: xs.len(),
        });
    }
    if is_constant(xs) {
        return Err(Error::ZeroVariance);
    }
    let (target_mean, target_std) = (mean(xs), std_dev(xs));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..xs.len())
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let (m, s) = (mean(&raw), std_dev(&raw));
    Ok(raw
        .iter()
        .map(|z| target_mean + target_std * (z - m) / s)
        .collect())
}
