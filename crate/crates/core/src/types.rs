//! Date-indexed wind series and the aligned multi-site dataset.
//!
//! Wind direction is the meteorological bearing the wind blows *from*, in
//! degrees clockwise from North, normalised to `[0, 360)`. Days without a
//! valid station record are stored as `None`.

use std::fmt;
use std::str::FromStr;

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Short station identifier such as `chios` or `lesvos_thermi`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SiteId(String);

impl SiteId {
    /// Identifiers must be non-empty and free of whitespace and commas, since
    /// they appear in file names, CSV cells and the model text format.
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',') {
            return Err(Error::InvalidSite(name));
        }
        Ok(SiteId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for SiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SiteId::new(s)
    }
}

impl TryFrom<String> for SiteId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        SiteId::new(s)
    }
}

impl From<SiteId> for String {
    fn from(s: SiteId) -> String {
        s.0
    }
}

/// One day's valid record for one site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reading {
    pub avg_kmh: f64,
    pub gust_kmh: f64,
    pub dir_deg: f64,
}

impl Reading {
    pub fn new(avg_kmh: f64, gust_kmh: f64, dir_deg: f64) -> Self {
        Reading {
            avg_kmh,
            gust_kmh,
            dir_deg,
        }
    }

    pub fn get(&self, var: WindVar) -> f64 {
        match var {
            WindVar::Avg => self.avg_kmh,
            WindVar::Gust => self.gust_kmh,
            WindVar::Dir => self.dir_deg,
        }
    }

    pub fn set(&mut self, var: WindVar, value: f64) {
        match var {
            WindVar::Avg => self.avg_kmh = value,
            WindVar::Gust => self.gust_kmh = value,
            WindVar::Dir => self.dir_deg = value,
        }
    }
}

/// A daily sample; `None` marks a missing day.
pub type WindSample = Option<Reading>;

/// Wind variable selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindVar {
    Avg,
    Gust,
    Dir,
}

impl WindVar {
    pub const ALL: [WindVar; 3] = [WindVar::Avg, WindVar::Gust, WindVar::Dir];

    pub fn as_str(self) -> &'static str {
        match self {
            WindVar::Avg => "avg",
            WindVar::Gust => "gust",
            WindVar::Dir => "dir",
        }
    }

    pub fn is_circular(self) -> bool {
        self == WindVar::Dir
    }
}

impl fmt::Display for WindVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WindVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "avg" | "average" => Ok(WindVar::Avg),
            "gust" => Ok(WindVar::Gust),
            "dir" | "direction" => Ok(WindVar::Dir),
            _ => Err(Error::UnknownVariable(s.to_string())),
        }
    }
}

/// Wraps an angle in degrees into `[0, 360)`.
pub fn wrap_degrees(deg: f64) -> f64 {
    let w = deg.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

/// Contiguous daily samples for one site.
#[derive(Debug, Clone, PartialEq)]
pub struct WindSeries {
    site: SiteId,
    start_date: NaiveDate,
    samples: Vec<WindSample>,
}

impl WindSeries {
    pub fn new(site: SiteId, start_date: NaiveDate, samples: Vec<WindSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidDataset(format!(
                "series '{site}' has no samples"
            )));
        }
        Ok(WindSeries {
            site,
            start_date,
            samples,
        })
    }

    pub fn site(&self) -> &SiteId {
        &self.site
    }

    pub fn start_date(&self) -> NaiveDate {
        self.start_date
    }

    pub fn samples(&self) -> &[WindSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn date(&self, index: usize) -> NaiveDate {
        self.start_date + Days::new(index as u64)
    }

    pub fn values(&self, var: WindVar) -> Vec<Option<f64>> {
        self.samples.iter().map(|s| s.map(|r| r.get(var))).collect()
    }

    pub fn absent_count(&self) -> usize {
        self.samples.iter().filter(|s| s.is_none()).count()
    }

    /// Values of `var`, failing if any day is missing.
    pub fn complete_values(&self, var: WindVar) -> Result<Vec<f64>> {
        let count = self.absent_count();
        if count > 0 {
            return Err(Error::IncompleteSeries {
                site: self.site.to_string(),
                count,
            });
        }
        Ok(self.samples.iter().flatten().map(|r| r.get(var)).collect())
    }
}

/// Aligned collection of site series sharing one date axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    series: Vec<WindSeries>,
    start_date: NaiveDate,
    n_days: usize,
}

impl Dataset {
    pub fn new(series: Vec<WindSeries>) -> Result<Self> {
        let first = series
            .first()
            .ok_or_else(|| Error::InvalidDataset("dataset has no series".into()))?;
        let (start_date, n_days) = (first.start_date, first.len());
        for (i, s) in series.iter().enumerate() {
            if s.start_date != start_date || s.len() != n_days {
                return Err(Error::Alignment(format!(
                    "'{}' covers {}..{} but '{}' covers {}..{}",
                    first.site,
                    start_date,
                    first.date(n_days - 1),
                    s.site,
                    s.start_date,
                    s.date(s.len() - 1)
                )));
            }
            if series[..i].iter().any(|o| o.site == s.site) {
                return Err(Error::DuplicateSite(s.site.to_string()));
            }
        }
        Ok(Dataset {
            series,
            start_date,
            n_days,
        })
    }

    pub fn series(&self) -> &[WindSeries] {
        &self.series
    }

    pub fn start_date(&self) -> NaiveDate {
        self.start_date
    }

    pub fn n_days(&self) -> usize {
        self.n_days
    }

    pub fn date(&self, index: usize) -> NaiveDate {
        self.start_date + Days::new(index as u64)
    }

    /// Index of `date` on the shared axis, if it falls inside it.
    pub fn day_index(&self, date: NaiveDate) -> Option<usize> {
        let offset = (date - self.start_date).num_days();
        (offset >= 0 && (offset as usize) < self.n_days).then_some(offset as usize)
    }

    pub fn sites(&self) -> impl Iterator<Item = &SiteId> {
        self.series.iter().map(|s| &s.site)
    }

    pub fn site_series(&self, site: &SiteId) -> Result<&WindSeries> {
        self.series
            .iter()
            .find(|s| &s.site == site)
            .ok_or_else(|| Error::UnknownSite(site.to_string()))
    }

    /// Length-`n_days` sequence of one variable, `None` on missing days.
    pub fn variable_series(&self, site: &SiteId, var: WindVar) -> Result<Vec<Option<f64>>> {
        Ok(self.site_series(site)?.values(var))
    }

    /// Like [`Dataset::variable_series`] but fails on any missing day.
    pub fn complete_series(&self, site: &SiteId, var: WindVar) -> Result<Vec<f64>> {
        self.site_series(site)?.complete_values(var)
    }

    pub fn is_complete(&self) -> bool {
        self.series.iter().all(|s| s.absent_count() == 0)
    }

    pub fn into_series(self) -> Vec<WindSeries> {
        self.series
    }
}
