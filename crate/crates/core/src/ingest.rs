//! On-disk dataset format: one UTF-8 CSV per site named `<site>.csv` with
//! header `date,wind_avg_kmh,wind_gust_kmh,wind_dir_deg`, ISO-8601 dates,
//! one row per consecutive day and `NA` for missing values.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::types::{Dataset, Reading, SiteId, WindSample, WindSeries};

pub const HEADER: [&str; 4] = ["date", "wind_avg_kmh", "wind_gust_kmh", "wind_dir_deg"];
pub const MISSING_TOKEN: &str = "NA";

/// Non-fatal finding raised while reading a file.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub file: String,
    pub row: usize,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: row {}: {}", self.file, self.row, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub dataset: Dataset,
    pub warnings: Vec<Diagnostic>,
}

/// Reads one file per site into an aligned dataset. Series keep the order
/// of `paths`.
pub fn read_dataset<P: AsRef<Path>>(paths: &[P]) -> Result<Loaded> {
    let mut series = Vec::with_capacity(paths.len());
    let mut warnings = Vec::new();
    for path in paths {
        let (s, mut w) = read_series(path.as_ref())?;
        series.push(s);
        warnings.append(&mut w);
    }
    let dataset = Dataset::new(series)?;
    Ok(Loaded { dataset, warnings })
}

/// Reads every `*.csv` file in `dir`, ordered by file name.
pub fn read_dataset_dir(dir: impl AsRef<Path>) -> Result<Loaded> {
    let dir = dir.as_ref();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "csv") {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        return Err(Error::InvalidDataset(format!(
            "no .csv files in {}",
            dir.display()
        )));
    }
    paths.sort();
    read_dataset(&paths)
}

fn site_from_path(path: &Path) -> Result<SiteId> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::InvalidSite(path.display().to_string()))?;
    SiteId::new(stem)
}

fn parse_error(file: &str, row: usize, column: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        file: file.to_string(),
        row,
        column: column.to_string(),
        message: message.into(),
    }
}

fn parse_value(file: &str, row: usize, column: &str, raw: &str) -> Result<Option<f64>> {
    let raw = raw.trim();
    if raw.is_empty() || raw == MISSING_TOKEN {
        return Ok(None);
    }
    let v: f64 = raw
        .parse()
        .map_err(|_| parse_error(file, row, column, format!("not a number: '{raw}'")))?;
    if !v.is_finite() {
        return Err(parse_error(
            file,
            row,
            column,
            format!("non-finite value '{raw}'"),
        ));
    }
    Ok(Some(v))
}

fn read_series(path: &Path) -> Result<(WindSeries, Vec<Diagnostic>)> {
    let file = path.display().to_string();
    let site = site_from_path(path)?;
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = reader
        .headers()
        .map_err(|e| parse_error(&file, 1, "header", e.to_string()))?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(parse_error(
            &file,
            1,
            "header",
            format!("expected '{}'", HEADER.join(",")),
        ));
    }

    let mut warnings = Vec::new();
    let mut start: Option<NaiveDate> = None;
    let mut prev: Option<NaiveDate> = None;
    let mut samples: Vec<WindSample> = Vec::new();

    for (i, record) in reader.records().enumerate() {
        // header is line 1
        let row = i + 2;
        let record = record.map_err(|e| parse_error(&file, row, "row", e.to_string()))?;
        if record.len() != HEADER.len() {
            return Err(parse_error(
                &file,
                row,
                "row",
                format!("expected {} fields, found {}", HEADER.len(), record.len()),
            ));
        }
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d").map_err(|_| {
            parse_error(&file, row, HEADER[0], format!("bad date '{}'", &record[0]))
        })?;
        if let Some(p) = prev {
            let step = (date - p).num_days();
            if step == 0 {
                return Err(Error::DuplicateDate {
                    file,
                    row,
                    date: date.to_string(),
                });
            }
            if step < 0 {
                return Err(parse_error(&file, row, HEADER[0], "dates not ascending"));
            }
            if step > 1 {
                return Err(parse_error(
                    &file,
                    row,
                    HEADER[0],
                    format!(
                        "gap of {} days after {p}; missing days need NA rows",
                        step - 1
                    ),
                ));
            }
        } else {
            start = Some(date);
        }
        prev = Some(date);

        let avg = parse_value(&file, row, HEADER[1], &record[1])?;
        let gust = parse_value(&file, row, HEADER[2], &record[2])?;
        let dir = parse_value(&file, row, HEADER[3], &record[3])?;
        let sample = match (avg, gust, dir) {
            (Some(avg), Some(gust), Some(mut dir)) => {
                for (col, v) in [(HEADER[1], avg), (HEADER[2], gust)] {
                    if v < 0.0 {
                        return Err(parse_error(&file, row, col, format!("negative speed {v}")));
                    }
                }
                if !(0.0..=360.0).contains(&dir) {
                    return Err(parse_error(
                        &file,
                        row,
                        HEADER[3],
                        format!("direction {dir} outside [0, 360]"),
                    ));
                }
                if dir == 360.0 {
                    dir = 0.0;
                    warnings.push(Diagnostic {
                        file: file.clone(),
                        row,
                        message: "direction 360 stored as 0".into(),
                    });
                }
                if gust < avg {
                    warnings.push(Diagnostic {
                        file: file.clone(),
                        row,
                        message: format!("gust {gust} below average speed {avg}"),
                    });
                }
                Some(Reading::new(avg, gust, dir))
            }
            (None, None, None) => None,
            _ => {
                warnings.push(Diagnostic {
                    file: file.clone(),
                    row,
                    message: "partially missing row treated as missing day".into(),
                });
                None
            }
        };
        samples.push(sample);
    }

    let start = start.ok_or_else(|| parse_error(&file, 2, "row", "no data rows"))?;
    Ok((WindSeries::new(site, start, samples)?, warnings))
}

/// Writes one CSV per site into `dir` (created if needed) and returns the
/// written paths in dataset order.
pub fn write_dataset(ds: &Dataset, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::with_capacity(ds.series().len());
    for s in ds.series() {
        let path = dir.join(format!("{}.csv", s.site()));
        fs::write(&path, series_to_csv(s)).map_err(|e| Error::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}

/// CSV text of one series. Values use the shortest decimal form that
/// parses back to the same `f64`.
pub fn series_to_csv(s: &WindSeries) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for (i, sample) in s.samples().iter().enumerate() {
        let date = s.date(i).format("%Y-%m-%d");
        match sample {
            Some(r) => out.push_str(&format!(
                "{date},{},{},{}\n",
                r.avg_kmh, r.gust_kmh, r.dir_deg
            )),
            None => out.push_str(&format!(
                "{date},{MISSING_TOKEN},{MISSING_TOKEN},{MISSING_TOKEN}\n"
            )),
        }
    }
    out
}
