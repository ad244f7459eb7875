//! Gap filling for daily series: two- and four-point moving averages and
//! cubic-spline interpolation, with leave-one-out scoring.
//!
//! Direction is treated on the circle: neighbours are unwrapped along the
//! shortest arc before averaging or splining and the result is wrapped back
//! into `[0, 360)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metrics;
use crate::types::{wrap_degrees, Dataset, WindSeries, WindVar};

/// End conditions for the cubic spline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplineBoundary {
    /// Third derivative continuous across the second and penultimate knots.
    /// Reproduces cubic polynomials exactly.
    #[default]
    NotAKnot,
    /// Zero second derivative at both end knots.
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpMethod {
    /// Mean of the two immediate neighbours.
    Ma2,
    /// Mean of two neighbours on each side.
    Ma4,
    /// Cubic spline through every other present point.
    Qs(SplineBoundary),
}

impl InterpMethod {
    pub const QS: InterpMethod = InterpMethod::Qs(SplineBoundary::NotAKnot);

    pub fn label(self) -> &'static str {
        match self {
            InterpMethod::Ma2 => "MA(2)",
            InterpMethod::Ma4 => "MA(4)",
            InterpMethod::Qs(SplineBoundary::NotAKnot) => "QS",
            InterpMethod::Qs(SplineBoundary::Natural) => "QS(natural)",
        }
    }

    fn half_width(self) -> Option<usize> {
        match self {
            InterpMethod::Ma2 => Some(1),
            InterpMethod::Ma4 => Some(2),
            InterpMethod::Qs(_) => None,
        }
    }
}

impl fmt::Display for InterpMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InterpMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ma2" => Ok(InterpMethod::Ma2),
            "ma4" => Ok(InterpMethod::Ma4),
            "qs" | "spline" => Ok(InterpMethod::QS),
            "qs-natural" => Ok(InterpMethod::Qs(SplineBoundary::Natural)),
            _ => Err(Error::InvalidArgument(format!(
                "unknown interpolation method '{s}' (expected ma2, ma4, qs or qs-natural)"
            ))),
        }
    }
}

/// Interpolating cubic spline over strictly increasing knots.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    // second derivative at each knot
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>, boundary: SplineBoundary) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        let n = x.len();
        if n < 4 {
            return Err(Error::InsufficientPoints {
                needed: 4,
                found: n,
            });
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(
                "spline knots must be strictly increasing".into(),
            ));
        }

        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

        // Tridiagonal system in the interior second derivatives m[1..n-1].
        let size = n - 2;
        let mut sub = vec![0.0; size];
        let mut diag = vec![0.0; size];
        let mut sup = vec![0.0; size];
        let mut rhs = vec![0.0; size];
        for r in 0..size {
            let i = r + 1;
            sub[r] = h[i - 1];
            diag[r] = 2.0 * (h[i - 1] + h[i]);
            sup[r] = h[i];
            rhs[r] = 6.0 * (slope[i] - slope[i - 1]);
        }
        if boundary == SplineBoundary::NotAKnot {
            // m0 = m1 + h0 (m1 - m2) / h1, folded into the first row
            let (h0, h1) = (h[0], h[1]);
            diag[0] = (h0 + h1) * (h0 + 2.0 * h1) / h1;
            sup[0] = (h1 * h1 - h0 * h0) / h1;
            // and the mirror image at the right end
            let (ha, hb) = (h[n - 3], h[n - 2]);
            let last = size - 1;
            sub[last] = (ha * ha - hb * hb) / ha;
            diag[last] = (ha + hb) * (hb + 2.0 * ha) / ha;
        }
        let interior = solve_tridiagonal(&sub, &diag, &sup, &rhs);

        let mut m = vec![0.0; n];
        m[1..n - 1].copy_from_slice(&interior);
        if boundary == SplineBoundary::NotAKnot {
            m[0] = m[1] + h[0] * (m[1] - m[2]) / h[1];
            m[n - 1] = m[n - 2] + h[n - 2] * (m[n - 2] - m[n - 3]) / h[n - 3];
        }
        Ok(CubicSpline { x, y, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// Evaluates the spline; `None` outside the knot range.
    pub fn eval(&self, t: f64) -> Option<f64> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return None;
        }
        let i = match self.x.partition_point(|&k| k <= t) {
            0 => 0,
            p => (p - 1).min(self.x.len() - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let a = self.x[i + 1] - t;
        let b = t - self.x[i];
        let (mi, mj) = (self.m[i], self.m[i + 1]);
        Some(
            mi * a * a * a / (6.0 * h)
                + mj * b * b * b / (6.0 * h)
                + (self.y[i] / h - mi * h / 6.0) * a
                + (self.y[i + 1] / h - mj * h / 6.0) * b,
        )
    }
}

/// Thomas algorithm; the systems built here are diagonally dominant or
/// close to it.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / denom;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut out = vec![0.0; n];
    out[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = d[i] - c[i] * out[i + 1];
    }
    out
}

/// Shortest signed arc from `from` to `to`, in `[-180, 180)`.
fn shortest_arc(from: f64, to: f64) -> f64 {
    (to - from + 180.0).rem_euclid(360.0) - 180.0
}

/// Lifts a chronological run of bearings onto the real line so that each
/// step is the shortest arc from its predecessor.
fn unwrap_angles(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    for &v in values {
        let next = match out.last() {
            Some(&prev) => prev + shortest_arc(prev, v),
            None => v,
        };
        out.push(next);
    }
    out
}

fn estimate(xs: &[Option<f64>], t: usize, method: InterpMethod, circular: bool) -> Result<f64> {
    if t >= xs.len() {
        return Err(Error::IndexOutOfRange {
            index: t,
            len: xs.len(),
        });
    }
    let (idx, vals): (Vec<usize>, Vec<f64>) = match method.half_width() {
        Some(w) => {
            let missing = || Error::InsufficientNeighbors {
                method: method.label(),
                index: t,
            };
            if t < w || t + w >= xs.len() {
                return Err(missing());
            }
            let window: Vec<usize> = (t - w..t).chain(t + 1..=t + w).collect();
            let vals = window
                .iter()
                .map(|&i| xs[i].ok_or_else(missing))
                .collect::<Result<Vec<f64>>>()?;
            (window, vals)
        }
        None => xs
            .iter()
            .enumerate()
            .filter(|&(i, v)| i != t && v.is_some())
            .map(|(i, v)| (i, v.unwrap()))
            .unzip(),
    };
    let vals = if circular { unwrap_angles(&vals) } else { vals };

    let value = match method {
        InterpMethod::Ma2 | InterpMethod::Ma4 => vals.iter().sum::<f64>() / vals.len() as f64,
        InterpMethod::Qs(boundary) => {
            if idx.len() < 4 {
                return Err(Error::InsufficientPoints {
                    needed: 4,
                    found: idx.len(),
                });
            }
            let knots = idx.iter().map(|&i| i as f64).collect();
            let spline = CubicSpline::new(knots, vals, boundary)?;
            spline
                .eval(t as f64)
                .ok_or(Error::Extrapolation { index: t })?
        }
    };
    Ok(if circular { wrap_degrees(value) } else { value })
}

/// Estimate of `xs[t]` computed as if `xs[t]` were absent.
pub fn interpolate_at(xs: &[Option<f64>], t: usize, method: InterpMethod) -> Result<f64> {
    estimate(xs, t, method, false)
}

/// Same as [`interpolate_at`] for bearings in degrees; the result lies in
/// `[0, 360)`.
pub fn interpolate_direction_at(xs: &[Option<f64>], t: usize, method: InterpMethod) -> Result<f64> {
    estimate(xs, t, method, true)
}

/// Result of leave-one-out scoring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LooScore {
    pub rmse: f64,
    /// Present points that were held out and predicted.
    pub scored: usize,
    /// Present points the method cannot predict (series ends, gaps).
    pub skipped: usize,
}

fn is_inapplicable(e: &Error) -> bool {
    matches!(
        e,
        Error::InsufficientNeighbors { .. } | Error::Extrapolation { .. }
    )
}

/// Holds out each present point in turn, predicts it from the rest and
/// returns the RMSE over all predictable points. Absent points are neither
/// knots nor scored.
pub fn loo_cv_rmse(xs: &[Option<f64>], method: InterpMethod) -> Result<LooScore> {
    let mut truth = Vec::new();
    let mut pred = Vec::new();
    let mut skipped = 0;
    for (t, v) in xs.iter().enumerate() {
        let Some(v) = *v else { continue };
        match interpolate_at(xs, t, method) {
            Ok(p) => {
                truth.push(v);
                pred.push(p);
            }
            Err(e) if is_inapplicable(&e) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if truth.is_empty() {
        return Err(Error::NoApplicablePoints(method.label()));
    }
    Ok(LooScore {
        rmse: metrics::rmse(&truth, &pred)?,
        scored: truth.len(),
        skipped,
    })
}

/// Fills every missing day of one series, each variable independently.
pub fn fill_series(series: &WindSeries, method: InterpMethod) -> Result<WindSeries> {
    if series.absent_count() == 0 {
        return Ok(series.clone());
    }
    let columns: Vec<Vec<Option<f64>>> = WindVar::ALL.iter().map(|&v| series.values(v)).collect();
    let mut samples = series.samples().to_vec();
    for (t, sample) in samples.iter_mut().enumerate() {
        if sample.is_some() {
            continue;
        }
        let mut reading = crate::types::Reading::new(0.0, 0.0, 0.0);
        for (var, col) in WindVar::ALL.iter().zip(&columns) {
            let v = estimate(col, t, method, var.is_circular())?;
            reading.set(*var, v);
        }
        *sample = Some(reading);
    }
    WindSeries::new(series.site().clone(), series.start_date(), samples)
}

/// Returns a copy of `ds` with every missing sample interpolated.
pub fn fill_missing(ds: &Dataset, method: InterpMethod) -> Result<Dataset> {
    let series = ds
        .series()
        .iter()
        .map(|s| fill_series(s, method))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(series)
}
