//! Goodness-of-fit measures shared by interpolation scoring and ARX fitting.

use crate::error::{Error, Result};

fn check_pair(y: &[f64], yhat: &[f64]) -> Result<()> {
    if y.len() != yhat.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: yhat.len(),
        });
    }
    if y.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    Ok(())
}

fn sum_sq_diff(y: &[f64], yhat: &[f64]) -> f64 {
    y.iter().zip(yhat).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Root mean squared error.
pub fn rmse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    check_pair(y, yhat)?;
    Ok((sum_sq_diff(y, yhat) / y.len() as f64).sqrt())
}

/// Normalised fit in percent: `100 * (1 - |y - yhat| / |y - mean(y)|)`.
///
/// 100 is a perfect fit, 0 is no better than predicting the mean, and the
/// value is unbounded below.
pub fn fitness(y: &[f64], yhat: &[f64]) -> Result<f64> {
    check_pair(y, yhat)?;
    if y.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: y.len(),
        });
    }
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let spread = y
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        .sqrt();
    if spread == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(100.0 * (1.0 - sum_sq_diff(y, yhat).sqrt() / spread))
}

/// Akaike's final prediction error for a scalar output:
/// `(rss / n) * (1 + d/n) / (1 - d/n)`.
pub fn fpe(rss: f64, n_samples: usize, n_params: usize) -> Result<f64> {
    if n_samples <= n_params {
        return Err(Error::InsufficientData {
            samples: n_samples,
            params: n_params,
        });
    }
    if !(rss >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "residual sum of squares must be non-negative, got {rss}"
        )));
    }
    let n = n_samples as f64;
    let ratio = n_params as f64 / n;
    Ok(rss / n * (1.0 + ratio) / (1.0 - ratio))
}
