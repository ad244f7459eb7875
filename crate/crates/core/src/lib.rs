//! Daily multi-site wind series toolkit.
//!
//! - [`types`]: sites, daily samples and the aligned [`Dataset`].
//! - [`ingest`]: one-CSV-per-site reading and writing.
//! - [`interpolate`]: moving-average and cubic-spline gap filling with
//!   leave-one-out scoring.
//! - [`stats`]: auto-correlation, Pearson correlation with significance,
//!   histograms and wind roses, the Gaussian comparator series.
//! - [`arx`]: ARX identification, one-step prediction, fit metrics.
//! - [`report`]: the batch report commands behind the `windkit` binary.

pub mod arx;
pub mod error;
pub mod ingest;
pub mod interpolate;
pub mod metrics;
pub mod report;
pub mod stats;
pub mod types;

pub use arx::{ArxModel, FitOptions, FitReport};
pub use error::{Error, ErrorClass, Result};
pub use interpolate::InterpMethod;
pub use types::{Dataset, Reading, SiteId, WindSample, WindSeries, WindVar};
