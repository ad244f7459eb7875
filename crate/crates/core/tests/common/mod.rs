#![allow(dead_code)]

use std::path::Path;

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use windkit::ingest;
use windkit::{Dataset, Reading, SiteId, WindSeries};

pub const SITES: [&str; 5] = ["chios", "kos", "lesvos_petra", "lesvos_thermi", "samos"];

pub fn site(name: &str) -> SiteId {
    SiteId::new(name).unwrap()
}

pub fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2015, 10, 1).unwrap()
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Random dataset with full-precision values and an occasional missing day.
pub fn random_dataset(n_sites: usize, n_days: usize, seed: u64, missing_rate: f64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let series = (0..n_sites)
        .map(|i| {
            let samples = (0..n_days)
                .map(|_| {
                    if rng.gen_bool(missing_rate) {
                        return None;
                    }
                    let avg: f64 = rng.gen_range(0.0..40.0);
                    let gust = avg + rng.gen_range(0.0..30.0);
                    let dir: f64 = rng.gen_range(0.0..360.0);
                    Some(Reading::new(avg, gust, dir))
                })
                .collect();
            WindSeries::new(site(SITES[i % SITES.len()]), start(), samples).unwrap()
        })
        .collect();
    Dataset::new(series).unwrap()
}

/// Dataset whose sites carry the given average-speed columns; gust and
/// direction are derived deterministically.
pub fn dataset_from_avg(columns: &[(&str, Vec<f64>)]) -> Dataset {
    let series = columns
        .iter()
        .map(|(name, avg)| {
            let samples = avg
                .iter()
                .enumerate()
                .map(|(t, &a)| Some(Reading::new(a, a * 1.5 + 3.0, ((t * 47) % 360) as f64)))
                .collect();
            WindSeries::new(site(name), start(), samples).unwrap()
        })
        .collect();
    Dataset::new(series).unwrap()
}

/// y(t) = 0.5 y(t-1) - 0.2 y(t-2) + 1.5 u(t) + noise * e(t)
pub const TRUE_A: [f64; 2] = [-0.5, 0.2];
pub const TRUE_B: f64 = 1.5;

pub fn arx_generator(n: usize, noise: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut y = vec![0.0; n];
    for t in 0..n {
        let mut v = TRUE_B * u[t];
        if t >= 1 {
            v -= TRUE_A[0] * y[t - 1];
        }
        if t >= 2 {
            v -= TRUE_A[1] * y[t - 2];
        }
        y[t] = v + noise * normal(&mut rng);
    }
    (y, u)
}

pub fn write_dataset(ds: &Dataset, dir: &Path) {
    ingest::write_dataset(ds, dir).unwrap();
}
