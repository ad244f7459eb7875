mod common;

use std::fs;
use std::path::Path;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use windkit::arx::{self, ArxModel, FitOptions};
use windkit::report::{self, Manifest};
use windkit::stats::{self, AcfEstimator, SignificanceBand};
use windkit::{Dataset, Reading, SiteId, WindSeries, WindVar};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_windkit"))
}

fn read_manifest(dir: &Path) -> Manifest {
    serde_json::from_str(&fs::read_to_string(dir.join(report::MANIFEST_NAME)).unwrap()).unwrap()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

/// Three input sites driving a target through a known ARX(2; k=1) law.
fn arx_dataset(n: usize, noise: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<Vec<f64>> = (0..3)
        .map(|_| {
            (0..n)
                .map(|_| (10.0 + 5.0 * common::normal(&mut rng)).abs())
                .collect()
        })
        .collect();
    let mut y = vec![0.0; n];
    for t in 0..n {
        let mut v = 0.4 * inputs[0][t] + 0.3 * inputs[1][t] + 0.2 * inputs[2][t];
        if t >= 1 {
            v += 0.3 * y[t - 1];
        }
        if t >= 2 {
            v -= 0.1 * y[t - 2];
        }
        y[t] = (v + noise * common::normal(&mut rng)).abs();
    }
    common::dataset_from_avg(&[
        ("chios", inputs[0].clone()),
        ("kos", inputs[1].clone()),
        ("lesvos_petra", inputs[2].clone()),
        ("lesvos_thermi", y),
    ])
}

#[test]
fn stats_bundle_inventory_and_north_rose() {
    let samples = (0..20)
        .map(|t| {
            Some(Reading::new(
                5.0 + t as f64 % 7.0,
                20.0 + t as f64,
                if t % 2 == 0 { 0.0 } else { 359.0 },
            ))
        })
        .collect();
    let ds = Dataset::new(vec![WindSeries::new(
        common::site("chios"),
        common::start(),
        samples,
    )
    .unwrap()])
    .unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let manifest = report::stats_report(&ds, tmp.path(), "windkit stats").unwrap();
    let names: Vec<&str> = manifest.files.iter().map(|f| f.path.as_str()).collect();
    assert_eq!(
        names,
        vec![
            "chios_avg_hist.csv",
            "chios_gust_hist.csv",
            "chios_dir_rose.csv",
            "summary.csv"
        ]
    );
    assert_eq!(listing(tmp.path()).len(), 5);

    let rose = fs::read_to_string(tmp.path().join("chios_dir_rose.csv")).unwrap();
    let north = rose.lines().nth(1).unwrap();
    assert_eq!(north, "0,N,0,-11.25,11.25,20,1");
    let summary = fs::read_to_string(tmp.path().join("summary.csv")).unwrap();
    assert!(summary
        .lines()
        .any(|l| l.starts_with("chios,dir,") && l.ends_with(",N")));
}

#[test]
fn dominant_directions_follow_the_rose() {
    let bearings = [0.0, 270.0, 135.0, 292.5, 157.5];
    let series = common::SITES
        .iter()
        .zip(bearings)
        .map(|(name, dir)| {
            let samples = (0..30)
                .map(|t| Some(Reading::new(5.0, 9.0, if t % 5 == 0 { 90.0 } else { dir })))
                .collect();
            WindSeries::new(common::site(name), common::start(), samples).unwrap()
        })
        .collect();
    let ds = Dataset::new(series).unwrap();
    let got: Vec<&str> = report::dominant_directions(&ds)
        .unwrap()
        .into_iter()
        .map(|(_, d)| d)
        .collect();
    assert_eq!(got, vec!["N", "W", "SE", "WNW", "SSE"]);
}

#[test]
fn stats_requires_complete_data() {
    let ds = common::random_dataset(2, 20, 3, 0.2);
    let tmp = tempfile::tempdir().unwrap();
    assert!(matches!(
        report::stats_report(&ds, tmp.path(), "x"),
        Err(windkit::Error::IncompleteSeries { .. })
    ));
}

#[test]
fn acf_zero_lag_table() {
    let ds = common::random_dataset(1, 30, 4, 0.0);
    let tmp = tempfile::tempdir().unwrap();
    report::acf_report(
        &ds,
        &common::site("chios"),
        WindVar::Avg,
        Some(0),
        42,
        AcfEstimator::Segment,
        tmp.path(),
        "x",
    )
    .unwrap();
    let table = fs::read_to_string(tmp.path().join("acf_chios_avg.csv")).unwrap();
    assert_eq!(table, "lag,r,comparator_r\n0,1,1\n");
}

#[test]
fn white_noise_acf_indistinguishable_from_comparator() {
    // both ACFs stay inside the same 3/sqrt(n-k) band on most lags
    let n = 123;
    let mut inside = [0usize; 2];
    let mut total = 0;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let xs: Vec<f64> = (0..n).map(|_| common::normal(&mut rng)).collect();
        let comp = stats::gaussian_walk_comparator(&xs, seed).unwrap();
        let a = stats::autocorrelation(&xs, 30).unwrap();
        let b = stats::autocorrelation(&comp, 30).unwrap();
        for k in 1..=30i64 {
            let band = 3.0 / ((n as i64 - k) as f64).sqrt();
            inside[0] += usize::from(a.at(k).unwrap().abs() < band);
            inside[1] += usize::from(b.at(k).unwrap().abs() < band);
            total += 1;
        }
    }
    let (fa, fb) = (
        inside[0] as f64 / total as f64,
        inside[1] as f64 / total as f64,
    );
    assert!(fa >= 0.95 && fb >= 0.95, "{fa} {fb}");
    assert!((fa - fb).abs() < 0.02, "{fa} {fb}");
}

#[test]
fn comparator_acf_small_at_short_lags() {
    // 100 seeds sit within two standard errors of the 95% line, so the
    // rate is estimated over 1000
    let mut ok = 0;
    for seed in 0..1000u64 {
        let xs: Vec<f64> = (0..123)
            .map(|t| 10.0 + (t as f64 * 0.3).sin() * 4.0)
            .collect();
        let comp = stats::gaussian_walk_comparator(&xs, seed).unwrap();
        let acf = stats::autocorrelation(&comp, 30).unwrap();
        ok += usize::from((1..=30).all(|k| acf.at(k).unwrap().abs() < 0.3));
    }
    assert!(ok >= 950, "{ok}/1000");
}

#[test]
fn xcorr_duplicated_series_are_perfectly_correlated() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let col: Vec<f64> = (0..50).map(|_| rng.gen_range(0.0..30.0)).collect();
    let ds = common::dataset_from_avg(&[("a", col.clone()), ("b", col.clone()), ("c", col)]);
    let tmp = tempfile::tempdir().unwrap();
    report::xcorr_report(&ds, WindVar::Avg, tmp.path(), "x").unwrap();
    let table = fs::read_to_string(tmp.path().join("cross_site_avg.csv")).unwrap();
    for line in table.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[2], "1", "{line}");
        assert_eq!(f[4], "strong");
    }
    let m = stats::cross_site_matrix(&ds, WindVar::Avg).unwrap();
    assert_eq!(m.pairs().count(), 3);
}

#[test]
fn xcorr_sign_flip() {
    let col: Vec<f64> = (0..20).map(|t| (t * t % 7) as f64).collect();
    let neg: Vec<f64> = col.iter().map(|v| -v).collect();
    let ds = common::dataset_from_avg(&[("a", col), ("b", neg)]);
    let m = stats::cross_site_matrix(&ds, WindVar::Avg).unwrap();
    assert!((m.get(0, 1).r + 1.0).abs() < 1e-15);
    assert_eq!(m.get(1, 0).r, m.get(0, 1).r);
    assert_eq!(m.get(1, 1).r, 1.0);
}

#[test]
fn independent_noise_sites_are_mostly_not_significant() {
    let mut none = 0;
    let mut pairs = 0;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols: Vec<(&str, Vec<f64>)> = common::SITES
            .iter()
            .map(|s| {
                (
                    *s,
                    (0..123).map(|_| 10.0 + common::normal(&mut rng)).collect(),
                )
            })
            .collect();
        let ds = common::dataset_from_avg(&cols);
        let m = stats::cross_site_matrix(&ds, WindVar::Avg).unwrap();
        for (_, _, c) in m.pairs() {
            pairs += 1;
            none += usize::from(c.band == SignificanceBand::NotSignificant);
        }
    }
    let frac = none as f64 / pairs as f64;
    assert!(frac >= 0.90, "{frac}");
}

#[test]
fn noise_free_fit_is_perfect_and_replays_exactly() {
    let ds = arx_dataset(150, 0.0, 8);
    let target = common::site("lesvos_thermi");
    let inputs = arx::other_sites(&ds, &target);
    let fit_dir = tempfile::tempdir().unwrap();
    let (manifest, model, fit) = report::fit_report(
        &ds,
        &target,
        &inputs,
        WindVar::Avg,
        2,
        1,
        &FitOptions::default(),
        fit_dir.path(),
        "x",
    )
    .unwrap();
    assert!((fit.fitness - 100.0).abs() < 1e-6);
    assert_eq!(manifest.files.len(), 3);

    let stem = "lesvos_thermi_avg_m2_k1";
    let saved = report::read_model(&fit_dir.path().join(format!("model_{stem}.arx"))).unwrap();
    assert_eq!(saved, model);

    let fc_dir = tempfile::tempdir().unwrap();
    let (_, forecast) = report::forecast_report(&saved, &ds, fc_dir.path(), "y").unwrap();
    let replay_fit = fs::read_to_string(fit_dir.path().join(format!("replay_{stem}.csv"))).unwrap();
    let replay_fc = fs::read_to_string(fc_dir.path().join(format!("replay_{stem}.csv"))).unwrap();
    assert_eq!(replay_fit, replay_fc);
    assert_eq!(forecast.replay_rmse, Some(fit.rmse));
    assert_eq!(forecast.date, "2016-02-27");
}

#[test]
fn noisy_fit_replay_matches_fit_rmse() {
    let ds = arx_dataset(123, 1.0, 9);
    let target = common::site("lesvos_thermi");
    let inputs = arx::other_sites(&ds, &target);
    let (model, fit) = arx::fit(&ds, &target, &inputs, WindVar::Avg, 7, 5).unwrap();
    assert_eq!(fit.n_params, 7 + 5 * 3);
    let (f, first, _, predicted) = report::forecast(&model, &ds).unwrap();
    assert_eq!(first, fit.first_day);
    assert_eq!(predicted, fit.predicted);
    assert_eq!(f.replay_rmse, Some(fit.rmse));
}

#[test]
fn passthrough_forecast_is_current_input() {
    let ds = arx_dataset(30, 0.5, 10);
    let model = ArxModel::new(
        common::site("lesvos_thermi"),
        WindVar::Avg,
        vec![0.0, 0.0],
        vec![(common::site("kos"), vec![1.0, 0.0, 0.0])],
    )
    .unwrap();
    let (f, ..) = report::forecast(&model, &ds).unwrap();
    let kos = ds
        .complete_series(&common::site("kos"), WindVar::Avg)
        .unwrap();
    assert_eq!(f.prediction, kos[29]);
}

#[test]
fn forecast_uses_latest_window_when_target_day_missing() {
    let ds = arx_dataset(40, 0.5, 11);
    let mut series = ds.clone().into_series();
    let target = series
        .iter_mut()
        .find(|s| s.site().as_str() == "lesvos_thermi")
        .unwrap();
    let mut samples = target.samples().to_vec();
    samples[39] = None;
    *target = WindSeries::new(target.site().clone(), target.start_date(), samples).unwrap();
    let ds = Dataset::new(series).unwrap();
    let model = arx::lesvos_thermi_reference_model();
    // reference model needs samos, which this dataset lacks
    assert!(matches!(
        report::forecast(&model, &ds),
        Err(windkit::Error::ModelMismatch(_))
    ));

    let model = ArxModel::new(
        common::site("lesvos_thermi"),
        WindVar::Avg,
        vec![-0.3],
        vec![(common::site("chios"), vec![0.4])],
    )
    .unwrap();
    let (f, _, observed, _) = report::forecast(&model, &ds).unwrap();
    assert_eq!(f.observed, None);
    assert_eq!(observed.last(), Some(&None));
    assert!(f.replay_rmse.is_some());
}

#[test]
fn scan_recovers_generator_order() {
    // FPE overfits by one lag with probability about P(chi2_1 > 2) = 0.16,
    // so the true order should win roughly 84% of the time
    let target = common::site("lesvos_thermi");
    let mut wins = 0;
    for seed in 0..40 {
        let ds = arx_dataset(300, 0.5, 100 + seed);
        let inputs = arx::other_sites(&ds, &target);
        let rows = arx::order_scan(&ds, &target, &inputs, WindVar::Avg, &[1, 2, 3], &[1]).unwrap();
        assert!(rows.windows(2).all(|w| w[0].report.fpe <= w[1].report.fpe));
        assert_ne!(rows[0].m, 1, "underfit selected for seed {seed}");
        wins += usize::from(rows[0].m == 2);
    }
    assert!(wins >= 30, "{wins}/40");

    let ds = arx_dataset(300, 0.5, 12);
    let inputs = arx::other_sites(&ds, &target);

    let single = arx::order_scan(&ds, &target, &inputs, WindVar::Avg, &[1], &[1]).unwrap();
    let (_, direct) = arx::fit(&ds, &target, &inputs, WindVar::Avg, 1, 1).unwrap();
    assert_eq!(single.len(), 1);
    assert_eq!(single[0].report, direct);
}

#[test]
fn scan_report_is_sorted_by_fpe() {
    let ds = arx_dataset(120, 1.0, 13);
    let target = common::site("lesvos_thermi");
    let inputs = arx::other_sites(&ds, &target);
    let tmp = tempfile::tempdir().unwrap();
    let (manifest, rows) = report::scan_report(
        &ds,
        &target,
        &inputs,
        WindVar::Avg,
        &[1, 7, 10],
        &[1, 5],
        tmp.path(),
        "x",
    )
    .unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(manifest.files.len(), 1 + 6 * 3);
    let table = fs::read_to_string(tmp.path().join("scan_lesvos_thermi_avg.csv")).unwrap();
    let fpes: Vec<f64> = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(6).unwrap().parse().unwrap())
        .collect();
    assert!(fpes.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn interp_report_scores_all_methods() {
    let mut ds = common::random_dataset(1, 40, 14, 0.0).into_series();
    let mut samples = ds[0].samples().to_vec();
    samples[20] = None;
    ds[0] = WindSeries::new(ds[0].site().clone(), ds[0].start_date(), samples).unwrap();
    let ds = Dataset::new(ds).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    report::interp_report(
        &ds,
        &common::site("chios"),
        WindVar::Gust,
        Some(20),
        tmp.path(),
        "x",
    )
    .unwrap();
    let table = fs::read_to_string(tmp.path().join("interp_chios_gust.csv")).unwrap();
    let methods: Vec<&str> = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(methods, vec!["MA(2)", "MA(4)", "QS"]);
}

#[test]
fn interp_report_marks_unreachable_methods() {
    let mut ds = common::random_dataset(1, 40, 16, 0.0).into_series();
    let mut samples = ds[0].samples().to_vec();
    samples[20] = None;
    samples[21] = None;
    ds[0] = WindSeries::new(ds[0].site().clone(), ds[0].start_date(), samples).unwrap();
    let ds = Dataset::new(ds).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    report::interp_report(
        &ds,
        &common::site("chios"),
        WindVar::Avg,
        Some(20),
        tmp.path(),
        "x",
    )
    .unwrap();
    let table = fs::read_to_string(tmp.path().join("interp_chios_avg.csv")).unwrap();
    let values: Vec<&str> = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(values[0], "NA");
    assert_eq!(values[1], "NA");
    assert!(values[2].parse::<f64>().unwrap().is_finite());
}

#[test]
fn cli_end_to_end_and_determinism() {
    let ds = arx_dataset(60, 0.5, 15);
    let data = tempfile::tempdir().unwrap();
    common::write_dataset(&ds, data.path());
    let out = tempfile::tempdir().unwrap();

    let run = |args: &[&str], dir: &Path| {
        let status = bin()
            .args(args)
            .arg("--data")
            .arg(data.path())
            .arg("--out")
            .arg(dir)
            .output()
            .unwrap();
        assert!(
            status.status.success(),
            "{}",
            String::from_utf8_lossy(&status.stderr)
        );
    };

    let commands: Vec<Vec<&str>> = vec![
        vec!["stats"],
        vec!["acf", "--site", "kos", "--var", "gust"],
        vec!["xcorr"],
        vec!["fit", "--target", "lesvos_thermi", "--m", "2", "--k", "1"],
        vec![
            "scan",
            "--target",
            "lesvos_thermi",
            "--m-set",
            "1,2",
            "--k-set",
            "1,2",
        ],
        vec!["interp", "--site", "chios"],
    ];
    for (i, args) in commands.iter().enumerate() {
        let first = out.path().join(format!("run{i}a"));
        let second = out.path().join(format!("run{i}b"));
        run(args, &first);
        run(args, &second);
        let manifest = read_manifest(&first);
        let mut listed: Vec<String> = manifest.files.iter().map(|f| f.path.clone()).collect();
        listed.push(report::MANIFEST_NAME.to_string());
        listed.sort();
        assert_eq!(listed, listing(&first), "{args:?}");
        for name in listing(&first) {
            if name == report::MANIFEST_NAME {
                continue;
            }
            assert_eq!(
                fs::read(first.join(&name)).unwrap(),
                fs::read(second.join(&name)).unwrap(),
                "{name} differs between runs"
            );
        }
    }

    let model = out.path().join("run3a/model_lesvos_thermi_avg_m2_k1.arx");
    let fc = out.path().join("forecast");
    let status = bin()
        .args(["forecast", "--model"])
        .arg(&model)
        .arg("--out")
        .arg(&fc)
        .env("WINDKIT_DATA", data.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(
        fs::read(fc.join("replay_lesvos_thermi_avg_m2_k1.csv")).unwrap(),
        fs::read(out.path().join("run3a/replay_lesvos_thermi_avg_m2_k1.csv")).unwrap()
    );
}

#[test]
fn cli_exit_codes() {
    let data = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();

    let status = bin().arg("nonsense").status().unwrap();
    assert_eq!(status.code(), Some(1));

    let status = bin()
        .args(["xcorr", "--var", "speed", "--data"])
        .arg(data.path())
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));

    // empty data directory
    let status = bin()
        .args(["stats", "--data"])
        .arg(data.path())
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // incomplete data without --fill is a data error; with --fill it runs
    let ds = common::random_dataset(2, 30, 16, 0.0);
    let mut series = ds.into_series();
    let mut samples = series[0].samples().to_vec();
    samples[10] = None;
    series[0] = WindSeries::new(series[0].site().clone(), series[0].start_date(), samples).unwrap();
    common::write_dataset(&Dataset::new(series).unwrap(), data.path());
    let status = bin()
        .args(["stats", "--data"])
        .arg(data.path())
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    let status = bin()
        .args(["stats", "--fill", "qs", "--data"])
        .arg(data.path())
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    // constant series cannot be correlated: numerical error
    let flat = common::dataset_from_avg(&[
        ("a", vec![3.0; 10]),
        ("b", (0..10).map(f64::from).collect()),
    ]);
    let flat_dir = tempfile::tempdir().unwrap();
    common::write_dataset(&flat, flat_dir.path());
    let status = bin()
        .args(["acf", "--site", "a", "--data"])
        .arg(flat_dir.path())
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn unknown_site_in_cli_is_a_data_error() {
    let ds = common::random_dataset(2, 30, 17, 0.0);
    let data = tempfile::tempdir().unwrap();
    common::write_dataset(&ds, data.path());
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["acf", "--site", "rhodes", "--data"])
        .arg(data.path())
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    let _ = SiteId::new("rhodes").unwrap();
}
