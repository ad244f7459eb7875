use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use windkit::arx::{self, FitOptions, RegressorWindow};
use windkit::report;
use windkit::stats::AcfEstimator;
use windkit::{Dataset, Error, ErrorClass, InterpMethod, SiteId, WindVar};

/// Daily multi-site wind statistics and ARX forecasting.
#[derive(Parser)]
#[command(name = "windkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Directory holding one `<site>.csv` per station.
    #[arg(long, env = "WINDKIT_DATA")]
    data: PathBuf,
    /// Output directory for the report bundle.
    #[arg(long)]
    out: PathBuf,
    /// Fill missing days before analysis (ma2, ma4, qs, qs-natural).
    #[arg(long)]
    fill: Option<InterpMethod>,
}

#[derive(Subcommand)]
enum Command {
    /// Speed histograms, wind roses and moment summaries per site.
    Stats {
        #[command(flatten)]
        common: Common,
    },
    /// Auto-correlation of one series next to its Gaussian comparator.
    Acf {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        site: SiteId,
        #[arg(long, default_value = "avg")]
        var: WindVar,
        /// Defaults to the series length minus one.
        #[arg(long)]
        max_lag: Option<usize>,
        #[arg(long, default_value_t = report::DEFAULT_SEED)]
        seed: u64,
        /// Normalise with one global mean instead of per-window statistics.
        #[arg(long)]
        global_mean: bool,
    },
    /// Variable-pair and cross-site correlations with significance bands.
    Xcorr {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "avg")]
        var: WindVar,
    },
    /// Gap-filling values and leave-one-out scores for MA(2), MA(4) and QS.
    Interp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        site: SiteId,
        #[arg(long, default_value = "avg")]
        var: WindVar,
        /// Day to fill (YYYY-MM-DD).
        #[arg(long)]
        date: Option<chrono::NaiveDate>,
    },
    /// Fits one ARMA(m,k) model of a target site on other sites.
    Fit {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Fit a constant term.
        #[arg(long)]
        intercept: bool,
        /// Regress every day, treating history before the first day as zero.
        #[arg(long)]
        zero_pad: bool,
        /// Trailing days held out for scoring.
        #[arg(long, default_value_t = 0)]
        holdout: usize,
    },
    /// Fits every (m, k) combination and ranks them by FPE.
    Scan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        m_set: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        k_set: Vec<usize>,
    },
    /// Replays a saved model and predicts the latest day.
    Forecast {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    target: SiteId,
    #[arg(long, default_value = "avg")]
    var: WindVar,
    /// Input sites; defaults to every other site.
    #[arg(long, value_delimiter = ',')]
    inputs: Vec<SiteId>,
}

impl ModelArgs {
    fn inputs(&self, ds: &Dataset) -> Vec<SiteId> {
        if self.inputs.is_empty() {
            arx::other_sites(ds, &self.target)
        } else {
            self.inputs.clone()
        }
    }
}

fn load(common: &Common) -> Result<Dataset, Error> {
    let (ds, warnings) = report::load_dataset(&common.data, common.fill)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(ds)
}

fn run(cli: Cli, invocation: &str) -> Result<(), Error> {
    let manifest = match cli.command {
        Command::Stats { common } => {
            let ds = load(&common)?;
            report::stats_report(&ds, &common.out, invocation)?
        }
        Command::Acf {
            common,
            site,
            var,
            max_lag,
            seed,
            global_mean,
        } => {
            let ds = load(&common)?;
            let estimator = if global_mean {
                AcfEstimator::GlobalMean
            } else {
                AcfEstimator::Segment
            };
            report::acf_report(
                &ds,
                &site,
                var,
                max_lag,
                seed,
                estimator,
                &common.out,
                invocation,
            )?
        }
        Command::Xcorr { common, var } => {
            let ds = load(&common)?;
            report::xcorr_report(&ds, var, &common.out, invocation)?
        }
        Command::Interp {
            common,
            site,
            var,
            date,
        } => {
            // scores are computed on the raw data; --fill does not apply
            let ds = report::load_dataset(&common.data, None)?.0;
            let day = match date {
                Some(d) => Some(ds.day_index(d).ok_or_else(|| {
                    Error::InvalidArgument(format!("{d} is outside the dataset"))
                })?),
                None => None,
            };
            report::interp_report(&ds, &site, var, day, &common.out, invocation)?
        }
        Command::Fit {
            common,
            model,
            m,
            k,
            intercept,
            zero_pad,
            holdout,
        } => {
            let ds = load(&common)?;
            let opts = FitOptions {
                intercept,
                window: if zero_pad {
                    RegressorWindow::ZeroPadded
                } else {
                    RegressorWindow::DropIncomplete
                },
                holdout,
            };
            let inputs = model.inputs(&ds);
            let (manifest, _, fit) = report::fit_report(
                &ds,
                &model.target,
                &inputs,
                model.var,
                m,
                k,
                &opts,
                &common.out,
                invocation,
            )?;
            println!(
                "{} {}: F={:.2}% FPE={:.3} RMSE={:.3}",
                fit.label, model.target, fit.fitness, fit.fpe, fit.rmse
            );
            manifest
        }
        Command::Scan {
            common,
            model,
            m_set,
            k_set,
        } => {
            let ds = load(&common)?;
            let inputs = model.inputs(&ds);
            let (manifest, rows) = report::scan_report(
                &ds,
                &model.target,
                &inputs,
                model.var,
                &m_set,
                &k_set,
                &common.out,
                invocation,
            )?;
            for row in rows {
                let r = row.report;
                println!(
                    "{}: F={:.2}% FPE={:.3} RMSE={:.3}",
                    r.label, r.fitness, r.fpe, r.rmse
                );
            }
            manifest
        }
        Command::Forecast { common, model } => {
            let ds = load(&common)?;
            let model = report::read_model(&model)?;
            let (manifest, f) = report::forecast_report(&model, &ds, &common.out, invocation)?;
            println!("{} {} on {}: {}", f.label, f.target, f.date, f.prediction);
            manifest
        }
    };
    for entry in &manifest.files {
        eprintln!("wrote {}", entry.path);
    }
    Ok(())
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut invocation = vec!["windkit".to_string()];
    invocation.extend(args.into_iter().skip(1));
    match run(cli, &invocation.join(" ")) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Usage => 1,
                ErrorClass::Data => 2,
                ErrorClass::Numerical => 3,
            })
        }
    }
}
