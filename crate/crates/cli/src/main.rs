use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ris_v2v::{SystemConfig, Thresholds};
use ris_v2v_cli::{
    load_config, run_point, run_sweep, to_csv, validate, Metric, SchemeSelection, SweepParam,
    SweepSpec,
};

const EXIT_CONFIG: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ris-v2v",
    version,
    about = "Outage, capacity and energy efficiency of STAR-RIS assisted V2V links"
)]
struct Cli {
    /// Worker threads for simulation (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON file of dotted keys, e.g. {"surfaces.n1": 30}
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = ris_v2v::montecarlo::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// SINR thresholds in dB: sic,noma_r,noma_t,oma
    #[arg(long, value_parser = parse_thresholds, allow_hyphen_values = true)]
    thresholds_db: Option<[f64; 4]>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParamArg {
    /// Transmit power in dBm
    #[value(name = "P")]
    P,
    /// Elements per surface
    #[value(name = "N")]
    N,
    /// Mean transmit SNR in dB
    #[value(name = "snr")]
    Snr,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Noma,
    Oma,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Every metric at a single configuration
    Point {
        #[command(flatten)]
        common: Common,
    },
    /// Sweep one parameter over a range
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        param: ParamArg,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        step: f64,
        #[arg(long, value_delimiter = ',', default_value = "op,ec,ee")]
        metric: Vec<String>,
        #[arg(long, value_enum, default_value = "both")]
        scheme: SchemeArg,
    },
    /// Compare closed forms with simulation at one configuration
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_thresholds(s: &str) -> Result<[f64; 4], String> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("expected 4 comma-separated values, got {}", v.len()))
}

enum Failure {
    Config(String),
    Validation,
}

fn load(common: &Common) -> Result<(SystemConfig, Thresholds), Failure> {
    let cfg = match &common.config {
        Some(path) => load_config(path).map_err(|e| Failure::Config(e.to_string()))?,
        None => SystemConfig::default(),
    };
    let th = match &common.thresholds_db {
        Some(v) => Thresholds::from_db(*v).map_err(|e| Failure::Config(e.to_string()))?,
        None => Thresholds::default(),
    };
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    Ok((cfg, th))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    let cfg_err = |e: ris_v2v::Error| Failure::Config(e.to_string());
    match command {
        Command::Point { common } => {
            let (cfg, th) = load(&common)?;
            let rows = run_point(&cfg, &th, common.trials, common.seed).map_err(cfg_err)?;
            emit(common.out.as_deref(), &to_csv(&rows))
        }
        Command::Sweep {
            common,
            param,
            from,
            to,
            step,
            metric,
            scheme,
        } => {
            let (cfg, th) = load(&common)?;
            let metrics = metric
                .iter()
                .map(|m| m.trim().parse::<Metric>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::Config)?;
            let spec = SweepSpec {
                parameter: match param {
                    ParamArg::P => SweepParam::TransmitPowerDbm,
                    ParamArg::N => SweepParam::Elements,
                    ParamArg::Snr => SweepParam::MeanSnrDb,
                },
                from,
                to,
                step,
                scheme: match scheme {
                    SchemeArg::Noma => SchemeSelection::Noma,
                    SchemeArg::Oma => SchemeSelection::Oma,
                    SchemeArg::Both => SchemeSelection::Both,
                },
                metrics,
                trials: common.trials,
                seed: common.seed,
            };
            let csv = run_sweep(&cfg, &spec, &th).map_err(cfg_err)?;
            emit(common.out.as_deref(), &csv)
        }
        Command::Validate { common } => {
            let (cfg, th) = load(&common)?;
            let report = validate(&cfg, &th, common.trials, common.seed).map_err(cfg_err)?;
            for c in &report.checks {
                eprintln!("{}", c.summary());
            }
            emit(common.out.as_deref(), &to_csv(&report.rows))?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Validation)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match pool.install(|| execute(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Validation) => {
            eprintln!("validation failed");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
