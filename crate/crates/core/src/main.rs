use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use bivnorm::diagonal::iteration_cap_hits;
use bivnorm::harness::{self, ProfileConfig, RhoFormula};
use bivnorm::{oracle, phi2, phi2_on_diagonal, Error};

const EXIT_FAILURE: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_ORACLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "bivnorm",
    version,
    about = "Cumulative bivariate standard normal distribution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Phi2(x, y; rho), or Phi2(x, x; rho) with --diagonal.
    Eval {
        /// Evaluate on the diagonal; takes `<x> <rho>`.
        #[arg(long)]
        diagonal: bool,
        /// `<x> <y> <rho>`, or `<x> <rho>` with --diagonal.
        #[arg(allow_negative_numbers = true, num_args = 2..=3, required = true)]
        values: Vec<f64>,
    },
    /// Profile the absolute error against the oracle and emit per-bucket CSV.
    Profile {
        #[arg(long, default_value_t = harness::DEFAULT_BUCKETS)]
        buckets: usize,
        #[arg(long, default_value_t = harness::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = harness::DEFAULT_SEED)]
        seed: u64,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// One million samples per bucket.
        #[arg(long, conflicts_with = "samples")]
        full_scale: bool,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value_t = RhoChoice::Corrected)]
        rho_formula: RhoChoice,
    },
    /// Run closed-form anchors and oracle cross-validation.
    Selftest,
    /// Print the oracle value as a double-double.
    Oracle {
        #[arg(allow_negative_numbers = true)]
        x: f64,
        #[arg(allow_negative_numbers = true)]
        y: f64,
        #[arg(allow_negative_numbers = true)]
        rho: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RhoChoice {
    /// rho = 2 Phi(r) - 1
    Corrected,
    /// rho = 2 Phi(r) - 0.5, draws above 1 are skipped
    Paper,
}

impl From<RhoChoice> for RhoFormula {
    fn from(c: RhoChoice) -> Self {
        match c {
            RhoChoice::Corrected => RhoFormula::Corrected,
            RhoChoice::Paper => RhoFormula::Paper,
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Domain(_) => EXIT_DOMAIN,
        Error::Accuracy { .. } | Error::Profile { .. } => EXIT_ORACLE,
        _ => EXIT_FAILURE,
    }
}

fn eval(diagonal: bool, values: &[f64]) -> Result<f64, Error> {
    match (diagonal, values) {
        (true, &[x, rho]) => phi2_on_diagonal(x, rho),
        (false, &[x, y, rho]) => phi2(x, y, rho),
        (true, _) => Err(Error::InvalidArgument("--diagonal takes <x> <rho>".into())),
        (false, _) => Err(Error::InvalidArgument("eval takes <x> <y> <rho>".into())),
    }
}

fn profile(cfg: &ProfileConfig, out: Option<PathBuf>) -> Result<(), Error> {
    let started = Instant::now();
    let stats = harness::run_profile(cfg)?;
    let elapsed = started.elapsed();

    let mut summary: Box<dyn Write> = match &out {
        Some(path) => {
            harness::write_profile_csv(&stats, path)?;
            Box::new(io::stdout())
        }
        None => {
            harness::write_profile_to(&stats, io::stdout().lock()).map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            })?;
            Box::new(io::stderr())
        }
    };

    let total = cfg.buckets * cfg.samples_per_bucket;
    let evaluated: usize = stats.iter().map(|s| s.evaluated).sum();
    let mut report = || -> io::Result<()> {
        if let Some(worst) = harness::global_max(&stats) {
            let p = worst.max_err_input;
            writeln!(
                summary,
                "max abs error {:.3e} in bucket {} (x_center {:.1}) at x={:.17e} y={:.17e} rho={:.17e}",
                worst.max_abs_err, worst.n, worst.x_center, p.x, p.y, p.rho
            )?;
        }
        let q99 = stats.iter().map(|s| s.q99_abs_err).fold(0.0, f64::max);
        writeln!(summary, "largest bucket 99% quantile {q99:.3e}")?;
        writeln!(
            summary,
            "{evaluated} of {total} draws evaluated in {:.1} s",
            elapsed.as_secs_f64()
        )?;
        if iteration_cap_hits() > 0 {
            writeln!(
                summary,
                "diagonal iteration cap hit {} times",
                iteration_cap_hits()
            )?;
        }
        if let Some(path) = &out {
            writeln!(summary, "wrote {}", path.display())?;
        }
        Ok(())
    };
    report().map_err(|source| Error::Io {
        path: "<summary>".into(),
        source,
    })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Eval { diagonal, values } => {
            let v = eval(diagonal, &values)?;
            println!("{v:.16e}");
        }
        Command::Profile {
            buckets,
            samples,
            seed,
            out,
            full_scale,
            threads,
            rho_formula,
        } => {
            let cfg = ProfileConfig {
                buckets,
                samples_per_bucket: if full_scale {
                    harness::FULL_SCALE_SAMPLES
                } else {
                    samples
                },
                seed,
                rho_formula: rho_formula.into(),
                threads,
                ..ProfileConfig::default()
            };
            profile(&cfg, out)?;
        }
        Command::Selftest => {
            let checks = harness::selftest();
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                println!("{tag}  {}  ({})", c.name, c.detail);
            }
            if !checks.iter().all(|c| c.passed) {
                return Ok(ExitCode::from(EXIT_FAILURE));
            }
        }
        Command::Oracle { x, y, rho } => {
            let v = oracle::oracle_value(x, y, rho)?;
            println!("hi = {:.16e}", v.hi);
            println!("lo = {:.16e}", v.lo);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
