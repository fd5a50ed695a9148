use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kinlim_core::moment_algebra::rat;
use kinlim_core::Rational;

use kinlim_harness::config::{ConfigOverrides, ExperimentConfig};
use kinlim_harness::{relax, report, sweep, verify};

/// Verification toolkit for stationary fluid limits of a scaled BGK
/// kinetic model.
#[derive(Parser)]
#[command(name = "kinlim", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the exact rational-arithmetic identity suite.
    VerifyAlgebra {
        /// Seed for the random polynomial generator.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Number of random polynomial pairs per randomized identity.
        #[arg(long, default_value_t = 120)]
        pairs: usize,
    },
    /// Print the exact transport coefficients for a collision frequency.
    Coefficients {
        /// Collision frequency as `p/q` or a decimal.
        #[arg(long, default_value = "1")]
        nu0: String,
    },
    /// Check the homogeneous relaxation against the closed-form decay.
    RelaxTest,
    /// Run an epsilon sweep and write report.csv / report.json.
    Sweep {
        /// TOML configuration file; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: ConfigOverrides,
    },
    /// Merge sweep JSON reports (files or directories).
    Report {
        /// Output path for the merged JSON.
        #[arg(long, default_value = "merged.json")]
        out: PathBuf,
        /// Sweep report files or directories containing them.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

fn parse_rational(text: &str) -> anyhow::Result<Rational> {
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse()?;
        let den: i64 = den.trim().parse()?;
        anyhow::ensure!(den != 0, "zero denominator");
        return Ok(rat(num, den));
    }
    if let Ok(int) = text.trim().parse::<i64>() {
        return Ok(rat(int, 1));
    }
    let float: f64 = text.trim().parse()?;
    Rational::from_float(float).ok_or_else(|| anyhow::anyhow!("{text} is not a finite number"))
}

fn run() -> anyhow::Result<ExitCode> {
    match Cli::parse().cmd {
        Cmd::VerifyAlgebra { seed, pairs } => {
            let report = verify::run_verify_algebra(seed, pairs.max(100));
            print!("{}", report.render());
            let failures = report.failures();
            if failures > 0 {
                eprintln!("{failures} identities FAILED");
                return Ok(ExitCode::FAILURE);
            }
            println!("all identities hold exactly");
        }
        Cmd::Coefficients { nu0 } => {
            let nu0 = parse_rational(&nu0)?;
            print!("{}", verify::render_coefficients(&nu0)?);
        }
        Cmd::RelaxTest => {
            let cases = relax::run_relax_test()?;
            print!("{}", relax::render(&cases));
            let worst = cases
                .iter()
                .map(|c| c.max_abs_dev)
                .fold(0.0f64, f64::max);
            if worst >= 1e-10 {
                eprintln!("relaxation deviates from the closed form: {worst:.3e}");
                return Ok(ExitCode::FAILURE);
            }
            println!("all cases within 1e-10");
        }
        Cmd::Sweep { config, overrides } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::from_file(&path)?,
                None => ExperimentConfig::default(),
            };
            overrides.apply(&mut cfg);
            cfg.validate(true)?;
            let report = sweep::run_sweep(&cfg)?;
            print!("{}", sweep::render_summary(&report));
            let (csv, json) = sweep::write_reports(&report, &cfg.output_dir)?;
            println!("wrote {} and {}", csv.display(), json.display());
        }
        Cmd::Report { out, inputs } => {
            let merged = report::merge_reports(&inputs)?;
            report::write_merged(&merged, &out)?;
            println!("merged {} sweep(s) into {}", merged.sweeps.len(), out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
