//! `derivring`: seeded verification campaigns from the command line.
//!
//! ```text
//! derivring verify theorem1 --n 3 --ring zmod:5 --noise central --trials 200 --seed 42
//! derivring verify jordan-theorem --n 3 --ring zmod:9 --format text
//! derivring extend --n 4 --ring poly:zmod:5 --delta d/dt --trials 1000
//! ```
//!
//! Exit status: 0 when every checked identity held, 1 when the report lists
//! a violation, 2 for configuration errors.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use derivring::campaign::{run_campaign, CampaignConfig, DeltaSpec, Noise, Report, Suite};
use derivring::sample::DEFAULT_MAX_DEGREE;
use derivring::Ring;

#[derive(Parser)]
#[command(name = "derivring", version, about = "Exact verification campaigns for derivations on matrix rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite.
    Verify {
        /// theorem1, lemma-cross, lemma-offdiag, lemma-diagdiff, extend,
        /// two-generator, jordan-diag or jordan-theorem
        suite: String,
        #[command(flatten)]
        common: Common,
        /// none, central, x0-commutant or probe-commutant (2-local suites); none, reexpress
        /// or probe-commutant (jordan-theorem)
        #[arg(long)]
        noise: Option<String>,
        /// Random samples per instance
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Longest word for two-generator
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Base derivation for the extend suite: zero, d/dt or t*d/dt
        #[arg(long, default_value = "zero")]
        delta: String,
    },
    /// Extend a derivation of R to M_n(R) and check it on random pairs.
    Extend {
        #[command(flatten)]
        common: Common,
        /// zero, d/dt or t*d/dt
        #[arg(long, default_value = "d/dt")]
        delta: String,
    },
}

#[derive(Args)]
struct Common {
    /// zmod:M or poly:zmod:M with M odd
    #[arg(long, default_value = "zmod:5")]
    ring: String,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, env = "DERIVRING_SEED", default_value_t = 0)]
    seed: u64,
    /// Degree cap for random polynomial entries
    #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
    max_degree: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn config(common: &Common, suite: Suite) -> derivring::Result<CampaignConfig> {
    let ring: Ring = common.ring.parse()?;
    Ok(CampaignConfig::new(suite, ring, common.n)
        .trials(common.trials)
        .seed(common.seed)
        .max_degree(common.max_degree))
}

fn text_report(report: &Report) -> String {
    let c = &report.config;
    let mut out = String::new();
    let noise = c.noise.map(|n| n.to_string()).unwrap_or_default();
    writeln!(
        out,
        "{} over {} n={} noise={} seed={}: {} instances, {} failures",
        c.suite,
        c.ring,
        c.n,
        noise,
        c.seed,
        report.instances,
        report.failures.len()
    )
    .unwrap();
    for f in &report.failures {
        writeln!(out, "\ninstance {} (seed {}): {}", f.instance, f.seed, f.probe).unwrap();
        writeln!(out, "lhs:\n{}", f.lhs).unwrap();
        writeln!(out, "rhs:\n{}", f.rhs).unwrap();
    }
    out
}

fn extend_json(report: &Report) -> String {
    let value = serde_json::json!({
        "checked": report.instances,
        "violations": report.failures,
    });
    serde_json::to_string(&value).expect("report serialization is infallible")
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    let started = Instant::now();
    let (config, common, extend_verb) = match &cli.command {
        Command::Verify {
            suite,
            common,
            noise,
            samples,
            max_len,
            delta,
        } => {
            let suite: Suite = suite.parse().map_err(|e| format!("{e}"))?;
            let mut config = config(common, suite).map_err(|e| e.to_string())?;
            if let Some(noise) = noise {
                config = config.noise(noise.parse::<Noise>().map_err(|e| e.to_string())?);
            }
            config = config
                .samples(*samples)
                .max_len(*max_len)
                .delta(delta.parse::<DeltaSpec>().map_err(|e| e.to_string())?);
            (config, common, false)
        }
        Command::Extend { common, delta } => {
            // one random pair and one restriction probe per trial
            let config = config(common, Suite::Extend)
                .map_err(|e| e.to_string())?
                .samples(1)
                .delta(delta.parse::<DeltaSpec>().map_err(|e| e.to_string())?);
            (config, common, true)
        }
    };
    let report = run_campaign(&config).map_err(|e| e.to_string())?;
    let text = match (common.format, extend_verb) {
        (Format::Text, _) => text_report(&report),
        (Format::Json, true) => extend_json(&report),
        (Format::Json, false) => report.to_json(),
    };
    emit(&text, common.out.as_ref())?;
    eprintln!("{} instances in {:.2?}", report.instances, started.elapsed());
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
