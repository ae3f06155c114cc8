use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gem_entropy::analysis::OutlierRule;
use gem_entropy::cli::{self, Outcome, OutputFormat, RunConfig};
use gem_entropy::{Denominator, Measure, Result};

#[derive(Parser)]
#[command(name = "gem-entropy", version, about = "Entropic complexity measures for medical code crosswalks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-map H(A), H(B), UR and their z-scores; no-match maps listed separately
    Score(Common),
    /// Count, mean, std and quartiles of H(A), H(B) and UR
    Stats(Common),
    /// Rank clinical classes by summed z-scores
    Rank(Common),
    /// Kendall tau-b between class rankings
    Corr {
        #[command(flatten)]
        common: Common,
        /// Rank files written by `rank`; without them, rankings are computed from --gems/--classes
        rankings: Vec<PathBuf>,
    },
    /// Maps scoring above a threshold
    Outliers(Common),
    /// Word network, frequencies and centrality of outlier descriptions
    Textnet(Common),
    /// Check the built-in map 0052 example
    VerifyExample {
        /// Verify this single-map crosswalk instead of the built-in one
        #[arg(long, hide = true)]
        fixture: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_name = "PATH")]
    gems: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    classes: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    descriptions: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    frequencies: Option<PathBuf>,
    /// Position weights for the weighted H(A), e.g. 7,6,5,4,3,2,1
    #[arg(long, value_name = "W1,W2,...")]
    weights: Option<String>,
    #[arg(long, default_value = "std", value_parser = ["std", "variance"])]
    denominator: String,
    #[arg(long, conflicts_with = "top_fraction", allow_negative_numbers = true)]
    threshold: Option<f64>,
    #[arg(long)]
    top_fraction: Option<f64>,
    #[arg(long, value_parser = ["z_alpha", "z_beta", "z_ur", "total"])]
    measure: Option<String>,
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    #[arg(long, default_value = ".", value_name = "DIR")]
    out: PathBuf,
    /// Stopword list replacing the built-in one (one word per line)
    #[arg(long, value_name = "PATH")]
    stopwords: Option<PathBuf>,
    /// Extra residual words to drop (one word per line)
    #[arg(long, value_name = "PATH")]
    residuals: Option<PathBuf>,
}

impl Common {
    fn into_config(self) -> Result<RunConfig> {
        let outlier = match (self.threshold, self.top_fraction) {
            (Some(t), _) => Some(OutlierRule::Threshold(t)),
            (None, Some(f)) => Some(OutlierRule::TopFraction(f)),
            (None, None) => None,
        };
        Ok(RunConfig {
            gems: self.gems,
            classes: self.classes,
            descriptions: self.descriptions,
            frequencies: self.frequencies,
            weights: self.weights.as_deref().map(cli::parse_weights).transpose()?,
            denominator: self.denominator.parse::<Denominator>()?,
            outlier,
            measure: self.measure.as_deref().map(str::parse::<Measure>).transpose()?,
            format: self.format.parse::<OutputFormat>()?,
            out: self.out,
            stopwords: self.stopwords,
            residuals: self.residuals,
        })
    }
}

fn report(outcome: Outcome) {
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    for line in &outcome.summary {
        println!("{line}");
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
}

fn run(cli: Cli) -> Result<bool> {
    let outcome = match cli.command {
        Command::Score(c) => cli::cmd_score(&c.into_config()?)?,
        Command::Stats(c) => cli::cmd_stats(&c.into_config()?)?,
        Command::Rank(c) => cli::cmd_rank(&c.into_config()?)?,
        Command::Corr { common, rankings } => cli::cmd_corr(&common.into_config()?, &rankings)?,
        Command::Outliers(c) => cli::cmd_outliers(&c.into_config()?)?,
        Command::Textnet(c) => cli::cmd_textnet(&c.into_config()?)?,
        Command::VerifyExample { fixture } => {
            let report = match fixture {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| gem_entropy::Error::Config(format!("{}: {e}", path.display())))?;
                    cli::verify_fixture(&text)?
                }
                None => cli::verify_example()?,
            };
            for check in &report.checks {
                println!("{check}");
            }
            let passed = report.passed();
            println!("{}", if passed { "verify-example: PASS" } else { "verify-example: FAIL" });
            return Ok(passed);
        }
    };
    report(outcome);
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
