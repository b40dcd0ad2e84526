use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use crystal_si_cli::{
    catalog_from_env, cmd_catalog, cmd_domain, cmd_negative_control, cmd_pg_example, cmd_verify, emit, lookup_group,
    CampaignConfig, Suite, Timings, VerificationReport,
};

/// Verification campaigns for crystal-group shift-invariant subspaces.
#[derive(Parser)]
#[command(name = "crystal-si", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the groups in the catalog.
    Catalog,
    /// Write the Dirichlet domain as domain.svg and vertices.csv.
    Domain {
        #[arg(long, default_value = "pg")]
        group: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run verification suites and write report.json.
    Verify(Campaign),
    /// The pg worked example: conditions (a)(b)(c) and invariance.
    PgExample(Campaign),
    /// Check that a non-invariant range function on pg fails invariance.
    NegativeControl(Campaign),
}

#[derive(Args)]
struct Campaign {
    #[arg(long, default_value = "pg")]
    group: String,
    /// Repeatable.
    #[arg(long, value_enum, default_value = "all")]
    suite: Vec<Suite>,
    /// Grid nodes along the shorter side of the domain's bounding box.
    #[arg(long, default_value_t = 8)]
    nodes: usize,
    /// Radius of the dual-lattice window.
    #[arg(long, default_value_t = 2)]
    rnu: i64,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Directory for report.json and timings.json; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl From<Campaign> for CampaignConfig {
    fn from(c: Campaign) -> Self {
        CampaignConfig {
            group: c.group,
            nodes_per_axis: c.nodes,
            r_nu: c.rnu,
            trials: c.trials,
            seed: c.seed,
            out: c.out,
            suites: c.suite,
        }
    }
}

fn finish(report: &VerificationReport, timings: Option<&Timings>, config: &CampaignConfig) -> Result<ExitCode> {
    emit(config.out.as_deref(), "report.json", &report.to_json())?;
    if let (Some(t), Some(_)) = (timings, &config.out) {
        emit(config.out.as_deref(), "timings.json", &serde_json::to_string_pretty(t)?)?;
    }
    eprint!("{}", report.summary());
    if let Some(t) = timings {
        for s in &t.suites {
            eprintln!("{:<11} {:.3} s", s.suite, s.seconds);
        }
    }
    if report.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verification failed: {}", report.failed_checks().join(", "));
        Ok(ExitCode::FAILURE)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let catalog = catalog_from_env()?;
    match cli.command {
        Command::Catalog => {
            print!("{}", cmd_catalog(&catalog));
            Ok(ExitCode::SUCCESS)
        }
        Command::Domain { group, out } => {
            let group = lookup_group(&catalog, &group)?;
            let (svg, csv) = cmd_domain(&group, &out)?;
            eprintln!("wrote {} and {}", svg.display(), csv.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(c) => {
            let config = CampaignConfig::from(c);
            let (report, timings) = cmd_verify(&catalog, &config)?;
            finish(&report, Some(&timings), &config)
        }
        Command::PgExample(c) => {
            let config = CampaignConfig::from(c);
            let (report, timings) = cmd_pg_example(&catalog, &config)?;
            finish(&report, Some(&timings), &config)
        }
        Command::NegativeControl(c) => {
            let config = CampaignConfig::from(c);
            let report = cmd_negative_control(&catalog, &config)?;
            finish(&report, None, &config)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
