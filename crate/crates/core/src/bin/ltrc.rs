use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ltrc::cli::config::{parse_families, parse_limit};
use ltrc::cli::{execute, workers_from_env, Command, Format, Overrides, RunConfig};
use ltrc::Family;

/// Severity models for left-truncated, right-censored losses.
#[derive(Parser)]
#[command(name = "ltrc", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fit every family to a loss file and report KS, AD, AIC, BIC, ICOMP.
    Fit {
        #[command(flatten)]
        common: Common,
        /// CSV with a `loss` column and an optional 0/1 `censored` column.
        #[arg(long)]
        data: Option<String>,
    },
    /// Emit (log theoretical, log empirical) quantile pairs for one family.
    Qq {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        data: Option<String>,
        #[arg(long)]
        family: Option<Family>,
    },
    /// Monte-Carlo model-selection study.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        levels: Levels,
        /// Data-generating families (comma separated).
        #[arg(long, value_parser = family_list)]
        parents: Option<FamilyList>,
        /// Observed sample size per replication.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        replications: Option<usize>,
        /// Also write replication 0 of each parent as sample_<parent>.csv.
        #[arg(long)]
        export_data: bool,
    },
    /// Percentile-match every family to F(d) = p_d and F(u) = p_u.
    Calibrate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        levels: Levels,
    },
}

#[derive(Clone)]
struct FamilyList(Vec<Family>);

fn family_list(s: &str) -> ltrc::Result<FamilyList> {
    parse_families(s).map(FamilyList)
}

#[derive(Args)]
struct Common {
    /// JSON or TOML config, or a report from an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Deductible.
    #[arg(long)]
    d: Option<f64>,
    /// Policy limit; `inf` for none.
    #[arg(long, value_parser = parse_limit)]
    u: Option<f64>,
    /// Families to fit (comma separated); candidates of a study.
    #[arg(long, value_parser = family_list)]
    families: Option<FamilyList>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Output formats (comma separated: csv, json).
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<Format>>,
}

#[derive(Args)]
struct Levels {
    #[arg(long)]
    p_d: Option<f64>,
    #[arg(long)]
    p_u: Option<f64>,
}

fn run(cli: Cli) -> ltrc::Result<()> {
    let mut o = Overrides::default();
    let (command, common) = match cli.command {
        Cmd::Fit { common, data } => {
            o.data = data;
            (Command::Fit, common)
        }
        Cmd::Qq { common, data, family } => {
            o.data = data;
            o.family = family;
            (Command::Qq, common)
        }
        Cmd::Simulate { common, levels, parents, n, replications, export_data } => {
            (o.p_d, o.p_u, o.parents, o.n, o.replications, o.export_data) =
                (levels.p_d, levels.p_u, parents.map(|l| l.0), n, replications, export_data);
            (Command::Simulate, common)
        }
        Cmd::Calibrate { common, levels } => {
            (o.p_d, o.p_u) = (levels.p_d, levels.p_u);
            (Command::Calibrate, common)
        }
    };
    (o.d, o.u, o.families, o.seed, o.formats) = (common.d, common.u, common.families.map(|l| l.0), common.seed, common.format);

    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply(o);
    let workers = if command == Command::Simulate { workers_from_env()? } else { 1 };
    for path in execute(command, &cfg, &common.out, workers)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ltrc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
