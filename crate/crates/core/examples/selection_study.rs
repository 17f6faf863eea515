//! A small Monte-Carlo model-selection study.
//!
//! Run with `cargo run --release --example selection_study`. Set
//! `LTRC_WORKERS` to choose the number of threads; results do not change.

use ltrc::cli::workers_from_env;
use ltrc::simulation::{run_study_with_workers, Criterion, StudyConfig};

fn main() -> ltrc::Result<()> {
    let config = StudyConfig { n: 500, replications: 20, ..StudyConfig::default() };
    let out = run_study_with_workers(&config, workers_from_env()?)?;

    for (family, p) in &out.calibrated {
        println!("parent {family}: ({:.4}, {:.4})", p.p1, p.p2);
    }
    let names: Vec<String> = out.table.candidates.iter().map(|c| format!("{:>13}", c.to_string())).collect();
    println!("\n{:<13} {:<6} {}", "parent", "", names.join(""));
    for row in &out.table.rows {
        let freq: String = row.frequencies.iter().map(|f| format!("{f:>13.2}")).collect();
        println!("{:<13} {:<6} {freq}", row.parent.to_string(), row.criterion.label());
        if row.criterion == Criterion::Bic {
            let mean: String = row.mean_posterior.iter().flatten().map(|m| format!("{m:>13.3}")).collect();
            println!("{:<13} {:<6} {mean}", "", "P(BIC)");
        }
    }
    Ok(())
}
