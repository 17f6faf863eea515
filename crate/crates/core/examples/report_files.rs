//! Write fit and calibration reports the way the `ltrc` binary does.
//!
//! Run with `cargo run --release --example report_files`.

use ltrc::cli::ingest::write_losses;
use ltrc::cli::{execute, Command, RunConfig};
use ltrc::simulation::sample_ltrc;
use ltrc::{Family, Params};

fn main() -> ltrc::Result<()> {
    let dir = std::env::temp_dir().join("ltrc-report-example");
    std::fs::create_dir_all(&dir)?;

    let cfg = RunConfig::default();
    let sample = sample_ltrc(Family::Paralogistic, Params::new(1.24, 3533.0), &cfg.window()?, 800, 5)?;
    let data = dir.join("losses.csv");
    write_losses(std::fs::File::create(&data)?, &sample)?;

    let fit_cfg = RunConfig { data: Some(data.to_string_lossy().into_owned()), ..cfg.clone() };
    for path in execute(Command::Fit, &fit_cfg, &dir, 1)?.into_iter().chain(execute(Command::Calibrate, &cfg, &dir, 1)?) {
        println!("wrote {}", path.display());
    }
    print!("{}", std::fs::read_to_string(dir.join("fit.csv"))?);

    // Any report can seed a rerun with identical output.
    let again = RunConfig::load(&dir.join("fit.csv"))?;
    assert_eq!(again, fit_cfg.resolved(false));
    Ok(())
}
