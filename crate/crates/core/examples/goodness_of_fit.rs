//! KS and AD statistics for truncated-and-censored data, plus QQ points.
//!
//! Run with `cargo run --release --example goodness_of_fit`.

use ltrc::estimation::fit_mle;
use ltrc::gof::{gof_stats, qq_points};
use ltrc::simulation::sample_ltrc;
use ltrc::{Family, Model, Params, Window};

fn main() -> ltrc::Result<()> {
    let window = Window::new(500.0, 10_000.0)?;
    let sample = sample_ltrc(Family::Lognormal, Params::new(7.87, 1.29), &window, 1500, 7)?;

    println!("{:<13} {:>9} {:>9}", "family", "KS", "AD");
    for family in Family::ALL {
        let fit = fit_mle(family, &sample, 3)?;
        let model = Model::new(family, fit.params_hat)?;
        let g = gof_stats(&model, &sample)?;
        println!("{:<13} {:>9.4} {:>9.4}", family.to_string(), g.ks, g.ad);
    }

    let fit = fit_mle(Family::Lognormal, &sample, 3)?;
    let pts = qq_points(&Model::new(Family::Lognormal, fit.params_hat)?, &sample)?;
    println!("\nlog-scale QQ points for the lognormal fit (every 200th):");
    for (t, e) in pts.iter().step_by(200) {
        println!("  {t:>8.4} {e:>8.4}");
    }
    Ok(())
}
