//! AIC, BIC and ICOMP with deltas, evidence grades and posterior weights.
//!
//! Run with `cargo run --release --example information_criteria`.

use ltrc::criteria::compare;
use ltrc::estimation::fit_mle;
use ltrc::simulation::sample_ltrc;
use ltrc::{Family, Params, Window};

fn main() -> ltrc::Result<()> {
    let window = Window::new(500.0, 10_000.0)?;
    let sample = sample_ltrc(Family::Weibull, Params::new(0.96, 5150.0), &window, 1000, 11)?;
    let fits = Family::ALL.iter().map(|&f| fit_mle(f, &sample, 5)).collect::<ltrc::Result<Vec<_>>>()?;

    println!(
        "{:<13} {:>10} {:>10} {:>10} {:>8} {:<12} {:>8}",
        "family", "AIC", "BIC", "ICOMP", "dBIC", "evidence", "P(BIC)"
    );
    for row in compare(&fits)? {
        let icomp = row.icomp.map_or("NA".to_string(), |v| format!("{v:.2}"));
        println!(
            "{:<13} {:>10.2} {:>10.2} {:>10} {:>8.2} {:<12} {:>8.4}",
            row.family.to_string(),
            row.aic,
            row.bic,
            icomp,
            row.delta_bic,
            row.evidence.label(),
            row.posterior_bic
        );
    }
    Ok(())
}
