//! Maximum likelihood on a left-truncated, right-censored sample.
//!
//! Run with `cargo run --release --example fit_truncated_censored`.

use ltrc::estimation::{fit_mle, fit_mle_with, FitOptions};
use ltrc::simulation::sample_ltrc;
use ltrc::{Family, Params, Window};

fn main() -> ltrc::Result<()> {
    let window = Window::new(500.0, 10_000.0)?;
    let truth = Params::new(1.31, 2667.0);
    let sample = sample_ltrc(Family::Fisk, truth, &window, 2000, 42)?;
    println!(
        "{} observations above d = {}, {} censored at u = {}",
        sample.len(),
        window.d,
        sample.n_censored(),
        window.u
    );

    for family in Family::ALL {
        match fit_mle(family, &sample, 1) {
            Ok(fit) => {
                let (n1, n2) = family.param_names();
                let se = fit
                    .covariance
                    .map(|c| format!("se = ({:.3}, {:.3})", c.get(0, 0).sqrt(), c.get(1, 1).sqrt()))
                    .unwrap_or_else(|| "covariance NA".into());
                println!(
                    "{:<13} {n1} = {:<10.4} {n2} = {:<10.4} loglik = {:<11.3} {se}",
                    family.to_string(),
                    fit.params_hat.p1,
                    fit.params_hat.p2,
                    fit.loglik_max
                );
            }
            Err(e) => println!("{family}: {e}"),
        }
    }

    // A single start is usually enough on well-behaved data.
    let one = fit_mle_with(Family::Fisk, &sample, 1, &FitOptions { restarts: 1, ..FitOptions::default() })?;
    println!("\nFisk with one start: loglik = {:.6}, converged = {}", one.loglik_max, one.converged);
    println!("generating parameters: alpha = {}, theta = {}", truth.p1, truth.p2);
    Ok(())
}
