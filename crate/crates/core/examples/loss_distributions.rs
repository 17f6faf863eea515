//! The six severity families and their truncated-and-censored laws.
//!
//! Run with `cargo run --example loss_distributions`.

use ltrc::{Family, Params, Window};

fn main() -> ltrc::Result<()> {
    let window = Window::new(500.0, 10_000.0)?;
    let examples = [
        (Family::Fisk, Params::new(1.31, 2667.0)),
        (Family::Frechet, Params::new(0.88, 1283.0)),
        (Family::Lognormal, Params::new(7.87, 1.29)),
        (Family::Lomax, Params::new(8.69, 41007.0)),
        (Family::Paralogistic, Params::new(1.24, 3533.0)),
        (Family::Weibull, Params::new(0.96, 5150.0)),
    ];

    println!("{:<13} {:>8} {:>8} {:>10} {:>10} {:>12}", "family", "F(d)", "F(u)", "p_u", "median*", "F*(2000)");
    for (family, params) in examples {
        let f_d = family.cdf(&params, window.d)?;
        let f_u = family.cdf(&params, window.u)?;
        let p_u = family.censor_prob(&params, &window)?;
        // Median of the loss given it exceeds the deductible.
        let median = family.ltrc_qf(&params, &window, 0.5)?;
        let at_2000 = family.ltrc_cdf(&params, &window, 2000.0)?;
        println!("{:<13} {f_d:>8.4} {f_u:>8.4} {p_u:>10.4} {median:>10.1} {at_2000:>12.4}", family.to_string());
    }

    let (a, t) = Family::Weibull.param_names();
    println!("\nparameters are ({a}, {t}); Lognormal uses {:?}", Family::Lognormal.param_names());
    println!("p_u is the share of observed losses below the limit; 1 - p_u is recorded at u");
    Ok(())
}
