//! Parameters that place F(d) and F(u) at chosen probabilities.
//!
//! Run with `cargo run --example percentile_matching`.

use ltrc::calibration::percentile_match;
use ltrc::Family;

fn main() {
    let (d, u) = (500.0, 10_000.0);
    for (p_d, p_u) in [(0.10, 0.85), (0.50, 0.80), (0.02, 0.25)] {
        println!("F({d}) = {p_d}, F({u}) = {p_u}");
        for family in Family::ALL {
            match percentile_match(family, d, p_d, u, p_u) {
                Ok(p) => {
                    let (n1, n2) = family.param_names();
                    let check = family.cdf(&p, d).unwrap() - p_d;
                    println!("  {:<13} {n1} = {:<12.6} {n2} = {:<12.4} residual {check:.1e}", family.to_string(), p.p1, p.p2);
                }
                Err(e) => println!("  {:<13} {e}", family.to_string()),
            }
        }
    }
    // Lomax cannot fit every pair of levels.
    if let Err(e) = percentile_match(Family::Lomax, 500.0, 0.01, 1000.0, 0.99) {
        println!("\n{e}");
    }
}
