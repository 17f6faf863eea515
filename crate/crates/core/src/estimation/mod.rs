//! Maximum-likelihood fitting of LTRC samples.
//!
//! The search runs Nelder–Mead on unconstrained coordinates (log of every
//! positive parameter; the Lognormal `mu` is left as is) from several
//! starting points, and reports the observed information as the negative
//! Hessian of the log-likelihood in natural coordinates.

pub mod hessian;
pub mod simplex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calibration::percentile_match;
use crate::error::{Error, Result};
use crate::families::{Family, LtrcSample, Params};

pub use hessian::Matrix2;

/// Fewest uncensored observations `fit_mle` accepts.
pub const MIN_UNCENSORED: usize = 3;

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    /// Total starts: one from percentile matching, the rest perturbed.
    pub restarts: usize,
    pub simplex: simplex::Settings,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { restarts: 5, simplex: simplex::Settings::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub family: Family,
    pub params_hat: Params,
    pub loglik_max: f64,
    pub observed_info: Matrix2,
    /// `None` when the information matrix is not safely positive-definite.
    pub covariance: Option<Matrix2>,
    pub converged: bool,
    pub n_restarts_used: usize,
    /// Sample size including censored observations.
    pub n_obs: usize,
}

pub fn to_coords(family: Family, p: &Params) -> [f64; 2] {
    match family {
        Family::Lognormal => [p.p1, p.p2.ln()],
        _ => [p.p1.ln(), p.p2.ln()],
    }
}

pub fn from_coords(family: Family, v: [f64; 2]) -> Params {
    match family {
        Family::Lognormal => Params::new(v[0], v[1].exp()),
        _ => Params::new(v[0].exp(), v[1].exp()),
    }
}

pub fn fit_mle(family: Family, sample: &LtrcSample, seed: u64) -> Result<FitResult> {
    fit_mle_with(family, sample, seed, &FitOptions::default())
}

pub fn fit_mle_with(family: Family, sample: &LtrcSample, seed: u64, opts: &FitOptions) -> Result<FitResult> {
    if sample.n_uncensored() < MIN_UNCENSORED {
        return Err(Error::InsufficientData { found: sample.n_uncensored(), needed: MIN_UNCENSORED });
    }
    let objective = |v: [f64; 2]| -family.loglik(&from_coords(family, v), sample);
    let base = to_coords(family, &initial_params(family, sample));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut best: Option<simplex::Outcome> = None;
    let mut converged = false;
    let mut used = 0;
    for r in 0..opts.restarts.max(1) {
        let start = if r == 0 {
            base
        } else {
            [base[0] + rng.gen_range(-1.0..1.0), base[1] + rng.gen_range(-1.0..1.0)]
        };
        let out = simplex::minimize(objective, start, &opts.simplex);
        if !out.fx.is_finite() {
            continue;
        }
        used += 1;
        converged |= out.converged;
        if best.map_or(true, |b| out.fx < b.fx) {
            best = Some(out);
        }
    }
    let best = best.ok_or_else(|| {
        Error::Numerical(format!("{family}: log-likelihood is not finite at any start"))
    })?;
    let params_hat = from_coords(family, best.x);
    let loglik_max = family.loglik(&params_hat, sample);
    let observed_info = observed_info(family, &params_hat, sample);
    Ok(FitResult {
        family,
        params_hat,
        loglik_max,
        observed_info,
        covariance: covariance_of(&observed_info),
        converged,
        n_restarts_used: used,
        n_obs: sample.len(),
    })
}

/// Starting values from matching two empirical quantiles of the uncensored
/// part, or a unit-shape guess at the sample median if that has no solution.
pub fn initial_params(family: Family, sample: &LtrcSample) -> Params {
    let xs = sample.uncensored();
    let k = xs.len();
    let n = sample.len() as f64;
    let pick = |level: f64| {
        let pos = (level * (k - 1) as f64).round() as usize;
        xs[pos.min(k - 1)]
    };
    let (x1, x2) = (pick(0.25), pick(0.75));
    let (q1, q2) = (0.25 * k as f64 / n, 0.75 * k as f64 / n);
    if x1 < x2 {
        if let Ok(p) = percentile_match(family, x1, q1, x2, q2) {
            return p;
        }
    }
    let median = pick(0.5);
    match family {
        Family::Lognormal => Params::new(median.ln(), 1.0),
        _ => Params::new(1.0, median),
    }
}

/// Negative Hessian of the log-likelihood in natural coordinates.
pub fn observed_info(family: Family, params: &Params, sample: &LtrcSample) -> Matrix2 {
    let x = [params.p1, params.p2];
    let f = |p: [f64; 2]| family.loglik(&Params::new(p[0], p[1]), sample);
    hessian::neg_hessian(f, x, hessian::default_steps(x))
}

/// Inverse information, or `None` unless both eigenvalues exceed
/// `1e-10 * trace`.
pub fn covariance_of(info: &Matrix2) -> Option<Matrix2> {
    if !info.is_finite() || !info.is_symmetric() {
        return None;
    }
    let tr = info.trace();
    let [lo, _] = info.eigenvalues();
    if !(tr > 0.0 && lo > 1e-10 * tr) {
        return None;
    }
    info.inverse()
}
