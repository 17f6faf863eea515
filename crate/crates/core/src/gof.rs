//! Goodness-of-fit diagnostics for LTRC samples: Kolmogorov–Smirnov,
//! Anderson–Darling and QQ-plot coordinates.
//!
//! `F_n` is the empirical cdf of the whole sample, censored points
//! included in `n`, so it tops out at `k / n` just below `u`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{LtrcSample, Model};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofStats {
    pub ks: f64,
    pub ad: f64,
}

pub fn gof_stats(model: &Model, sample: &LtrcSample) -> Result<GofStats> {
    Ok(GofStats { ks: ks_stat(model, sample)?, ad: ad_stat(model, sample)? })
}

/// Unique uncensored values with the empirical cdf just after each.
fn unique_steps(sorted: &[f64], n: usize) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
    for (i, &x) in sorted.iter().enumerate() {
        let level = (i + 1) as f64 / n as f64;
        match out.last_mut() {
            Some(last) if last.0 == x => last.1 = level,
            _ => out.push((x, level)),
        }
    }
    out
}

/// `sup |F_n - F*|` over `[d, u)`.
pub fn ks_stat(model: &Model, sample: &LtrcSample) -> Result<f64> {
    let law = model.truncated(sample.window())?;
    let steps = unique_steps(sample.uncensored(), sample.len());
    let fstar: Vec<f64> = steps.iter().map(|&(x, _)| law.cdf_continuous(x)).collect();
    let levels: Vec<f64> = steps.iter().map(|s| s.1).collect();
    let top = sample.n_uncensored() as f64 / sample.len() as f64;
    Ok(ks_from_values(&levels, &fstar, top, law.p_u()))
}

/// KS from the step heights `levels[i] = F_n(x_i)` at the unique jump points,
/// the model values `fstar[i]` there, and the pair `(F_n(u-), F*(u-))`.
pub fn ks_from_values(levels: &[f64], fstar: &[f64], fn_top: f64, fstar_top: f64) -> f64 {
    let mut ks = (fn_top - fstar_top).abs();
    let mut before = 0.0;
    for (&level, &f) in levels.iter().zip(fstar) {
        ks = ks.max((before - f).abs()).max((level - f).abs());
        before = level;
    }
    ks
}

/// LTRC Anderson–Darling statistic by the four-term computational formula.
///
/// Returns `+inf` when a logarithm's argument is not positive.
pub fn ad_stat(model: &Model, sample: &LtrcSample) -> Result<f64> {
    let law = model.truncated(sample.window())?;
    let steps = unique_steps(sample.uncensored(), sample.len());
    let levels: Vec<f64> = steps.iter().map(|s| s.1).collect();
    let fstar: Vec<f64> = steps.iter().map(|&(x, _)| law.cdf_continuous(x)).collect();
    Ok(ad_from_values(&levels, &fstar, law.p_u(), sample.len()))
}

/// AD from step heights and model values at the unique uncensored points.
/// `p_top` is `F*(u-)`, which also stands in for `F*(X_(k+1))`.
pub fn ad_from_values(levels: &[f64], fstar: &[f64], p_top: f64, n: usize) -> f64 {
    let n = n as f64;
    let k = levels.len();
    // t_0 = F*(d) = 0, t_1..t_k at the points, t_{k+1} = F*(u-).
    let t = |i: usize| -> f64 {
        if i == 0 {
            0.0
        } else if i <= k {
            fstar[i - 1]
        } else {
            p_top
        }
    };
    let e = |i: usize| -> f64 {
        if i == 0 {
            0.0
        } else {
            levels[i - 1]
        }
    };
    let mut total = -n * p_top;
    for i in 0..=k {
        let (a, b) = (t(i), t(i + 1));
        let w_lo = e(i) * e(i);
        if w_lo > 0.0 {
            let r = b / a;
            if !(r > 0.0) || !r.is_finite() {
                return f64::INFINITY;
            }
            total += n * w_lo * r.ln();
        }
        let w_hi = (1.0 - e(i)) * (1.0 - e(i));
        if w_hi > 0.0 {
            let r = (1.0 - b) / (1.0 - a);
            if !(r > 0.0) || !r.is_finite() {
                return f64::INFINITY;
            }
            total -= n * w_hi * r.ln();
        }
    }
    total
}

/// `(ln F^-1(u_i + F(d)(1 - u_i)), ln x_(i))` with `u_i = (i - 0.5) / n`.
///
/// Only uncensored points are plotted, but `n` counts the whole sample so
/// the levels stay aligned with `F_n` when there is a censoring atom.
pub fn qq_points(model: &Model, sample: &LtrcSample) -> Result<Vec<(f64, f64)>> {
    let xs = sample.uncensored();
    if xs.is_empty() {
        return Err(Error::Empty("no plottable points: every observation is censored".into()));
    }
    let law = model.truncated(sample.window())?;
    let n = sample.len() as f64;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let ui = (i as f64 + 0.5) / n;
            (law.qf_above_d(ui).ln(), x.ln())
        })
        .collect())
}

#[cfg(test)]
#[path = "../tests/common/quadrature.rs"]
mod quadrature;
