//! The six candidate severity families and their ground-up and
//! left-truncated/right-censored probability functions.
//!
//! Every family is a scale family: Fisk, Frechet, Lomax, Paralogistic and
//! Weibull carry a shape `alpha` and scale `theta`; Lognormal carries the
//! log-location `mu` and log-scale `sigma`. All evaluation goes through the
//! log-survival function, which keeps the tails accurate and lets the
//! truncated quantities be formed as differences of logs.

pub mod normal;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this survival at the deductible the truncated law is treated as empty.
pub const DEGENERATE_SURVIVAL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", try_from = "String")]
pub enum Family {
    Fisk,
    Frechet,
    Lognormal,
    Lomax,
    Paralogistic,
    Weibull,
}

impl Family {
    /// All six families in canonical order.
    pub const ALL: [Family; 6] = [
        Family::Fisk,
        Family::Frechet,
        Family::Lognormal,
        Family::Lomax,
        Family::Paralogistic,
        Family::Weibull,
    ];

    /// The five families used by the selection study by default.
    pub const STUDY_DEFAULT: [Family; 5] = [
        Family::Fisk,
        Family::Lognormal,
        Family::Lomax,
        Family::Paralogistic,
        Family::Weibull,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Fisk => "fisk",
            Family::Frechet => "frechet",
            Family::Lognormal => "lognormal",
            Family::Lomax => "lomax",
            Family::Paralogistic => "paralogistic",
            Family::Weibull => "weibull",
        }
    }

    /// Names of the two parameters, in `(p1, p2)` order.
    pub fn param_names(self) -> (&'static str, &'static str) {
        match self {
            Family::Lognormal => ("mu", "sigma"),
            _ => ("alpha", "theta"),
        }
    }

    /// Number of free parameters. Two for every family here.
    pub fn n_params(self) -> usize {
        2
    }

    /// Position in the canonical order, used for deterministic tie-breaking.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn validate(self, params: &Params) -> Result<()> {
        let ok_scale = params.p2.is_finite() && params.p2 > 0.0;
        let ok_first = match self {
            Family::Lognormal => params.p1.is_finite(),
            _ => params.p1.is_finite() && params.p1 > 0.0,
        };
        if ok_scale && ok_first {
            Ok(())
        } else {
            let (a, b) = self.param_names();
            Err(Error::InvalidParams {
                family: self,
                detail: format!("{a}={}, {b}={}", params.p1, params.p2),
            })
        }
    }

    fn kernel(self, params: &Params) -> Result<Kernel> {
        self.validate(params)?;
        Ok(Kernel::new(self, params))
    }

    /// Ground-up density.
    pub fn pdf(self, params: &Params, x: f64) -> Result<f64> {
        positive(x)?;
        Ok(self.kernel(params)?.ln_pdf(x, x.ln()).exp())
    }

    /// Ground-up distribution function.
    pub fn cdf(self, params: &Params, x: f64) -> Result<f64> {
        positive(x)?;
        Ok(self.kernel(params)?.cdf(x.ln()))
    }

    /// Ground-up survival function `1 - F(x)`, accurate in the upper tail.
    pub fn sf(self, params: &Params, x: f64) -> Result<f64> {
        positive(x)?;
        Ok(self.kernel(params)?.ln_sf(x, x.ln()).exp())
    }

    /// Ground-up quantile function.
    pub fn qf(self, params: &Params, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!("probability {p} outside (0, 1)")));
        }
        Ok(self.kernel(params)?.isf_ln((-p).ln_1p()))
    }

    /// Truncated-and-censored distribution function on the window.
    ///
    /// Zero at or below `d`, one at or above `u` (the censoring atom is
    /// included at `u`), and `(F(x) - F(d)) / (1 - F(d))` in between.
    pub fn ltrc_cdf(self, params: &Params, window: &Window, x: f64) -> Result<f64> {
        let k = self.kernel(params)?;
        let ln_sd = k.checked_ln_sf_at(window.d)?;
        if x <= window.d {
            return Ok(0.0);
        }
        if x >= window.u {
            return Ok(1.0);
        }
        Ok(-(k.ln_sf(x, x.ln()) - ln_sd).exp_m1())
    }

    /// `p_u`: conditional probability that a loss above `d` falls below `u`.
    pub fn censor_prob(self, params: &Params, window: &Window) -> Result<f64> {
        let k = self.kernel(params)?;
        let ln_sd = k.checked_ln_sf_at(window.d)?;
        Ok(k.censor_prob(ln_sd, window.u))
    }

    /// Quantile of the truncated-and-censored law; returns `u` for `p >= p_u`.
    pub fn ltrc_qf(self, params: &Params, window: &Window, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        let k = self.kernel(params)?;
        let ln_sd = k.checked_ln_sf_at(window.d)?;
        Ok(k.ltrc_qf(window, ln_sd, k.censor_prob(ln_sd, window.u), p))
    }

    /// Log-likelihood of an LTRC sample:
    /// `Σ log f(x_i) - n log(1 - F(d)) + n_censored log(1 - F(u⁻))`.
    ///
    /// Returns `-∞` for invalid parameters or any non-finite term.
    pub fn loglik(self, params: &Params, sample: &LtrcSample) -> f64 {
        if self.validate(params).is_err() {
            return f64::NEG_INFINITY;
        }
        let k = Kernel::new(self, params);
        let w = sample.window();
        let ln_sd = if w.d > 0.0 { k.ln_sf(w.d, w.d.ln()) } else { 0.0 };
        let mut total = k.sum_ln_pdf(sample.uncensored(), sample.ln_uncensored());
        total -= sample.len() as f64 * ln_sd;
        if sample.n_censored() > 0 {
            // u is finite whenever censored points exist.
            total += sample.n_censored() as f64 * k.ln_sf(w.u, w.u.ln());
        }
        if total.is_nan() || total == f64::INFINITY {
            f64::NEG_INFINITY
        } else {
            total
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Fisk => "Fisk",
            Family::Frechet => "Frechet",
            Family::Lognormal => "Lognormal",
            Family::Lomax => "Lomax",
            Family::Paralogistic => "Paralogistic",
            Family::Weibull => "Weibull",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fisk" | "loglogistic" => Ok(Family::Fisk),
            "frechet" | "inverse-weibull" | "invweibull" => Ok(Family::Frechet),
            "lognormal" | "logn" => Ok(Family::Lognormal),
            "lomax" | "pareto2" => Ok(Family::Lomax),
            "paralogistic" | "paralog" => Ok(Family::Paralogistic),
            "weibull" => Ok(Family::Weibull),
            other => Err(Error::Config(format!("unknown family `{other}`"))),
        }
    }
}

impl TryFrom<String> for Family {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

fn positive(x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} must be positive")))
    }
}

/// Two-parameter vector. `p1` is the shape `alpha` (Lognormal: `mu`), `p2`
/// the scale `theta` (Lognormal: `sigma`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub p1: f64,
    pub p2: f64,
}

impl Params {
    pub const fn new(p1: f64, p2: f64) -> Self {
        Params { p1, p2 }
    }
}

/// Observation window: deductible `d` (left truncation) and policy limit `u`
/// (right censoring). `u` may be `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub d: f64,
    pub u: f64,
}

impl Window {
    pub fn new(d: f64, u: f64) -> Result<Self> {
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::InvalidWindow(format!("deductible d = {d} must be finite and >= 0")));
        }
        if u.is_nan() || u <= d {
            return Err(Error::InvalidWindow(format!("policy limit u = {u} must exceed d = {d}")));
        }
        Ok(Window { d, u })
    }

    /// No truncation and no censoring.
    pub fn complete() -> Self {
        Window { d: 0.0, u: f64::INFINITY }
    }

    pub fn is_censoring(&self) -> bool {
        self.u.is_finite()
    }
}

/// Observed losses strictly inside `(d, u)` plus a count recorded at `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LtrcSample {
    uncensored: Vec<f64>,
    ln_uncensored: Vec<f64>,
    n_censored: usize,
    window: Window,
}

impl LtrcSample {
    pub fn new(mut uncensored: Vec<f64>, n_censored: usize, window: Window) -> Result<Self> {
        if let Some(bad) = uncensored
            .iter()
            .find(|&&x| !(x.is_finite() && x > window.d && x < window.u))
        {
            return Err(Error::InvalidSample(format!(
                "uncensored loss {bad} outside the open window ({}, {})",
                window.d, window.u
            )));
        }
        if n_censored > 0 && !window.u.is_finite() {
            return Err(Error::InvalidSample(
                "censored observations require a finite policy limit".into(),
            ));
        }
        if uncensored.is_empty() && n_censored == 0 {
            return Err(Error::InvalidSample("sample is empty".into()));
        }
        uncensored.sort_by(f64::total_cmp);
        let ln_uncensored = uncensored.iter().map(|x| x.ln()).collect();
        Ok(LtrcSample { uncensored, ln_uncensored, n_censored, window })
    }

    /// Uncensored losses in ascending order.
    pub fn uncensored(&self) -> &[f64] {
        &self.uncensored
    }

    pub fn ln_uncensored(&self) -> &[f64] {
        &self.ln_uncensored
    }

    pub fn n_censored(&self) -> usize {
        self.n_censored
    }

    pub fn n_uncensored(&self) -> usize {
        self.uncensored.len()
    }

    /// Total size including censored observations.
    pub fn len(&self) -> usize {
        self.uncensored.len() + self.n_censored
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn window(&self) -> &Window {
        &self.window
    }
}

/// A family bound to concrete parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub family: Family,
    pub params: Params,
}

impl Model {
    pub fn new(family: Family, params: Params) -> Result<Self> {
        family.validate(&params)?;
        Ok(Model { family, params })
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.family.cdf(&self.params, x)
    }

    pub fn qf(&self, p: f64) -> Result<f64> {
        self.family.qf(&self.params, p)
    }

    pub fn ltrc_cdf(&self, window: &Window, x: f64) -> Result<f64> {
        self.family.ltrc_cdf(&self.params, window, x)
    }

    pub fn censor_prob(&self, window: &Window) -> Result<f64> {
        self.family.censor_prob(&self.params, window)
    }

    pub fn ltrc_qf(&self, window: &Window, p: f64) -> Result<f64> {
        self.family.ltrc_qf(&self.params, window, p)
    }

    pub fn loglik(&self, sample: &LtrcSample) -> f64 {
        self.family.loglik(&self.params, sample)
    }

    /// Truncated-law evaluator for repeated use on one window.
    pub fn truncated(&self, window: &Window) -> Result<Truncated> {
        let kernel = self.family.kernel(&self.params)?;
        let ln_sd = kernel.checked_ln_sf_at(window.d)?;
        let p_u = kernel.censor_prob(ln_sd, window.u);
        Ok(Truncated { kernel, window: *window, ln_sd, p_u })
    }
}

/// A model conditioned on a window, with the deductible survival cached.
#[derive(Debug, Clone, Copy)]
pub struct Truncated {
    kernel: Kernel,
    window: Window,
    ln_sd: f64,
    p_u: f64,
}

impl Truncated {
    /// Continuous part of the truncated cdf; no jump at `u`.
    pub fn cdf_continuous(&self, x: f64) -> f64 {
        if x <= self.window.d {
            0.0
        } else if x >= self.window.u {
            self.p_u
        } else {
            -(self.kernel.ln_sf(x, x.ln()) - self.ln_sd).exp_m1()
        }
    }

    /// Truncated density `f(x) / (1 - F(d))` on `(d, u)`.
    pub fn pdf(&self, x: f64) -> f64 {
        if x <= self.window.d || x >= self.window.u {
            0.0
        } else {
            (self.kernel.ln_pdf(x, x.ln()) - self.ln_sd).exp()
        }
    }

    pub fn qf(&self, p: f64) -> f64 {
        self.kernel.ltrc_qf(&self.window, self.ln_sd, self.p_u, p)
    }

    /// Ground-up quantile at level `F(d) + (1 - F(d)) p`, with no clamp at `u`.
    pub fn qf_above_d(&self, p: f64) -> f64 {
        self.kernel.isf_ln((-p).ln_1p() + self.ln_sd)
    }

    pub fn p_u(&self) -> f64 {
        self.p_u
    }

    /// Ground-up `F(d)`.
    pub fn f_d(&self) -> f64 {
        -self.ln_sd.exp_m1()
    }
}

#[inline]
fn softplus(v: f64) -> f64 {
    if v > 0.0 {
        v + (-v).exp().ln_1p()
    } else {
        v.exp().ln_1p()
    }
}

/// Inverse of `softplus` for `c > 0`.
#[inline]
fn inv_softplus(c: f64) -> f64 {
    if c > 1.0 {
        c + (-(-c).exp()).ln_1p()
    } else {
        c.exp_m1().ln()
    }
}

/// Family constants hoisted out of per-point loops.
#[derive(Debug, Clone, Copy)]
struct Kernel {
    family: Family,
    /// alpha, or sigma for Lognormal.
    shape: f64,
    ln_shape: f64,
    /// ln(theta), or mu for Lognormal.
    loc: f64,
    theta: f64,
}

impl Kernel {
    fn new(family: Family, params: &Params) -> Self {
        match family {
            Family::Lognormal => Kernel {
                family,
                shape: params.p2,
                ln_shape: params.p2.ln(),
                loc: params.p1,
                theta: params.p1.exp(),
            },
            _ => Kernel {
                family,
                shape: params.p1,
                ln_shape: params.p1.ln(),
                loc: params.p2.ln(),
                theta: params.p2,
            },
        }
    }

    /// ln S(x), given `lx = ln x`. Accepts `x = 0` with `lx = -∞`.
    #[inline]
    fn ln_sf(&self, x: f64, lx: f64) -> f64 {
        let a = self.shape;
        match self.family {
            Family::Fisk => -softplus(a * (lx - self.loc)),
            Family::Frechet => {
                let y = (-a * (lx - self.loc)).exp();
                if y > std::f64::consts::LN_2 {
                    (-(-y).exp()).ln_1p()
                } else {
                    (-(-y).exp_m1()).ln()
                }
            }
            Family::Lognormal => normal::ln_cdf(-(lx - self.loc) / a),
            Family::Lomax => -a * (x / self.theta).ln_1p(),
            Family::Paralogistic => -a * softplus(a * (lx - self.loc)),
            Family::Weibull => -(a * (lx - self.loc)).exp(),
        }
    }

    #[inline]
    fn ln_pdf(&self, x: f64, lx: f64) -> f64 {
        let a = self.shape;
        let t = lx - self.loc;
        match self.family {
            Family::Fisk => self.ln_shape - self.loc + (a - 1.0) * t - 2.0 * softplus(a * t),
            Family::Frechet => self.ln_shape - lx - a * t - (-a * t).exp(),
            Family::Lognormal => {
                let z = t / a;
                -self.ln_shape - lx - normal::LN_SQRT_2PI - 0.5 * z * z
            }
            Family::Lomax => self.ln_shape - self.loc - (a + 1.0) * (x / self.theta).ln_1p(),
            Family::Paralogistic => {
                2.0 * self.ln_shape - self.loc + (a - 1.0) * t - (a + 1.0) * softplus(a * t)
            }
            Family::Weibull => self.ln_shape - self.loc + (a - 1.0) * t - (a * t).exp(),
        }
    }

    fn sum_ln_pdf(&self, xs: &[f64], lxs: &[f64]) -> f64 {
        let a = self.shape;
        let la = self.ln_shape;
        let loc = self.loc;
        match self.family {
            Family::Fisk => lxs
                .iter()
                .map(|&lx| {
                    let t = lx - loc;
                    la - loc + (a - 1.0) * t - 2.0 * softplus(a * t)
                })
                .sum(),
            Family::Frechet => lxs
                .iter()
                .map(|&lx| {
                    let t = lx - loc;
                    la - lx - a * t - (-a * t).exp()
                })
                .sum(),
            Family::Lognormal => {
                let inv = 1.0 / a;
                let c = -la - normal::LN_SQRT_2PI;
                lxs.iter()
                    .map(|&lx| {
                        let z = (lx - loc) * inv;
                        c - lx - 0.5 * z * z
                    })
                    .sum()
            }
            Family::Lomax => {
                let inv = 1.0 / self.theta;
                xs.iter().map(|&x| la - loc - (a + 1.0) * (x * inv).ln_1p()).sum()
            }
            Family::Paralogistic => lxs
                .iter()
                .map(|&lx| {
                    let t = lx - loc;
                    2.0 * la - loc + (a - 1.0) * t - (a + 1.0) * softplus(a * t)
                })
                .sum(),
            Family::Weibull => lxs
                .iter()
                .map(|&lx| {
                    let t = lx - loc;
                    la - loc + (a - 1.0) * t - (a * t).exp()
                })
                .sum(),
        }
    }

    fn cdf(&self, lx: f64) -> f64 {
        let a = self.shape;
        let t = lx - self.loc;
        match self.family {
            Family::Fisk => 1.0 / (1.0 + (-a * t).exp()),
            Family::Frechet => (-(-a * t).exp()).exp(),
            Family::Lognormal => normal::cdf(t / a),
            _ => -self.ln_sf(lx.exp(), lx).exp_m1(),
        }
    }

    /// Inverse survival: the x with ln S(x) = `ln_s` (`ln_s < 0`).
    fn isf_ln(&self, ln_s: f64) -> f64 {
        let a = self.shape;
        let half = -std::f64::consts::LN_2;
        match self.family {
            Family::Fisk => (self.loc + inv_softplus(-ln_s) / a).exp(),
            Family::Frechet => {
                let y = if ln_s < half {
                    -(-ln_s.exp()).ln_1p()
                } else {
                    -(-ln_s.exp_m1()).ln()
                };
                (self.loc - y.ln() / a).exp()
            }
            Family::Lognormal => {
                let z = if ln_s < half {
                    normal::upper_quantile(ln_s.exp())
                } else {
                    normal::quantile(-ln_s.exp_m1())
                };
                (self.loc + a * z).exp()
            }
            Family::Lomax => self.theta * (-ln_s / a).exp_m1(),
            Family::Paralogistic => (self.loc + inv_softplus(-ln_s / a) / a).exp(),
            Family::Weibull => (self.loc + (-ln_s).ln() / a).exp(),
        }
    }

    fn checked_ln_sf_at(&self, d: f64) -> Result<f64> {
        let ln_sd = if d > 0.0 { self.ln_sf(d, d.ln()) } else { 0.0 };
        if !(ln_sd.exp() > DEGENERATE_SURVIVAL) {
            return Err(Error::DegenerateWindow { family: self.family, f_d: -ln_sd.exp_m1() });
        }
        Ok(ln_sd)
    }

    fn censor_prob(&self, ln_sd: f64, u: f64) -> f64 {
        if u.is_finite() {
            -(self.ln_sf(u, u.ln()) - ln_sd).exp_m1()
        } else {
            1.0
        }
    }

    fn ltrc_qf(&self, window: &Window, ln_sd: f64, p_u: f64, p: f64) -> f64 {
        if p <= 0.0 {
            return window.d;
        }
        if p >= p_u {
            return window.u;
        }
        let x = self.isf_ln((-p).ln_1p() + ln_sd);
        x.clamp(window.d, window.u)
    }
}

#[cfg(test)]
mod tests;
