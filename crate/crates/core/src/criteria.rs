//! Penalized-likelihood criteria, deltas, evidence grades and posterior
//! model probabilities.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{FitResult, Matrix2};
use crate::families::Family;

pub fn aic(loglik_max: f64, p: usize) -> f64 {
    -2.0 * loglik_max + 2.0 * p as f64
}

/// `n` is the full sample size, censored observations included.
pub fn bic(loglik_max: f64, p: usize, n: usize) -> f64 {
    -2.0 * loglik_max + p as f64 * (n as f64).ln()
}

/// Twice the information complexity: `s ln(tr/s) - ln det` with `s = 2`,
/// evaluated through the eigenvalues so that `a * I` gives exactly zero.
pub fn icomp_complexity(cov: &Matrix2) -> f64 {
    let [lo, hi] = cov.eigenvalues();
    let mean = 0.5 * (lo + hi);
    2.0 * mean.ln() - (lo.ln() + hi.ln())
}

pub fn icomp(loglik_max: f64, cov: Option<&Matrix2>) -> Option<f64> {
    let c = icomp_complexity(cov?);
    let v = -2.0 * loglik_max + c;
    v.is_finite().then_some(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EvidenceGrade {
    #[serde(rename = "little")]
    Little,
    #[serde(rename = "positive")]
    Positive,
    #[serde(rename = "strong")]
    Strong,
    #[serde(rename = "very strong")]
    VeryStrong,
}

impl EvidenceGrade {
    /// Bands `[0, 2]`, `(2, 6]`, `(6, 10]`, `(10, inf)`.
    pub fn from_delta(delta: f64) -> Self {
        if delta <= 2.0 {
            EvidenceGrade::Little
        } else if delta <= 6.0 {
            EvidenceGrade::Positive
        } else if delta <= 10.0 {
            EvidenceGrade::Strong
        } else {
            EvidenceGrade::VeryStrong
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EvidenceGrade::Little => "little",
            EvidenceGrade::Positive => "positive",
            EvidenceGrade::Strong => "strong",
            EvidenceGrade::VeryStrong => "very strong",
        }
    }
}

impl fmt::Display for EvidenceGrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Differences from the smallest non-NA value.
pub fn deltas(values: &[Option<f64>]) -> Result<Vec<Option<f64>>> {
    let min = values.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return Err(Error::AllNa);
    }
    Ok(values.iter().map(|v| v.map(|x| x - min)).collect())
}

pub fn deltas_and_evidence(values: &[Option<f64>]) -> Result<Vec<Option<(f64, EvidenceGrade)>>> {
    Ok(deltas(values)?
        .into_iter()
        .map(|d| d.map(|d| (d, EvidenceGrade::from_delta(d))))
        .collect())
}

/// `exp(-Δ_i / 2) / Σ_j exp(-Δ_j / 2)`.
pub fn posterior_probs(deltas: &[f64]) -> Vec<f64> {
    let w: Vec<f64> = deltas.iter().map(|d| (-0.5 * d).exp()).collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Posteriors over the non-NA entries; NA entries stay NA.
pub fn posterior_probs_na(deltas: &[Option<f64>]) -> Vec<Option<f64>> {
    let present: Vec<f64> = deltas.iter().flatten().copied().collect();
    let mut probs = posterior_probs(&present).into_iter();
    deltas.iter().map(|d| d.and_then(|_| probs.next())).collect()
}

/// Index of the smallest non-NA value; ties go to the earliest index.
pub fn argmin(values: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = *v {
            if v.is_nan() {
                continue;
            }
            if best.map_or(true, |(_, b)| v < b) {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaRow {
    pub family: Family,
    pub aic: f64,
    pub bic: f64,
    pub icomp: Option<f64>,
    pub delta_aic: f64,
    pub delta_bic: f64,
    pub delta_icomp: Option<f64>,
    pub posterior_aic: f64,
    pub posterior_bic: f64,
    pub posterior_icomp: Option<f64>,
    /// Grade of the BIC delta.
    pub evidence: EvidenceGrade,
}

/// Criteria, deltas and posteriors for a set of fits to the same sample.
pub fn compare(fits: &[FitResult]) -> Result<Vec<CriteriaRow>> {
    let aics: Vec<Option<f64>> = fits.iter().map(|f| Some(aic(f.loglik_max, f.family.n_params()))).collect();
    let bics: Vec<Option<f64>> =
        fits.iter().map(|f| Some(bic(f.loglik_max, f.family.n_params(), f.n_obs))).collect();
    let icomps: Vec<Option<f64>> = fits.iter().map(|f| icomp(f.loglik_max, f.covariance.as_ref())).collect();

    let d_aic = deltas(&aics)?;
    let d_bic = deltas(&bics)?;
    let d_icomp = deltas(&icomps).unwrap_or_else(|_| vec![None; fits.len()]);
    let p_aic = posterior_probs_na(&d_aic);
    let p_bic = posterior_probs_na(&d_bic);
    let p_icomp = posterior_probs_na(&d_icomp);

    Ok(fits
        .iter()
        .enumerate()
        .map(|(i, f)| CriteriaRow {
            family: f.family,
            aic: aics[i].unwrap(),
            bic: bics[i].unwrap(),
            icomp: icomps[i],
            delta_aic: d_aic[i].unwrap(),
            delta_bic: d_bic[i].unwrap(),
            delta_icomp: d_icomp[i],
            posterior_aic: p_aic[i].unwrap(),
            posterior_bic: p_bic[i].unwrap(),
            posterior_icomp: p_icomp[i],
            evidence: EvidenceGrade::from_delta(d_bic[i].unwrap()),
        })
        .collect())
}
