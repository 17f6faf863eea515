//! Seeded LTRC sampling and the Monte-Carlo model-selection study.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibration::percentile_match;
use crate::criteria;
use crate::error::{Error, Result};
use crate::estimation::fit_mle;
use crate::families::{Family, LtrcSample, Model, Params, Window};
use crate::gof;

/// Draw `n` observations from the truncated-and-censored law by inverse
/// transform. Uniforms at or above `p_u` become censored observations.
pub fn sample_ltrc(family: Family, params: Params, window: &Window, n: usize, seed: u64) -> Result<LtrcSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw(family, params, window, n, &mut rng)
}

fn draw(family: Family, params: Params, window: &Window, n: usize, rng: &mut ChaCha8Rng) -> Result<LtrcSample> {
    let law = Model::new(family, params)?.truncated(window)?;
    let p_u = law.p_u();
    let mut xs = Vec::with_capacity(n);
    let mut censored = 0;
    for _ in 0..n {
        let p: f64 = rng.sample(Open01);
        if p >= p_u {
            censored += 1;
            continue;
        }
        let x = law.qf(p);
        if x >= window.u {
            censored += 1;
        } else if x <= window.d {
            xs.push(window.d.next_up());
        } else {
            xs.push(x);
        }
    }
    LtrcSample::new(xs, censored, *window)
}

/// Model-selection measures tracked by the study, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "KS")]
    Ks,
    #[serde(rename = "AD")]
    Ad,
    #[serde(rename = "AIC")]
    Aic,
    #[serde(rename = "BIC")]
    Bic,
    #[serde(rename = "ICOMP")]
    Icomp,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [Criterion::Ks, Criterion::Ad, Criterion::Aic, Criterion::Bic, Criterion::Icomp];

    pub fn label(self) -> &'static str {
        match self {
            Criterion::Ks => "KS",
            Criterion::Ad => "AD",
            Criterion::Aic => "AIC",
            Criterion::Bic => "BIC",
            Criterion::Icomp => "ICOMP",
        }
    }

    /// Likelihood-based criteria carry posterior model probabilities.
    pub fn has_posterior(self) -> bool {
        matches!(self, Criterion::Aic | Criterion::Bic | Criterion::Icomp)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub parents: Vec<Family>,
    pub candidates: Vec<Family>,
    pub window: Window,
    pub p_d: f64,
    pub p_u: f64,
    /// Observed (post-truncation) sample size per replication.
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            parents: Family::STUDY_DEFAULT.to_vec(),
            candidates: Family::STUDY_DEFAULT.to_vec(),
            window: Window { d: 500.0, u: 10_000.0 },
            p_d: 0.10,
            p_u: 0.85,
            n: 1000,
            replications: 100,
            seed: 2024,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.parents.is_empty() || self.candidates.is_empty() {
            return Err(Error::Config("parents and candidates must be non-empty".into()));
        }
        if self.replications < 1 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.n < 10 {
            return Err(Error::Config(format!("sample size n = {} must be at least 10", self.n)));
        }
        if !self.window.u.is_finite() {
            return Err(Error::Config("the study calibrates F(u), so u must be finite".into()));
        }
        if !(self.p_d > 0.0 && self.p_d < self.p_u && self.p_u < 1.0) {
            return Err(Error::Config(format!("need 0 < p_d < p_u < 1, got {} and {}", self.p_d, self.p_u)));
        }
        Window::new(self.window.d, self.window.u)?;
        Ok(())
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replication `rep` for the parent at canonical index `parent`.
pub fn replication_seed(seed: u64, parent: Family, rep: usize) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(parent.index() as u64 + 1)) ^ rep as u64)
}

fn fit_seed(rep_seed: u64, candidate: Family) -> u64 {
    splitmix64(rep_seed ^ splitmix64(0x5eed_0000 + candidate.index() as u64))
}

/// Scores of one replication, indexed by candidate position.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub parent: Family,
    pub rep: usize,
    /// Criterion values per candidate, `None` where the fit or score failed.
    pub values: Vec<[Option<f64>; 5]>,
    pub failed_fits: usize,
}

impl Replication {
    fn column(&self, c: Criterion) -> Vec<Option<f64>> {
        let j = c as usize;
        self.values.iter().map(|v| v[j]).collect()
    }

    /// Winning candidate position: smallest value, ties to canonical order.
    pub fn winner(&self, c: Criterion, candidates: &[Family]) -> Option<usize> {
        let col = self.column(c);
        let mut best: Option<usize> = None;
        for (i, v) in col.iter().enumerate() {
            let Some(v) = *v else { continue };
            if v.is_nan() {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(b) => {
                    let bv = col[b].unwrap();
                    if v < bv || (v == bv && candidates[i].index() < candidates[b].index()) {
                        Some(i)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }

    /// Posterior probabilities with NA candidates at zero; `None` if all NA.
    pub fn posteriors(&self, c: Criterion) -> Option<Vec<f64>> {
        let d = criteria::deltas(&self.column(c)).ok()?;
        Some(criteria::posterior_probs_na(&d).into_iter().map(|p| p.unwrap_or(0.0)).collect())
    }
}

fn score_candidates(sample: &LtrcSample, candidates: &[Family], rep_seed: u64) -> (Vec<[Option<f64>; 5]>, usize) {
    let mut failed = 0;
    let values = candidates
        .iter()
        .map(|&c| {
            let Ok(fit) = fit_mle(c, sample, fit_seed(rep_seed, c)) else {
                failed += 1;
                return [None; 5];
            };
            let model = Model { family: c, params: fit.params_hat };
            let finite = |v: f64| v.is_finite().then_some(v);
            let ll = finite(fit.loglik_max);
            [
                gof::ks_stat(&model, sample).ok().and_then(finite),
                gof::ad_stat(&model, sample).ok().and_then(finite),
                ll.map(|l| criteria::aic(l, c.n_params())),
                ll.map(|l| criteria::bic(l, c.n_params(), fit.n_obs)),
                ll.and_then(|l| criteria::icomp(l, fit.covariance.as_ref())),
            ]
        })
        .collect();
    (values, failed)
}

/// One replication: draw, fit every candidate, score.
pub fn run_replication(
    parent: Family,
    params: Params,
    config: &StudyConfig,
    rep: usize,
) -> Result<Replication> {
    let rep_seed = replication_seed(config.seed, parent, rep);
    let sample = sample_ltrc(parent, params, &config.window, config.n, rep_seed)?;
    let (values, failed_fits) = score_candidates(&sample, &config.candidates, rep_seed);
    Ok(Replication { parent, rep, values, failed_fits })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub parent: Family,
    pub criterion: Criterion,
    /// Type 1: selection frequency per candidate.
    pub frequencies: Vec<f64>,
    /// Replications in which this criterion produced a winner.
    pub decided: usize,
    /// Type 2, likelihood criteria only.
    pub mean_posterior: Option<Vec<f64>>,
    pub median_posterior: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParentDiagnostics {
    pub parent: Family,
    pub params: Params,
    pub replications: usize,
    pub dropped: usize,
    pub failed_fits: usize,
    pub icomp_na: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionStudyTable {
    pub candidates: Vec<Family>,
    pub rows: Vec<StudyRow>,
    pub diagnostics: Vec<ParentDiagnostics>,
}

impl SelectionStudyTable {
    pub fn row(&self, parent: Family, criterion: Criterion) -> Option<&StudyRow> {
        self.rows.iter().find(|r| r.parent == parent && r.criterion == criterion)
    }

    /// Frequency with which `criterion` picked `candidate` on `parent` data.
    pub fn frequency(&self, parent: Family, criterion: Criterion, candidate: Family) -> Option<f64> {
        let j = self.candidates.iter().position(|&c| c == candidate)?;
        Some(self.row(parent, criterion)?.frequencies[j])
    }
}

/// Even-count medians average the two middle values.
pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        0.5 * (values[m / 2 - 1] + values[m / 2])
    }
}

/// Aggregate the replications of one parent into its five table rows.
pub fn summarize_table(records: &[Replication], candidates: &[Family]) -> Result<Vec<StudyRow>> {
    let Some(first) = records.first() else {
        return Err(Error::Empty("no valid replications to summarize".into()));
    };
    let parent = first.parent;
    let k = candidates.len();
    let mut rows = Vec::with_capacity(Criterion::ALL.len());
    for c in Criterion::ALL {
        let mut counts = vec![0usize; k];
        let mut decided = 0;
        for r in records {
            if let Some(w) = r.winner(c, candidates) {
                counts[w] += 1;
                decided += 1;
            }
        }
        let frequencies = counts
            .iter()
            .map(|&x| if decided > 0 { x as f64 / decided as f64 } else { 0.0 })
            .collect();
        let (mean_posterior, median_posterior) = if c.has_posterior() {
            let post: Vec<Vec<f64>> = records.iter().filter_map(|r| r.posteriors(c)).collect();
            if post.is_empty() {
                (None, None)
            } else {
                let m = post.len() as f64;
                let mean = (0..k).map(|j| post.iter().map(|p| p[j]).sum::<f64>() / m).collect();
                let med = (0..k)
                    .map(|j| median(&mut post.iter().map(|p| p[j]).collect::<Vec<_>>()))
                    .collect();
                (Some(mean), Some(med))
            }
        } else {
            (None, None)
        };
        rows.push(StudyRow { parent, criterion: c, frequencies, decided, mean_posterior, median_posterior });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyOutcome {
    /// Percentile-matched parameters for each parent.
    pub calibrated: Vec<(Family, Params)>,
    pub table: SelectionStudyTable,
}

/// Run the study on the current rayon pool.
pub fn run_study(config: &StudyConfig) -> Result<StudyOutcome> {
    config.validate()?;
    let calibrated = config
        .parents
        .iter()
        .map(|&f| Ok((f, percentile_match(f, config.window.d, config.p_d, config.window.u, config.p_u)?)))
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(Family, Params, usize)> = calibrated
        .iter()
        .flat_map(|&(f, p)| (0..config.replications).map(move |r| (f, p, r)))
        .collect();
    let results: Vec<Result<Replication>> =
        jobs.par_iter().map(|&(f, p, r)| run_replication(f, p, config, r)).collect();

    let mut rows = Vec::new();
    let mut diagnostics = Vec::new();
    let mut results = results.into_iter();
    for &(parent, params) in &calibrated {
        let mut kept = Vec::with_capacity(config.replications);
        let mut failed_fits = 0;
        for _ in 0..config.replications {
            let rec = results.next().expect("one result per job")?;
            failed_fits += rec.failed_fits;
            if rec.failed_fits < config.candidates.len() {
                kept.push(rec);
            }
        }
        let dropped = config.replications - kept.len();
        if dropped as f64 >= 0.05 * config.replications as f64 && dropped > 0 {
            return Err(Error::Study(format!(
                "{parent}: {dropped} of {} replications had no successful fit",
                config.replications
            )));
        }
        let icomp_na = kept.iter().filter(|r| r.winner(Criterion::Icomp, &config.candidates).is_none()).count();
        rows.extend(summarize_table(&kept, &config.candidates)?);
        diagnostics.push(ParentDiagnostics {
            parent,
            params,
            replications: config.replications,
            dropped,
            failed_fits,
            icomp_na,
        });
    }
    Ok(StudyOutcome {
        calibrated,
        table: SelectionStudyTable { candidates: config.candidates.clone(), rows, diagnostics },
    })
}

/// Run the study on a dedicated pool of `workers` threads.
pub fn run_study_with_workers(config: &StudyConfig, workers: usize) -> Result<StudyOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    pool.install(|| run_study(config))
}
