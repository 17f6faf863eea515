//! The four subcommands. Each builds a [`Report`]; [`execute`] writes it.

use std::path::{Path, PathBuf};

use serde_json::json;

use super::config::RunConfig;
use super::ingest::{read_loss_file, write_losses};
use super::report::{Cell, Report};
use crate::calibration::percentile_match;
use crate::criteria;
use crate::error::{Error, Result};
use crate::estimation::{fit_mle, FitResult};
use crate::families::{Family, LtrcSample, Model, Params, Window};
use crate::gof;
use crate::simulation::{replication_seed, run_study_with_workers, sample_ltrc, Criterion};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Fit,
    Qq,
    Simulate,
    Calibrate,
}

/// Scale then shape, as in published fit tables. Lognormal reports `mu`
/// under `theta` and `sigma` under `alpha`.
fn theta_alpha(family: Family, p: &Params) -> (f64, f64) {
    match family {
        Family::Lognormal => (p.p1, p.p2),
        _ => (p.p2, p.p1),
    }
}

/// Ground-up `F(d)` and `F(u)` with the window edges handled.
fn edge_cdfs(model: &Model, w: &Window) -> (f64, f64) {
    let f_d = if w.d > 0.0 { model.cdf(w.d).unwrap_or(f64::NAN) } else { 0.0 };
    let f_u = if w.u.is_finite() { model.cdf(w.u).unwrap_or(f64::NAN) } else { 1.0 };
    (f_d, f_u)
}

fn load_sample(cfg: &RunConfig) -> Result<LtrcSample> {
    let Some(path) = &cfg.data else {
        return Err(Error::Config("no data file given (use --data)".into()));
    };
    read_loss_file(Path::new(path), &cfg.window()?)
}

pub const FIT_COLUMNS: [&str; 16] = [
    "family",
    "theta",
    "alpha",
    "loglik",
    "ks",
    "ad",
    "aic",
    "bic",
    "icomp",
    "delta_bic",
    "evidence",
    "posterior_bic",
    "f_d",
    "f_u",
    "converged",
    "note",
];

/// Fit every configured family to `sample` and tabulate the indicators.
pub fn fit_report(cfg: &RunConfig, sample: &LtrcSample) -> Result<Report> {
    let families = cfg.resolved_families(&Family::ALL);
    let fits: Vec<(Family, Result<FitResult>)> =
        families.iter().map(|&f| (f, fit_mle(f, sample, cfg.seed))).collect();
    let ok: Vec<FitResult> = fits.iter().filter_map(|(_, r)| r.as_ref().ok().cloned()).collect();
    if ok.is_empty() {
        return match fits.into_iter().next() {
            Some((_, Err(e))) => Err(e),
            _ => Err(Error::Config("no families configured".into())),
        };
    }
    let crit = criteria::compare(&ok)?;

    let mut report = Report::new("fit", FIT_COLUMNS.iter().map(|s| s.to_string()).collect());
    for (family, res) in &fits {
        match res {
            Ok(fit) => {
                let c = crit.iter().find(|c| c.family == *family).expect("criteria row per fit");
                let model = Model { family: *family, params: fit.params_hat };
                let stats = gof::gof_stats(&model, sample);
                let (theta, alpha) = theta_alpha(*family, &fit.params_hat);
                let (f_d, f_u) = edge_cdfs(&model, sample.window());
                let mut notes = Vec::new();
                if fit.covariance.is_none() {
                    notes.push("information matrix not positive definite".to_string());
                }
                if let Err(e) = &stats {
                    notes.push(format!("no goodness of fit: {e}"));
                }
                let (ks, ad) = stats.map_or((None, None), |s| (Some(s.ks), Some(s.ad)));
                report.push(vec![
                    family.name().into(),
                    theta.into(),
                    alpha.into(),
                    fit.loglik_max.into(),
                    ks.into(),
                    ad.into(),
                    c.aic.into(),
                    c.bic.into(),
                    c.icomp.into(),
                    c.delta_bic.into(),
                    c.evidence.label().into(),
                    c.posterior_bic.into(),
                    f_d.into(),
                    f_u.into(),
                    fit.converged.into(),
                    notes.join("; ").into(),
                ]);
            }
            Err(e) => {
                let mut row: Vec<Cell> = vec![family.name().into()];
                row.extend((0..9).map(|_| Cell::Num(None)));
                row.push("".into());
                row.extend((0..3).map(|_| Cell::Num(None)));
                row.push(false.into());
                row.push(e.to_string().into());
                report.push(row);
            }
        }
    }
    report.extra.insert("n_obs".into(), json!(sample.len()));
    report.extra.insert("n_censored".into(), json!(sample.n_censored()));
    report.extra.insert("fits".into(), serde_json::to_value(&ok)?);
    Ok(report)
}

pub fn cmd_fit(cfg: &RunConfig) -> Result<Report> {
    fit_report(cfg, &load_sample(cfg)?)
}

/// QQ pairs for one family fitted to `sample`.
pub fn qq_report(cfg: &RunConfig, family: Family, sample: &LtrcSample) -> Result<Report> {
    if sample.n_uncensored() == 0 {
        return Err(Error::Empty("no plottable points: every observation is censored".into()));
    }
    let fit = fit_mle(family, sample, cfg.seed)?;
    let model = Model { family, params: fit.params_hat };
    let mut report = Report::new("qq", vec!["log_theoretical".into(), "log_empirical".into()]);
    for (t, e) in gof::qq_points(&model, sample)? {
        report.push(vec![t.into(), e.into()]);
    }
    Ok(report)
}

pub fn cmd_qq(cfg: &RunConfig) -> Result<Report> {
    let Some(family) = cfg.family else {
        return Err(Error::Config("qq needs a family (use --family)".into()));
    };
    qq_report(cfg, family, &load_sample(cfg)?)
}

fn check_levels(p_d: f64, p_u: f64) -> Result<()> {
    if !(p_d > 0.0 && p_d < p_u && p_u < 1.0) {
        return Err(Error::Config(format!("need 0 < p_d < p_u < 1, got p_d = {p_d}, p_u = {p_u}")));
    }
    Ok(())
}

/// Percentile-matched parameters; failures are reported per family.
pub fn cmd_calibrate(cfg: &RunConfig) -> Result<Report> {
    check_levels(cfg.p_d, cfg.p_u)?;
    let w = cfg.window()?;
    if !w.u.is_finite() || w.d <= 0.0 {
        return Err(Error::Config("calibration needs 0 < d < u < inf".into()));
    }
    let cols = ["family", "theta", "alpha", "f_d", "f_u", "status"];
    let mut report = Report::new("calibrate", cols.iter().map(|s| s.to_string()).collect());
    for family in cfg.resolved_families(&Family::ALL) {
        match percentile_match(family, w.d, cfg.p_d, w.u, cfg.p_u) {
            Ok(p) => {
                let (theta, alpha) = theta_alpha(family, &p);
                let (f_d, f_u) = edge_cdfs(&Model { family, params: p }, &w);
                report.push(vec![family.name().into(), theta.into(), alpha.into(), f_d.into(), f_u.into(), "ok".into()]);
            }
            Err(e) => report.push(vec![
                family.name().into(),
                Cell::Num(None),
                Cell::Num(None),
                Cell::Num(None),
                Cell::Num(None),
                e.to_string().into(),
            ]),
        }
    }
    Ok(report)
}

/// Study report plus the first replication of each parent for export.
pub fn cmd_simulate(cfg: &RunConfig, workers: usize) -> Result<(Report, Vec<(Family, LtrcSample)>)> {
    check_levels(cfg.p_d, cfg.p_u)?;
    let study = cfg.study_config()?;
    let out = run_study_with_workers(&study, workers)?;
    let table = &out.table;

    let mut cols: Vec<String> =
        ["parent", "parent_theta", "parent_alpha", "criterion", "decided", "dropped"].iter().map(|s| s.to_string()).collect();
    for prefix in ["freq", "mean_post", "median_post"] {
        cols.extend(table.candidates.iter().map(|c| format!("{prefix}_{}", c.name())));
    }
    let mut report = Report::new("simulate", cols);
    let k = table.candidates.len();
    for row in &table.rows {
        let diag = table.diagnostics.iter().find(|d| d.parent == row.parent).expect("diagnostics per parent");
        let (theta, alpha) = theta_alpha(row.parent, &diag.params);
        let mut cells: Vec<Cell> = vec![
            row.parent.name().into(),
            theta.into(),
            alpha.into(),
            row.criterion.label().into(),
            row.decided.into(),
            diag.dropped.into(),
        ];
        cells.extend(row.frequencies.iter().map(|&f| Cell::from(f)));
        for post in [&row.mean_posterior, &row.median_posterior] {
            match post {
                Some(v) => cells.extend(v.iter().map(|&x| Cell::from(x))),
                None => cells.extend((0..k).map(|_| Cell::Num(None))),
            }
        }
        report.push(cells);
    }
    let calibrated: Vec<_> = out
        .calibrated
        .iter()
        .map(|(f, p)| {
            let (n1, n2) = f.param_names();
            json!({ "family": f, n1: p.p1, n2: p.p2 })
        })
        .collect();
    report.extra.insert("calibrated".into(), json!(calibrated));
    report.extra.insert("diagnostics".into(), serde_json::to_value(&table.diagnostics)?);
    report.extra.insert("criteria".into(), json!(Criterion::ALL.map(|c| c.label())));

    let mut samples = Vec::new();
    if cfg.export_data {
        for &(f, p) in &out.calibrated {
            samples.push((f, sample_ltrc(f, p, &study.window, study.n, replication_seed(study.seed, f, 0))?));
        }
    }
    Ok((report, samples))
}

/// Run `command` and write its files under `out`.
pub fn execute(command: Command, cfg: &RunConfig, out: &Path, workers: usize) -> Result<Vec<PathBuf>> {
    let cfg = &cfg.resolved(command == Command::Simulate);
    match command {
        Command::Fit => cmd_fit(cfg)?.write(out, "fit", cfg),
        Command::Calibrate => cmd_calibrate(cfg)?.write(out, "calibration", cfg),
        Command::Qq => {
            let family = cfg.family.ok_or_else(|| Error::Config("qq needs a family (use --family)".into()))?;
            cmd_qq(cfg)?.write(out, &format!("qq_{}", family.name()), cfg)
        }
        Command::Simulate => {
            let (report, samples) = cmd_simulate(cfg, workers)?;
            let mut written = report.write(out, "study", cfg)?;
            for (f, s) in samples {
                let p = out.join(format!("sample_{}.csv", f.name()));
                write_losses(std::fs::File::create(&p)?, &s)?;
                written.push(p);
            }
            Ok(written)
        }
    }
}
