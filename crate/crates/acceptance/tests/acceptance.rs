//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any failed.

use std::path::Path;
use std::time::{Duration, Instant};

use ltrc::calibration::percentile_match;
use ltrc::cli::{cmd_calibrate, execute, Cell, Command, RunConfig};
use ltrc::criteria::{self, EvidenceGrade};
use ltrc::estimation::{fit_mle, Matrix2};
use ltrc::gof::ad_stat;
use ltrc::simulation::{run_study, sample_ltrc, Criterion, StudyConfig};
use ltrc::{Family, LtrcSample, Model, Params, Window};

#[allow(dead_code)]
#[path = "../../core/tests/common/quadrature.rs"]
mod quadrature;

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn within_budget(out: Outcome, elapsed: Duration, budget: Duration) -> Outcome {
    if elapsed <= budget {
        out
    } else {
        check(false, format!("{} [over time budget {:?}]", out.detail, budget))
    }
}

fn std_window() -> Window {
    Window { d: 500.0, u: 10_000.0 }
}

/// Scale then shape, Lognormal as (mu, sigma).
fn theta_alpha(row: &[Cell]) -> Option<(f64, f64)> {
    match (&row[1], &row[2]) {
        (Cell::Num(Some(t)), Cell::Num(Some(a))) => Some((*t, *a)),
        _ => None,
    }
}

fn criterion_1() -> Outcome {
    // (family, theta or mu, alpha or sigma) from the published scenario captions.
    let scenarios: [((f64, f64), [(Family, f64, f64); 5]); 2] = [
        (
            (0.10, 0.85),
            [
                (Family::Fisk, 2667.0, 1.31),
                (Family::Lognormal, 7.87, 1.29),
                (Family::Lomax, 41007.0, 8.69),
                (Family::Paralogistic, 3533.0, 1.24),
                (Family::Weibull, 5150.0, 0.96),
            ],
        ),
        (
            (0.50, 0.80),
            [
                (Family::Fisk, 500.0, 0.46),
                (Family::Lognormal, 6.21, 3.56),
                (Family::Lomax, 63.91, 0.32),
                (Family::Paralogistic, 144.04, 0.61),
                (Family::Weibull, 184.09, 0.28),
            ],
        ),
    ];
    let mut misses = Vec::new();
    let mut worst: f64 = 0.0;
    for ((p_d, p_u), expected) in scenarios {
        let cfg = RunConfig { d: 500.0, u: 10_000.0, p_d, p_u, families: Some(expected.map(|e| e.0).to_vec()), ..RunConfig::default() };
        let report = match cmd_calibrate(&cfg) {
            Ok(r) => r,
            Err(e) => return check(false, format!("calibrate failed: {e}")),
        };
        for ((family, theta, alpha), row) in expected.iter().zip(&report.rows) {
            let Some((t, a)) = theta_alpha(row) else {
                misses.push(format!("{family} ({p_d},{p_u}): no solution"));
                continue;
            };
            for (name, got, want) in [("theta", t, *theta), ("alpha", a, *alpha)] {
                let rel = (got / want - 1.0).abs();
                worst = worst.max(rel);
                if rel > 0.01 {
                    misses.push(format!("{family} ({p_d},{p_u}) {name}={got:.6} vs {want}"));
                }
            }
        }
    }
    if misses.is_empty() {
        check(true, format!("20 parameters within 1%, worst {:.3}%", 100.0 * worst))
    } else {
        check(false, format!("{} of 20 outside 1%: {}", misses.len(), misses.join("; ")))
    }
}

fn bic_correct(config: &StudyConfig) -> Result<Vec<(Family, f64)>, ltrc::Error> {
    let out = run_study(config)?;
    Ok(config
        .parents
        .iter()
        .map(|&p| (p, out.table.frequency(p, Criterion::Bic, p).unwrap_or(0.0)))
        .collect())
}

fn criterion_2() -> Outcome {
    let cfg = StudyConfig { n: 20_000, replications: 50, seed: 20_000, ..StudyConfig::default() };
    let freqs = match bic_correct(&cfg) {
        Ok(f) => f,
        Err(e) => return check(false, format!("study failed: {e}")),
    };
    let ok = freqs.iter().all(|&(p, f)| f >= if p == Family::Weibull { 0.75 } else { 0.85 });
    let text: Vec<String> = freqs.iter().map(|(p, f)| format!("{p} {f:.2}")).collect();
    check(ok, format!("BIC correct selection: {}", text.join(", ")))
}

fn criterion_3() -> Outcome {
    let cfg = StudyConfig {
        parents: vec![Family::Paralogistic],
        p_d: 0.50,
        p_u: 0.80,
        n: 1000,
        replications: 100,
        seed: 4,
        ..StudyConfig::default()
    };
    let out = match run_study(&cfg) {
        Ok(o) => o,
        Err(e) => return check(false, format!("study failed: {e}")),
    };
    let row = out.table.row(Family::Paralogistic, Criterion::Bic).expect("BIC row");
    let j = cfg.candidates.iter().position(|&c| c == Family::Paralogistic).unwrap();
    let freq = row.frequencies[j];
    let mean = row.mean_posterior.clone().unwrap_or_default();
    let in_band = mean.len() == cfg.candidates.len() && mean.iter().all(|&m| (0.10..=0.35).contains(&m));
    let shown: Vec<String> = cfg.candidates.iter().zip(&mean).map(|(c, m)| format!("{c} {m:.3}")).collect();
    check(
        freq <= 0.15 && in_band,
        format!("Paralogistic BIC frequency {freq:.2}; mean BIC posteriors {}", shown.join(", ")),
    )
}

/// `n ∫_0^{p_u} (F_n - t)^2 / (t (1 - t)) dt` with `t = F*(x)`, piecewise
/// between consecutive uncensored order statistics.
fn ad_by_quadrature(model: &Model, sample: &LtrcSample) -> f64 {
    let w = sample.window();
    let n = sample.len() as f64;
    let xs = sample.uncensored();
    let p_u = model.censor_prob(w).unwrap();
    let mut knots = vec![0.0];
    let mut levels = vec![0.0];
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j < xs.len() && xs[j] == xs[i] {
            j += 1;
        }
        knots.push(model.ltrc_cdf(w, xs[i]).unwrap());
        levels.push(j as f64 / n);
        i = j;
    }
    knots.push(p_u);
    let mut total = 0.0;
    for s in 0..levels.len() {
        let (a, b, c) = (knots[s], knots[s + 1], levels[s]);
        if b > a {
            let g = |t: f64| if t <= 0.0 || t >= 1.0 { 0.0 } else { (c - t).powi(2) / (t * (1.0 - t)) };
            total += quadrature::integrate(&g, a, b, 1e-14);
        }
    }
    n * total
}

fn criterion_4() -> Outcome {
    let windows = [
        Window { d: 500.0, u: 10_000.0 },
        Window { d: 500.0, u: 5_000.0 },
        Window { d: 500.0, u: f64::INFINITY },
    ];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for k in 0..20 {
        let family = Family::ALL[k % 6];
        let w = windows[k % 3];
        let params = percentile_match(family, 500.0, 0.10, 10_000.0, 0.85).unwrap();
        let n = 60 + 12 * k;
        let sample = sample_ltrc(family, params, &w, n, 1000 + k as u64).unwrap();
        // Score a slightly wrong model as well as the true one.
        let model = if k % 2 == 0 {
            Model::new(family, params).unwrap()
        } else {
            Model::new(family, Params::new(params.p1 * 1.05, params.p2 * 0.97)).unwrap()
        };
        let formula = ad_stat(&model, &sample).unwrap();
        let oracle = ad_by_quadrature(&model, &sample);
        worst = worst.max(((formula - oracle) / oracle).abs());
        count += 1;
    }
    check(worst <= 1e-3, format!("{count} samples, worst relative gap {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let sample = sample_ltrc(Family::Fisk, Params::new(1.31, 2667.0), &std_window(), 500, 42).unwrap();
    let fit = fit_mle(Family::Fisk, &sample, 7).unwrap();
    let m = 200;
    let axis = |lo: f64, hi: f64, i: usize| (lo.ln() + (hi / lo).ln() * i as f64 / (m - 1) as f64).exp();
    let mut grid = f64::NEG_INFINITY;
    for i in 0..m {
        for j in 0..m {
            grid = grid.max(Family::Fisk.loglik(&Params::new(axis(0.5, 3.0, i), axis(500.0, 10_000.0, j)), &sample));
        }
    }
    let grid_ok = grid <= fit.loglik_max + 1e-3;

    let complete = Window { d: 0.0, u: f64::INFINITY };
    let s = sample_ltrc(Family::Lognormal, Params::new(7.87, 1.29), &complete, 800, 3).unwrap();
    let lx = s.ln_uncensored();
    let k = lx.len() as f64;
    let mu = lx.iter().sum::<f64>() / k;
    let sigma = (lx.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / k).sqrt();
    let ln = fit_mle(Family::Lognormal, &s, 1).unwrap().params_hat;
    let gap = (ln.p1 - mu).abs().max((ln.p2 - sigma).abs());
    check(
        grid_ok && gap <= 1e-6,
        format!("fit {:.6} vs grid {:.6}; lognormal closed-form gap {gap:.1e}", fit.loglik_max, grid),
    )
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let s = sample_ltrc(Family::Fisk, Params::new(1.31, 2667.0), &std_window(), 700, 6).unwrap();
    let fits: Vec<_> = Family::ALL.iter().filter_map(|&f| fit_mle(f, &s, 2).ok()).collect();
    let rows = criteria::compare(&fits).unwrap();
    let sums = [
        rows.iter().map(|r| r.posterior_aic).sum::<f64>(),
        rows.iter().map(|r| r.posterior_bic).sum::<f64>(),
        rows.iter().filter_map(|r| r.posterior_icomp).sum::<f64>(),
    ];
    if sums.iter().any(|s| (s - 1.0).abs() > 1e-12) {
        failures.push(format!("posterior sums {sums:?}"));
    }
    for deltas in [[0.0, 0.3, 2.2, 9.9, 40.0, 1e3], [0.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 1e-9, 5.0, 6.0, 7.0, 600.0]] {
        let p = criteria::posterior_probs(&deltas);
        if (p.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            failures.push(format!("posterior sum for {deltas:?}"));
        }
    }
    let grade = |d: &[f64]| d.iter().map(|&x| EvidenceGrade::from_delta(x)).collect::<Vec<_>>();
    if grade(&[0.0, 1.0]) != [EvidenceGrade::Little, EvidenceGrade::Little] {
        failures.push("deltas (0,1)".into());
    }
    if grade(&[0.0, 7.0]) != [EvidenceGrade::Little, EvidenceGrade::Strong] {
        failures.push("deltas (0,7)".into());
    }
    for a in [1e-8, 0.01, 1.0, 3.7, 1e6] {
        if criteria::icomp_complexity(&Matrix2::diag(a, a)) != 0.0 {
            failures.push(format!("ICOMP complexity at {a}*I"));
        }
    }
    for f in &fits {
        let n = f.n_obs as f64;
        let gap = criteria::bic(f.loglik_max, f.family.n_params(), f.n_obs) - criteria::aic(f.loglik_max, f.family.n_params());
        if (gap - (2.0 * n.ln() - 4.0)).abs() > 1e-9 * gap.abs().max(1.0) || f.family.n_params() != 2 {
            failures.push(format!("BIC-AIC for {}", f.family));
        }
    }
    if failures.is_empty() {
        check(true, format!("{} fitted families, posterior sums {:?}", fits.len(), sums))
    } else {
        check(false, failures.join("; "))
    }
}

fn read_outputs(paths: &[std::path::PathBuf]) -> Vec<(String, Vec<u8>)> {
    paths
        .iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(p).unwrap()))
        .collect()
}

fn rerun_from(report: &Path, command: Command, out: &Path, workers: usize) -> Vec<(String, Vec<u8>)> {
    let cfg = RunConfig::load(report).unwrap();
    read_outputs(&execute(command, &cfg, out, workers).unwrap())
}

fn criterion_7() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let mut failures = Vec::new();

    let sim_cfg = RunConfig {
        parents: Some(vec![Family::Fisk, Family::Weibull]),
        n: 300,
        replications: 8,
        seed: 77,
        export_data: true,
        ..RunConfig::default()
    };
    let first = read_outputs(&execute(Command::Simulate, &sim_cfg, &root.join("sim1"), 1).unwrap());
    for (label, workers) in [("sim2", 1), ("sim3", 3), ("sim4", 8)] {
        if rerun_from(&root.join("sim1/study.csv"), Command::Simulate, &root.join(label), workers) != first {
            failures.push(format!("simulate with {workers} workers"));
        }
    }
    if rerun_from(&root.join("sim1/study.json"), Command::Simulate, &root.join("sim5"), 2) != first {
        failures.push("simulate from JSON report".into());
    }

    let data = root.join("sim1/sample_fisk.csv").to_string_lossy().into_owned();
    let runs = [
        (Command::Fit, RunConfig { data: Some(data.clone()), ..RunConfig::default() }, "fit.csv"),
        (Command::Qq, RunConfig { data: Some(data), family: Some(Family::Lognormal), ..RunConfig::default() }, "qq_lognormal.csv"),
        (Command::Calibrate, RunConfig::default(), "calibration.csv"),
    ];
    for (i, (cmd, cfg, csv)) in runs.into_iter().enumerate() {
        let a_dir = root.join(format!("a{i}"));
        let a = read_outputs(&execute(cmd, &cfg, &a_dir, 1).unwrap());
        let b = rerun_from(&a_dir.join(csv), cmd, &root.join(format!("b{i}")), 1);
        if a != b || a.is_empty() {
            failures.push(format!("{cmd:?} rerun differs"));
        }
    }
    if failures.is_empty() {
        check(true, "simulate (1, 2, 3, 8 workers), fit, qq and calibrate reruns are byte-identical")
    } else {
        check(false, failures.join("; "))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 7] = [
        ("calibration anchors", criterion_1, 1),
        ("large-sample BIC selection", criterion_2, 600),
        ("confusion regime", criterion_3, 300),
        ("AD formula vs quadrature", criterion_4, 60),
        ("MLE vs grid and closed form", criterion_5, 60),
        ("criteria identities", criterion_6, 1),
        ("determinism", criterion_7, 120),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|f| f == &id) {
            continue;
        }
        let t0 = Instant::now();
        let out = within_budget(run(), t0.elapsed(), Duration::from_secs(*budget));
        let status = if out.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {id} {name} ({:.2?}): {}", t0.elapsed(), out.detail);
        failed += usize::from(!out.passed);
    }
    if failed > 0 {
        println!("acceptance: {failed} criterion(s) failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
