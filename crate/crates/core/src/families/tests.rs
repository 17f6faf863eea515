use super::*;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn std_window() -> Window {
    Window::new(500.0, 10_000.0).unwrap()
}

/// Textbook closed forms of the truncated cdf on (d, u), written with plain powers.
fn ltrc_cdf_closed_form(family: Family, p: &Params, d: f64, x: f64) -> f64 {
    let (a, t) = (p.p1, p.p2);
    match family {
        Family::Fisk => (x.powf(a) - d.powf(a)) / (x.powf(a) + t.powf(a)),
        Family::Frechet => {
            let fx = (-(t / x).powf(a)).exp();
            let fd = (-(t / d).powf(a)).exp();
            (fx - fd) / (1.0 - fd)
        }
        Family::Lognormal => {
            let cx = normal::cdf((x.ln() - p.p1) / p.p2);
            let cd = normal::cdf((d.ln() - p.p1) / p.p2);
            (cx - cd) / (1.0 - cd)
        }
        Family::Lomax => 1.0 - ((d + t) / (x + t)).powf(a),
        Family::Paralogistic => 1.0 - ((t.powf(a) + d.powf(a)) / (t.powf(a) + x.powf(a))).powf(a),
        Family::Weibull => 1.0 - ((d / t).powf(a) - (x / t).powf(a)).exp(),
    }
}

/// Family-specific log-likelihood expressions with the censoring and
/// truncation terms written out per family.
fn loglik_closed_form(family: Family, p: &Params, s: &LtrcSample) -> f64 {
    let (a, t) = (p.p1, p.p2);
    let w = s.window();
    let (d, u) = (w.d, w.u);
    let n = s.len() as f64;
    let m = s.n_censored() as f64;
    let xs = s.uncensored();
    match family {
        Family::Fisk => {
            let h = |x: f64| x.powf(a) + t.powf(a);
            let body: f64 = xs.iter().map(|&x| a.ln() + (a - 1.0) * x.ln() - 2.0 * h(x).ln()).sum();
            let cens = if m > 0.0 { -m * h(u).ln() } else { 0.0 };
            body + cens + n * h(d).ln()
        }
        Family::Frechet => {
            let sf = |x: f64| 1.0 - (-(t / x).powf(a)).exp();
            let body: f64 = xs
                .iter()
                .map(|&x| a.ln() + a * t.ln() - (a + 1.0) * x.ln() - (t / x).powf(a))
                .sum();
            let cens = if m > 0.0 { m * sf(u).ln() } else { 0.0 };
            let trunc = if d > 0.0 { n * sf(d).ln() } else { 0.0 };
            body + cens - trunc
        }
        Family::Lognormal => {
            let (mu, sg) = (p.p1, p.p2);
            let c = |x: f64| (x.ln() - mu) / sg;
            let body: f64 = xs
                .iter()
                .map(|&x| -sg.ln() - x.ln() + normal::pdf(c(x)).ln())
                .sum();
            // 1 - Φ(c) written as Φ(-c) to avoid cancellation in the tail.
            let cens = if m > 0.0 { m * normal::cdf(-c(u)).ln() } else { 0.0 };
            let trunc = if d > 0.0 { n * normal::cdf(-c(d)).ln() } else { 0.0 };
            body + cens - trunc
        }
        Family::Lomax => {
            let body: f64 = xs.iter().map(|&x| a.ln() - (a + 1.0) * (x + t).ln()).sum();
            let cens = if m > 0.0 { -m * a * (u + t).ln() } else { 0.0 };
            body + cens + n * a * (d + t).ln()
        }
        Family::Paralogistic => {
            let g = |x: f64| t.powf(a) + x.powf(a);
            let body: f64 = xs
                .iter()
                .map(|&x| 2.0 * a.ln() + (a - 1.0) * x.ln() - (a + 1.0) * g(x).ln())
                .sum();
            let cens = if m > 0.0 { -m * a * g(u).ln() } else { 0.0 };
            body + cens + n * a * g(d).ln()
        }
        Family::Weibull => {
            let body: f64 = xs
                .iter()
                .map(|&x| a.ln() - x.ln() + a * x.ln() - a * t.ln() - (x / t).powf(a))
                .sum();
            let cens = if m > 0.0 { -m * (u / t).powf(a) } else { 0.0 };
            body + cens + n * (d / t).powf(a)
        }
    }
}

/// Representative parameters for the (500, 10000) window, one per family.
fn reference_params(family: Family) -> Params {
    match family {
        Family::Fisk => Params::new(1.31, 2667.0),
        Family::Frechet => Params::new(1.43, 2125.0),
        Family::Lognormal => Params::new(7.87, 1.29),
        Family::Lomax => Params::new(8.69, 41007.0),
        Family::Paralogistic => Params::new(1.24, 3533.0),
        Family::Weibull => Params::new(0.96, 5150.0),
    }
}

fn random_sample(family: Family, p: &Params, w: &Window, n: usize, seed: u64) -> LtrcSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p_u = family.censor_prob(p, w).unwrap();
    let mut xs = Vec::new();
    let mut m = 0;
    for _ in 0..n {
        let q: f64 = rng.gen_range(1e-12..1.0);
        if q >= p_u {
            m += 1;
        } else {
            let x = family.ltrc_qf(p, w, q).unwrap();
            if x > w.d && x < w.u {
                xs.push(x);
            }
        }
    }
    LtrcSample::new(xs, m, *w).unwrap()
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[test]
fn fisk_density_at_scale() {
    let p = Params::new(1.31, 2667.0);
    let got = Family::Fisk.pdf(&p, 2667.0).unwrap();
    assert!(close(got, 1.31 / (4.0 * 2667.0), 1e-13));
    assert!(close(got, 1.2279e-4, 1e-4));
}

#[test]
fn weibull_unit_shape_is_exponential() {
    let p = Params::new(1.0, 5150.0);
    let got = Family::Weibull.pdf(&p, 1e-4).unwrap();
    assert!(close(got, (1.0 / 5150.0) * (-1e-4 / 5150.0f64).exp(), 1e-13));
}

#[test]
fn lomax_density_matches_high_precision() {
    // alpha theta^alpha / (x + theta)^(alpha + 1) at 40 digits (mpmath).
    let got = Family::Lomax.pdf(&Params::new(8.69, 41007.0), 500.0).unwrap();
    assert!(close(got, 1.884342952653079e-4, 1e-12), "{got}");
}

#[test]
fn density_rejects_nonpositive_points() {
    let p = Params::new(1.0, 1.0);
    assert!(matches!(Family::Fisk.pdf(&p, 0.0), Err(Error::Domain(_))));
    assert!(matches!(Family::Weibull.cdf(&p, -1.0), Err(Error::Domain(_))));
}

#[test]
fn parameters_are_validated() {
    assert!(Family::Weibull.validate(&Params::new(-1.0, 2.0)).is_err());
    assert!(Family::Weibull.validate(&Params::new(1.0, 0.0)).is_err());
    assert!(Family::Lognormal.validate(&Params::new(-3.0, 2.0)).is_ok());
    assert!(Family::Lognormal.validate(&Params::new(3.0, -2.0)).is_err());
}

#[test]
fn anchor_cdf_values() {
    let f = Family::Fisk.cdf(&Params::new(1.31, 2667.0), 500.0).unwrap();
    assert!((f - 0.10).abs() < 5e-4, "{f}");
    let f = Family::Lognormal.cdf(&Params::new(7.87, 1.29), 10_000.0).unwrap();
    assert!((f - 0.85).abs() < 1e-3, "{f}");
    assert!((f - 0.8506031067275673).abs() < 1e-14, "{f}");
    for a in [0.3, 1.0, 4.5] {
        assert!(close(Family::Fisk.cdf(&Params::new(a, 321.0), 321.0).unwrap(), 0.5, 1e-15));
    }
}

#[test]
fn quantile_examples() {
    for a in [0.46, 1.31, 7.0] {
        let q = Family::Fisk.qf(&Params::new(a, 2667.0), 0.5).unwrap();
        assert!(close(q, 2667.0, 1e-12));
    }
    let q = Family::Lognormal.qf(&Params::new(7.87, 1.29), 0.85).unwrap();
    assert!(close(q, 9966.642764000657, 1e-13), "{q}");
    assert!(Family::Weibull.qf(&Params::new(1.0, 1.0), 0.0).is_err());
    assert!(Family::Weibull.qf(&Params::new(1.0, 1.0), 1.0).is_err());
}

#[test]
fn ltrc_cdf_endpoints_and_fisk_example() {
    let w = std_window();
    for fam in Family::ALL {
        let p = reference_params(fam);
        assert_eq!(fam.ltrc_cdf(&p, &w, w.d).unwrap(), 0.0);
        assert_eq!(fam.ltrc_cdf(&p, &w, w.u).unwrap(), 1.0);
    }
    let p = Params::new(1.31, 2667.0);
    let generic = Family::Fisk.ltrc_cdf(&p, &w, 2000.0).unwrap();
    let f = |x: f64| Family::Fisk.cdf(&p, x).unwrap();
    let ratio = (f(2000.0) - f(500.0)) / (1.0 - f(500.0));
    let closed = ltrc_cdf_closed_form(Family::Fisk, &p, 500.0, 2000.0);
    assert!((generic - ratio).abs() < 1e-12);
    assert!((generic - closed).abs() < 1e-12);
}

#[test]
fn ltrc_cdf_degenerate_window() {
    // Weibull with tiny scale: essentially all mass below d.
    let p = Params::new(2.0, 1.0);
    let w = Window::new(500.0, 1e4).unwrap();
    assert!(matches!(
        Family::Weibull.ltrc_cdf(&p, &w, 600.0),
        Err(Error::DegenerateWindow { .. })
    ));
    assert!(Family::Weibull.censor_prob(&p, &w).is_err());
}

#[test]
fn censor_probability_routes_agree() {
    let p = Params::new(1.31, 2667.0);
    let w = std_window();
    let p_u = Family::Fisk.censor_prob(&p, &w).unwrap();
    // Caption values F(d)=0.10, F(u)=0.85 give (0.85 - 0.10) / 0.90.
    assert!((p_u - 0.75 / 0.9).abs() < 1e-3, "{p_u}");
    let (a, t) = (1.31f64, 2667.0f64);
    let (d, u) = (500.0f64, 10_000.0f64);
    let simplified = (u.powf(a) - d.powf(a)) / (u.powf(a) + t.powf(a));
    let displayed = (u / t).powf(a) * (d.powf(a) + t.powf(a)) / (u.powf(a) + t.powf(a)) - (d / t).powf(a);
    assert!((p_u - simplified).abs() < 1e-12);
    assert!((p_u - displayed).abs() < 1e-12);

    for fam in Family::ALL {
        let pp = reference_params(fam);
        assert_eq!(fam.censor_prob(&pp, &Window::new(500.0, f64::INFINITY).unwrap()).unwrap(), 1.0);
        let p_u = fam.censor_prob(&pp, &w).unwrap();
        let mut eps = 1.0;
        let mut last = f64::INFINITY;
        for _ in 0..8 {
            let gap = (fam.ltrc_cdf(&pp, &w, w.u - eps).unwrap() - p_u).abs();
            assert!(gap <= last + 1e-15);
            last = gap;
            eps /= 10.0;
        }
        assert!(last < 1e-9, "{fam}: {last}");
    }
}

#[test]
fn ltrc_quantile_branches() {
    let w = std_window();
    for fam in Family::ALL {
        let p = reference_params(fam);
        assert_eq!(fam.ltrc_qf(&p, &w, 0.0).unwrap(), w.d);
        let p_u = fam.censor_prob(&p, &w).unwrap();
        assert_eq!(fam.ltrc_qf(&p, &w, p_u).unwrap(), w.u);
        assert_eq!(fam.ltrc_qf(&p, &w, 1.0).unwrap(), w.u);
    }
    assert!(Family::Fisk.ltrc_qf(&Params::new(1.0, 1.0), &w, 1.5).is_err());
}

#[test]
fn lomax_ltrc_quantile_against_bisection() {
    let p = Params::new(8.69, 41007.0);
    let w = std_window();
    let q = 0.4;
    let got = Family::Lomax.ltrc_qf(&p, &w, q).unwrap();
    let closed = (1.0f64 - q).powf(-1.0 / 8.69) * (500.0 + 41007.0) - 41007.0;
    assert!(close(got, closed, 1e-10));
    let (mut lo, mut hi) = (w.d, w.u);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if Family::Lomax.ltrc_cdf(&p, &w, mid).unwrap() < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!(close(got, 0.5 * (lo + hi), 1e-10));
}

#[test]
fn loglik_without_window_is_density_sum() {
    let w = Window::complete();
    for fam in Family::ALL {
        let p = reference_params(fam);
        let xs = vec![120.0, 900.0, 2500.0, 14000.0];
        let s = LtrcSample::new(xs.clone(), 0, w).unwrap();
        let direct: f64 = xs.iter().map(|&x| fam.pdf(&p, x).unwrap().ln()).sum();
        assert!((fam.loglik(&p, &s) - direct).abs() < 1e-9, "{fam}");
    }
}

#[test]
fn loglik_all_censored() {
    let w = std_window();
    for fam in Family::ALL {
        let p = reference_params(fam);
        let s = LtrcSample::new(vec![], 7, w).unwrap();
        let expect = 7.0 * (fam.sf(&p, w.u).unwrap() / fam.sf(&p, w.d).unwrap()).ln();
        assert!((fam.loglik(&p, &s) - expect).abs() < 1e-9, "{fam}");
    }
}

#[test]
fn loglik_invalid_is_negative_infinity() {
    let s = LtrcSample::new(vec![600.0, 700.0], 1, std_window()).unwrap();
    assert_eq!(Family::Fisk.loglik(&Params::new(-1.0, 3.0), &s), f64::NEG_INFINITY);
    // Survival at u underflows to zero.
    assert_eq!(Family::Weibull.loglik(&Params::new(400.0, 800.0), &s), f64::NEG_INFINITY);
}

#[test]
fn loglik_generic_matches_family_forms_on_seeded_samples() {
    let w = std_window();
    for (i, fam) in Family::ALL.into_iter().enumerate() {
        let p = reference_params(fam);
        let s = random_sample(fam, &p, &w, 300, 40 + i as u64);
        let generic = fam.loglik(&p, &s);
        let special = loglik_closed_form(fam, &p, &s);
        assert!((generic - special).abs() < 1e-9, "{fam}: {generic} vs {special}");
    }
}

#[test]
fn density_integrates_to_one() {
    for fam in Family::ALL {
        let p = reference_params(fam);
        let lo = fam.qf(&p, 1e-13).unwrap().ln();
        let hi = fam.qf(&p, 1.0 - 1e-8).unwrap().ln();
        let f = |s: f64| {
            let x = s.exp();
            fam.pdf(&p, x).unwrap() * x
        };
        let mass = adaptive_simpson(&f, lo, hi, 1e-12);
        assert!(mass >= 1.0 - 1e-6, "{fam}: {mass}");
        assert!(mass <= 1.0 + 1e-6, "{fam}: {mass}");
    }
}

#[test]
fn sample_validation() {
    let w = std_window();
    assert!(LtrcSample::new(vec![400.0], 0, w).is_err());
    assert!(LtrcSample::new(vec![10_000.0], 0, w).is_err());
    assert!(LtrcSample::new(vec![], 0, w).is_err());
    assert!(LtrcSample::new(vec![600.0], 2, Window::new(500.0, f64::INFINITY).unwrap()).is_err());
    let s = LtrcSample::new(vec![900.0, 600.0], 3, w).unwrap();
    assert_eq!(s.uncensored(), &[600.0, 900.0]);
    assert_eq!(s.len(), 5);
    assert!(Window::new(5.0, 5.0).is_err());
    assert!(Window::new(-1.0, 5.0).is_err());
}

#[test]
fn family_names_round_trip() {
    for fam in Family::ALL {
        assert_eq!(fam.name().parse::<Family>().unwrap(), fam);
        assert_eq!(fam.to_string().parse::<Family>().unwrap(), fam);
    }
    assert_eq!("logn".parse::<Family>().unwrap(), Family::Lognormal);
    assert!("gamma".parse::<Family>().is_err());
}

fn family_strategy() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

/// Parameters spanning the shapes the study and fits actually visit.
fn params_strategy(fam: Family) -> BoxedStrategy<Params> {
    match fam {
        Family::Lognormal => (4.0..9.0f64, 0.3..3.5f64).prop_map(|(m, s)| Params::new(m, s)).boxed(),
        Family::Lomax => (0.3..9.0f64, 50.0..50_000.0f64).prop_map(|(a, t)| Params::new(a, t)).boxed(),
        _ => (0.25..4.0f64, 100.0..8000.0f64).prop_map(|(a, t)| Params::new(a, t)).boxed(),
    }
}

fn model_strategy() -> impl Strategy<Value = (Family, Params)> {
    family_strategy().prop_flat_map(|f| (Just(f), params_strategy(f)))
}

proptest! {
    #[test]
    fn cdf_is_monotone((fam, p) in model_strategy(), mut xs in prop::collection::vec(1.0..1e5f64, 2..40)) {
        xs.sort_by(f64::total_cmp);
        let mut prev = 0.0;
        for x in xs {
            let f = fam.cdf(&p, x).unwrap();
            prop_assert!(f >= prev);
            prop_assert!((0.0..=1.0).contains(&f));
            prev = f;
        }
    }

    #[test]
    fn quantile_round_trips((fam, p) in model_strategy(), lp in -6.0..-1e-6f64, upper in any::<bool>()) {
        let q = if upper { -lp.exp_m1() } else { lp.exp() };
        let q = q.clamp(1e-6, 1.0 - 1e-6);
        let x = fam.qf(&p, q).unwrap();
        let back = fam.cdf(&p, x).unwrap();
        prop_assert!((back - q).abs() <= 1e-9 * q.min(1.0 - q).max(1e-300) + 1e-15, "{} {:?} q={} back={}", fam, p, q, back);
        let x2 = fam.qf(&p, back).unwrap();
        prop_assert!(close(x, x2, 1e-9));
    }

    #[test]
    fn generic_ltrc_cdf_matches_closed_forms((fam, p) in model_strategy(), frac in 0.0..1.0f64) {
        let w = Window::new(500.0, 10_000.0).unwrap();
        prop_assume!(fam.censor_prob(&p, &w).is_ok());
        let x = 500.0 + frac * 9500.0;
        prop_assume!(x > 500.0 && x < 10_000.0);
        let generic = fam.ltrc_cdf(&p, &w, x).unwrap();
        let closed = ltrc_cdf_closed_form(fam, &p, 500.0, x);
        prop_assert!((generic - closed).abs() < 1e-12, "{} {:?} x={} {} vs {}", fam, p, x, generic, closed);
    }

    #[test]
    fn ltrc_quantile_inverts_ltrc_cdf((fam, p) in model_strategy(), q in 0.0..1.0f64) {
        let w = Window::new(500.0, 10_000.0).unwrap();
        let Ok(p_u) = fam.censor_prob(&p, &w) else { return Ok(()); };
        prop_assume!(q < p_u);
        let x = fam.ltrc_qf(&p, &w, q).unwrap();
        prop_assert!(x >= w.d && x <= w.u);
        let back = fam.ltrc_cdf(&p, &w, x).unwrap();
        prop_assert!((back - q).abs() < 1e-9, "{} {:?} q={} back={}", fam, p, q, back);
    }

    #[test]
    fn generic_loglik_matches_family_forms((fam, p) in model_strategy(), seed in 0u64..1000) {
        let w = Window::new(500.0, 10_000.0).unwrap();
        let Ok(p_u) = fam.censor_prob(&p, &w) else { return Ok(()); };
        prop_assume!(p_u > 0.05);
        let s = random_sample(fam, &p, &w, 60, seed);
        prop_assume!(s.n_uncensored() > 0);
        let generic = fam.loglik(&p, &s);
        let special = loglik_closed_form(fam, &p, &s);
        prop_assert!((generic - special).abs() < 1e-9, "{} {:?}: {} vs {}", fam, p, generic, special);
    }
}
