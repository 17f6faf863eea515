//! Percentile matching: choose the two parameters of a family so that its
//! cdf passes through `(d, p_d)` and `(u, p_u)`.

use crate::error::{Error, Result};
use crate::families::{normal, Family, Params};

const NEWTON_MAX_ITER: usize = 100;
const RESIDUAL_TOL: f64 = 1e-14;
const ACCEPT_TOL: f64 = 1e-10;

/// Solve `F(d) = p_d` and `F(u) = p_u` for the family's parameters.
///
/// Fisk, Frechet, Lognormal and Weibull have closed forms; Lomax and
/// Paralogistic use a damped Newton iteration with a bisection fallback.
pub fn percentile_match(family: Family, d: f64, p_d: f64, u: f64, p_u: f64) -> Result<Params> {
    check_inputs(d, p_d, u, p_u)?;
    let params = match closed_form(family, d, p_d, u, p_u) {
        Some(p) => p,
        None => solve_numeric(family, d, p_d, u, p_u)?,
    };
    accept(family, params, d, p_d, u, p_u)
}

/// Same constraints, always solved by the iterative path.
pub fn percentile_match_numeric(family: Family, d: f64, p_d: f64, u: f64, p_u: f64) -> Result<Params> {
    check_inputs(d, p_d, u, p_u)?;
    let params = solve_numeric(family, d, p_d, u, p_u)?;
    accept(family, params, d, p_d, u, p_u)
}

fn check_inputs(d: f64, p_d: f64, u: f64, p_u: f64) -> Result<()> {
    if !(d.is_finite() && d > 0.0 && u.is_finite() && u > d) {
        return Err(Error::Domain(format!("need 0 < d < u < inf, got d = {d}, u = {u}")));
    }
    if !(p_d > 0.0 && p_d < p_u && p_u < 1.0) {
        return Err(Error::Domain(format!("need 0 < p_d < p_u < 1, got p_d = {p_d}, p_u = {p_u}")));
    }
    Ok(())
}

fn accept(family: Family, params: Params, d: f64, p_d: f64, u: f64, p_u: f64) -> Result<Params> {
    family.validate(&params)?;
    let ed = (family.cdf(&params, d)? - p_d).abs();
    let eu = (family.cdf(&params, u)? - p_u).abs();
    if ed < ACCEPT_TOL && eu < ACCEPT_TOL {
        Ok(params)
    } else {
        Err(Error::NoSolution {
            family,
            detail: format!("residuals |F(d) - p_d| = {ed:.3e}, |F(u) - p_u| = {eu:.3e}"),
        })
    }
}

/// Families whose cdf is linear in `ln x` after a link `g`.
fn closed_form(family: Family, d: f64, p_d: f64, u: f64, p_u: f64) -> Option<Params> {
    let link = |p: f64| -> f64 {
        match family {
            Family::Fisk => (p / (1.0 - p)).ln(),
            Family::Weibull => (-(-p).ln_1p()).ln(),
            Family::Frechet => -(-p.ln()).ln(),
            _ => normal::quantile(p),
        }
    };
    let (ld, lu) = (d.ln(), u.ln());
    let (gd, gu) = (link(p_d), link(p_u));
    match family {
        Family::Fisk | Family::Weibull | Family::Frechet => {
            let alpha = (gu - gd) / (lu - ld);
            Some(Params::new(alpha, (ld - gd / alpha).exp()))
        }
        Family::Lognormal => {
            let sigma = (lu - ld) / (gu - gd);
            Some(Params::new(ld - sigma * gd, sigma))
        }
        Family::Lomax | Family::Paralogistic => None,
    }
}

/// Unconstrained coordinates: `(ln alpha, ln theta)`, or `(mu, ln sigma)`.
fn to_coords(family: Family, p: &Params) -> [f64; 2] {
    match family {
        Family::Lognormal => [p.p1, p.p2.ln()],
        _ => [p.p1.ln(), p.p2.ln()],
    }
}

fn from_coords(family: Family, v: [f64; 2]) -> Params {
    match family {
        Family::Lognormal => Params::new(v[0], v[1].exp()),
        _ => Params::new(v[0].exp(), v[1].exp()),
    }
}

fn residual(family: Family, v: [f64; 2], d: f64, p_d: f64, u: f64, p_u: f64) -> Option<[f64; 2]> {
    let p = from_coords(family, v);
    let sd = family.sf(&p, d).ok()?;
    let su = family.sf(&p, u).ok()?;
    let r = [sd.ln() - (-p_d).ln_1p(), su.ln() - (-p_u).ln_1p()];
    (r[0].is_finite() && r[1].is_finite()).then_some(r)
}

fn norm(r: [f64; 2]) -> f64 {
    r[0].abs().max(r[1].abs())
}

fn newton(family: Family, start: [f64; 2], d: f64, p_d: f64, u: f64, p_u: f64) -> Option<[f64; 2]> {
    let f = |v: [f64; 2]| residual(family, v, d, p_d, u, p_u);
    let mut v = start;
    let mut r = f(v)?;
    for _ in 0..NEWTON_MAX_ITER {
        if norm(r) < RESIDUAL_TOL {
            return Some(v);
        }
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let h = 1e-6 * v[j].abs().max(1.0);
            let mut vp = v;
            let mut vm = v;
            vp[j] += h;
            vm[j] -= h;
            let (rp, rm) = (f(vp)?, f(vm)?);
            for i in 0..2 {
                jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if !(det.is_finite() && det != 0.0) {
            return None;
        }
        let step = [
            (jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
            (jac[0][0] * r[1] - jac[1][0] * r[0]) / det,
        ];
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let cand = [v[0] - lambda * step[0], v[1] - lambda * step[1]];
            if let Some(rc) = f(cand) {
                if norm(rc) < norm(r) {
                    v = cand;
                    r = rc;
                    improved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !improved {
            return (norm(r) < 1e-12).then_some(v);
        }
    }
    (norm(r) < 1e-12).then_some(v)
}

/// Scale that puts the `p_d` quantile at `d` for a given shape.
fn scale_for(family: Family, shape: f64, d: f64, p_d: f64) -> Option<f64> {
    let q = family.qf(&Params::new(shape, 1.0), p_d).ok()?;
    let theta = d / q;
    (theta.is_finite() && theta > 0.0).then_some(theta)
}

/// Outer bisection on `ln alpha`; the scale follows from the `d` condition.
fn bisect(family: Family, d: f64, p_d: f64, u: f64, p_u: f64) -> Option<[f64; 2]> {
    let target = (u / d).ln();
    let g = |la: f64| -> Option<f64> {
        let p = Params::new(la.exp(), 1.0);
        let qd = family.qf(&p, p_d).ok()?;
        let qu = family.qf(&p, p_u).ok()?;
        let r = (qu / qd).ln() - target;
        r.is_finite().then_some(r)
    };
    let (mut lo, mut hi) = (-8.0f64, 8.0f64);
    let (mut glo, ghi) = (g(lo)?, g(hi)?);
    if glo.signum() == ghi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid)?;
        if gm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    let la = 0.5 * (lo + hi);
    let theta = scale_for(family, la.exp(), d, p_d)?;
    Some([la, theta.ln()])
}

fn solve_numeric(family: Family, d: f64, p_d: f64, u: f64, p_u: f64) -> Result<Params> {
    let mut starts = Vec::new();
    if family == Family::Lognormal {
        starts.push([0.5 * (d.ln() + u.ln()), 0.0]);
    } else {
        if let Some(p) = closed_form(Family::Weibull, d, p_d, u, p_u) {
            starts.push(to_coords(family, &p));
        }
        if let Some(theta) = scale_for(family, 1.0, d, p_d) {
            starts.push([0.0, theta.ln()]);
        }
    }
    for s in &starts {
        if let Some(v) = newton(family, *s, d, p_d, u, p_u) {
            return Ok(from_coords(family, v));
        }
    }
    if family != Family::Lognormal {
        if let Some(v) = bisect(family, d, p_d, u, p_u) {
            // Polish the bracketed solution; keep it if Newton cannot improve.
            let v = newton(family, v, d, p_d, u, p_u).unwrap_or(v);
            return Ok(from_coords(family, v));
        }
    }
    Err(Error::NoSolution {
        family,
        detail: format!("no root for F({d}) = {p_d}, F({u}) = {p_u} from any start"),
    })
}
