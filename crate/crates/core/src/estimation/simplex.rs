//! Nelder–Mead simplex minimization in two dimensions.

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    /// Stop when `max f - min f` over the simplex falls below this.
    pub f_tol: f64,
    pub max_iter: usize,
    /// Edge length of the initial right-angled simplex.
    pub step: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { f_tol: 1e-10, max_iter: 2000, step: 0.25 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Outcome {
    pub x: [f64; 2],
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Non-finite objective values are treated as `+inf`.
pub fn minimize(f: impl Fn([f64; 2]) -> f64, start: [f64; 2], settings: &Settings) -> Outcome {
    let eval = |x: [f64; 2]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let s = settings.step;
    let mut pts = [start, [start[0] + s, start[1]], [start[0], start[1] + s]];
    let mut vals = [eval(pts[0]), eval(pts[1]), eval(pts[2])];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < settings.max_iter {
        // Sort ascending; the stable sort keeps earlier vertices first on ties.
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = [pts[idx[0]], pts[idx[1]], pts[idx[2]]];
        vals = [vals[idx[0]], vals[idx[1]], vals[idx[2]]];

        let spread = vals[2] - vals[0];
        if vals[0].is_finite() && spread < settings.f_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid = lerp(pts[0], pts[1], 0.5);
        let worst = pts[2];
        let xr = lerp(centroid, worst, -1.0);
        let fr = eval(xr);
        if fr < vals[0] {
            let xe = lerp(centroid, worst, -2.0);
            let fe = eval(xe);
            if fe < fr {
                pts[2] = xe;
                vals[2] = fe;
            } else {
                pts[2] = xr;
                vals[2] = fr;
            }
            continue;
        }
        if fr < vals[1] {
            pts[2] = xr;
            vals[2] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[2] {
            let xc = lerp(centroid, xr, 0.5);
            (xc, eval(xc))
        } else {
            let xc = lerp(centroid, worst, 0.5);
            (xc, eval(xc))
        };
        if fc < vals[2].min(fr) {
            pts[2] = xc;
            vals[2] = fc;
            continue;
        }
        for i in 1..3 {
            pts[i] = lerp(pts[0], pts[i], 0.5);
            vals[i] = eval(pts[i]);
        }
        // A simplex collapsed to the best vertex cannot move any further.
        if pts[1] == pts[0] && pts[2] == pts[0] {
            converged = vals[0].is_finite();
            break;
        }
    }
    let best = (0..3).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap();
    Outcome { x: pts[best], fx: vals[best], iterations, converged }
}
