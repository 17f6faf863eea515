//! Symmetric 2×2 matrices and the fixed-step finite-difference Hessian.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2(pub [[f64; 2]; 2]);

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn diag(a: f64, b: f64) -> Self {
        Matrix2([[a, 0.0], [0.0, b]])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    pub fn is_symmetric(&self) -> bool {
        self.0[0][1] == self.0[1][0]
    }

    /// Eigenvalues of the symmetric part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.0[0][0];
        let c = self.0[1][1];
        let b = 0.5 * (self.0[0][1] + self.0[1][0]);
        let mean = 0.5 * (a + c);
        let rad = (0.5 * (a - c)).hypot(b);
        if rad == 0.0 {
            return [mean, mean];
        }
        let hi = mean + rad;
        // The smaller root through the determinant avoids cancellation.
        let lo = if hi != 0.0 { (a * c - b * b) / hi } else { mean - rad };
        [lo, hi]
    }

    pub fn inverse(&self) -> Option<Matrix2> {
        let det = self.det();
        if !(det.is_finite() && det != 0.0) {
            return None;
        }
        let m = &self.0;
        Some(Matrix2([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]))
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn sub(&self, other: &Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &other.0);
        Matrix2([[a[0][0] - b[0][0], a[0][1] - b[0][1]], [a[1][0] - b[1][0], a[1][1] - b[1][1]]])
    }

    pub fn mul(&self, other: &Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &other.0);
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Matrix2(out)
    }
}

/// Per-coordinate step `max(1e-4 |x|, 1e-6)`.
pub fn default_steps(x: [f64; 2]) -> [f64; 2] {
    [(1e-4 * x[0].abs()).max(1e-6), (1e-4 * x[1].abs()).max(1e-6)]
}

/// Central-difference Hessian of `-f` at `x`.
///
/// Diagonal entries use the three-point stencil, off-diagonal entries the
/// four-corner stencil; the result is symmetric by construction.
pub fn neg_hessian(f: impl Fn([f64; 2]) -> f64, x: [f64; 2], h: [f64; 2]) -> Matrix2 {
    let f0 = f(x);
    let at = |di: f64, dj: f64| f([x[0] + di, x[1] + dj]);
    let mut m = [[0.0; 2]; 2];
    let (h0, h1) = (h[0], h[1]);
    m[0][0] = -(at(h0, 0.0) - 2.0 * f0 + at(-h0, 0.0)) / (h0 * h0);
    m[1][1] = -(at(0.0, h1) - 2.0 * f0 + at(0.0, -h1)) / (h1 * h1);
    let cross = (at(h0, h1) - at(h0, -h1) - at(-h0, h1) + at(-h0, -h1)) / (4.0 * h0 * h1);
    m[0][1] = -cross;
    m[1][0] = -cross;
    Matrix2(m)
}
