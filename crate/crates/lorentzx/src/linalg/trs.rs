//! Exact minimization of a quadratic over the unit sphere.
//!
//! For symmetric `Q`, vector `l` and scalar `c`, minimize
//!
//! ```text
//! g(u) = u'Qu + 2 l'u + c    subject to  ||u|| = 1.
//! ```
//!
//! In the eigenbasis `Q = V diag(w) V'` with `b = V'l`, a global minimizer
//! satisfies `(w_j + sigma) y_j = -b_j` for a multiplier `sigma >= -w_min`,
//! and `sigma` solves the secular equation
//!
//! ```text
//! sum_j b_j^2 / (w_j + sigma)^2 = 1.
//! ```
//!
//! The left side is strictly decreasing in `sigma`, so a safeguarded
//! Newton/bisection search on the shifted variable `s = sigma + w_min > 0`
//! finds the root. When `l` has no component in the bottom eigenspace and the
//! remaining terms cannot reach 1 (the hard case), the multiplier sticks at
//! `sigma = -w_min` and the minimizer is completed with an explicit bottom
//! eigenspace contribution.

use crate::error::{Error, Result};
use crate::linalg::mat::{dot, norm2};
use crate::linalg::{sym_eigen, SymMatrix};

#[derive(Debug, Clone)]
pub struct TrsProblem {
    pub q: SymMatrix,
    pub l: Vec<f64>,
    pub c: f64,
}

impl TrsProblem {
    pub fn new(q: SymMatrix, l: Vec<f64>, c: f64) -> Result<Self> {
        if l.len() != q.n() {
            return Err(Error::DimensionMismatch {
                expected: q.n(),
                got: l.len(),
                context: "linear term of sphere problem",
            });
        }
        if !l.iter().all(|v| v.is_finite()) || !c.is_finite() {
            return Err(Error::NonFinite("sphere problem coefficients"));
        }
        Ok(TrsProblem { q, l, c })
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        self.q.quad_form(u) + 2.0 * dot(&self.l, u) + self.c
    }
}

#[derive(Debug, Clone)]
pub struct TrsSolution {
    pub value: f64,
    pub argmin: Vec<f64>,
}

const MAX_ITER: usize = 300;

pub fn trs_min_on_sphere(prob: &TrsProblem) -> Result<TrsSolution> {
    let n = prob.q.n();
    let eig = sym_eigen(&prob.q)?;
    // Ascending order is the natural frame for the secular equation.
    let w: Vec<f64> = eig.values.iter().rev().copied().collect();
    let cols: Vec<Vec<f64>> = (0..n).map(|k| eig.vectors.col(n - 1 - k)).collect();
    let b: Vec<f64> = cols.iter().map(|v| dot(v, &prob.l)).collect();
    let d: Vec<f64> = w.iter().map(|&wj| wj - w[0]).collect();

    let b_norm = norm2(&b);
    let bottom_mass: f64 = b
        .iter()
        .zip(&d)
        .filter(|(_, &dj)| dj == 0.0)
        .map(|(bj, _)| bj * bj)
        .sum();

    let mut y = vec![0.0; n];
    if b_norm == 0.0 {
        y[0] = 1.0;
    } else if bottom_mass == 0.0 && secular_limit(&b, &d) <= 0.0 {
        // Hard case: the multiplier sits at -w_min and the bottom eigenvector
        // absorbs the remaining norm.
        for j in 0..n {
            if d[j] > 0.0 {
                y[j] = -b[j] / d[j];
            }
        }
        let tau = (1.0 - dot(&y, &y)).max(0.0).sqrt();
        y[0] += tau;
    } else {
        let s = solve_secular(&b, &d, b_norm)?;
        for j in 0..n {
            y[j] = -b[j] / (d[j] + s);
        }
    }

    let y_norm = norm2(&y);
    for v in &mut y {
        *v /= y_norm;
    }
    let mut argmin = vec![0.0; n];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            argmin[i] += y[j] * col[i];
        }
    }
    let value = prob.eval(&argmin);
    Ok(TrsSolution { value, argmin })
}

/// Limit of the secular function as `s -> 0+`, with the (zero) bottom terms
/// dropped. Nonpositive means no root exists to the right of the bottom
/// eigenvalue.
fn secular_limit(b: &[f64], d: &[f64]) -> f64 {
    let mut phi = -1.0;
    for j in 0..b.len() {
        if d[j] > 0.0 && b[j] != 0.0 {
            let r = b[j] / d[j];
            phi += r * r;
        }
    }
    phi
}

/// Root of `phi(s) = sum_j b_j^2/(d_j + s)^2 - 1` on `(0, ||b||]`. `phi` is
/// strictly decreasing and convex there, so Newton steps from the left
/// converge monotonically; bisection guards every step.
fn solve_secular(b: &[f64], d: &[f64], b_norm: f64) -> Result<f64> {
    let eval = |s: f64| {
        let mut phi = -1.0;
        let mut dphi = 0.0;
        for j in 0..b.len() {
            if b[j] == 0.0 {
                continue;
            }
            let t = d[j] + s;
            let r2 = (b[j] / t) * (b[j] / t);
            phi += r2;
            dphi -= 2.0 * r2 / t;
        }
        (phi, dphi)
    };

    let mut lo = 0.0f64;
    let mut hi = b_norm;
    let mut s = 0.5 * hi;
    for _ in 0..MAX_ITER {
        let (phi, dphi) = eval(s);
        if phi > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        if phi.abs() <= 1e-15 || hi - lo <= 1e-13 * hi.max(f64::MIN_POSITIVE) {
            return Ok(s);
        }
        let newton = s - phi / dphi;
        s = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    // The bracket shrinks by at least half on bisection steps, so landing
    // here means the function values are dominated by rounding; the midpoint
    // is as good as it gets.
    if hi - lo <= 1e-10 * hi.max(1.0) {
        Ok(0.5 * (lo + hi))
    } else {
        Err(Error::NoConvergence {
            algorithm: "secular equation",
            iterations: MAX_ITER,
        })
    }
}
