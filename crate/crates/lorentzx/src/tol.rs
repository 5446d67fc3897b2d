use serde::{Deserialize, Serialize};

/// Numerical slack shared by every predicate in the crate.
///
/// Cones are closed, so membership is always tested one-sided: a point passes
/// when its slack is `>= -abs_tol`. `rel_tol` enters only when two computed
/// quantities are compared against each other, never in a membership test.
/// `sphere_resolution` sets how many random unit directions the sampled
/// condition batteries draw when no exact reformulation is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub sphere_resolution: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            sphere_resolution: 4096,
        }
    }
}

impl Tolerances {
    pub fn with_abs(abs_tol: f64) -> Self {
        Tolerances {
            abs_tol,
            ..Tolerances::default()
        }
    }

    /// Two-sided comparison of computed quantities: absolute floor plus a
    /// relative term scaled by the larger magnitude.
    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs_tol + self.rel_tol * a.abs().max(b.abs())
    }
}
