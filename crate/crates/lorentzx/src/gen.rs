//! Seeded samplers: cone points, positive operators, and the gap study
//! comparing the condition batteries against the exact decision.

use serde::Serialize;

use crate::cone::{ConeDims, PointPQ};
use crate::error::Result;
use crate::exec;
use crate::linalg::Mat;
use crate::posop::{
    exact_oracle, nc_cols_in_m, nc_column_sums, nc_rows_in_l, sufficient_lambda, Operator, Status,
};
use crate::rng::{domain_stream, RngStream, StreamDomain};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    Interior,
    Boundary,
    /// Fair coin between the two, drawn from the same stream.
    Mix,
}

impl SampleMode {
    fn resolve_boundary(self, rng: &mut RngStream) -> bool {
        match self {
            SampleMode::Interior => false,
            SampleMode::Boundary => true,
            SampleMode::Mix => rng.next_u64() & 1 == 1,
        }
    }
}

/// Draws a point of `M(p,q)`: absolute normals for `x`, then `u = r * d`
/// with a uniform unit direction `d` and radius `r` up to `<x,e>` (equal on
/// the boundary).
pub fn sample_m(dims: ConeDims, rng: &mut RngStream, mode: SampleMode) -> PointPQ {
    let x: Vec<f64> = (0..dims.p()).map(|_| rng.next_gaussian().abs()).collect();
    let d = rng.unit_vector(dims.q());
    let sum: f64 = x.iter().sum();
    let r = if mode.resolve_boundary(rng) {
        sum
    } else {
        sum * rng.next_f64()
    };
    let u = d.into_iter().map(|v| r * v).collect();
    PointPQ::new(dims, x, u).expect("constructed sample has matching dimensions")
}

/// Draws a point of `L(p,q)`: a normal `u`, then `x = ||u|| e + slack` with
/// nonnegative slack (one slack entry zeroed on the boundary).
pub fn sample_l(dims: ConeDims, rng: &mut RngStream, mode: SampleMode) -> PointPQ {
    let u = rng.gaussian_vector(dims.q());
    let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut slack: Vec<f64> = (0..dims.p()).map(|_| rng.next_gaussian().abs()).collect();
    if mode.resolve_boundary(rng) {
        let k = rng.next_index(dims.p());
        slack[k] = 0.0;
    }
    let x = slack.into_iter().map(|s| norm + s).collect();
    PointPQ::new(dims, x, u).expect("constructed sample has matching dimensions")
}

/// Builds an operator that provably maps `M(p,q)` into itself:
/// `A = blkdiag(P, Q)` with `P` entrywise nonnegative, every column sum of
/// `P` at least 1, and `||Q||_2 <= 1`.
///
/// For `(x,u)` in `M`: `Px >= 0`; `<Px,e> = sum_i x_i s_i >= <x,e> >= ||u||
/// >= ||Qu||` where `s_i >= 1` are the column sums. So `(Px, Qu)` is in `M`.
///
/// `Q` is a random rotation product with column sign flips, scaled by a
/// factor in `[0,1]`, which fixes its spectral norm by construction. About a
/// quarter of the draws share one column-sum target across all of `P`; those
/// instances are the ones the quadratic-pencil sufficient condition can
/// certify, which keeps the gap study informative.
pub fn make_positive_operator(dims: ConeDims, rng: &mut RngStream) -> Operator {
    let p = dims.p();
    let q = dims.q();

    let mut pm = Mat::from_fn(p, p, |_, _| rng.next_gaussian().abs());
    let shared_target = rng.next_index(4) == 0;
    let shared = rng.next_range(1.0, 2.0);
    for j in 0..p {
        let target = if shared_target {
            shared
        } else {
            rng.next_range(1.0, 2.0)
        };
        let sum: f64 = (0..p).map(|i| pm[(i, j)]).sum();
        if sum == 0.0 {
            pm[(j, j)] = target;
        } else {
            for i in 0..p {
                pm[(i, j)] *= target / sum;
            }
        }
    }

    let mut qm = Mat::identity(q);
    for a in 0..q {
        for b in a + 1..q {
            let theta = rng.next_range(0.0, 2.0 * std::f64::consts::PI);
            let (s, c) = theta.sin_cos();
            let rot = Mat::from_fn(q, q, |i, j| {
                if i == a && j == a {
                    c
                } else if i == b && j == b {
                    c
                } else if i == a && j == b {
                    -s
                } else if i == b && j == a {
                    s
                } else if i == j {
                    1.0
                } else {
                    0.0
                }
            });
            qm = qm.matmul(&rot);
        }
    }
    let gain = rng.next_f64();
    let mut signs = vec![1.0; q];
    for s in &mut signs {
        if rng.next_u64() & 1 == 1 {
            *s = -1.0;
        }
    }

    let n = dims.n();
    let mat = Mat::from_fn(n, n, |i, j| {
        if i < p && j < p {
            pm[(i, j)]
        } else if i >= p && j >= p {
            gain * signs[j - p] * qm[(i - p, j - p)]
        } else {
            0.0
        }
    });
    Operator::new(dims, mat).expect("constructed operator has matching dimensions")
}

/// One row of the gap study: how often each condition battery agrees with
/// the exact decision on perturbed positive operators.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GapSummary {
    pub dims_p: usize,
    pub dims_q: usize,
    pub n_trials: u64,
    /// Trials the exact decision declares positive.
    pub oracle_positive: u64,
    /// Trials certified by the quadratic-pencil sufficient condition
    /// together with the rows-in-L check.
    pub thm3_certified: u64,
    /// Trials refuted by the row/column/column-sum necessary battery.
    pub refuted_necessary: u64,
    /// Trials the battery cannot refute but the exact decision rejects.
    pub refuted_oracle_only: u64,
}

impl GapSummary {
    pub const CSV_HEADER: &'static str =
        "dims_p,dims_q,n_trials,oracle_positive,thm3_certified,refuted_necessary,refuted_oracle_only";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.dims_p,
            self.dims_q,
            self.n_trials,
            self.oracle_positive,
            self.thm3_certified,
            self.refuted_necessary,
            self.refuted_oracle_only
        )
    }
}

/// Samples `n_trials` operators (a constructed positive operator plus a
/// Gaussian perturbation of the given scale) and tallies how each check
/// classifies them. Trials fork per-index substreams off `rng`, so the tally
/// is independent of the worker count.
pub fn gap_study(
    dims: ConeDims,
    n_trials: u64,
    perturbation: f64,
    rng: &RngStream,
    tol: &Tolerances,
) -> Result<GapSummary> {
    #[derive(Clone)]
    struct Tally {
        positive: u64,
        certified: u64,
        necessary: u64,
        oracle_only: u64,
    }
    let zero = Tally {
        positive: 0,
        certified: 0,
        necessary: 0,
        oracle_only: 0,
    };
    let tally = exec::map_reduce(
        n_trials,
        |trial| {
            let mut stream = rng.substream((StreamDomain::GapStudy as u64) << 48 ^ trial);
            let base = make_positive_operator(dims, &mut stream);
            let n = dims.n();
            let noise = Mat::from_fn(n, n, |_, _| perturbation * stream.next_gaussian());
            let op = Operator::new(dims, base.mat().add(&noise))
                .expect("perturbed operator keeps dimensions");

            let battery_pass = nc_rows_in_l(&op, tol).iter().all(|&b| b)
                && nc_cols_in_m(&op, tol).iter().all(|&b| b)
                && nc_column_sums(&op, tol).iter().flatten().all(|&b| b);
            let certified = sufficient_lambda(&op, tol).ok().flatten().is_some()
                && nc_rows_in_l(&op, tol).iter().all(|&b| b);
            let oracle = exact_oracle(&op, tol);
            let (pos, neg) = match oracle {
                Ok(report) => (
                    report.verdict.status == Status::Positive,
                    report.verdict.status == Status::NotPositive,
                ),
                Err(_) => (false, false),
            };
            Tally {
                positive: pos as u64,
                certified: certified as u64,
                necessary: !battery_pass as u64,
                oracle_only: (battery_pass && neg) as u64,
            }
        },
        zero,
        |a, b| Tally {
            positive: a.positive + b.positive,
            certified: a.certified + b.certified,
            necessary: a.necessary + b.necessary,
            oracle_only: a.oracle_only + b.oracle_only,
        },
    );
    Ok(GapSummary {
        dims_p: dims.p(),
        dims_q: dims.q(),
        n_trials,
        oracle_positive: tally.positive,
        thm3_certified: tally.certified,
        refuted_necessary: tally.necessary,
        refuted_oracle_only: tally.oracle_only,
    })
}

/// Stream for the j-th generated point in a CLI-style point cloud.
pub fn point_stream(seed: u64, index: u64) -> RngStream {
    domain_stream(seed, StreamDomain::PointCloud, index)
}

/// Stream for the j-th generated operator.
pub fn operator_stream(seed: u64, index: u64) -> RngStream {
    domain_stream(seed, StreamDomain::Operators, index)
}
