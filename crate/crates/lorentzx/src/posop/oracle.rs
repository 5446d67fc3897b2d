//! Exact positivity decision for `M(p,q)`.
//!
//! Every point of `M` is a nonnegative combination of the generators
//! `(e_i, u)` with `u` on the unit sphere: split `x` along coordinates and
//! spread `u` across them. So `A M subset M` holds exactly when every mapped
//! generator `A (e_i, u)` stays in `M`, and that quantifier over the sphere
//! collapses to finitely many clauses:
//!
//! * rows: component `k` of the mapped first block is
//!   `(A11)_ki + (row k of A12) . u`, minimized over `i` and unit `u` at
//!   `rho_k = min_i (A11)_ki - ||row k of A12||`.
//! * sign: the mapped first-block sum is `s_i + w . u` with `s_i` the `i`-th
//!   column sum of `A11` and `w = A12' e`; its sphere minimum is
//!   `s_i - ||w||`, and a nonnegative sum is required before squaring.
//! * sphere: given the sign clause, `(s_i + w.u)^2 - ||A21 e_i + A22 u||^2`
//!   must be nonnegative on the sphere; its minimum is a trust-region
//!   subproblem with `Q = w w' - A22' A22`, `l = s_i w - A22' c_i`,
//!   `c = s_i^2 - ||c_i||^2`.
//!
//! All clauses nonnegative implies positivity; any clause negative yields a
//! concrete generator mapped outside `M`. The verdict reports the generator
//! with the smallest mapped slack among the clause minimizers, so refutations
//! carry a witness that re-verifies by plain cone membership. When the clause
//! minimum and the witness slack straddle the tolerance (possible because the
//! sphere clause is quadratic in scale while membership slack is linear) the
//! status is `Unknown`.

use crate::error::Result;
use crate::linalg::{trs_min_on_sphere, SymMatrix, TrsProblem};
use crate::posop::verdict::{Certificate, CheckResult, Status, Verdict};
use crate::posop::Operator;
use crate::tol::Tolerances;

/// Outcome of the exact decision, with the raw clause minimum kept for
/// diagnostics and gap studies.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub verdict: Verdict,
    /// Minimum over all clauses; rows and sign clauses are linear in `A`,
    /// sphere clauses quadratic.
    pub clause_min: f64,
}

struct Candidate {
    i: usize,
    u: Vec<f64>,
}

/// Unit vector opposing `v`, or the first coordinate direction when `v = 0`.
fn opposing_unit(v: &[f64]) -> Vec<f64> {
    let norm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
    if norm == 0.0 {
        let mut u = vec![0.0; v.len()];
        u[0] = 1.0;
        u
    } else {
        v.iter().map(|t| -t / norm).collect()
    }
}

/// Decides whether `A M(p,q) subset M(p,q)`, up to the absolute tolerance.
pub fn exact_oracle(op: &Operator, tol: &Tolerances) -> Result<OracleReport> {
    let p = op.dims().p();
    let q = op.dims().q();
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut clause_min = f64::INFINITY;

    let mut rows_min = f64::INFINITY;
    for k in 0..p {
        let row = op.row_point(k)?;
        let (i_star, entry) = row
            .x()
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (j, &v)| if v < acc.1 { (j, v) } else { acc });
        let rho = entry - row.u_norm();
        rows_min = rows_min.min(rho);
        clause_min = clause_min.min(rho);
        candidates.push(Candidate {
            i: i_star,
            u: opposing_unit(row.u()),
        });
    }

    let w: Vec<f64> = (0..q).map(|j| (0..p).map(|k| op.a12()[(k, j)]).sum()).collect();
    let w_norm = w.iter().map(|t| t * t).sum::<f64>().sqrt();
    let against_w = opposing_unit(&w);
    let a22t = op.a22().transpose();
    let gram22 = a22t.matmul(op.a22());
    let qmat = SymMatrix::from_fn(q, |a, b| w[a] * w[b] - gram22[(a, b)]);

    let mut sign_min = f64::INFINITY;
    let mut sphere_min = f64::INFINITY;
    for i in 0..p {
        let s_i: f64 = (0..p).map(|k| op.a11()[(k, i)]).sum();
        sign_min = sign_min.min(s_i - w_norm);
        clause_min = clause_min.min(s_i - w_norm);
        candidates.push(Candidate {
            i,
            u: against_w.clone(),
        });

        let c_i = op.a21().col(i);
        let atc = a22t.mul_vec(&c_i);
        let l: Vec<f64> = (0..q).map(|j| s_i * w[j] - atc[j]).collect();
        let c = s_i * s_i - c_i.iter().map(|t| t * t).sum::<f64>();
        let prob = TrsProblem::new(qmat.clone(), l, c)?;
        let sol = trs_min_on_sphere(&prob)?;
        sphere_min = sphere_min.min(sol.value);
        clause_min = clause_min.min(sol.value);
        // Both poles of the minimizing axis: the quadratic minimizer can sit
        // at a large mapped norm while the opposite pole has the smaller
        // membership slack.
        candidates.push(Candidate {
            i,
            u: sol.argmin.iter().map(|t| -t).collect(),
        });
        candidates.push(Candidate { i, u: sol.argmin });
    }

    let mut tightest: Option<(usize, Vec<f64>, f64)> = None;
    for cand in candidates {
        let slack = op.mapped_generator(cand.i, &cand.u)?.m_slack();
        if tightest.as_ref().map_or(true, |t| slack < t.2) {
            tightest = Some((cand.i, cand.u, slack));
        }
    }
    let (wi, wu, wslack) = tightest.expect("p >= 1 guarantees candidates");

    let mut checks = vec![
        CheckResult::new(
            "rows_in_l",
            rows_min >= -tol.abs_tol,
            format!("minimum row slack {rows_min:.6e}"),
        ),
        CheckResult::new(
            "sign",
            sign_min >= -tol.abs_tol,
            format!("minimum of column sum minus ||A12' e|| is {sign_min:.6e}"),
        ),
        CheckResult::new(
            "sphere",
            sphere_min >= -tol.abs_tol,
            format!("minimum sphere clause {sphere_min:.6e}"),
        ),
    ];

    let verdict = if wslack < -tol.abs_tol {
        Verdict::new(
            Status::NotPositive,
            Certificate::ExtremeRay {
                i: wi,
                u: wu,
                slack: wslack,
            },
            checks,
        )
    } else if clause_min >= -tol.abs_tol {
        Verdict::new(
            Status::Positive,
            Certificate::ExtremeRay {
                i: wi,
                u: wu,
                slack: wslack,
            },
            checks,
        )
    } else {
        checks.push(CheckResult::new(
            "tolerance_band",
            false,
            format!("clause minimum {clause_min:.3e} but tightest mapped slack {wslack:.3e}"),
        ));
        Verdict::new(Status::Unknown, Certificate::None, checks)
    };

    Ok(OracleReport { verdict, clause_min })
}

/// Recomputes the membership slack behind a refutation certificate. `None`
/// when the certificate carries no point to re-check.
pub fn reverify_witness(op: &Operator, cert: &Certificate) -> Option<f64> {
    match cert {
        Certificate::ExtremeRay { i, u, .. } => {
            op.mapped_generator(*i, u).ok().map(|z| z.m_slack())
        }
        Certificate::PointWitness { z, .. } => op.apply(z).ok().map(|y| y.m_slack()),
        _ => None,
    }
}
