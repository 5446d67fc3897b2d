//! Layered analysis of one operator: refute cheaply if possible, certify
//! with a pencil shift if possible, and settle the rest exactly.

use crate::error::Result;
use crate::exec;
use crate::posop::checks::{nc_cols_in_m, nc_rows_in_l, sufficient_lambda};
use crate::posop::oracle::exact_oracle;
use crate::posop::sampling::monte_carlo_check;
use crate::posop::verdict::{Certificate, CheckResult, Status, Verdict};
use crate::posop::Operator;
use crate::rng::{domain_stream, StreamDomain};
use crate::tol::Tolerances;

#[derive(Debug, Clone)]
pub struct AnalyzeConfig {
    pub tol: Tolerances,
    /// Seed for the sampled direction battery and the Monte Carlo sweep.
    pub seed: u64,
    /// Monte Carlo samples used to cross-validate a positive answer.
    pub mc_samples: u64,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig {
            tol: Tolerances::default(),
            seed: 1729,
            mc_samples: 2000,
        }
    }
}

/// Runs the full battery against one operator.
///
/// Order of business: necessary conditions first (each failure refutes with
/// a witness), then the pencil-shift certificate, then the exact decision,
/// then a Monte Carlo sweep that must not contradict a positive answer. A
/// disagreement between layers downgrades the verdict to `Unknown` rather
/// than trusting either side.
pub fn analyze(op: &Operator, cfg: &AnalyzeConfig) -> Result<Verdict> {
    let tol = &cfg.tol;
    let p = op.dims().p();
    let q = op.dims().q();
    let mut checks = Vec::new();
    if p == 1 {
        checks.push(CheckResult::new(
            "second_order_case",
            true,
            "p = 1, so L and M coincide and the mu-pencil classification also applies",
        ));
    }

    let rows = nc_rows_in_l(op, tol);
    let rows_ok = rows.iter().all(|&b| b);
    checks.push(CheckResult::new(
        "rows_in_l",
        rows_ok,
        battery_detail(&rows, "row"),
    ));
    if let Some(k) = rows.iter().position(|&b| !b) {
        let row = op.row_point(k)?;
        let i = row
            .x()
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (j, &v)| if v < acc.1 { (j, v) } else { acc })
            .0;
        let u = opposing_unit(row.u());
        let slack = op.mapped_generator(i, &u)?.m_slack();
        return Ok(Verdict::new(
            Status::NotPositive,
            Certificate::ExtremeRay { i, u, slack },
            checks,
        ));
    }

    let cols = nc_cols_in_m(op, tol);
    let cols_ok = cols.iter().all(|&b| b);
    checks.push(CheckResult::new(
        "cols_in_m",
        cols_ok,
        battery_detail(&cols, "column"),
    ));
    if let Some(i) = cols.iter().position(|&b| !b) {
        let mut x = vec![0.0; p];
        x[i] = 1.0;
        let z = crate::cone::PointPQ::new(op.dims(), x, vec![0.0; q])?;
        let slack = op.apply(&z)?.m_slack();
        return Ok(Verdict::new(
            Status::NotPositive,
            Certificate::PointWitness { z, slack },
            checks,
        ));
    }

    let mut colsum_fail = None;
    'outer: for i in 0..p {
        for j in 0..q {
            let mut u = vec![0.0; q];
            u[j] = 1.0;
            if !op.mapped_generator(i, &u)?.in_m(tol) {
                colsum_fail = Some((i, u));
                break 'outer;
            }
        }
    }
    checks.push(CheckResult::new(
        "column_sums",
        colsum_fail.is_none(),
        match &colsum_fail {
            None => format!("all {p} x {q} coordinate generators map into M"),
            Some((i, u)) => {
                let j = u.iter().position(|&v| v == 1.0).unwrap();
                format!("generator (e_{}, e_{}) maps outside M", i + 1, j + 1)
            }
        },
    ));
    if let Some((i, u)) = colsum_fail {
        let slack = op.mapped_generator(i, &u)?.m_slack();
        return Ok(Verdict::new(
            Status::NotPositive,
            Certificate::ExtremeRay { i, u, slack },
            checks,
        ));
    }

    let draws = tol.sphere_resolution as u64;
    let sampled = exec::find_map_first(draws, |j| {
        let mut rng = domain_stream(cfg.seed, StreamDomain::ConditionBattery, j);
        let u = rng.unit_vector(q);
        for i in 0..p {
            let z = op.mapped_generator(i, &u).expect("index in range");
            if !z.in_m(tol) {
                return Some((i, u, z.m_slack()));
            }
        }
        None
    });
    checks.push(CheckResult::new(
        "sampled_directions",
        sampled.is_none(),
        match &sampled {
            None => format!("{draws} random directions stayed in M"),
            Some((i, _, slack)) => format!("generator index {} escapes with slack {slack:.6e}", i + 1),
        },
    ));
    if let Some((i, u, slack)) = sampled {
        return Ok(Verdict::new(
            Status::NotPositive,
            Certificate::ExtremeRay { i, u, slack },
            checks,
        ));
    }

    let lambda = sufficient_lambda(op, tol)?;
    checks.push(CheckResult::new(
        "lambda_feasible",
        lambda.is_some(),
        match lambda {
            Some(l) => format!("pencil semidefinite at lambda = {l:.6e}"),
            None => "no nonnegative shift makes the pencil semidefinite".to_string(),
        },
    ));

    let report = exact_oracle(op, tol)?;
    checks.push(CheckResult::new(
        "exact_decision",
        report.verdict.status == Status::Positive,
        format!(
            "status {:?}, clause minimum {:.6e}",
            report.verdict.status, report.clause_min
        ),
    ));
    checks.extend(
        report
            .verdict
            .checks
            .iter()
            .map(|c| CheckResult::new(&format!("oracle_{}", c.name), c.pass, c.detail.clone())),
    );

    if lambda.is_some() && report.verdict.status == Status::NotPositive {
        checks.push(CheckResult::new(
            "consistency",
            false,
            "pencil certificate contradicts the exact decision",
        ));
        return Ok(Verdict::new(Status::Unknown, Certificate::None, checks));
    }

    match report.verdict.status {
        Status::Positive => {
            let sweep = monte_carlo_check(op, cfg.mc_samples, cfg.seed, tol);
            checks.push(CheckResult::new(
                "monte_carlo",
                sweep.is_none(),
                match &sweep {
                    None => format!("{} random members stayed in M", cfg.mc_samples),
                    Some(z) => format!("sampled member escapes, image slack {:.6e}", {
                        op.apply(z)?.m_slack()
                    }),
                },
            ));
            if let Some(z) = sweep {
                let slack = op.apply(&z)?.m_slack();
                checks.push(CheckResult::new(
                    "consistency",
                    false,
                    "exact decision positive but a sampled member escapes",
                ));
                return Ok(Verdict::new(
                    Status::Unknown,
                    Certificate::PointWitness { z, slack },
                    checks,
                ));
            }
            let certificate = match lambda {
                Some(l) => Certificate::Lambda { lambda: l },
                None => report.verdict.certificate,
            };
            Ok(Verdict::new(Status::Positive, certificate, checks))
        }
        Status::NotPositive => Ok(Verdict::new(
            Status::NotPositive,
            report.verdict.certificate,
            checks,
        )),
        Status::Unknown => Ok(Verdict::new(Status::Unknown, Certificate::None, checks)),
    }
}

fn battery_detail(results: &[bool], kind: &str) -> String {
    let failures: Vec<String> = results
        .iter()
        .enumerate()
        .filter(|(_, &b)| !b)
        .map(|(k, _)| (k + 1).to_string())
        .collect();
    if failures.is_empty() {
        format!("all {} {kind}s pass", results.len())
    } else {
        format!("{kind} {} fails", failures.join(", "))
    }
}

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
