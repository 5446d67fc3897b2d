//! Condition batteries for positivity on `M(p,q)`.
//!
//! The necessary checks test membership of simple images of `A`:
//!
//! * rows: `(row k of A11, row k of A12)` must lie in `L(p,q)`; equivalently
//!   `min_j (A11)_kj >= ||row k of A12||`. This is exactly the statement that
//!   the first block of every mapped generator stays nonnegative.
//! * columns: `A (e_i, 0) = (A11 e_i, A21 e_i)` must lie in `M`.
//! * mixed columns: `A (e_i, u)` must lie in `M` for every unit `u`; the
//!   column-sum battery instantiates `u = e_j`.
//!
//! The sufficient side searches the pencil `S(t) = A'JA - t J` for a
//! parameter making it positive semidefinite. `t -> min_eig S(t)` is concave
//! (a minimum of affine functions of `t`), so a golden-section search finds
//! its maximum on a bounded interval.

use crate::cone::CharacteristicMatrix;
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Mat, SymMatrix};
use crate::posop::oracle::exact_oracle;
use crate::posop::verdict::{Certificate, CheckResult, Status, Verdict};
use crate::posop::Operator;
use crate::tol::Tolerances;

/// Membership of each row point of `(A11 | A12)` in `L(p,q)`.
pub fn nc_rows_in_l(op: &Operator, tol: &Tolerances) -> Vec<bool> {
    (0..op.dims().p())
        .map(|k| op.row_point(k).expect("row index in range").in_l(tol))
        .collect()
}

/// Membership of each column point `(A11 e_i, A21 e_i)` in `M(p,q)`.
pub fn nc_cols_in_m(op: &Operator, tol: &Tolerances) -> Vec<bool> {
    (0..op.dims().p())
        .map(|i| op.column_point(i).expect("column index in range").in_m(tol))
        .collect()
}

/// Membership of the mapped generator `A (e_i, u)` in `M(p,q)` for a unit
/// direction `u`.
pub fn nc_mixed_column(op: &Operator, i: usize, u: &[f64], tol: &Tolerances) -> Result<bool> {
    let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit { norm });
    }
    Ok(op.mapped_generator(i, u)?.in_m(tol))
}

/// The `p x q` table of mixed-column checks at the coordinate directions
/// `u = e_j`.
pub fn nc_column_sums(op: &Operator, tol: &Tolerances) -> Vec<Vec<bool>> {
    let q = op.dims().q();
    (0..op.dims().p())
        .map(|i| {
            (0..q)
                .map(|j| {
                    let mut u = vec![0.0; q];
                    u[j] = 1.0;
                    nc_mixed_column(op, i, &u, tol).expect("coordinate direction is unit")
                })
                .collect()
        })
        .collect()
}

/// `min_eig(A'JA - t J)` for the characteristic matrix `J` of the operator's
/// cone.
pub fn pencil_min_eig(op: &Operator, t: f64) -> Result<f64> {
    let pencil = Pencil::new(op);
    pencil.min_eig(t)
}

/// Precomputed pencil `A'JA - t J`.
struct Pencil {
    gram: Mat,
    j: Mat,
}

impl Pencil {
    fn new(op: &Operator) -> Pencil {
        let j = CharacteristicMatrix::new(op.dims()).matrix().as_mat();
        let gram = op.mat().transpose().matmul(&j.matmul(op.mat()));
        Pencil { gram, j }
    }

    fn min_eig(&self, t: f64) -> Result<f64> {
        let s = SymMatrix::from_mat(&self.gram.add_scaled(&self.j, -t))?;
        Ok(*sym_eigen(&s)?.values.last().unwrap())
    }
}

const INVPHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization of a concave function on `[a, b]`; ties at
/// the endpoints resolve toward `a`.
fn golden_max(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, len_tol: f64) -> Result<(f64, f64)> {
    let mut lo = a;
    let mut hi = b;
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > len_tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let (mut arg, mut best) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    let fa = f(a)?;
    let fb = f(b)?;
    if fa >= best {
        arg = a;
        best = fa;
    }
    if fb > best {
        arg = b;
        best = fb;
    }
    Ok((arg, best))
}

/// Upper bound for a feasible pencil parameter: evaluating the pencil form
/// at `z = (e, 0)` gives `(Ae')'J(Ae') - t p^2 >= 0`, so `t` can never
/// exceed `(Ae')'J(Ae')/p`, let alone the looser `/p` bound used here.
fn pencil_upper_bound(op: &Operator) -> f64 {
    let p = op.dims().p();
    let mut e = vec![0.0; op.dims().n()];
    for v in e.iter_mut().take(p) {
        *v = 1.0;
    }
    let img = op.mat().mul_vec(&e);
    let sum: f64 = img.iter().take(p).sum();
    let unorm2: f64 = img.iter().skip(p).map(|v| v * v).sum();
    let form = sum * sum - unorm2;
    (form / p as f64).max(0.0) + 1.0
}

/// Searches for `lambda >= 0` with `A'JA - lambda J` positive semidefinite.
/// Together with all rows in `L`, such a `lambda` certifies positivity.
pub fn sufficient_lambda(op: &Operator, tol: &Tolerances) -> Result<Option<f64>> {
    let pencil = Pencil::new(op);
    let ub = pencil_upper_bound(op);
    let (lambda, best) = golden_max(|t| pencil.min_eig(t), 0.0, ub, 1e-12 * ub.max(1.0))?;
    Ok(if best >= -tol.abs_tol { Some(lambda) } else { None })
}

/// Numerical rank through the eigenvalues of `A'A`, with singular values
/// below `1e-8 * sigma_max` treated as zero.
pub fn numerical_rank(m: &Mat) -> Result<usize> {
    let gram = SymMatrix::from_mat(&m.transpose().matmul(m))?;
    let eig = sym_eigen(&gram)?;
    let sigma: Vec<f64> = eig.values.iter().map(|w| w.max(0.0).sqrt()).collect();
    let sigma_max = sigma[0];
    if sigma_max == 0.0 {
        return Ok(0);
    }
    Ok(sigma.iter().filter(|s| **s > 1e-8 * sigma_max).count())
}

/// Classification of `A` against the union `Gamma(L) U Gamma(-L)` for the
/// second-order cone `L(1,q)` (the self-dual case, so `L = M` and the exact
/// decision applies directly).
///
/// If no `mu >= 0` makes `A'JA - mu J` positive semidefinite, `A` belongs to
/// neither `Gamma(L)` nor `Gamma(-L)`; the returned witnesses refute both.
/// If some `mu` works and `A` has rank at least 2, `A` belongs to the union;
/// the image of the interior point `(2, 0, ..., 0)` settles which member.
/// Rank 0 or 1 is outside the scope of the converse and reports `Unknown`.
pub fn loewy_schneider_p1(op: &Operator, tol: &Tolerances) -> Result<Verdict> {
    if op.dims().p() != 1 {
        return Err(Error::Unsupported(
            "the mu-pencil classification applies to p = 1 only",
        ));
    }
    let mut checks = Vec::new();
    let pencil = Pencil::new(op);
    let ub = pencil_upper_bound(op);
    let (mu, best) = golden_max(|t| pencil.min_eig(t), 0.0, ub, 1e-12 * ub.max(1.0))?;
    let feasible = best >= -tol.abs_tol;
    checks.push(CheckResult::new(
        "mu_feasible",
        feasible,
        format!("max-min eigenvalue {best:.3e} at mu = {mu:.6e}"),
    ));

    if !feasible {
        // Contrapositive of the forward direction: no mu means A is in
        // neither cone of the union. Both exact decisions must agree.
        let fwd = exact_oracle(op, tol)?;
        let bwd = exact_oracle(&op.negate(), tol)?;
        checks.push(CheckResult::new(
            "oracle_forward",
            fwd.verdict.status == Status::NotPositive,
            format!("status {:?}", fwd.verdict.status),
        ));
        checks.push(CheckResult::new(
            "oracle_negated",
            bwd.verdict.status == Status::NotPositive,
            format!("status {:?}", bwd.verdict.status),
        ));
        if fwd.verdict.status == Status::NotPositive && bwd.verdict.status == Status::NotPositive {
            return Ok(Verdict::new(Status::NotPositive, fwd.verdict.certificate, checks));
        }
        checks.push(CheckResult::new(
            "consistency",
            false,
            "pencil infeasible but an exact decision disagrees",
        ));
        return Ok(Verdict::new(Status::Unknown, Certificate::None, checks));
    }

    let rank = numerical_rank(op.mat())?;
    checks.push(CheckResult::new("numerical_rank", rank >= 2, format!("rank {rank}")));
    if rank < 2 {
        return Ok(Verdict::new(Status::Unknown, Certificate::None, checks));
    }

    let (mu_low, mu_high) = feasible_interval(&pencil, mu, ub, tol)?;
    let mut interior = vec![0.0; op.dims().n()];
    interior[0] = 2.0;
    let img = op.mat().mul_vec(&interior);
    let fwd_point = crate::cone::PointPQ::from_flat(op.dims(), &img)?;
    let orientation = if fwd_point.in_l(tol) {
        Some("preserves_cone")
    } else if fwd_point.scale(-1.0).in_l(tol) {
        Some("reverses_cone")
    } else {
        None
    };
    match orientation {
        Some(tag) => {
            checks.push(CheckResult::new("orientation", true, tag));
            Ok(Verdict::new(
                Status::Positive,
                Certificate::Mu { mu_low, mu_high },
                checks,
            ))
        }
        None => {
            checks.push(CheckResult::new(
                "orientation",
                false,
                "interior image escapes both cones",
            ));
            Ok(Verdict::new(Status::Unknown, Certificate::None, checks))
        }
    }
}

/// Endpoints of `{ t in [0, ub] : min_eig(pencil(t)) >= -tol }` around a
/// feasible `t`, by bisection on the concave eigenvalue curve.
fn feasible_interval(pencil: &Pencil, mu: f64, ub: f64, tol: &Tolerances) -> Result<(f64, f64)> {
    let feasible = |v: f64| v >= -tol.abs_tol;
    let low = if feasible(pencil.min_eig(0.0)?) {
        0.0
    } else {
        let mut bad = 0.0;
        let mut good = mu;
        for _ in 0..80 {
            let mid = 0.5 * (bad + good);
            if feasible(pencil.min_eig(mid)?) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    };
    let high = if feasible(pencil.min_eig(ub)?) {
        ub
    } else {
        let mut good = mu;
        let mut bad = ub;
        for _ in 0..80 {
            let mid = 0.5 * (good + bad);
            if feasible(pencil.min_eig(mid)?) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    };
    Ok((low, high))
}
