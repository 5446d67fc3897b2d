//! Positive operators of `M(p,q)`: condition batteries, an exact decision,
//! and Monte Carlo cross-checks.
//!
//! An operator `A` is *positive* for a cone `C` when `A C` is a subset of
//! `C`. For the mutually dual pair `L(p,q)` / `M(p,q)`, `A` is positive for
//! `L` exactly when its transpose is positive for `M`, so every routine here
//! is phrased for `M` and covers `L` through transposition.
//!
//! Three layers with different strength/cost trade-offs:
//!
//! * necessary conditions (`nc_*`): cheap row/column membership checks that
//!   can only refute, each failure yielding a concrete witness;
//! * a sufficient condition ([`sufficient_lambda`]): positive semidefiniteness
//!   of the pencil `A'JA - lambda J` for some `lambda >= 0` combined with the
//!   rows-in-L check, yielding a `lambda` certificate;
//! * the exact decision ([`exact_oracle`]): membership of every mapped
//!   extreme ray, reduced to `p` sphere-constrained quadratic minimizations.
//!
//! [`analyze`] runs the layers in order and cross-validates them, and
//! [`loewy_schneider_p1`] adds the classical `mu`-pencil classification of
//! the second-order-cone case `p = 1`.

mod analyze;
mod checks;
mod operator;
mod oracle;
mod sampling;
mod verdict;

pub use analyze::{analyze, AnalyzeConfig};
pub use checks::{
    loewy_schneider_p1, nc_cols_in_m, nc_column_sums, nc_mixed_column, nc_rows_in_l,
    numerical_rank, pencil_min_eig, sufficient_lambda,
};
pub use operator::Operator;
pub use oracle::{exact_oracle, reverify_witness, OracleReport};
pub use sampling::{
    exp_automorphism_check, lyapunov_like_check, lyapunov_like_report, monte_carlo_check,
    sample_comp_pair, sample_comp_pair_from, ExpStep, LyapunovReport,
};
pub use verdict::{Certificate, CheckResult, CompPair, Status, Verdict};
