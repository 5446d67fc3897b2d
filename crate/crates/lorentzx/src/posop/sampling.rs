//! Randomized cross-checks: Monte Carlo membership sweeps, complementarity
//! pair tests, and exponential-map probes.
//!
//! Every sample index owns a counter-based substream, so results do not
//! depend on the number of worker threads and any reported sample can be
//! regenerated from `(seed, index)` alone.

use crate::cone::{dual_pairing, ConeDims, PointPQ};
use crate::error::Result;
use crate::exec;
use crate::gen::{sample_m, SampleMode};
use crate::linalg::expm;
use crate::posop::oracle::exact_oracle;
use crate::posop::verdict::{CompPair, Status};
use crate::posop::Operator;
use crate::rng::{domain_stream, StreamDomain};
use crate::tol::Tolerances;

/// Sweeps `n` random points of `M` through the operator and returns the
/// lowest-index sample whose image leaves `M` by a clear margin, if any.
pub fn monte_carlo_check(
    op: &Operator,
    n: u64,
    seed: u64,
    tol: &Tolerances,
) -> Option<PointPQ> {
    let threshold = -10.0 * tol.abs_tol;
    exec::find_map_first(n, |j| {
        let mut rng = domain_stream(seed, StreamDomain::MonteCarlo, j);
        let z = sample_m(op.dims(), &mut rng, SampleMode::Mix);
        let image = op.apply(&z).expect("sample matches operator dims");
        if image.m_slack() < threshold {
            Some(z)
        } else {
            None
        }
    })
}

/// Draws a boundary pair `z in M`, `s in L` with `<z, s> = 0`: `z` is a
/// generator `(e_i, u)` and `s = (y, -t u)` with `y >= t e` and `y_i = t`.
pub fn sample_comp_pair_from(
    dims: ConeDims,
    rng: &mut crate::rng::RngStream,
    tol: &Tolerances,
) -> Result<CompPair> {
    let p = dims.p();
    let i = rng.next_index(p);
    let u = rng.unit_vector(dims.q());
    let t = 0.25 + rng.next_f64() * 2.0;
    let mut y = vec![0.0; p];
    for (j, yj) in y.iter_mut().enumerate() {
        *yj = if j == i { t } else { t + rng.next_gaussian().abs() };
    }
    let mut x = vec![0.0; p];
    x[i] = 1.0;
    let z = PointPQ::new(dims, x, u.clone())?;
    let s = PointPQ::new(dims, y, u.iter().map(|v| -t * v).collect())?;
    CompPair::new(z, s, tol)
}

/// As [`sample_comp_pair_from`], keyed by `(seed, index)`.
pub fn sample_comp_pair(
    dims: ConeDims,
    seed: u64,
    index: u64,
    tol: &Tolerances,
) -> Result<CompPair> {
    let mut rng = domain_stream(seed, StreamDomain::CompPairs, index);
    sample_comp_pair_from(dims, &mut rng, tol)
}

/// Outcome of probing `<A z, s>` over sampled complementarity pairs. An
/// operator whose form vanishes on all of them behaves like a derivative of
/// cone automorphisms at the identity.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LyapunovReport {
    /// Largest `|<A z, s>| / (||z|| ||s||)` seen.
    pub max_ratio: f64,
    /// Ratio at or below which the form counts as vanishing.
    pub threshold: f64,
    pub pairs: u64,
    pub lyapunov_like: bool,
}

/// Samples `n` complementarity pairs and measures how far `<A z, s>` is from
/// zero, relative to the pair scale.
pub fn lyapunov_like_report(
    op: &Operator,
    n: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<LyapunovReport> {
    let threshold = tol.abs_tol * (1.0 + op.norm_fro());
    let max_ratio = exec::map_reduce(
        n,
        |j| {
            let mut rng = domain_stream(seed, StreamDomain::CompPairs, j);
            let pair = sample_comp_pair_from(op.dims(), &mut rng, tol)
                .expect("constructed pair is complementary");
            let image = op.apply(&pair.z).expect("pair matches operator dims");
            let form = dual_pairing(&image, &pair.s).expect("matching dims");
            form.abs() / (pair.z.norm() * pair.s.norm())
        },
        0.0_f64,
        f64::max,
    );
    Ok(LyapunovReport {
        max_ratio,
        threshold,
        pairs: n,
        lyapunov_like: max_ratio <= threshold,
    })
}

/// True when `<A z, s>` vanishes on `n` sampled complementarity pairs.
pub fn lyapunov_like_check(op: &Operator, n: u64, seed: u64, tol: &Tolerances) -> Result<bool> {
    Ok(lyapunov_like_report(op, n, seed, tol)?.lyapunov_like)
}

/// Positivity of `exp(tA)` and `exp(-tA)` at one value of `t`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ExpStep {
    pub t: f64,
    /// `exp(tA)` maps `M` into `M`.
    pub forward: bool,
    /// `exp(-tA)` maps `M` into `M`.
    pub backward: bool,
    /// Both directions positive, so `exp(tA)` is an automorphism of `M`.
    pub automorphism: bool,
}

/// Exponentiates `A` at each `t` and decides positivity of both `exp(tA)`
/// and its inverse with the exact decision procedure.
pub fn exp_automorphism_check(
    op: &Operator,
    t_values: &[f64],
    tol: &Tolerances,
) -> Result<Vec<ExpStep>> {
    let mut steps = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let fwd = Operator::new(op.dims(), expm(op.mat(), t)?)?;
        let bwd = Operator::new(op.dims(), expm(op.mat(), -t)?)?;
        let forward = exact_oracle(&fwd, tol)?.verdict.status == Status::Positive;
        let backward = exact_oracle(&bwd, tol)?.verdict.status == Status::Positive;
        steps.push(ExpStep {
            t,
            forward,
            backward,
            automorphism: forward && backward,
        });
    }
    Ok(steps)
}
