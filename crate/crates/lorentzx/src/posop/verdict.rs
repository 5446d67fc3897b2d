use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::cone::{dual_pairing, PointPQ};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Positive,
    NotPositive,
    Unknown,
}

/// Evidence attached to a verdict.
///
/// Witness certificates are always checkable after the fact: an extreme-ray
/// witness `(i, u)` refutes through the mapped generator `A (e_i, u)`, a
/// point witness through `A z`. The `slack` field records the `M`-membership
/// slack of that mapped point.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// The pencil `A'JA - lambda J` is positive semidefinite at this lambda.
    Lambda { lambda: f64 },
    /// Feasible interval of the second-order-cone pencil multiplier.
    Mu { mu_low: f64, mu_high: f64 },
    /// Cone generator `(e_i, u)` (`i` zero-based here, one-based in JSON;
    /// `u` unit) whose image decides the verdict.
    ExtremeRay { i: usize, u: Vec<f64>, slack: f64 },
    /// A sampled member `z` of `M` whose image decides the verdict.
    PointWitness { z: PointPQ, slack: f64 },
    None,
}

impl Serialize for Certificate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Certificate::Lambda { lambda } => {
                let mut s = serializer.serialize_struct("Certificate", 2)?;
                s.serialize_field("type", "lambda")?;
                s.serialize_field("lambda", lambda)?;
                s.end()
            }
            Certificate::Mu { mu_low, mu_high } => {
                let mut s = serializer.serialize_struct("Certificate", 3)?;
                s.serialize_field("type", "mu")?;
                s.serialize_field("mu_low", mu_low)?;
                s.serialize_field("mu_high", mu_high)?;
                s.end()
            }
            Certificate::ExtremeRay { i, u, slack } => {
                let mut s = serializer.serialize_struct("Certificate", 4)?;
                s.serialize_field("type", "extreme_ray")?;
                s.serialize_field("i", &(i + 1))?;
                s.serialize_field("u", u)?;
                s.serialize_field("slack", slack)?;
                s.end()
            }
            Certificate::PointWitness { z, slack } => {
                let mut s = serializer.serialize_struct("Certificate", 3)?;
                s.serialize_field("type", "point_witness")?;
                s.serialize_field("z", z)?;
                s.serialize_field("slack", slack)?;
                s.end()
            }
            Certificate::None => {
                let mut s = serializer.serialize_struct("Certificate", 1)?;
                s.serialize_field("type", "none")?;
                s.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Certificate,
    pub checks: Vec<CheckResult>,
}

impl Verdict {
    pub fn new(status: Status, certificate: Certificate, checks: Vec<CheckResult>) -> Self {
        Verdict {
            status,
            certificate,
            checks,
        }
    }
}

/// A complementarity pair of the cone pair `(M, L)`: `z` in `M`, `s` in the
/// dual cone `L`, with `<z, s> = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompPair {
    pub z: PointPQ,
    pub s: PointPQ,
}

impl CompPair {
    /// Validates all three defining properties up to tolerance.
    pub fn new(z: PointPQ, s: PointPQ, tol: &Tolerances) -> Result<Self> {
        if !z.in_m(tol) {
            return Err(Error::InvalidPair("z is not a member of M"));
        }
        if !s.in_l(tol) {
            return Err(Error::InvalidPair("s is not a member of L"));
        }
        let pairing = dual_pairing(&z, &s)?;
        if pairing.abs() > tol.abs_tol * (1.0 + z.norm() * s.norm()) {
            return Err(Error::InvalidPair("inner product of z and s is not zero"));
        }
        Ok(CompPair { z, s })
    }
}
