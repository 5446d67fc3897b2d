//! The extended Lorentz cones and their membership predicates.
//!
//! For `p, q >= 1` and `e = (1, ..., 1)` in `R^p`:
//!
//! ```text
//! L(p,q) = { (x,u) : x_k >= ||u||  for every k }
//! M(p,q) = { (x,u) : <x,e> >= ||u||  and  x >= 0 }
//! ```
//!
//! `L(p,q)` and `M(p,q)` are mutually dual with respect to the standard inner
//! product on `R^(p+q)`; they coincide exactly when `p = 1`, which is the
//! ordinary second-order cone with the distinguished coordinate first.
//!
//! Membership in `M` can also be read off the characteristic matrix
//! `J = [[E, 0], [0, -I]]` (`E` the all-ones `p x p` block): a point lies in
//! `M(p,q)` iff `z' J z >= 0` and `x >= 0`, since `z' J z = <x,e>^2 - ||u||^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDims")]
pub struct ConeDims {
    p: usize,
    q: usize,
}

#[derive(Deserialize)]
struct RawDims {
    p: usize,
    q: usize,
}

impl TryFrom<RawDims> for ConeDims {
    type Error = Error;
    fn try_from(raw: RawDims) -> Result<Self> {
        ConeDims::new(raw.p, raw.q)
    }
}

impl ConeDims {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::BadDims { p, q });
        }
        Ok(ConeDims { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Ambient dimension `p + q`.
    pub fn n(&self) -> usize {
        self.p + self.q
    }
}

impl std::fmt::Display for ConeDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// A point of `R^p x R^q`, split into its cone components.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPQ {
    dims: ConeDims,
    x: Vec<f64>,
    u: Vec<f64>,
}

impl PointPQ {
    pub fn new(dims: ConeDims, x: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if x.len() != dims.p() {
            return Err(Error::DimensionMismatch {
                expected: dims.p(),
                got: x.len(),
                context: "x block of point",
            });
        }
        if u.len() != dims.q() {
            return Err(Error::DimensionMismatch {
                expected: dims.q(),
                got: u.len(),
                context: "u block of point",
            });
        }
        if !x.iter().chain(u.iter()).all(|v| v.is_finite()) {
            return Err(Error::NonFinite("point coordinates"));
        }
        Ok(PointPQ { dims, x, u })
    }

    /// Splits a flat coordinate vector into `(x, u)`; the row length must be
    /// exactly `p + q`.
    pub fn from_flat(dims: ConeDims, flat: &[f64]) -> Result<Self> {
        if flat.len() != dims.n() {
            return Err(Error::DimensionMismatch {
                expected: dims.n(),
                got: flat.len(),
                context: "flat point row",
            });
        }
        PointPQ::new(dims, flat[..dims.p()].to_vec(), flat[dims.p()..].to_vec())
    }

    pub fn dims(&self) -> ConeDims {
        self.dims
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut flat = self.x.clone();
        flat.extend_from_slice(&self.u);
        flat
    }

    pub fn scale(&self, c: f64) -> PointPQ {
        PointPQ {
            dims: self.dims,
            x: self.x.iter().map(|v| c * v).collect(),
            u: self.u.iter().map(|v| c * v).collect(),
        }
    }

    pub fn u_norm(&self) -> f64 {
        self.u.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn x_sum(&self) -> f64 {
        self.x.iter().sum()
    }

    pub fn norm(&self) -> f64 {
        self.to_flat().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Signed distance-like slack for `L(p,q)`: `min_k x_k - ||u||`.
    /// Nonnegative exactly on the cone.
    pub fn l_slack(&self) -> f64 {
        let min_x = self.x.iter().cloned().fold(f64::INFINITY, f64::min);
        min_x - self.u_norm()
    }

    /// Slack of the most violated `M(p,q)` constraint:
    /// `min(min_k x_k, <x,e> - ||u||)`.
    pub fn m_slack(&self) -> f64 {
        let min_x = self.x.iter().cloned().fold(f64::INFINITY, f64::min);
        min_x.min(self.x_sum() - self.u_norm())
    }

    pub fn in_l(&self, tol: &Tolerances) -> bool {
        self.l_slack() >= -tol.abs_tol
    }

    pub fn in_m(&self, tol: &Tolerances) -> bool {
        self.m_slack() >= -tol.abs_tol
    }

    /// `<x,e>^2 - ||u||^2`, the value `z' J z` of the characteristic form,
    /// computed without materializing `J`.
    pub fn quadratic_form(&self) -> f64 {
        let s = self.x_sum();
        s * s - self.u.iter().map(|v| v * v).sum::<f64>()
    }

    /// Membership in `M` through the characteristic form: `z' J z >= 0` and
    /// `x >= 0`. Agrees with [`PointPQ::in_m`] away from the tolerance band;
    /// the two slacks scale differently, so only sign decisions transfer.
    pub fn in_m_quadratic(&self, tol: &Tolerances) -> bool {
        let min_x = self.x.iter().cloned().fold(f64::INFINITY, f64::min);
        self.quadratic_form() >= -tol.abs_tol && min_x >= -tol.abs_tol
    }
}

/// Standard inner product of two points of the same ambient space. A
/// nonnegative value for all pairs `(z_L, z_M)` with `z_L` in `L` and `z_M`
/// in `M` witnesses the mutual duality of the two cones.
pub fn dual_pairing(a: &PointPQ, b: &PointPQ) -> Result<f64> {
    if a.dims != b.dims {
        return Err(Error::DimensionMismatch {
            expected: a.dims.n(),
            got: b.dims.n(),
            context: "dual pairing operands",
        });
    }
    let xs: f64 = a.x.iter().zip(&b.x).map(|(s, t)| s * t).sum();
    let us: f64 = a.u.iter().zip(&b.u).map(|(s, t)| s * t).sum();
    Ok(xs + us)
}

/// The characteristic matrix `J = [[E, 0], [0, -I]]` of `M(p,q)`.
///
/// Its spectrum is `{p, 0 (p-1 times), -1 (q times)}`. The matrix is kept
/// around for spectral checks and for the operator pencils in
/// [`crate::posop`]; membership code uses the factored form
/// [`PointPQ::quadratic_form`] instead.
#[derive(Debug, Clone)]
pub struct CharacteristicMatrix {
    dims: ConeDims,
    mat: SymMatrix,
}

impl CharacteristicMatrix {
    pub fn new(dims: ConeDims) -> Self {
        let p = dims.p();
        let mat = SymMatrix::from_fn(dims.n(), |i, j| {
            if i < p && j < p {
                1.0
            } else if i == j {
                -1.0
            } else {
                0.0
            }
        });
        CharacteristicMatrix { dims, mat }
    }

    pub fn dims(&self) -> ConeDims {
        self.dims
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.mat
    }

    /// `z' J z` through the dense matrix; the factored route is preferred
    /// everywhere outside of agreement tests.
    pub fn quad_form(&self, z: &PointPQ) -> Result<f64> {
        if z.dims != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.n(),
                got: z.dims.n(),
                context: "characteristic form argument",
            });
        }
        Ok(self.mat.quad_form(&z.to_flat()))
    }
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    p: usize,
    q: usize,
    x: Vec<f64>,
    u: Vec<f64>,
}

impl Serialize for PointPQ {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PointRepr {
            p: self.dims.p(),
            q: self.dims.q(),
            x: self.x.clone(),
            u: self.u.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointPQ {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PointRepr::deserialize(deserializer)?;
        let dims = ConeDims::new(repr.p, repr.q).map_err(serde::de::Error::custom)?;
        PointPQ::new(dims, repr.x, repr.u).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigen;

    fn dims(p: usize, q: usize) -> ConeDims {
        ConeDims::new(p, q).unwrap()
    }

    fn point(p: usize, q: usize, x: &[f64], u: &[f64]) -> PointPQ {
        PointPQ::new(dims(p, q), x.to_vec(), u.to_vec()).unwrap()
    }

    #[test]
    fn zero_dimensions_rejected() {
        assert!(ConeDims::new(0, 1).is_err());
        assert!(ConeDims::new(1, 0).is_err());
        assert!(ConeDims::new(3, 2).is_ok());
    }

    #[test]
    fn membership_of_known_points() {
        let tol = Tolerances::default();
        let z = point(2, 1, &[3.0, 2.0], &[2.0]);
        assert!(z.in_l(&tol));
        assert!(z.in_m(&tol));

        // Negative x coordinate excludes from M even with a large sum.
        let z = point(2, 1, &[5.0, -1.0], &[0.5]);
        assert!(!z.in_m(&tol));
        assert!(!z.in_l(&tol));

        // Sum beats the norm but one coordinate is below it: in M, not in L.
        let z = point(2, 2, &[3.0, 0.5], &[1.0, 0.0]);
        assert!(z.in_m(&tol));
        assert!(!z.in_l(&tol));

        // The origin is a member of both cones.
        let z = point(2, 1, &[0.0, 0.0], &[0.0]);
        assert!(z.in_l(&tol));
        assert!(z.in_m(&tol));
    }

    #[test]
    fn l_and_m_coincide_for_p_equal_one() {
        let tol = Tolerances::default();
        let mut rng = crate::rng::RngStream::new(11, 0);
        for _ in 0..1000 {
            let x = vec![rng.next_gaussian()];
            let u = rng.gaussian_vector(3);
            let z = PointPQ::new(dims(1, 3), x, u).unwrap();
            assert_eq!(z.in_l(&tol), z.in_m(&tol));
        }
    }

    #[test]
    fn quadratic_form_factored_value() {
        let z = point(2, 2, &[1.0, 2.0], &[1.0, 1.0]);
        assert_eq!(z.quadratic_form(), 7.0);
    }

    #[test]
    fn quadratic_form_matches_matrix_route() {
        let mut rng = crate::rng::RngStream::new(5, 1);
        for &(p, q) in &[(1, 1), (2, 1), (2, 2), (3, 2), (1, 3), (4, 4)] {
            let j = CharacteristicMatrix::new(dims(p, q));
            for _ in 0..200 {
                let z = PointPQ::new(
                    dims(p, q),
                    rng.gaussian_vector(p),
                    rng.gaussian_vector(q),
                )
                .unwrap();
                let a = z.quadratic_form();
                let b = j.quad_form(&z).unwrap();
                assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0),
                    "factored {a} vs matrix {b}"
                );
            }
        }
    }

    #[test]
    fn characteristic_matrix_2_1_entries() {
        let j = CharacteristicMatrix::new(dims(2, 1));
        let expected = [[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
        for i in 0..3 {
            for k in 0..3 {
                assert_eq!(j.matrix().get(i, k), expected[i][k]);
            }
        }
    }

    #[test]
    fn characteristic_matrix_spectrum_2_1() {
        // Spectrum of J(2,1) is (2, 0, -1); cross-checked by evaluating the
        // characteristic determinant at each computed eigenvalue.
        let j = CharacteristicMatrix::new(dims(2, 1));
        let eig = sym_eigen(j.matrix()).unwrap();
        let expected = [2.0, 0.0, -1.0];
        for (got, want) in eig.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
        let m = j.matrix();
        for &w in &eig.values {
            let a = [
                [m.get(0, 0) - w, m.get(0, 1), m.get(0, 2)],
                [m.get(1, 0), m.get(1, 1) - w, m.get(1, 2)],
                [m.get(2, 0), m.get(2, 1), m.get(2, 2) - w],
            ];
            let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
            assert!(det.abs() < 1e-10, "det at eigenvalue {w} is {det}");
        }
    }

    #[test]
    fn characteristic_spectrum_general_dims() {
        for &(p, q) in &[(1, 1), (2, 2), (3, 2), (4, 4), (1, 3)] {
            let j = CharacteristicMatrix::new(dims(p, q));
            let eig = sym_eigen(j.matrix()).unwrap();
            let mut expected = vec![p as f64];
            expected.extend(std::iter::repeat(0.0).take(p - 1));
            expected.extend(std::iter::repeat(-1.0).take(q));
            for (got, want) in eig.values.iter().zip(expected) {
                assert!((got - want).abs() < 1e-10, "J({p},{q}): got {got}, want {want}");
            }
        }
    }

    #[test]
    fn dual_pairing_of_known_pair() {
        let zl = point(2, 2, &[2.0, 2.0], &[1.0, 1.0]);
        let zm = point(2, 2, &[1.0, 0.0], &[0.0, 1.0]);
        assert_eq!(dual_pairing(&zl, &zm).unwrap(), 3.0);
        let other = point(1, 1, &[1.0], &[0.0]);
        assert!(dual_pairing(&zl, &other).is_err());
    }

    #[test]
    fn flat_roundtrip_and_rejection() {
        let z = point(2, 2, &[1.0, 2.0], &[3.0, 4.0]);
        let flat = z.to_flat();
        assert_eq!(flat, vec![1.0, 2.0, 3.0, 4.0]);
        let back = PointPQ::from_flat(dims(2, 2), &flat).unwrap();
        assert_eq!(back, z);
        assert!(PointPQ::from_flat(dims(2, 2), &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn json_shape_and_roundtrip() {
        let z = point(2, 1, &[1.5, 0.0], &[-0.5]);
        let json = serde_json::to_string(&z).unwrap();
        assert_eq!(json, r#"{"p":2,"q":1,"x":[1.5,0.0],"u":[-0.5]}"#);
        let back: PointPQ = serde_json::from_str(&json).unwrap();
        assert_eq!(back, z);
        // Mismatched block lengths must be rejected.
        let bad = r#"{"p":2,"q":1,"x":[1.0],"u":[0.0]}"#;
        assert!(serde_json::from_str::<PointPQ>(bad).is_err());
        let bad_dims = r#"{"p":0,"q":1,"x":[],"u":[0.0]}"#;
        assert!(serde_json::from_str::<PointPQ>(bad_dims).is_err());
    }

    #[test]
    fn non_finite_coordinates_rejected() {
        assert!(PointPQ::new(dims(1, 1), vec![f64::NAN], vec![0.0]).is_err());
        assert!(PointPQ::new(dims(1, 1), vec![1.0], vec![f64::INFINITY]).is_err());
    }
}
