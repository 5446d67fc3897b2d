use crate::error::{Error, Result};
use crate::linalg::{solve, Mat};

/// Order-13 Pade numerator coefficients for the matrix exponential.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// 1-norm bound under which the order-13 approximant is accurate to machine
/// precision.
const THETA13: f64 = 5.371920351148152;

/// Hard cap on the number of squarings; inputs needing more would lose all
/// accuracy anyway and signal an overflow instead.
const MAX_SQUARINGS: u32 = 64;

/// Computes `exp(t * A)` by scaling and squaring with a fixed order-13 Pade
/// approximant. The order and scaling rule never adapt to the data, so equal
/// inputs give bit-equal outputs.
pub fn expm(a: &Mat, t: f64) -> Result<Mat> {
    assert!(a.is_square(), "expm requires a square matrix");
    if !a.is_finite() || !t.is_finite() {
        return Err(Error::NonFinite("matrix exponential input"));
    }
    let m = a.scale(t);
    let norm = m.norm_one();
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i64
    } else {
        0
    };
    if squarings > MAX_SQUARINGS as i64 {
        return Err(Error::ExpOverflow { norm });
    }
    let squarings = squarings.max(0) as u32;
    let scaled = m.scale(0.5f64.powi(squarings as i32));

    let n = scaled.rows();
    let ident = Mat::identity(n);
    let a2 = scaled.matmul(&scaled);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);

    let u_inner = a6
        .scale(PADE13[13])
        .add_scaled(&a4, PADE13[11])
        .add_scaled(&a2, PADE13[9]);
    let u_poly = a6
        .matmul(&u_inner)
        .add_scaled(&a6, PADE13[7])
        .add_scaled(&a4, PADE13[5])
        .add_scaled(&a2, PADE13[3])
        .add_scaled(&ident, PADE13[1]);
    let u = scaled.matmul(&u_poly);

    let v_inner = a6
        .scale(PADE13[12])
        .add_scaled(&a4, PADE13[10])
        .add_scaled(&a2, PADE13[8]);
    let v = a6
        .matmul(&v_inner)
        .add_scaled(&a6, PADE13[6])
        .add_scaled(&a4, PADE13[4])
        .add_scaled(&a2, PADE13[2])
        .add_scaled(&ident, PADE13[0]);

    let mut result = solve(&v.sub(&u), &v.add(&u))?;
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    if !result.is_finite() {
        return Err(Error::ExpOverflow { norm });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn assert_close(a: &Mat, b: &Mat, tol: f64) {
        let err = a.sub(b).max_abs();
        assert!(err <= tol, "max abs difference {err} > {tol}");
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = Mat::zeros(3, 3);
        assert_close(&expm(&z, 1.0).unwrap(), &Mat::identity(3), 1e-15);
    }

    #[test]
    fn exp_of_identity() {
        let e = expm(&Mat::identity(2), 1.0).unwrap();
        let expected = Mat::identity(2).scale(std::f64::consts::E);
        assert_close(&e, &expected, 1e-13);
    }

    #[test]
    fn exp_of_diagonal() {
        let d = Mat::from_rows(&[vec![1.0, 0.0], vec![0.0, -2.0]]).unwrap();
        let e = expm(&d, 3.0).unwrap();
        assert!((e[(0, 0)] - 3f64.exp()).abs() < 1e-11);
        assert!((e[(1, 1)] - (-6f64).exp()).abs() < 1e-15);
        assert_eq!(e[(0, 1)], 0.0);
    }

    #[test]
    fn exp_of_nilpotent_is_exact() {
        let a = Mat::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let e = expm(&a, 1.0).unwrap();
        let expected = Mat::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert_close(&e, &expected, 1e-15);
    }

    #[test]
    fn exp_of_rotation_generator() {
        let a = Mat::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let e = expm(&a, std::f64::consts::PI).unwrap();
        assert_close(&e, &Mat::identity(2).scale(-1.0), 1e-12);
    }

    #[test]
    fn inverse_via_negative_time() {
        let mut rng = RngStream::new(7, 0);
        let a = Mat::from_fn(4, 4, |_, _| rng.next_gaussian());
        let fwd = expm(&a, 0.7).unwrap();
        let bwd = expm(&a, -0.7).unwrap();
        assert_close(&fwd.matmul(&bwd), &Mat::identity(4), 1e-12);
    }

    #[test]
    fn semigroup_residual_with_scaling_path() {
        let mut rng = RngStream::new(8, 0);
        for trial in 0..20 {
            let n = 2 + trial % 5;
            let scale = if trial % 2 == 0 { 1.0 } else { 15.0 };
            let a = Mat::from_fn(n, n, |_, _| scale * rng.next_gaussian());
            let full = expm(&a, 1.0).unwrap();
            let half = expm(&a, 0.5).unwrap();
            let composed = half.matmul(&half);
            let rel = composed.sub(&full).norm_fro() / full.norm_fro().max(1.0);
            assert!(rel <= 1e-8, "semigroup residual {rel} at trial {trial}");
        }
    }

    #[test]
    fn overflow_is_an_error_not_infinity() {
        let big = Mat::identity(2).scale(1e3);
        assert!(matches!(expm(&big, 1.0), Err(Error::ExpOverflow { .. })));
        let huge = Mat::identity(2).scale(1e300);
        assert!(matches!(expm(&huge, 1.0), Err(Error::ExpOverflow { .. })));
    }

    #[test]
    fn non_finite_input_rejected() {
        let mut a = Mat::zeros(2, 2);
        a[(0, 0)] = f64::NAN;
        assert!(matches!(expm(&a, 1.0), Err(Error::NonFinite(_))));
        assert!(matches!(
            expm(&Mat::identity(2), f64::INFINITY),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn scalar_case() {
        let a = Mat::from_rows(&[vec![1.0]]).unwrap();
        let e = expm(&a, 3.7).unwrap();
        assert!((e[(0, 0)] - 3.7f64.exp()).abs() < 1e-10);
    }
}
